#pragma once

// Independent reference computations used as test oracles. Nothing here calls
// into the library's numerical kernels.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "lrcs/numerics.hpp"
#include "lrcs/random.hpp"

namespace lrcs::testing {

inline ComplexMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    Rng rng = make_rng(seed, {0x7e57});
    return random_complex_gaussian(rows, cols, rng);
}

inline ComplexVector random_vector(Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

/// Unitary 1D DFT matrix, entry (k, j) = exp(−2πi·jk/n)/√n.
inline ComplexMatrix dft_matrix(Index n) {
    ComplexMatrix f(n, n);
    for (Index k = 0; k < n; ++k)
        for (Index j = 0; j < n; ++j)
            f(k, j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                 -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n));
    return f;
}

/// 2D unitary DFT by direct summation: F_{n1} · X · F_{n2}ᵀ.
inline ComplexMatrix naive_dft2(const ComplexMatrix& x) {
    return dft_matrix(x.rows()) * x * dft_matrix(x.cols()).transpose();
}

/// Classical Gram–Schmidt with re-orthogonalization; R has real positive diagonal.
inline std::pair<ComplexMatrix, ComplexMatrix> gram_schmidt(const ComplexMatrix& a) {
    const Index n = a.rows(), r = a.cols();
    ComplexMatrix q = ComplexMatrix::Zero(n, r), rr = ComplexMatrix::Zero(r, r);
    for (Index j = 0; j < r; ++j) {
        ComplexVector v = a.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (Index i = 0; i < j; ++i) {
                const Complex c = q.col(i).dot(v);
                rr(i, j) += c;
                v -= c * q.col(i);
            }
        rr(j, j) = v.norm();
        q.col(j) = v / v.norm();
    }
    return {q, rr};
}

/// Dense matrix of a linear map, built column by column from unit vectors.
template <class Apply>
ComplexMatrix dense_of(Apply&& apply, Index n) {
    ComplexMatrix m;
    for (Index j = 0; j < n; ++j) {
        ComplexVector e = ComplexVector::Zero(n);
        e(j) = 1.0;
        const ComplexVector col = apply(e);
        if (j == 0) m.resize(col.size(), n);
        m.col(j) = col;
    }
    return m;
}

/// Moore–Penrose least-squares solution via a complete orthogonal decomposition.
inline ComplexVector pinv_solve(const ComplexMatrix& a, const ComplexVector& y) {
    return a.completeOrthogonalDecomposition().solve(y);
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace lrcs::testing
