#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

namespace lrcs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;  // column-major
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws DataError when any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

/// ‖MᴴM − I‖_F
double orthonormality_error(const ComplexMatrix& m);

struct QrResult;
struct SingularSubspace;

/// Thin QR with the sign convention diag(R) > 0. Throws SolverError if M is
/// numerically rank deficient.
QrResult thin_qr(const ComplexMatrix& m);

/// Top-r left singular subspace via a full (thin) SVD.
SingularSubspace top_r_left_singular(const ComplexMatrix& m, Index r);

/// n×r matrix with orthonormal columns.
///
/// Construction through `from_matrix` validates ‖UᴴU − I‖_F ≤ 1e-10·√r. Kernels
/// that produce orthonormal factors by construction (QR, SVD) skip the check.
class OrthonormalBasis {
public:
    static OrthonormalBasis from_matrix(ComplexMatrix m);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Index rows() const noexcept { return m_.rows(); }
    Index cols() const noexcept { return m_.cols(); }

private:
    struct Trusted {};
    OrthonormalBasis(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

    ComplexMatrix m_;

    friend QrResult thin_qr(const ComplexMatrix&);
    friend SingularSubspace top_r_left_singular(const ComplexMatrix&, Index);
};

inline constexpr double kOrthonormalTolerance = 1e-10;

/// Unitary 2D DFT of an n1×n2 image (scaled by 1/√(n1·n2)). DC sits at (0, 0).
ComplexMatrix fft2_unitary(const ComplexMatrix& image);
ComplexMatrix ifft2_unitary(const ComplexMatrix& kspace);

/// Unitary 1D DFT along each row of an n×q matrix.
ComplexMatrix row_dft_unitary(const ComplexMatrix& m);
ComplexMatrix row_idft_unitary(const ComplexMatrix& m);

struct QrResult {
    OrthonormalBasis q;
    ComplexMatrix r;  // upper triangular, real positive diagonal
};

struct SingularSubspace {
    OrthonormalBasis u;  // top-r left singular vectors
    RealVector sigma;    // all min(n, q) singular values, descending
};

/// ‖(I − U1U1ᴴ)U2‖_F
double subspace_distance(const OrthonormalBasis& u1, const OrthonormalBasis& u2);

/// Spectral norm estimated by a fixed number of power iterations on MᴴM,
/// started from the normalized all-ones vector.
double spectral_norm_power(const ComplexMatrix& m, int iterations = 30);

}  // namespace lrcs
