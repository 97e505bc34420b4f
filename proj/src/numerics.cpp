#include "lrcs/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "lrcs/error.hpp"

namespace lrcs {

namespace {

// FFTW planning is not thread safe, execution on new arrays is. Plans are
// created once per geometry with FFTW_ESTIMATE (deterministic) and
// FFTW_UNALIGNED so they can run on Eigen-owned buffers.
class PlanCache {
public:
    using Key = std::tuple<int, int, int, int, int, int>;  // rank, n0, n1, howmany, stride/dist tag, sign

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan plan_2d(int n_slow, int n_fast, int sign) {
        const Key key{2, n_slow, n_fast, 1, 0, sign};
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<fftw_complex> scratch(static_cast<std::size_t>(n_slow) * n_fast);
        fftw_plan p = fftw_plan_dft_2d(n_slow, n_fast, scratch.data(), scratch.data(), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

    // `howmany` strided transforms of length `len`: element j of transform i
    // lives at i + j*howmany (rows of a column-major matrix).
    fftw_plan plan_rows(int len, int howmany, int sign) {
        const Key key{1, len, 0, howmany, 1, sign};
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<fftw_complex> scratch(static_cast<std::size_t>(len) * howmany);
        int n[1] = {len};
        fftw_plan p = fftw_plan_many_dft(1, n, howmany, scratch.data(), nullptr, howmany, 1,
                                         scratch.data(), nullptr, howmany, 1, sign,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

ComplexMatrix fft2(const ComplexMatrix& in, int sign) {
    if (in.size() == 0) throw DataError("fft2: empty image");
    require_finite(in, "fft2 input");
    ComplexMatrix src = in;
    ComplexMatrix out(in.rows(), in.cols());
    // Column-major n1×n2 is row-major n2×n1; the 2D DFT commutes with transposition.
    fftw_plan p = PlanCache::instance().plan_2d(static_cast<int>(in.cols()), static_cast<int>(in.rows()), sign);
    fftw_execute_dft(p, as_fftw(src.data()), as_fftw(out.data()));
    out *= 1.0 / std::sqrt(static_cast<double>(in.size()));
    return out;
}

ComplexMatrix row_dft(const ComplexMatrix& in, int sign) {
    if (in.cols() < 1) throw DataError("row DFT: need at least one column");
    require_finite(in, "row DFT input");
    if (in.rows() == 0) return in;
    ComplexMatrix src = in;
    ComplexMatrix out(in.rows(), in.cols());
    fftw_plan p = PlanCache::instance().plan_rows(static_cast<int>(in.cols()), static_cast<int>(in.rows()), sign);
    fftw_execute_dft(p, as_fftw(src.data()), as_fftw(out.data()));
    out *= 1.0 / std::sqrt(static_cast<double>(in.cols()));
    return out;
}

}  // namespace

void require_finite(const ComplexMatrix& m, const char* what) {
    for (Index i = 0; i < m.size(); ++i) {
        const Complex v = m.data()[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DataError(std::string(what) + ": non-finite entry at linear index " + std::to_string(i));
    }
}

double orthonormality_error(const ComplexMatrix& m) {
    return (m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols())).norm();
}

OrthonormalBasis OrthonormalBasis::from_matrix(ComplexMatrix m) {
    if (m.cols() < 1 || m.rows() < m.cols())
        throw DataError("orthonormal basis must be n×r with n ≥ r ≥ 1");
    require_finite(m, "orthonormal basis");
    const double err = orthonormality_error(m);
    if (err > kOrthonormalTolerance * std::sqrt(static_cast<double>(m.cols())))
        throw DataError("matrix is not orthonormal: ‖UᴴU − I‖_F = " + std::to_string(err));
    return OrthonormalBasis(std::move(m), Trusted{});
}

ComplexMatrix fft2_unitary(const ComplexMatrix& image) { return fft2(image, FFTW_FORWARD); }
ComplexMatrix ifft2_unitary(const ComplexMatrix& kspace) { return fft2(kspace, FFTW_BACKWARD); }

ComplexMatrix row_dft_unitary(const ComplexMatrix& m) { return row_dft(m, FFTW_FORWARD); }
ComplexMatrix row_idft_unitary(const ComplexMatrix& m) { return row_dft(m, FFTW_BACKWARD); }

QrResult thin_qr(const ComplexMatrix& m) {
    const Index n = m.rows();
    const Index r = m.cols();
    if (r < 1 || n < r) throw DataError("thin_qr: need n ≥ r ≥ 1");
    require_finite(m, "thin_qr input");

    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, r);
    ComplexMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();

    double max_diag = 0.0;
    for (Index j = 0; j < r; ++j) max_diag = std::max(max_diag, std::abs(rr(j, j)));
    for (Index j = 0; j < r; ++j) {
        const double d = std::abs(rr(j, j));
        if (d == 0.0 || d <= 1e-13 * max_diag)
            throw SolverError("thin_qr: rank-deficient input (degenerate iterate), column " + std::to_string(j));
        const Complex phase = rr(j, j) / d;
        rr.row(j) *= std::conj(phase);
        q.col(j) *= phase;
        rr(j, j) = d;
    }
    return QrResult{OrthonormalBasis(std::move(q), OrthonormalBasis::Trusted{}), std::move(rr)};
}

SingularSubspace top_r_left_singular(const ComplexMatrix& m, Index r) {
    const Index k = std::min(m.rows(), m.cols());
    if (r < 1 || r > k) throw DataError("top_r_left_singular: need 1 ≤ r ≤ min(n, q)");
    require_finite(m, "top_r_left_singular input");
    Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
    ComplexMatrix u = svd.matrixU().leftCols(r);
    return SingularSubspace{OrthonormalBasis(std::move(u), OrthonormalBasis::Trusted{}), svd.singularValues()};
}

double subspace_distance(const OrthonormalBasis& u1, const OrthonormalBasis& u2) {
    if (u1.rows() != u2.rows()) throw DataError("subspace_distance: row counts differ");
    const ComplexMatrix& a = u1.matrix();
    const ComplexMatrix& b = u2.matrix();
    return (b - a * (a.adjoint() * b)).norm();
}

double spectral_norm_power(const ComplexMatrix& m, int iterations) {
    if (m.size() == 0) return 0.0;
    ComplexVector v = ComplexVector::Constant(m.cols(), Complex(1.0 / std::sqrt(static_cast<double>(m.cols())), 0.0));
    for (int i = 0; i < iterations; ++i) {
        ComplexVector w = m.adjoint() * (m * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
    }
    return (m * v).norm();
}

}  // namespace lrcs
