#include "lrcs/operators.hpp"

#include <string>

#include "lrcs/error.hpp"
#include "lrcs/random.hpp"

namespace lrcs {

namespace {

// Split a complex n×r block into an n×2r real block [Re | Im].
Eigen::MatrixXd split(const ComplexMatrix& z) {
    Eigen::MatrixXd out(z.rows(), 2 * z.cols());
    out.leftCols(z.cols()) = z.real();
    out.rightCols(z.cols()) = z.imag();
    return out;
}

ComplexMatrix join(const Eigen::MatrixXd& parts, Index cols) {
    ComplexMatrix out(parts.rows(), cols);
    out.real() = parts.leftCols(cols);
    out.imag() = parts.rightCols(cols);
    return out;
}

}  // namespace

Index MeasurementSet::total_count() const noexcept {
    Index total = 0;
    for (const auto& f : frames) total += f.size();
    return total;
}

double MeasurementSet::squared_norm() const noexcept {
    double s = 0.0;
    for (const auto& f : frames) s += f.squaredNorm();
    return s;
}

MeasurementSet& MeasurementSet::operator-=(const MeasurementSet& other) {
    if (other.size() != size()) throw DataError("measurement sets differ in frame count");
    for (std::size_t k = 0; k < frames.size(); ++k) {
        if (frames[k].size() != other.frames[k].size())
            throw DataError("measurement frame " + std::to_string(k) + " length mismatch");
        frames[k] -= other.frames[k];
    }
    return *this;
}

FrameOperator::FrameOperator(DenseGaussian g) {
    if (g.matrix.rows() < 1 || g.matrix.cols() < 1) throw ConfigError("gaussian operator must be non-empty");
    n_ = g.matrix.cols();
    m_total_ = g.matrix.rows();
    m_cells_ = m_total_;
    kind_ = std::move(g);
}

FrameOperator::FrameOperator(std::shared_ptr<const FrameMask> mask, std::shared_ptr<const CoilMaps> coils) {
    if (!mask || !coils || coils->coils() < 1) throw ConfigError("fourier operator needs a mask and at least one coil");
    n1_ = mask->n1();
    n2_ = mask->n2();
    for (const auto& d : coils->maps)
        if (d.rows() != n1_ || d.cols() != n2_) throw DataError("coil map dimensions do not match the mask grid");
    n_ = n1_ * n2_;
    m_cells_ = mask->count();
    m_total_ = m_cells_ * coils->coils();
    kind_ = MaskedFourier{std::move(mask), std::move(coils)};
}

ComplexVector FrameOperator::apply(const ComplexVector& x) const {
    if (x.size() != n_) throw DataError("apply: expected vector of length " + std::to_string(n_));
    if (const auto* g = gaussian()) return join(g->matrix * split(x), 1);

    const auto& f = std::get<MaskedFourier>(kind_);
    const auto& order = f.mask->gather_order();
    ComplexVector y(m_total_);
    const Eigen::Map<const ComplexMatrix> image(x.data(), n1_, n2_);
    for (Index j = 0; j < f.coils->coils(); ++j) {
        const ComplexMatrix k = fft2_unitary(f.coils->maps[static_cast<std::size_t>(j)].cwiseProduct(image));
        const Index base = j * m_cells_;
        for (Index t = 0; t < m_cells_; ++t) y(base + t) = k.data()[order[static_cast<std::size_t>(t)]];
    }
    return y;
}

ComplexVector FrameOperator::adjoint(const ComplexVector& y) const {
    if (y.size() != m_total_) throw DataError("adjoint: expected vector of length " + std::to_string(m_total_));
    if (const auto* g = gaussian()) return join(g->matrix.transpose() * split(y), 1);

    const auto& f = std::get<MaskedFourier>(kind_);
    const auto& order = f.mask->gather_order();
    ComplexMatrix acc = ComplexMatrix::Zero(n1_, n2_);
    ComplexMatrix k(n1_, n2_);
    for (Index j = 0; j < f.coils->coils(); ++j) {
        k.setZero();
        const Index base = j * m_cells_;
        for (Index t = 0; t < m_cells_; ++t) k.data()[order[static_cast<std::size_t>(t)]] = y(base + t);
        acc += f.coils->maps[static_cast<std::size_t>(j)].conjugate().cwiseProduct(ifft2_unitary(k));
    }
    return Eigen::Map<const ComplexVector>(acc.data(), n_);
}

ComplexMatrix FrameOperator::apply_columns(const ComplexMatrix& u) const {
    if (u.rows() != n_) throw DataError("apply_columns: row count must equal n");
    if (const auto* g = gaussian()) return join(g->matrix * split(u), u.cols());
    ComplexMatrix out(m_total_, u.cols());
    for (Index c = 0; c < u.cols(); ++c) out.col(c) = apply(u.col(c));
    return out;
}

MeasurementSet apply_seq(const OperatorSet& ops, const ComplexMatrix& x) {
    if (static_cast<Index>(ops.size()) != x.cols())
        throw DataError("apply_seq: " + std::to_string(ops.size()) + " operators but " + std::to_string(x.cols()) + " columns");
    MeasurementSet y;
    y.frames.reserve(ops.size());
    for (std::size_t k = 0; k < ops.size(); ++k) y.frames.push_back(ops[k].apply(x.col(static_cast<Index>(k))));
    return y;
}

ComplexMatrix adjoint_seq(const OperatorSet& ops, const MeasurementSet& y) {
    if (ops.size() != y.frames.size())
        throw DataError("adjoint_seq: " + std::to_string(ops.size()) + " operators but " + std::to_string(y.frames.size()) + " frames");
    if (ops.empty()) throw DataError("adjoint_seq: empty operator set");
    ComplexMatrix x(ops.front().n(), static_cast<Index>(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k) x.col(static_cast<Index>(k)) = ops[k].adjoint(y.frames[k]);
    return x;
}

OperatorSet gaussian_frame_ops(Index n, Index m, Index q, std::uint64_t seed) {
    if (n < 1 || m < 1 || q < 1) throw ConfigError("gaussian_frame_ops: n, m, q must be ≥ 1");
    OperatorSet ops;
    ops.reserve(static_cast<std::size_t>(q));
    for (Index k = 0; k < q; ++k) {
        Rng rng = make_rng(seed, {0x6761757373ULL, static_cast<std::uint64_t>(k)});
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd a(m, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < m; ++i) a(i, j) = normal(rng);
        ops.emplace_back(FrameOperator::DenseGaussian{std::move(a)});
    }
    return ops;
}

OperatorSet fourier_frame_ops(const SamplingPlan& plan) {
    if (plan.masks.empty()) throw ConfigError("sampling plan has no frames");
    if (plan.coils.maps.empty()) throw ConfigError("sampling plan has no coil maps");
    const Index n1 = plan.masks.front().n1();
    const Index n2 = plan.masks.front().n2();
    for (std::size_t k = 0; k < plan.masks.size(); ++k)
        if (plan.masks[k].n1() != n1 || plan.masks[k].n2() != n2)
            throw DataError("sampling plan: mask " + std::to_string(k) + " differs in size from mask 0");
    Eigen::MatrixXd sos = Eigen::MatrixXd::Zero(n1, n2);
    for (const auto& d : plan.coils.maps) {
        if (d.rows() != n1 || d.cols() != n2) throw DataError("sampling plan: coil map size differs from the masks");
        sos += d.cwiseAbs2();
    }
    const double sos_error = (sos.array() - 1.0).abs().maxCoeff();
    if (!(sos_error <= 1e-10))
        throw DataError("sampling plan: coil maps are not sum-of-squares normalized (max deviation " +
                        std::to_string(sos_error) + ")");
    auto coils = std::make_shared<const CoilMaps>(plan.coils);
    OperatorSet ops;
    ops.reserve(plan.masks.size());
    for (const auto& m : plan.masks) ops.emplace_back(std::make_shared<const FrameMask>(m), coils);
    return ops;
}

}  // namespace lrcs
