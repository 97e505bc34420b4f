#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "lrcs/numerics.hpp"
#include "lrcs/sampling.hpp"

namespace lrcs {

/// Per-frame measurement vectors y_k. Frames may have different lengths.
struct MeasurementSet {
    std::vector<ComplexVector> frames;

    Index size() const noexcept { return static_cast<Index>(frames.size()); }
    Index total_count() const noexcept;
    double squared_norm() const noexcept;

    MeasurementSet& operator-=(const MeasurementSet& other);
    friend MeasurementSet operator-(MeasurementSet a, const MeasurementSet& b) { return a -= b; }
};

/// One frame's linear map A_k: either a dense real Gaussian matrix or a
/// masked multi-coil Fourier encoder y = [H F (d_j ∘ x)]_{j=1..mc}.
///
/// Pixel vectors are images flattened column-major. Fourier measurements are
/// gathered in row-major raster order within a coil, coils stacked in order.
/// Instances are immutable and safe to share across threads.
class FrameOperator {
public:
    struct DenseGaussian {
        Eigen::MatrixXd matrix;  // m × n
    };
    struct MaskedFourier {
        std::shared_ptr<const FrameMask> mask;
        std::shared_ptr<const CoilMaps> coils;
    };

    explicit FrameOperator(DenseGaussian g);
    FrameOperator(std::shared_ptr<const FrameMask> mask, std::shared_ptr<const CoilMaps> coils);

    /// Pixel count n.
    Index n() const noexcept { return n_; }
    /// Length of the measurement vector (m_k·mc for Fourier, m_k for Gaussian).
    Index m_total() const noexcept { return m_total_; }
    /// m_k: mask cell count, or row count of the Gaussian matrix.
    Index m_cells() const noexcept { return m_cells_; }
    Index coils() const noexcept { return m_total_ / m_cells_; }

    bool is_fourier() const noexcept { return std::holds_alternative<MaskedFourier>(kind_); }
    const DenseGaussian* gaussian() const noexcept { return std::get_if<DenseGaussian>(&kind_); }
    const MaskedFourier* fourier() const noexcept { return std::get_if<MaskedFourier>(&kind_); }

    ComplexVector apply(const ComplexVector& x) const;
    ComplexVector adjoint(const ComplexVector& y) const;

    /// A_k applied to each column of an n×r matrix, giving m_total×r.
    ComplexMatrix apply_columns(const ComplexMatrix& u) const;

private:
    std::variant<DenseGaussian, MaskedFourier> kind_;
    Index n_ = 0;
    Index m_total_ = 0;
    Index m_cells_ = 0;
    Index n1_ = 0;
    Index n2_ = 0;
};

using OperatorSet = std::vector<FrameOperator>;

/// Y = 𝒜(X): column k of X through A_k.
MeasurementSet apply_seq(const OperatorSet& ops, const ComplexMatrix& x);
/// 𝒜ᵀ(Y): n×q matrix with column k = A_kᴴ y_k.
ComplexMatrix adjoint_seq(const OperatorSet& ops, const MeasurementSet& y);

/// q independent dense m×n operators with i.i.d. N(0, 1) entries.
OperatorSet gaussian_frame_ops(Index n, Index m, Index q, std::uint64_t seed);

/// Masked multi-coil Fourier operators, one per mask in the plan.
OperatorSet fourier_frame_ops(const SamplingPlan& plan);

}  // namespace lrcs
