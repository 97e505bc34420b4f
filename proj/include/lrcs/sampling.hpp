#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrcs/numerics.hpp"

namespace lrcs {

/// Boolean k-space sampling grid for one frame. Cells are stored column-major
/// (cell (i, j) at i + j·n1); DC is cell (0, 0).
class FrameMask {
public:
    FrameMask(Index n1, Index n2, std::vector<std::uint8_t> cells);

    static FrameMask full(Index n1, Index n2);

    Index n1() const noexcept { return n1_; }
    Index n2() const noexcept { return n2_; }
    Index count() const noexcept { return count_; }
    bool at(Index i, Index j) const { return cells_[static_cast<std::size_t>(i + j * n1_)] != 0; }
    const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

    /// Column-major linear indices of sampled cells, in row-major raster order
    /// (the gather order of the Fourier operator).
    const std::vector<Index>& gather_order() const noexcept { return gather_; }

    bool operator==(const FrameMask& other) const {
        return n1_ == other.n1_ && n2_ == other.n2_ && cells_ == other.cells_;
    }

private:
    Index n1_;
    Index n2_;
    std::vector<std::uint8_t> cells_;
    std::vector<Index> gather_;
    Index count_ = 0;
};

/// mc coil sensitivity maps, each n1×n2, sum-of-squares normalized.
struct CoilMaps {
    std::vector<ComplexMatrix> maps;

    Index coils() const noexcept { return static_cast<Index>(maps.size()); }
};

enum class SamplingScheme { PseudoRadial, CartesianVd, UniformFourier, Gaussian };

std::string to_string(SamplingScheme s);
SamplingScheme sampling_scheme_from_string(const std::string& s);

struct SamplingPlan {
    SamplingScheme scheme = SamplingScheme::PseudoRadial;
    std::vector<FrameMask> masks;
    CoilMaps coils;

    Index frames() const noexcept { return static_cast<Index>(masks.size()); }
};

inline constexpr double kGoldenAngleDegrees = 111.25;

/// `lines` spokes at θ0(k) + i·111.25°, θ0(k) = k·111.25°, each rasterized by
/// nearest-grid-point sampling of max(n1, n2) equispaced points along the
/// diameter. DC is always sampled. lines ≥ n1·n2 saturates to the full grid.
/// The radial pattern is deterministic; `seed` is accepted for interface
/// uniformity.
FrameMask golden_angle_pseudo_radial(Index n1, Index n2, Index lines, Index frame, std::uint64_t seed = 0);

/// Variable-density Cartesian undersampling: ≈ n2/R full phase-encode
/// columns, the 8 central columns always included, the rest drawn without
/// replacement with weight exp(−(Δ/(n2/6))²) of the centered column distance Δ.
FrameMask cartesian_vd_mask(Index n1, Index n2, double reduction, Index frame, std::uint64_t seed);

/// Exactly m cells chosen uniformly without replacement.
FrameMask uniform_fourier_mask(Index n1, Index n2, Index m, Index frame, std::uint64_t seed);

/// Smooth Gaussian-bump coil profiles centered on a ring around the FOV, each
/// with a constant phase, normalized so Σ_j |d_j(p)|² = 1 at every pixel.
CoilMaps synth_coil_maps(Index n1, Index n2, Index mc, std::uint64_t seed);

/// Width (in pixels) of the coil bumps and their centers, exposed so callers
/// can evaluate the smoothness bound max|Δd| ≤ max_{i,j}|c_i − c_j| / w².
struct CoilGeometry {
    double width;
    std::vector<std::pair<double, double>> centers;
};
CoilGeometry synth_coil_geometry(Index n1, Index n2, Index mc, std::uint64_t seed);

struct MaskParams {
    SamplingScheme scheme = SamplingScheme::PseudoRadial;
    Index lines = 8;          // pseudo-radial
    double reduction = 4.0;   // cartesian-vd
    Index m = 0;              // uniform-fourier
};

/// Masks for frames 0..q-1 under one scheme.
std::vector<FrameMask> make_masks(Index n1, Index n2, Index q, const MaskParams& params, std::uint64_t seed);

}  // namespace lrcs
