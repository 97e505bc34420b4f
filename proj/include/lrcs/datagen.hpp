#pragma once

#include <cstdint>

#include "lrcs/numerics.hpp"

namespace lrcs {

enum class ResidualKind { DenseSmall, TemporalFourierSparse };

struct SyntheticSpec {
    Index n1 = 32;
    Index n2 = 32;
    Index q = 50;
    Index r = 4;
    // Frobenius-norm ratios ‖z̄𝟙ᵀ‖ : ‖X‖ : ‖E‖. Zero disables a component.
    double mean_energy = 100.0;
    double lowrank_energy = 10.0;
    double residual_energy = 1.0;
    ResidualKind residual_kind = ResidualKind::DenseSmall;
    Index sparse_freqs = 2;        // nonzero temporal frequencies per row
    double condition_number = 5.0; // σ_1/σ_r of X*, geometric spectrum
    double max_incoherence = 3.0;  // μ bound enforced by regenerating V*
    double subspace_drift = 0.0;   // radians per frame; 0 gives a fixed column span
    std::uint64_t seed = 1;

    void validate() const;
};

struct ThreeLevelData {
    ComplexMatrix z;       // Z* = z̄𝟙ᵀ + X* + E*
    ComplexVector mean;    // z̄*
    ComplexMatrix lowrank; // X*
    ComplexMatrix residual;// E*
    double incoherence = 0.0;  // μ of X* (0 when X* = 0)
};

ThreeLevelData gen_three_level(const SyntheticSpec& spec);

struct PhantomParams {
    double motion_amplitude = 4.0;  // pixels, peak displacement of the moving disk
    double motion_period = 20.0;    // frames
    double disk_radius = 0.12;      // fraction of min(n1, n2)
    double disk_intensity = 0.6;
    double edge_width = 1.0;        // pixels, half-width of the smoothstep edge
    double uptake_intensity = 0.4;
    double uptake_tau = 15.0;       // frames
    std::uint64_t seed = 1;
};

/// Static elliptical background, one disk translating sinusoidally along the
/// first axis and one region with monotone intensity uptake. Shapes have
/// compactly supported smoothstep edges, so pixel values are Lipschitz in the
/// shape position and the moving disk never touches the uptake region.
ComplexMatrix gen_moving_disk_phantom(Index n1, Index n2, Index q, const PhantomParams& params = {});

/// max_k |z_{k+1}(p) − z_k(p)| ≤ this bound for the phantom above.
double phantom_frame_change_bound(const PhantomParams& params);

/// μ = max_k ‖x_k‖²·q / (r·‖X‖²), r the numerical rank at 1e-8·σ_1.
double incoherence(const ComplexMatrix& x);

}  // namespace lrcs
