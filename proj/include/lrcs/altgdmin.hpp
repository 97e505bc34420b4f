#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lrcs/metrics.hpp"
#include "lrcs/numerics.hpp"
#include "lrcs/operators.hpp"

namespace lrcs {

enum class StepSizeMode {
    GradientScaled,  // η = η_numerator / ‖∇_U f(U_0, B_0)‖
    Conservative,    // η = c / (m̄·‖U_0B_0‖²)
};

struct AltGdminConfig {
    int t_max = 70;
    double eps_exit = 0.01;
    double energy_b = 85.0;
    double eta_numerator = 0.14;
    StepSizeMode eta_mode = StepSizeMode::GradientScaled;
    double conservative_c = 0.1;
    double truncation_factor = 36.0;
    int power_iterations = 30;

    void validate() const;
};

struct TruncationResult {
    MeasurementSet measurements;
    double gamma = 0.0;
    Index zeroed = 0;
};

/// Zeroes every entry with |ỹ_ki| > √γ, γ = factor·Σ|ỹ_ki|² / (total entry count).
TruncationResult truncate(const MeasurementSet& y, double factor = 36.0);

/// X0 with column k = A_kᴴ ỹ_k / √(m_k·m̄), m_k the per-frame cell count.
ComplexMatrix build_X0(const MeasurementSet& y_tnc, const OperatorSet& ops);

/// J = floor(min(n, q, mc·min_m)/10). Throws ConfigError if J < 1.
Index rank_cutoff(Index n, Index q, Index mc, Index min_m);

/// Smallest r with Σ_{j≤r} σ_j² ≥ (b/100)·Σ_{j≤J} σ_j².
Index estimate_rank(const RealVector& sigma, Index n, Index q, Index mc, Index min_m, double b = 85.0);

struct InitResult {
    ComplexMatrix x0;
    double gamma = 0.0;
    Index zeroed = 0;
    Index rank = 0;
    OrthonormalBasis u0;
    RealVector sigma;
};

/// Truncation, X0, automatic rank and U0 (the initialization block of auto-altGDmin).
InitResult spectral_init(const MeasurementSet& y, const OperatorSet& ops, const AltGdminConfig& cfg = {});

/// b = argmin ‖y − (A_kU) b‖ via Householder QR. Throws SolverError naming
/// `frame` when A_kU is rank deficient or has fewer rows than columns.
ComplexVector solve_frame_coefficients(const ComplexMatrix& au, const ComplexVector& y, Index frame);

/// Column-wise least squares b_k = argmin ‖ỹ_k − A_kU b‖. Throws SolverError
/// naming the frame when A_kU is rank deficient.
ComplexMatrix update_B(const OrthonormalBasis& u, const MeasurementSet& y, const OperatorSet& ops);

/// Σ_k A_kᴴ(A_kU b_k − ỹ_k) b_kᴴ. The factor 2 of the squared loss is
/// omitted; it is absorbed into the step size.
ComplexMatrix gradient_U(const OrthonormalBasis& u, const ComplexMatrix& b, const MeasurementSet& y,
                         const OperatorSet& ops);

/// f(U, B) = Σ_k ‖ỹ_k − A_kU b_k‖².
double altgdmin_objective(const ComplexMatrix& u, const ComplexMatrix& b, const MeasurementSet& y,
                          const OperatorSet& ops);

struct AltGdminOptions {
    /// Replaces the initialization block: U_0 is taken as given and r̂ = its column count.
    std::optional<OrthonormalBasis> warm_start;
    /// Called with each X_t to fill IterationRecord::error.
    std::function<double(const ComplexMatrix&)> error_fn;
};

struct AltGdminResult {
    OrthonormalBasis u;  // final U (after the last projected GD step)
    ComplexMatrix b;
    ComplexMatrix x;     // U_{t-1}B_t from the last iteration
    double eta = 0.0;
    int iterations = 0;
    bool exited = false;  // SD exit rule fired before t_max
    std::vector<IterationRecord> trace;
    std::optional<InitResult> init;
};

AltGdminResult altgdmin_run(const MeasurementSet& y, const OperatorSet& ops, const AltGdminConfig& cfg = {},
                            const AltGdminOptions& opts = {});

}  // namespace lrcs
