#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lrcs/altgdmin.hpp"
#include "lrcs/metrics.hpp"
#include "lrcs/numerics.hpp"
#include "lrcs/operators.hpp"

namespace lrcs {

/// Which modeling-error correction follows the low-rank stage.
enum class Method {
    Mri1,  // unstructured residual, per-frame CGLS
    Mri2,  // residual sparse along the temporal DFT, ISTA
};

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct MeanConfig {
    double tol = 1e-3;
    int max_iter = 10;
};

struct MecConfig {
    int cgls_iters = 3;
    double cgls_tol = 1e-36;  // non-binding; the iteration cap controls MEC-1
    int ista_max = 10;
    double ista_relchange = 0.0025;
    double ista_omega_factor = 0.001;

    void validate() const;
};

struct ReconConfig {
    Method method = Method::Mri1;
    MeanConfig mean;
    AltGdminConfig altgdmin;
    MecConfig mec;

    nlohmann::json to_json() const;
};

/// Z = z̄𝟙ᵀ + X + E.
struct HierarchicalModel {
    ComplexVector mean;
    ComplexMatrix lowrank;
    ComplexMatrix residual;

    ComplexMatrix mean_image_matrix() const;  // z̄𝟙ᵀ
    ComplexMatrix reconstruct() const;
};

/// Stacked map z ↦ (A_1 z, …, A_q z); its adjoint sums A_kᴴ y_k over frames.
class StackedOperator {
public:
    explicit StackedOperator(const OperatorSet& ops);

    Index n() const noexcept { return ops_->front().n(); }
    ComplexVector apply(const ComplexVector& z) const;
    ComplexVector adjoint(const ComplexVector& y) const;

    ComplexVector flatten(const MeasurementSet& y) const;

private:
    const OperatorSet* ops_;
    std::vector<Index> offsets_;
};

/// Least-squares mean image min_z Σ_k ‖y_k − A_k z‖² by CGLS from zero.
ComplexVector estimate_mean(const MeasurementSet& y, const OperatorSet& ops, const MeanConfig& cfg = {});

/// ỹ_k = y_k − A_k z̄
MeasurementSet residual_1(const MeasurementSet& y, const OperatorSet& ops, const ComplexVector& mean);
/// ỹ̃_k = y_k − A_k z̄ − A_k x_k
MeasurementSet residual_2(const MeasurementSet& y, const OperatorSet& ops, const ComplexVector& mean,
                          const ComplexMatrix& x);

/// Column k = `cgls_iters` CGLS iterations on min_e ‖ỹ̃_k − A_k e‖² from e = 0.
ComplexMatrix mec_unstructured(const MeasurementSet& residual, const OperatorSet& ops, const MecConfig& cfg = {});

/// Complex soft threshold: s ↦ (s/|s|)(|s| − ω) for |s| > ω, else 0.
Complex soft_threshold(Complex s, double omega);
ComplexMatrix soft_threshold(const ComplexMatrix& m, double omega);

struct IstaResult {
    ComplexMatrix e;
    int iterations = 0;  // number of M evaluations
    double omega = 0.0;
    std::vector<double> rel_changes;  // ‖M_τ − M_{τ−1}‖_F/‖M_{τ−1}‖_F for τ ≥ 1
};

/// ISTA with temporal-DFT soft thresholding. ω = factor·max|M_0|, fixed thereafter.
IstaResult mec_ista(const MeasurementSet& residual, const OperatorSet& ops, const MecConfig& cfg = {});

/// 𝒜ᵀ(Y) scaled per column by 1/√(m_k·m̄); the zero-filled baseline.
ComplexMatrix zero_filled(const MeasurementSet& y, const OperatorSet& ops);

struct ReconOptions {
    const ComplexMatrix* truth = nullptr;  // Z*, enables error reporting
    std::optional<OrthonormalBasis> warm_start;
};

struct ReconResult {
    ComplexMatrix z;
    HierarchicalModel model;
    AltGdminResult lowrank;
    ReconReport report;
};

/// Mean → residual → auto-altGDmin → residual → MEC → sum.
ReconResult reconstruct(const MeasurementSet& y, const OperatorSet& ops, const ReconConfig& cfg = {},
                        const ReconOptions& opts = {});

}  // namespace lrcs
