#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrcs/hierarchical.hpp"

namespace lrcs {

enum class TrackingMode {
    MinibatchSt1,  // mini-batches, unstructured MEC
    MinibatchSt2,  // mini-batches, temporal-sparse MEC
    Online,        // first mini-batch, then frozen mean and subspace per frame
};

std::string to_string(TrackingMode m);
TrackingMode tracking_mode_from_string(const std::string& s);

struct TrackerConfig {
    TrackingMode mode = TrackingMode::MinibatchSt1;
    Index alpha1 = 64;  // first mini-batch
    Index alpha = 64;   // later mini-batches
    int t_max_first = 70;
    int t_max_next = 5;
    ReconConfig recon;  // solver constants; method and t_max are set per batch

    void validate() const;
    nlohmann::json to_json() const;
};

struct TrackerState {
    ComplexVector mean;
    std::optional<OrthonormalBasis> u;
    Index batch_index = 0;  // number of completed mini-batches
};

struct MinibatchOutput {
    ComplexMatrix z;
    TrackerState state;
    ReconResult recon;
};

/// One mini-batch. The first batch runs the full pipeline with t_max_first;
/// later batches warm-start U from the state (rank carried over) and run
/// t_max_next GD iterations. The mean is re-estimated per batch.
MinibatchOutput minibatch_step(const TrackerState& state, const MeasurementSet& y, const OperatorSet& ops,
                               const TrackerConfig& cfg, const ComplexMatrix* truth = nullptr);

/// Reconstructs one frame against a frozen mean and subspace:
/// b = (A U)†(y − A z̄), e = CGLS on the remaining residual, x̂ = z̄ + U b + e.
ComplexVector online_step(const TrackerState& state, const ComplexVector& y, const FrameOperator& op,
                          const MecConfig& mec = {}, Index frame = 0);

/// Incremental driver: frames are pushed in arrival order and reconstructions
/// are released as soon as their batch (or frame, in online mode) completes.
class Tracker {
public:
    explicit Tracker(TrackerConfig cfg);

    /// Returns (frame index, image) pairs completed by this push.
    std::vector<std::pair<Index, ComplexVector>> push(ComplexVector y, FrameOperator op);
    /// Processes a trailing partial batch.
    std::vector<std::pair<Index, ComplexVector>> finish();

    const TrackerState& state() const noexcept { return state_; }
    const TrackerConfig& config() const noexcept { return cfg_; }
    /// Per-batch (mini-batch modes and online warm-up) or per-frame (online) seconds.
    const std::vector<double>& latencies() const noexcept { return latencies_; }
    const std::vector<int>& batch_iterations() const noexcept { return batch_iterations_; }

    /// Optional ground truth columns for per-batch error traces.
    void set_truth(const ComplexMatrix* truth) { truth_ = truth; }

private:
    std::vector<std::pair<Index, ComplexVector>> run_batch();
    Index pending_target() const;

    TrackerConfig cfg_;
    TrackerState state_;
    MeasurementSet pending_y_;
    OperatorSet pending_ops_;
    Index next_frame_ = 0;
    Index batch_start_ = 0;
    std::vector<double> latencies_;
    std::vector<int> batch_iterations_;
    const ComplexMatrix* truth_ = nullptr;
};

struct TrackResult {
    ComplexMatrix z;
    ReconReport report;
    Index batches = 0;
    TrackerState state;
};

TrackResult run_tracker(const MeasurementSet& y, const OperatorSet& ops, const TrackerConfig& cfg,
                        const ComplexMatrix* truth = nullptr);

}  // namespace lrcs
