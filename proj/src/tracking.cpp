#include "lrcs/tracking.hpp"

#include <chrono>

#include "lrcs/cgls.hpp"
#include "lrcs/error.hpp"

namespace lrcs {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string to_string(TrackingMode m) {
    switch (m) {
        case TrackingMode::MinibatchSt1: return "st1";
        case TrackingMode::MinibatchSt2: return "st2";
        case TrackingMode::Online: return "online";
    }
    return "unknown";
}

TrackingMode tracking_mode_from_string(const std::string& s) {
    if (s == "st1") return TrackingMode::MinibatchSt1;
    if (s == "st2") return TrackingMode::MinibatchSt2;
    if (s == "online") return TrackingMode::Online;
    throw ConfigError("unknown tracking mode '" + s + "'");
}

void TrackerConfig::validate() const {
    if (alpha1 < 1 || alpha < 1) throw ConfigError("tracker: mini-batch sizes must be ≥ 1");
    if (t_max_first < 1 || t_max_next < 1) throw ConfigError("tracker: iteration caps must be ≥ 1");
    recon.altgdmin.validate();
    recon.mec.validate();
}

nlohmann::json TrackerConfig::to_json() const {
    nlohmann::json j = recon.to_json();
    j["method"] = to_string(mode);
    j["alpha1"] = alpha1;
    j["alpha"] = alpha;
    j["t_max_first"] = t_max_first;
    j["t_max_next"] = t_max_next;
    j.erase("t_max");
    return j;
}

MinibatchOutput minibatch_step(const TrackerState& state, const MeasurementSet& y, const OperatorSet& ops,
                               const TrackerConfig& cfg, const ComplexMatrix* truth) {
    cfg.validate();
    if (ops.empty()) throw DataError("minibatch_step: empty batch");

    ReconConfig rc = cfg.recon;
    rc.method = cfg.mode == TrackingMode::MinibatchSt2 ? Method::Mri2 : Method::Mri1;
    ReconOptions opts;
    opts.truth = truth;
    if (state.batch_index == 0) {
        rc.altgdmin.t_max = cfg.t_max_first;
    } else {
        if (!state.u) throw DataError("minibatch_step: batch > 1 requires a subspace estimate in the state");
        if (state.u->rows() != ops.front().n())
            throw DataError("minibatch_step: warm-start U has " + std::to_string(state.u->rows()) + " rows, batch has n = " +
                            std::to_string(ops.front().n()));
        rc.altgdmin.t_max = cfg.t_max_next;
        opts.warm_start = state.u;
    }

    ReconResult recon = reconstruct(y, ops, rc, opts);
    TrackerState next{recon.model.mean, recon.lowrank.u, state.batch_index + 1};
    ComplexMatrix z = recon.z;
    return MinibatchOutput{std::move(z), std::move(next), std::move(recon)};
}

ComplexVector online_step(const TrackerState& state, const ComplexVector& y, const FrameOperator& op,
                          const MecConfig& mec, Index frame) {
    if (!state.u || state.batch_index < 1) throw DataError("online_step: tracker has not been initialized");
    if (state.u->rows() != op.n() || state.mean.size() != op.n()) throw DataError("online_step: dimension mismatch");
    if (y.size() != op.m_total()) throw DataError("online_step: measurement length does not match the operator");

    const ComplexVector y1 = y - op.apply(state.mean);
    const ComplexMatrix au = op.apply_columns(state.u->matrix());
    const ComplexVector b = solve_frame_coefficients(au, y1, frame);
    const ComplexVector y2 = y1 - au * b;

    CglsConfig c;
    c.tol = mec.cgls_tol;
    c.max_iter = mec.cgls_iters;
    const ComplexVector e = cgls_solve(op, y2, c).x;
    return state.mean + state.u->matrix() * b + e;
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Index Tracker::pending_target() const { return state_.batch_index == 0 ? cfg_.alpha1 : cfg_.alpha; }

std::vector<std::pair<Index, ComplexVector>> Tracker::push(ComplexVector y, FrameOperator op) {
    const Index frame = next_frame_++;
    if (cfg_.mode == TrackingMode::Online && state_.batch_index >= 1) {
        const auto start = std::chrono::steady_clock::now();
        ComplexVector x = online_step(state_, y, op, cfg_.recon.mec, frame);
        latencies_.push_back(seconds_since(start));
        return {{frame, std::move(x)}};
    }
    if (pending_ops_.empty()) batch_start_ = frame;
    pending_y_.frames.push_back(std::move(y));
    pending_ops_.push_back(std::move(op));
    if (static_cast<Index>(pending_ops_.size()) == pending_target()) return run_batch();
    return {};
}

std::vector<std::pair<Index, ComplexVector>> Tracker::finish() {
    if (pending_ops_.empty()) return {};
    return run_batch();
}

std::vector<std::pair<Index, ComplexVector>> Tracker::run_batch() {
    const auto start = std::chrono::steady_clock::now();
    const Index size = static_cast<Index>(pending_ops_.size());

    std::optional<ComplexMatrix> truth_slice;
    if (truth_) {
        if (truth_->cols() < batch_start_ + size) throw DataError("tracker: ground truth has too few frames");
        truth_slice = truth_->middleCols(batch_start_, size);
    }

    TrackerConfig cfg = cfg_;
    if (cfg.mode == TrackingMode::Online) cfg.mode = TrackingMode::MinibatchSt1;
    MinibatchOutput out = minibatch_step(state_, pending_y_, pending_ops_, cfg, truth_slice ? &*truth_slice : nullptr);
    state_ = std::move(out.state);
    batch_iterations_.push_back(out.recon.lowrank.iterations);

    std::vector<std::pair<Index, ComplexVector>> done;
    done.reserve(static_cast<std::size_t>(size));
    for (Index k = 0; k < size; ++k) done.emplace_back(batch_start_ + k, out.z.col(k));
    pending_y_.frames.clear();
    pending_ops_.clear();
    latencies_.push_back(seconds_since(start));
    return done;
}

TrackResult run_tracker(const MeasurementSet& y, const OperatorSet& ops, const TrackerConfig& cfg,
                        const ComplexMatrix* truth) {
    if (static_cast<std::size_t>(y.size()) != ops.size() || ops.empty())
        throw DataError("run_tracker: frame count mismatch");
    const auto start = std::chrono::steady_clock::now();
    Tracker tracker(cfg);
    tracker.set_truth(truth);

    ComplexMatrix z(ops.front().n(), static_cast<Index>(ops.size()));
    auto store = [&](const std::vector<std::pair<Index, ComplexVector>>& done) {
        for (const auto& [k, x] : done) z.col(k) = x;
    };
    for (std::size_t k = 0; k < ops.size(); ++k) store(tracker.push(y.frames[k], ops[k]));
    store(tracker.finish());

    TrackResult res;
    res.z = std::move(z);
    res.batches = tracker.state().batch_index;
    res.state = tracker.state();
    res.report.method = to_string(cfg.mode);
    res.report.config = cfg.to_json();
    res.report.frame_seconds = tracker.latencies();
    res.report.total_seconds = seconds_since(start);
    res.report.extra["batches"] = res.batches;
    res.report.extra["batch_iterations"] = tracker.batch_iterations();
    if (res.state.u) res.report.extra["rank"] = res.state.u->cols();
    if (truth) res.report.nsmse = nsmse(*truth, res.z);
    return res;
}

}  // namespace lrcs
