#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrcs/numerics.hpp"

namespace lrcs {

/// Normalized scale-invariant MSE: Σ_k ‖x*_k − x̂_k·(x̂_kᴴx*_k/‖x̂_k‖²)‖² / ‖X*‖_F².
/// A zero estimate column contributes ‖x*_k‖². Throws DataError if X* = 0.
double nsmse(const ComplexMatrix& truth, const ComplexMatrix& estimate);

/// Accumulates wall-clock seconds per named stage on a monotonic clock.
class StageTimer {
public:
    using Clock = std::chrono::steady_clock;

    class Scope {
    public:
        Scope(StageTimer& timer, std::string stage) : timer_(timer), stage_(std::move(stage)), start_(Clock::now()) {}
        Scope(const Scope&) = delete;
        Scope& operator=(const Scope&) = delete;
        ~Scope() { timer_.add(stage_, std::chrono::duration<double>(Clock::now() - start_).count()); }

    private:
        StageTimer& timer_;
        std::string stage_;
        Clock::time_point start_;
    };

    Scope scope(std::string stage) { return Scope(*this, std::move(stage)); }
    void add(const std::string& stage, double seconds) { seconds_[stage] += seconds; }
    double seconds(const std::string& stage) const;
    const std::map<std::string, double>& all() const noexcept { return seconds_; }

private:
    std::map<std::string, double> seconds_;
};

/// One GD iteration of the U update.
struct IterationRecord {
    int iteration = 0;
    double sd_step = 0.0;  // SD(U_{t-1}, U_t)/√r̂
    double orthonormality = 0.0;  // ‖U_tᴴU_t − I‖_F
    std::optional<double> error;  // N-S-MSE of X_t when ground truth is known
    double elapsed = 0.0;
};

struct ReconReport {
    std::string method;
    std::optional<double> nsmse;
    std::map<std::string, double> stage_errors;
    std::map<std::string, double> stage_seconds;
    double total_seconds = 0.0;
    std::vector<IterationRecord> trace;
    std::vector<double> frame_seconds;  // per-batch or per-frame latency in tracking modes
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json extra = nlohmann::json::object();

    /// Structured form. Wall-clock fields are emitted only when `with_timing`
    /// is set so that reproducible runs produce byte-identical reports.
    nlohmann::json to_json(bool with_timing = true) const;
};

}  // namespace lrcs
