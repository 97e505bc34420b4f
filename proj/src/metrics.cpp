#include "lrcs/metrics.hpp"

#include "lrcs/error.hpp"

namespace lrcs {

double nsmse(const ComplexMatrix& truth, const ComplexMatrix& estimate) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw DataError("nsmse: shape mismatch");
    // Column-wise sums in both terms, so an estimate orthogonal to every
    // truth column gives exactly 1.
    double num = 0.0;
    double denom = 0.0;
    for (Index k = 0; k < truth.cols(); ++k) {
        const auto xs = truth.col(k);
        const auto xh = estimate.col(k);
        const double ns = xs.squaredNorm();
        denom += ns;
        const double nh = xh.squaredNorm();
        if (nh == 0.0) {
            num += ns;
            continue;
        }
        const Complex scale = xh.dot(xs) / nh;  // Eigen dot conjugates the first argument
        num += (xs - xh * scale).squaredNorm();
    }
    if (denom == 0.0) throw DataError("nsmse: ground truth is identically zero");
    return num / denom;
}

double StageTimer::seconds(const std::string& stage) const {
    auto it = seconds_.find(stage);
    return it == seconds_.end() ? 0.0 : it->second;
}

nlohmann::json ReconReport::to_json(bool with_timing) const {
    nlohmann::json j;
    j["method"] = method;
    j["nsmse"] = nsmse ? nlohmann::json(*nsmse) : nlohmann::json(nullptr);
    j["stage_errors"] = stage_errors;
    j["config"] = config;
    if (!extra.empty()) j["extra"] = extra;
    auto& tr = j["trace"] = nlohmann::json::array();
    for (const auto& rec : trace) {
        nlohmann::json r{{"iteration", rec.iteration}, {"sd_step", rec.sd_step}, {"orthonormality", rec.orthonormality}};
        r["error"] = rec.error ? nlohmann::json(*rec.error) : nlohmann::json(nullptr);
        if (with_timing) r["elapsed"] = rec.elapsed;
        tr.push_back(std::move(r));
    }
    if (with_timing) {
        j["stage_seconds"] = stage_seconds;
        j["total_seconds"] = total_seconds;
        if (!frame_seconds.empty()) j["frame_seconds"] = frame_seconds;
    }
    return j;
}

}  // namespace lrcs
