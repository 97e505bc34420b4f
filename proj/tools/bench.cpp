#include <chrono>
#include <ostream>

#include "commands.hpp"
#include "lrcs/altgdmin.hpp"
#include "lrcs/datagen.hpp"
#include "lrcs/error.hpp"
#include "lrcs/hierarchical.hpp"
#include "lrcs/tracking.hpp"

namespace lrcs::cli {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

BenchRow row(const std::string& suite, const std::string& method, double err, double seconds, Index rank = 0,
             int iterations = 0) {
    return {suite, method, err, seconds, static_cast<int>(rank), iterations};
}

BenchRow zero_filled_row(const std::string& suite, const ComplexMatrix& truth, const MeasurementSet& y,
                         const OperatorSet& ops) {
    const auto t0 = Clock::now();
    const ComplexMatrix z = zero_filled(y, ops);
    return row(suite, "zero-filled", nsmse(truth, z), since(t0));
}

std::vector<BenchRow> table1_gaussian(const BenchOptions& opts, std::ostream& log) {
    const std::string suite = "table1-gaussian";
    SyntheticSpec spec;
    spec.n1 = 30;
    spec.n2 = 30;
    spec.q = 50;
    spec.r = 4;
    spec.mean_energy = 0.0;
    spec.residual_energy = 0.0;
    spec.seed = opts.seed;
    const ThreeLevelData d = gen_three_level(spec);
    const OperatorSet ops = gaussian_frame_ops(900, 90, 50, opts.seed);
    const MeasurementSet y = apply_seq(ops, d.z);
    log << suite << ": n=900 q=50 m=90 r=4\n";

    std::vector<BenchRow> rows{zero_filled_row(suite, d.z, y, ops)};
    const auto t0 = Clock::now();
    const AltGdminResult r = altgdmin_run(y, ops);
    rows.push_back(row(suite, "altgdmin", nsmse(d.z, r.x), since(t0), r.u.cols(), r.iterations));
    return rows;
}

std::vector<BenchRow> table1_fourier(const BenchOptions& opts, std::ostream& log) {
    const std::string suite = "table1-fourier";
    SyntheticSpec spec;
    spec.n1 = 30;
    spec.n2 = 30;
    spec.q = 50;
    spec.r = 4;
    spec.seed = opts.seed;
    const ThreeLevelData d = gen_three_level(spec);
    SamplingPlan plan{SamplingScheme::UniformFourier,
                      make_masks(30, 30, 50, {SamplingScheme::UniformFourier, 0, 0.0, 90}, opts.seed),
                      synth_coil_maps(30, 30, 1, opts.seed)};
    const OperatorSet ops = fourier_frame_ops(plan);
    const MeasurementSet y = apply_seq(ops, d.z);
    log << suite << ": 30x30x50, uniform Fourier m=90, ratios 100:10:1\n";

    std::vector<BenchRow> rows{zero_filled_row(suite, d.z, y, ops)};
    auto t0 = Clock::now();
    const AltGdminResult plain = altgdmin_run(y, ops);
    rows.push_back(row(suite, "altgdmin", nsmse(d.z, plain.x), since(t0), plain.u.cols(), plain.iterations));

    for (Method m : {Method::Mri1, Method::Mri2}) {
        ReconConfig cfg;
        cfg.method = m;
        t0 = Clock::now();
        const ReconResult r = reconstruct(y, ops, cfg, {&d.z, std::nullopt});
        const double seconds = since(t0);
        if (m == Method::Mri1) {
            const double lowrank_seconds = r.report.stage_seconds.at("mean") + r.report.stage_seconds.at("altgdmin");
            rows.push_back(row(suite, "mean+altgdmin", r.report.stage_errors.at("mean+lowrank"), lowrank_seconds,
                               r.lowrank.u.cols(), r.lowrank.iterations));
        }
        rows.push_back(row(suite, to_string(m), *r.report.nsmse, seconds, r.lowrank.u.cols(), r.lowrank.iterations));
    }
    return rows;
}

std::vector<BenchRow> phantom_radial(const BenchOptions& opts, std::ostream& log) {
    const std::string suite = "phantom-radial";
    const Index n1 = 64, n2 = 64, q = opts.phantom_frames;
    if (q < 64) throw ConfigError("bench: phantom-radial needs at least 64 frames");
    PhantomParams p;
    p.seed = opts.seed;
    const ComplexMatrix truth = gen_moving_disk_phantom(n1, n2, q, p);
    SamplingPlan plan{SamplingScheme::PseudoRadial,
                      make_masks(n1, n2, q, {SamplingScheme::PseudoRadial, 8, 4.0, 0}, opts.seed),
                      synth_coil_maps(n1, n2, 4, opts.seed)};
    const OperatorSet ops = fourier_frame_ops(plan);
    const MeasurementSet y = apply_seq(ops, truth);
    log << suite << ": 64x64x" << q << " phantom, 8 radial lines, 4 coils\n";

    std::vector<BenchRow> rows{zero_filled_row(suite, truth, y, ops)};
    for (Method m : {Method::Mri1, Method::Mri2}) {
        ReconConfig cfg;
        cfg.method = m;
        const auto t0 = Clock::now();
        const ReconResult r = reconstruct(y, ops, cfg, {&truth, std::nullopt});
        rows.push_back(row(suite, to_string(m), *r.report.nsmse, since(t0), r.lowrank.u.cols(), r.lowrank.iterations));
        log << "  " << to_string(m) << " done\n";
    }
    for (TrackingMode mode : {TrackingMode::MinibatchSt1, TrackingMode::MinibatchSt2, TrackingMode::Online}) {
        TrackerConfig cfg;
        cfg.mode = mode;
        const auto t0 = Clock::now();
        const TrackResult r = run_tracker(y, ops, cfg, &truth);
        const Index rank = r.state.u ? r.state.u->cols() : 0;
        rows.push_back(row(suite, to_string(mode), *r.report.nsmse, since(t0), rank));
        log << "  " << to_string(mode) << " done\n";
    }
    return rows;
}

}  // namespace

const std::vector<std::string>& bench_suites() {
    static const std::vector<std::string> suites{"table1-gaussian", "table1-fourier", "phantom-radial"};
    return suites;
}

std::vector<BenchRow> run_bench_suite(const std::string& suite, const BenchOptions& opts, std::ostream& log) {
    if (suite == "table1-gaussian") return table1_gaussian(opts, log);
    if (suite == "table1-fourier") return table1_fourier(opts, log);
    if (suite == "phantom-radial") return phantom_radial(opts, log);
    throw ConfigError("unknown bench suite '" + suite + "'");
}

}  // namespace lrcs::cli
