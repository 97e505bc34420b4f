#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lrcs/container.hpp"
#include "lrcs/dataset.hpp"
#include "lrcs/error.hpp"
#include "lrcs/run_config.hpp"
#include "lrcs/tracking.hpp"

namespace lrcs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GenDataArgs {
    std::string spec;
    std::string out;
    std::optional<std::uint64_t> seed;
};

struct GenMaskArgs {
    std::string scheme = "radial";
    Index n1 = 0;
    Index n2 = 0;
    Index q = 0;
    Index lines = 8;
    double reduction = 4.0;
    Index m = 0;
    std::uint64_t seed = 1;
    std::string out;
};

struct ReconArgs {
    std::string in;
    std::string out;
    std::string config;
    std::optional<std::string> method;
    std::optional<Index> alpha;
    std::optional<Index> alpha1;
    std::optional<std::uint64_t> seed;
};

struct BenchArgs {
    std::string suite;
    std::string out;
    BenchOptions opts;
};

struct EvalArgs {
    std::string truth;
    std::string recon;
};

int gen_data(const GenDataArgs& a, std::ostream& out) {
    DatasetSpec spec = DatasetSpec::from_json(load_json_file(a.spec));
    if (a.seed) {
        spec.synthetic.seed = *a.seed;
        spec.phantom.seed = *a.seed;
    }
    const Dataset d = synthesize(spec);
    save_dataset(a.out, d);
    out << "wrote " << d.ops.size() << " frames (" << d.n1 << "x" << d.n2 << ", " << to_string(d.scheme) << ", "
        << d.ops.front().coils() << " coil(s)) to " << a.out << "\n";
    return kOk;
}

int gen_mask(const GenMaskArgs& a, std::ostream& out) {
    SamplingSpec s;
    s.scheme = sampling_scheme_from_string(a.scheme);
    if (s.scheme == SamplingScheme::Gaussian) throw ConfigError("gen-mask: Gaussian operators have no mask");
    s.lines = a.lines;
    s.reduction = a.reduction;
    s.m = a.m;
    if (a.n1 < 1 || a.n2 < 1 || a.q < 1) throw ConfigError("gen-mask: --n1, --n2 and --q must be ≥ 1");
    s.validate(a.n1, a.n2);
    const auto masks = make_masks(a.n1, a.n2, a.q, s.mask_params(), a.seed);
    write_masks(a.out, masks);
    Index total = 0;
    for (const auto& m : masks) total += m.count();
    out << "wrote " << masks.size() << " masks, mean " << std::setprecision(4)
        << static_cast<double>(total) / static_cast<double>(masks.size()) << " cells per frame, to " << a.out << "\n";
    return kOk;
}

RunConfig resolve_config(const ReconArgs& a) {
    json j = a.config.empty() ? json::object() : load_json_file(a.config);
    if (!j.is_object()) throw ConfigError("run config: expected a JSON object");
    if (a.method) j["method"] = *a.method;
    if (a.alpha) j["alpha"] = *a.alpha;
    if (a.alpha1) j["alpha1"] = *a.alpha1;
    if (a.seed) j["seed"] = *a.seed;
    return RunConfig::from_json(j);
}

int recon(const ReconArgs& a, std::ostream& out) {
    const RunConfig cfg = resolve_config(a);
    const Dataset data = load_dataset(a.in);
    const ComplexMatrix* truth = data.truth ? &*data.truth : nullptr;

    ComplexMatrix z;
    ReconReport report;
    Index rank = 0;
    if (cfg.is_tracking()) {
        TrackResult r = run_tracker(data.y, data.ops, cfg.tracker(), truth);
        z = std::move(r.z);
        report = std::move(r.report);
        rank = r.state.u ? r.state.u->cols() : 0;
    } else {
        ReconResult r = reconstruct(data.y, data.ops, cfg.recon, {truth, std::nullopt});
        z = std::move(r.z);
        report = std::move(r.report);
        rank = r.lowrank.u.cols();
    }
    report.config = cfg.to_json();

    const fs::path dir(a.out);
    write_image_sequence(dir / "recon.lrcs", {data.n1, data.n2, z});
    write_text_atomic(dir / "config.json", cfg.to_json().dump(2) + "\n");
    write_text_atomic(dir / "report.json", report.to_json(!cfg.reproducible).dump(2) + "\n");
    if (cfg.reproducible) {
        // Wall-clock numbers vary run to run; keep them out of the reproducible report.
        json timing = report.to_json(true);
        for (const char* key : {"method", "nsmse", "stage_errors", "config", "extra"}) timing.erase(key);
        write_text_atomic(dir / "timing.json", timing.dump(2) + "\n");
    }

    out << "method " << cfg.method << " rank " << rank;
    if (report.nsmse) out << " nsmse " << std::setprecision(6) << *report.nsmse;
    out << " -> " << a.out << "\n";
    return kOk;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream s;
    s << std::left << std::setw(16) << "suite" << std::setw(15) << "method" << std::right << std::setw(14) << "nsmse"
      << std::setw(11) << "seconds" << std::setw(6) << "rank" << std::setw(6) << "iters" << "\n";
    for (const auto& r : rows)
        s << std::left << std::setw(16) << r.suite << std::setw(15) << r.method << std::right << std::scientific
          << std::setprecision(4) << std::setw(14) << r.nsmse << std::fixed << std::setprecision(3) << std::setw(11)
          << r.seconds << std::setw(6) << r.rank << std::setw(6) << r.iterations << std::defaultfloat << "\n";
    return s.str();
}

int bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<std::string> suites;
    if (a.suite == "all")
        suites = bench_suites();
    else
        suites = {a.suite};
    std::vector<BenchRow> rows;
    for (const auto& s : suites) {
        auto part = run_bench_suite(s, a.opts, err);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const std::string table = bench_table(rows);
    out << table;
    if (!a.out.empty()) {
        json j = json::array();
        std::ostringstream csv;
        csv << "suite,method,nsmse,seconds,rank,iterations\n" << std::setprecision(17);
        for (const auto& r : rows) {
            j.push_back({{"suite", r.suite},
                         {"method", r.method},
                         {"nsmse", r.nsmse},
                         {"seconds", r.seconds},
                         {"rank", r.rank},
                         {"iterations", r.iterations}});
            csv << r.suite << "," << r.method << "," << r.nsmse << "," << r.seconds << "," << r.rank << ","
                << r.iterations << "\n";
        }
        const fs::path dir(a.out);
        write_text_atomic(dir / "results.json", j.dump(2) + "\n");
        write_text_atomic(dir / "results.csv", csv.str());
        write_text_atomic(dir / "results.txt", table);
    }
    return kOk;
}

int eval(const EvalArgs& a, std::ostream& out) {
    const ImageSequence truth = read_image_sequence(a.truth);
    const ImageSequence est = read_image_sequence(a.recon);
    if (truth.n1 != est.n1 || truth.n2 != est.n2 || truth.frames.cols() != est.frames.cols())
        throw DataError("eval: truth is " + std::to_string(truth.n1) + "x" + std::to_string(truth.n2) + "x" +
                        std::to_string(truth.frames.cols()) + ", reconstruction is " + std::to_string(est.n1) + "x" +
                        std::to_string(est.n2) + "x" + std::to_string(est.frames.cols()));
    // Fixed notation keeps rounding-level values of identical inputs printing as zero.
    out << "nsmse " << std::fixed << std::setprecision(12) << nsmse(truth.frames, est.frames) << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical low-rank dynamic MRI reconstruction"};
    app.name("lrcs");
    app.require_subcommand(1);

    GenDataArgs gd;
    auto* cmd_gen_data = app.add_subcommand("gen-data", "Synthesize ground truth, masks, coil maps and k-space");
    cmd_gen_data->add_option("--spec", gd.spec, "Dataset spec (JSON)")->required()->check(CLI::ExistingFile);
    cmd_gen_data->add_option("--out", gd.out, "Output directory")->required();
    cmd_gen_data->add_option("--seed", gd.seed, "Override the spec seed");

    GenMaskArgs gm;
    auto* cmd_gen_mask = app.add_subcommand("gen-mask", "Write a sampling-mask container");
    cmd_gen_mask->add_option("--scheme", gm.scheme, "radial, cartesian or uniform")
        ->check(CLI::IsMember({"radial", "cartesian", "uniform"}));
    cmd_gen_mask->add_option("--n1", gm.n1)->required();
    cmd_gen_mask->add_option("--n2", gm.n2)->required();
    cmd_gen_mask->add_option("--q", gm.q, "Frame count")->required();
    cmd_gen_mask->add_option("--lines", gm.lines, "Radial spokes per frame")->capture_default_str();
    cmd_gen_mask->add_option("--reduction", gm.reduction, "Cartesian acceleration factor")->capture_default_str();
    cmd_gen_mask->add_option("--m", gm.m, "Cells per frame for uniform masks");
    cmd_gen_mask->add_option("--seed", gm.seed)->capture_default_str();
    cmd_gen_mask->add_option("--out", gm.out, "Output container")->required();

    ReconArgs rc;
    auto* cmd_recon = app.add_subcommand("recon", "Reconstruct a dataset directory");
    cmd_recon->add_option("--in", rc.in, "Dataset directory")->required();
    cmd_recon->add_option("--out", rc.out, "Output directory")->required();
    cmd_recon->add_option("--config", rc.config, "Run config (JSON)");
    cmd_recon->add_option("--method", rc.method, "mri1, mri2, st1, st2 or online");
    cmd_recon->add_option("--alpha", rc.alpha, "Mini-batch size after the first batch");
    cmd_recon->add_option("--alpha1", rc.alpha1, "First mini-batch size");
    cmd_recon->add_option("--seed", rc.seed);

    BenchArgs bn;
    auto* cmd_bench = app.add_subcommand("bench", "Run an experiment suite and print a results table");
    std::vector<std::string> suite_names = bench_suites();
    suite_names.push_back("all");
    cmd_bench->add_option("--suite", bn.suite)->required()->check(CLI::IsMember(suite_names));
    cmd_bench->add_option("--out", bn.out, "Directory for results.{json,csv,txt}");
    cmd_bench->add_option("--seed", bn.opts.seed)->capture_default_str();
    cmd_bench->add_option("--frames", bn.opts.phantom_frames, "Frames in the phantom suite")->capture_default_str();

    EvalArgs ev;
    auto* cmd_eval = app.add_subcommand("eval", "Print the N-S-MSE of a reconstruction");
    cmd_eval->add_option("--truth", ev.truth)->required();
    cmd_eval->add_option("--recon", ev.recon)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    }

    try {
        if (cmd_gen_data->parsed()) return gen_data(gd, out);
        if (cmd_gen_mask->parsed()) return gen_mask(gm, out);
        if (cmd_recon->parsed()) return recon(rc, out);
        if (cmd_bench->parsed()) return bench(bn, out, err);
        if (cmd_eval->parsed()) return eval(ev, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return kSolver;
    } catch (const fs::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

}  // namespace lrcs::cli
