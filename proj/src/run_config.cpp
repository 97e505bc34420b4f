#include "lrcs/run_config.hpp"

#include <fstream>
#include <set>

#include "lrcs/error.hpp"

namespace lrcs {

using nlohmann::json;

namespace {

// Reads typed fields from a JSON object and rejects keys outside `allowed`,
// naming every offending key at once.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string context, std::initializer_list<const char*> allowed)
        : j_(j), context_(std::move(context)) {
        if (!j_.is_object()) throw ConfigError(context_ + ": expected a JSON object");
        const std::set<std::string> known(allowed.begin(), allowed.end());
        std::string unknown;
        for (const auto& [key, value] : j_.items()) {
            if (known.count(key)) continue;
            unknown += unknown.empty() ? key : ", " + key;
        }
        if (!unknown.empty()) throw ConfigError(context_ + ": unknown keys: " + unknown);
    }

    bool has(const char* key) const { return j_.contains(key); }
    const json& at(const char* key) const { return j_.at(key); }

    template <class T>
    void get(const char* key, T& out) const {
        if (!j_.contains(key)) return;
        const json& v = j_.at(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) wrong_type(key, "a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) wrong_type(key, "a string");
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                wrong_type(key, "a non-negative integer");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) wrong_type(key, "an integer");
        } else {
            if (!v.is_number()) wrong_type(key, "a number");
        }
        out = v.get<T>();
    }

    std::string context() const { return context_; }

private:
    [[noreturn]] void wrong_type(const char* key, const char* what) const {
        throw ConfigError(context_ + ": key '" + key + "' must be " + what);
    }

    const json& j_;
    std::string context_;
};

ResidualKind residual_kind_from_string(const std::string& s) {
    if (s == "dense-small") return ResidualKind::DenseSmall;
    if (s == "temporal-fourier-sparse") return ResidualKind::TemporalFourierSparse;
    throw ConfigError("unknown residual_kind '" + s + "'");
}

std::string to_string(ResidualKind k) {
    return k == ResidualKind::DenseSmall ? "dense-small" : "temporal-fourier-sparse";
}

StepSizeMode step_mode_from_string(const std::string& s) {
    if (s == "gradient") return StepSizeMode::GradientScaled;
    if (s == "conservative") return StepSizeMode::Conservative;
    throw ConfigError("unknown eta_mode '" + s + "'");
}

}  // namespace

// ---------------------------------------------------------------- sampling

void SamplingSpec::validate(Index n1, Index n2) const {
    if (coils < 1) throw ConfigError("sampling: coils must be ≥ 1");
    switch (scheme) {
        case SamplingScheme::PseudoRadial:
            if (lines < 1) throw ConfigError("sampling: lines must be ≥ 1");
            break;
        case SamplingScheme::CartesianVd:
            if (!(reduction >= 1.0) || reduction > static_cast<double>(n2))
                throw ConfigError("sampling: reduction must lie in [1, n2]");
            break;
        case SamplingScheme::UniformFourier:
            if (m < 1 || m > n1 * n2) throw ConfigError("sampling: m must lie in [1, n1*n2] for uniform masks");
            break;
        case SamplingScheme::Gaussian:
            if (m < 1) throw ConfigError("sampling: m must be ≥ 1 for Gaussian operators");
            if (coils != 1) throw ConfigError("sampling: Gaussian operators are single-coil");
            break;
    }
}

json SamplingSpec::to_json() const {
    json j = {{"scheme", to_string(scheme)}, {"coils", coils}};
    switch (scheme) {
        case SamplingScheme::PseudoRadial: j["lines"] = lines; break;
        case SamplingScheme::CartesianVd: j["reduction"] = reduction; break;
        case SamplingScheme::UniformFourier:
        case SamplingScheme::Gaussian: j["m"] = m; break;
    }
    if (seed) j["seed"] = *seed;
    return j;
}

SamplingSpec SamplingSpec::from_json(const json& j) {
    ObjectReader r(j, "sampling", {"scheme", "lines", "reduction", "m", "coils", "seed"});
    SamplingSpec s;
    std::string scheme = to_string(s.scheme);
    r.get("scheme", scheme);
    s.scheme = sampling_scheme_from_string(scheme);
    r.get("lines", s.lines);
    r.get("reduction", s.reduction);
    r.get("m", s.m);
    r.get("coils", s.coils);
    if (r.has("seed")) {
        std::uint64_t seed = 0;
        r.get("seed", seed);
        s.seed = seed;
    }
    return s;
}

// ---------------------------------------------------------------- dataset

void DatasetSpec::validate() const {
    synthetic.validate();
    if (source == DataSource::Phantom) {
        if (!(phantom.motion_period > 0.0) || !(phantom.uptake_tau > 0.0) || !(phantom.edge_width > 0.0))
            throw ConfigError("phantom: motion_period, uptake_tau and edge_width must be > 0");
    }
    sampling.validate(synthetic.n1, synthetic.n2);
}

json DatasetSpec::to_json() const {
    json j = {
        {"source", source == DataSource::ThreeLevel ? "three-level" : "phantom"},
        {"n1", synthetic.n1},
        {"n2", synthetic.n2},
        {"q", synthetic.q},
        {"seed", synthetic.seed},
        {"sampling", sampling.to_json()},
    };
    if (source == DataSource::ThreeLevel) {
        j["r"] = synthetic.r;
        j["energy_ratios"] = {synthetic.mean_energy, synthetic.lowrank_energy, synthetic.residual_energy};
        j["residual_kind"] = to_string(synthetic.residual_kind);
        j["sparse_freqs"] = synthetic.sparse_freqs;
        j["condition_number"] = synthetic.condition_number;
        j["max_incoherence"] = synthetic.max_incoherence;
        j["subspace_drift"] = synthetic.subspace_drift;
    } else {
        j["phantom"] = {
            {"motion_amplitude", phantom.motion_amplitude}, {"motion_period", phantom.motion_period},
            {"disk_radius", phantom.disk_radius},           {"disk_intensity", phantom.disk_intensity},
            {"edge_width", phantom.edge_width},             {"uptake_intensity", phantom.uptake_intensity},
            {"uptake_tau", phantom.uptake_tau},
        };
    }
    return j;
}

DatasetSpec DatasetSpec::from_json(const json& j) {
    ObjectReader r(j, "dataset spec",
                   {"source", "n1", "n2", "q", "r", "energy_ratios", "residual_kind", "sparse_freqs", "condition_number",
                    "max_incoherence", "subspace_drift", "seed", "phantom", "sampling"});
    DatasetSpec d;
    std::string source = "three-level";
    r.get("source", source);
    if (source == "three-level")
        d.source = DataSource::ThreeLevel;
    else if (source == "phantom")
        d.source = DataSource::Phantom;
    else
        throw ConfigError("dataset spec: unknown source '" + source + "'");

    auto& s = d.synthetic;
    r.get("n1", s.n1);
    r.get("n2", s.n2);
    r.get("q", s.q);
    r.get("r", s.r);
    r.get("seed", s.seed);
    r.get("sparse_freqs", s.sparse_freqs);
    r.get("condition_number", s.condition_number);
    r.get("max_incoherence", s.max_incoherence);
    r.get("subspace_drift", s.subspace_drift);
    if (r.has("residual_kind")) {
        std::string kind;
        r.get("residual_kind", kind);
        s.residual_kind = residual_kind_from_string(kind);
    }
    if (r.has("energy_ratios")) {
        const json& e = r.at("energy_ratios");
        if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number() || !e[2].is_number())
            throw ConfigError("dataset spec: energy_ratios must be an array of three numbers");
        s.mean_energy = e[0].get<double>();
        s.lowrank_energy = e[1].get<double>();
        s.residual_energy = e[2].get<double>();
    }
    if (r.has("phantom")) {
        ObjectReader p(r.at("phantom"), "phantom",
                       {"motion_amplitude", "motion_period", "disk_radius", "disk_intensity", "edge_width",
                        "uptake_intensity", "uptake_tau"});
        p.get("motion_amplitude", d.phantom.motion_amplitude);
        p.get("motion_period", d.phantom.motion_period);
        p.get("disk_radius", d.phantom.disk_radius);
        p.get("disk_intensity", d.phantom.disk_intensity);
        p.get("edge_width", d.phantom.edge_width);
        p.get("uptake_intensity", d.phantom.uptake_intensity);
        p.get("uptake_tau", d.phantom.uptake_tau);
    }
    d.phantom.seed = s.seed;
    if (r.has("sampling")) d.sampling = SamplingSpec::from_json(r.at("sampling"));
    d.validate();
    return d;
}

// ---------------------------------------------------------------- run config

TrackerConfig RunConfig::tracker() const {
    TrackerConfig t;
    t.mode = tracking_mode_from_string(method);
    t.alpha1 = alpha1;
    t.alpha = alpha;
    t.t_max_first = t_max_first;
    t.t_max_next = t_max_next;
    t.recon = recon;
    return t;
}

void RunConfig::validate() const {
    if (is_tracking()) {
        tracker().validate();
    } else {
        if (method != "mri1" && method != "mri2")
            throw ConfigError("run config: unknown method '" + method + "' (expected mri1, mri2, st1, st2 or online)");
        recon.altgdmin.validate();
        recon.mec.validate();
    }
    if (recon.mean.max_iter < 1) throw ConfigError("solver: mean_cgls_iters must be ≥ 1");
    if (recon.mean.tol < 0.0) throw ConfigError("solver: mean_cgls_tol must be ≥ 0");
}

json RunConfig::to_json() const {
    json solver = recon.to_json();
    solver.erase("method");
    solver["t_max_first"] = t_max_first;
    solver["t_max_next"] = t_max_next;
    json j = {{"method", method},          {"alpha1", alpha1}, {"alpha", alpha},
              {"seed", seed},              {"reproducible", reproducible}, {"solver", solver}};
    if (sampling) j["sampling"] = sampling->to_json();
    return j;
}

RunConfig RunConfig::from_json(const json& j) {
    ObjectReader r(j, "run config", {"method", "alpha1", "alpha", "seed", "reproducible", "sampling", "solver"});
    RunConfig c;
    r.get("method", c.method);
    r.get("alpha1", c.alpha1);
    r.get("alpha", c.alpha);
    r.get("seed", c.seed);
    r.get("reproducible", c.reproducible);
    if (r.has("sampling")) c.sampling = SamplingSpec::from_json(r.at("sampling"));
    if (r.has("solver")) {
        ObjectReader s(r.at("solver"), "solver",
                       {"mean_cgls_tol", "mean_cgls_iters", "t_max", "t_max_first", "t_max_next", "eps_exit",
                        "energy_b", "eta_numerator", "eta_mode", "conservative_c", "truncation_factor",
                        "power_iterations", "mec_cgls_iters", "mec_cgls_tol", "ista_max", "ista_relchange",
                        "ista_omega_factor"});
        auto& a = c.recon.altgdmin;
        auto& m = c.recon.mec;
        s.get("mean_cgls_tol", c.recon.mean.tol);
        s.get("mean_cgls_iters", c.recon.mean.max_iter);
        s.get("t_max", a.t_max);
        s.get("t_max_first", c.t_max_first);
        s.get("t_max_next", c.t_max_next);
        s.get("eps_exit", a.eps_exit);
        s.get("energy_b", a.energy_b);
        s.get("eta_numerator", a.eta_numerator);
        if (s.has("eta_mode")) {
            std::string mode;
            s.get("eta_mode", mode);
            a.eta_mode = step_mode_from_string(mode);
        }
        s.get("conservative_c", a.conservative_c);
        s.get("truncation_factor", a.truncation_factor);
        s.get("power_iterations", a.power_iterations);
        s.get("mec_cgls_iters", m.cgls_iters);
        s.get("mec_cgls_tol", m.cgls_tol);
        s.get("ista_max", m.ista_max);
        s.get("ista_relchange", m.ista_relchange);
        s.get("ista_omega_factor", m.ista_omega_factor);
    }
    c.validate();
    if (!c.is_tracking()) c.recon.method = method_from_string(c.method);
    return c;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace lrcs
