#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lrcs/datagen.hpp"
#include "lrcs/sampling.hpp"
#include "lrcs/tracking.hpp"

namespace lrcs {

/// Acquisition settings. `m` is the row count per frame for Gaussian
/// operators and the cell count per frame for uniform Fourier masks.
struct SamplingSpec {
    SamplingScheme scheme = SamplingScheme::PseudoRadial;
    Index lines = 8;
    double reduction = 4.0;
    Index m = 0;
    Index coils = 1;
    std::optional<std::uint64_t> seed;  // defaults to the dataset seed

    MaskParams mask_params() const { return {scheme, lines, reduction, m}; }
    void validate(Index n1, Index n2) const;
    nlohmann::json to_json() const;
    static SamplingSpec from_json(const nlohmann::json& j);
};

enum class DataSource { ThreeLevel, Phantom };

/// Input of `gen-data`: ground truth plus how it is sampled.
struct DatasetSpec {
    DataSource source = DataSource::ThreeLevel;
    SyntheticSpec synthetic;  // dims and seed are shared with the phantom
    PhantomParams phantom;
    SamplingSpec sampling;

    std::uint64_t sampling_seed() const { return sampling.seed.value_or(synthetic.seed); }
    void validate() const;
    nlohmann::json to_json() const;
    static DatasetSpec from_json(const nlohmann::json& j);
};

/// Reconstruction settings. Every solver constant defaults to its reference
/// value; the JSON form lists overrides under "solver".
struct RunConfig {
    std::string method = "mri1";  // mri1 | mri2 | st1 | st2 | online
    Index alpha1 = 64;
    Index alpha = 64;
    std::uint64_t seed = 0;
    bool reproducible = true;
    std::optional<SamplingSpec> sampling;
    ReconConfig recon;
    int t_max_first = 70;
    int t_max_next = 5;

    bool is_tracking() const { return method == "st1" || method == "st2" || method == "online"; }
    TrackerConfig tracker() const;
    void validate() const;
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

/// Parses a JSON file; syntax errors become ConfigError.
nlohmann::json load_json_file(const std::string& path);

}  // namespace lrcs
