#pragma once

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "lrcs/operators.hpp"
#include "lrcs/run_config.hpp"

namespace lrcs {

/// A sampled acquisition: operators, measurements and, for synthetic data,
/// the ground truth they were simulated from.
struct Dataset {
    Index n1 = 0;
    Index n2 = 0;
    SamplingScheme scheme = SamplingScheme::PseudoRadial;
    OperatorSet ops;
    MeasurementSet y;
    std::optional<ComplexMatrix> truth;
    std::optional<SamplingPlan> plan;  // Fourier schemes only
    std::uint64_t operator_seed = 0;   // Gaussian operators are regenerated from it
    nlohmann::json manifest = nlohmann::json::object();
};

/// Ground truth for a spec (three-level model or phantom).
ComplexMatrix synthesize_truth(const DatasetSpec& spec);

/// Operators for a spec's sampling settings.
OperatorSet build_operators(const DatasetSpec& spec, std::optional<SamplingPlan>* plan = nullptr);

/// Truth, operators and noiseless measurements y_k = A_k z*_k.
Dataset synthesize(const DatasetSpec& spec);

/// File names inside a dataset directory.
struct DatasetFiles {
    static constexpr const char* truth = "truth.lrcs";
    static constexpr const char* kspace = "kspace.lrcs";
    static constexpr const char* masks = "masks.lrcs";
    static constexpr const char* coils = "coils.lrcs";
    static constexpr const char* manifest = "dataset.json";
};

/// Writes truth (if known), k-space, masks and coil maps (Fourier schemes)
/// and dataset.json, each atomically.
void save_dataset(const std::filesystem::path& dir, const Dataset& data);

/// Reads a directory written by save_dataset. Fourier operators come from the
/// mask and coil containers; Gaussian operators are regenerated from the
/// seed and row count recorded in dataset.json.
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace lrcs
