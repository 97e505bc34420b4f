#include "lrcs/dataset.hpp"

#include "lrcs/container.hpp"
#include "lrcs/error.hpp"

namespace lrcs {

namespace fs = std::filesystem;

ComplexMatrix synthesize_truth(const DatasetSpec& spec) {
    spec.validate();
    const auto& s = spec.synthetic;
    if (spec.source == DataSource::Phantom) {
        PhantomParams p = spec.phantom;
        p.seed = s.seed;
        return gen_moving_disk_phantom(s.n1, s.n2, s.q, p);
    }
    return gen_three_level(s).z;
}

OperatorSet build_operators(const DatasetSpec& spec, std::optional<SamplingPlan>* plan) {
    spec.validate();
    const auto& s = spec.synthetic;
    const std::uint64_t seed = spec.sampling_seed();
    if (spec.sampling.scheme == SamplingScheme::Gaussian) {
        if (plan) plan->reset();
        return gaussian_frame_ops(s.n1 * s.n2, spec.sampling.m, s.q, seed);
    }
    SamplingPlan p{spec.sampling.scheme, make_masks(s.n1, s.n2, s.q, spec.sampling.mask_params(), seed),
                   synth_coil_maps(s.n1, s.n2, spec.sampling.coils, seed)};
    OperatorSet ops = fourier_frame_ops(p);
    if (plan) *plan = std::move(p);
    return ops;
}

Dataset synthesize(const DatasetSpec& spec) {
    Dataset d;
    d.n1 = spec.synthetic.n1;
    d.n2 = spec.synthetic.n2;
    d.scheme = spec.sampling.scheme;
    d.operator_seed = spec.sampling_seed();
    d.truth = synthesize_truth(spec);
    d.ops = build_operators(spec, &d.plan);
    d.y = apply_seq(d.ops, *d.truth);
    d.manifest = spec.to_json();
    if (spec.source == DataSource::ThreeLevel && spec.synthetic.lowrank_energy > 0.0)
        d.manifest["incoherence"] = gen_three_level(spec.synthetic).incoherence;
    return d;
}

void save_dataset(const fs::path& dir, const Dataset& data) {
    fs::create_directories(dir);
    if (data.ops.empty()) throw DataError("save_dataset: empty dataset");
    if (data.truth) write_image_sequence(dir / DatasetFiles::truth, {data.n1, data.n2, *data.truth});
    write_kspace(dir / DatasetFiles::kspace, {data.n1, data.n2, data.ops.front().coils(), data.y});
    if (data.plan) {
        write_masks(dir / DatasetFiles::masks, data.plan->masks);
        write_coil_maps(dir / DatasetFiles::coils, data.plan->coils);
    }
    nlohmann::json manifest = data.manifest;
    manifest["sampling"]["scheme"] = to_string(data.scheme);
    if (data.scheme == SamplingScheme::Gaussian) {
        manifest["sampling"]["m"] = data.ops.front().m_cells();
        manifest["sampling"]["seed"] = data.operator_seed;
    }
    write_text_atomic(dir / DatasetFiles::manifest, manifest.dump(2) + "\n");
}

Dataset load_dataset(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("'" + dir.string() + "' is not a dataset directory");
    Dataset d;
    const fs::path manifest_path = dir / DatasetFiles::manifest;
    if (fs::exists(manifest_path)) d.manifest = load_json_file(manifest_path.string());

    KSpaceData k = read_kspace(dir / DatasetFiles::kspace);
    d.n1 = k.n1;
    d.n2 = k.n2;
    d.y = std::move(k.measurements);

    const bool has_masks = fs::exists(dir / DatasetFiles::masks);
    if (has_masks) {
        SamplingPlan plan;
        plan.masks = read_masks(dir / DatasetFiles::masks);
        if (!fs::exists(dir / DatasetFiles::coils)) throw DataError("dataset has masks but no coil maps");
        plan.coils = read_coil_maps(dir / DatasetFiles::coils);
        if (d.manifest.contains("sampling") && d.manifest["sampling"].contains("scheme"))
            plan.scheme = sampling_scheme_from_string(d.manifest["sampling"]["scheme"].get<std::string>());
        if (plan.coils.coils() != k.mc)
            throw DataError("k-space declares " + std::to_string(k.mc) + " coils, coil maps hold " +
                            std::to_string(plan.coils.coils()));
        d.scheme = plan.scheme;
        d.ops = fourier_frame_ops(plan);
        d.plan = std::move(plan);
    } else {
        const auto& s = d.manifest.contains("sampling") ? d.manifest["sampling"] : nlohmann::json::object();
        if (s.value("scheme", "") != "gaussian" || !s.contains("m") || !s.contains("seed"))
            throw DataError("dataset has no masks and its manifest does not describe Gaussian operators");
        d.scheme = SamplingScheme::Gaussian;
        d.operator_seed = s["seed"].get<std::uint64_t>();
        d.ops = gaussian_frame_ops(d.n1 * d.n2, s["m"].get<Index>(), d.y.size(), d.operator_seed);
    }

    if (static_cast<std::size_t>(d.y.size()) != d.ops.size())
        throw DataError("k-space holds " + std::to_string(d.y.size()) + " frames, operators " +
                        std::to_string(d.ops.size()));
    for (std::size_t i = 0; i < d.ops.size(); ++i)
        if (d.y.frames[i].size() != d.ops[i].m_total())
            throw DataError("k-space frame " + std::to_string(i) + " length does not match its mask");

    const fs::path truth_path = dir / DatasetFiles::truth;
    if (fs::exists(truth_path)) {
        ImageSequence z = read_image_sequence(truth_path);
        if (z.n1 != d.n1 || z.n2 != d.n2 || z.frames.cols() != d.y.size())
            throw DataError("truth dimensions do not match the k-space container");
        d.truth = std::move(z.frames);
    }
    return d;
}

}  // namespace lrcs
