#include "lrcs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "lrcs/error.hpp"
#include "lrcs/random.hpp"

namespace lrcs {

namespace {

enum StreamTag : std::uint64_t { kTagRadial = 1, kTagCartesian = 2, kTagUniform = 3, kTagCoils = 4 };

Index wrap(Index c, Index n) { return ((c % n) + n) % n; }

// Centered frequency of column j for an unshifted DFT grid of size n.
Index centered(Index j, Index n) { return j < (n + 1) / 2 ? j : j - n; }

void require_dims(Index n1, Index n2) {
    if (n1 < 1 || n2 < 1) throw ConfigError("mask dimensions must be ≥ 1");
}

}  // namespace

FrameMask::FrameMask(Index n1, Index n2, std::vector<std::uint8_t> cells)
    : n1_(n1), n2_(n2), cells_(std::move(cells)) {
    require_dims(n1, n2);
    if (static_cast<Index>(cells_.size()) != n1 * n2) throw DataError("mask cell count does not match n1·n2");
    for (auto& c : cells_) {
        if (c > 1) throw DataError("mask cells must be 0 or 1");
    }
    for (Index i = 0; i < n1_; ++i)
        for (Index j = 0; j < n2_; ++j)
            if (cells_[static_cast<std::size_t>(i + j * n1_)]) gather_.push_back(i + j * n1_);
    count_ = static_cast<Index>(gather_.size());
    if (count_ < 1) throw DataError("mask must sample at least one cell");
}

FrameMask FrameMask::full(Index n1, Index n2) {
    require_dims(n1, n2);
    return FrameMask(n1, n2, std::vector<std::uint8_t>(static_cast<std::size_t>(n1 * n2), 1));
}

std::string to_string(SamplingScheme s) {
    switch (s) {
        case SamplingScheme::PseudoRadial: return "radial";
        case SamplingScheme::CartesianVd: return "cartesian";
        case SamplingScheme::UniformFourier: return "uniform";
        case SamplingScheme::Gaussian: return "gaussian";
    }
    return "unknown";
}

SamplingScheme sampling_scheme_from_string(const std::string& s) {
    if (s == "radial") return SamplingScheme::PseudoRadial;
    if (s == "cartesian") return SamplingScheme::CartesianVd;
    if (s == "uniform") return SamplingScheme::UniformFourier;
    if (s == "gaussian") return SamplingScheme::Gaussian;
    throw ConfigError("unknown sampling scheme '" + s + "'");
}

FrameMask golden_angle_pseudo_radial(Index n1, Index n2, Index lines, Index frame, std::uint64_t /*seed*/) {
    require_dims(n1, n2);
    if (lines < 1) throw ConfigError("pseudo-radial: lines must be ≥ 1");
    if (frame < 0) throw ConfigError("pseudo-radial: frame index must be ≥ 0");
    if (lines >= n1 * n2) return FrameMask::full(n1, n2);

    const Index points = std::max(n1, n2);
    const double half = static_cast<double>(points) / 2.0;
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(n1 * n2), 0);
    cells[0] = 1;
    for (Index i = 0; i < lines; ++i) {
        // (frame + i)·111.25 is exact in binary; reduce before converting to radians.
        const double deg = std::fmod(static_cast<double>(frame + i) * kGoldenAngleDegrees, 360.0);
        const double theta = deg * std::numbers::pi / 180.0;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (Index p = 0; p < points; ++p) {
            const double u = static_cast<double>(p - points / 2) / half;
            const Index row = wrap(std::lround(u * c * static_cast<double>(n1) / 2.0), n1);
            const Index col = wrap(std::lround(u * s * static_cast<double>(n2) / 2.0), n2);
            cells[static_cast<std::size_t>(row + col * n1)] = 1;
        }
    }
    return FrameMask(n1, n2, std::move(cells));
}

FrameMask cartesian_vd_mask(Index n1, Index n2, double reduction, Index frame, std::uint64_t seed) {
    require_dims(n1, n2);
    if (!(reduction >= 1.0)) throw ConfigError("cartesian-vd: reduction factor must be ≥ 1");
    if (reduction > static_cast<double>(n2)) throw ConfigError("cartesian-vd: reduction factor exceeds n2");

    // The central block is kept even when n2/R asks for fewer columns.
    const Index center = std::min<Index>(8, n2);
    const Index target = std::clamp<Index>(std::lround(static_cast<double>(n2) / reduction), center, n2);

    std::vector<bool> chosen(static_cast<std::size_t>(n2), false);
    for (Index c = -center / 2; c < center - center / 2; ++c) chosen[static_cast<std::size_t>(wrap(c, n2))] = true;

    // Weighted sampling without replacement: keep the largest log(u)/w keys.
    Rng rng = make_rng(seed, {kTagCartesian, static_cast<std::uint64_t>(frame)});
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double scale = static_cast<double>(n2) / 6.0;
    std::vector<std::pair<double, Index>> keys;
    for (Index j = 0; j < n2; ++j) {
        double u = unif(rng);
        if (chosen[static_cast<std::size_t>(j)]) continue;
        const double d = static_cast<double>(centered(j, n2)) / scale;
        const double w = std::exp(-d * d);
        u = std::max(u, std::numeric_limits<double>::min());
        keys.emplace_back(std::log(u) / w, j);
    }
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    const auto extra = static_cast<std::size_t>(target - center);
    for (std::size_t t = 0; t < extra && t < keys.size(); ++t) chosen[static_cast<std::size_t>(keys[t].second)] = true;

    std::vector<std::uint8_t> cells(static_cast<std::size_t>(n1 * n2), 0);
    for (Index j = 0; j < n2; ++j)
        if (chosen[static_cast<std::size_t>(j)])
            std::fill_n(cells.begin() + j * n1, n1, std::uint8_t{1});
    return FrameMask(n1, n2, std::move(cells));
}

FrameMask uniform_fourier_mask(Index n1, Index n2, Index m, Index frame, std::uint64_t seed) {
    require_dims(n1, n2);
    const Index total = n1 * n2;
    if (m < 1 || m > total) throw ConfigError("uniform-fourier: m must lie in [1, n1·n2]");

    Rng rng = make_rng(seed, {kTagUniform, static_cast<std::uint64_t>(frame)});
    std::vector<Index> idx(static_cast<std::size_t>(total));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index t = 0; t < m; ++t) {
        std::uniform_int_distribution<Index> pick(t, total - 1);
        std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(total), 0);
    for (Index t = 0; t < m; ++t) cells[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])] = 1;
    return FrameMask(n1, n2, std::move(cells));
}

CoilGeometry synth_coil_geometry(Index n1, Index n2, Index mc, std::uint64_t seed) {
    require_dims(n1, n2);
    if (mc < 1) throw ConfigError("coil count must be ≥ 1");
    Rng rng = make_rng(seed, {kTagCoils});
    std::uniform_real_distribution<double> jitter(0.0, 0.25);

    CoilGeometry g;
    g.width = 0.4 * static_cast<double>(std::max(n1, n2));
    const double mid1 = static_cast<double>(n1 - 1) / 2.0;
    const double mid2 = static_cast<double>(n2 - 1) / 2.0;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(mc);
    for (Index j = 0; j < mc; ++j) {
        const double phi = step * (static_cast<double>(j) + jitter(rng));
        g.centers.emplace_back(mid1 + 0.6 * (static_cast<double>(n1) / 2.0) * std::cos(phi),
                               mid2 + 0.6 * (static_cast<double>(n2) / 2.0) * std::sin(phi));
    }
    return g;
}

CoilMaps synth_coil_maps(Index n1, Index n2, Index mc, std::uint64_t seed) {
    const CoilGeometry g = synth_coil_geometry(n1, n2, mc, seed);
    const double inv2w2 = 1.0 / (2.0 * g.width * g.width);

    CoilMaps out;
    Eigen::MatrixXd sos = Eigen::MatrixXd::Zero(n1, n2);
    std::vector<Eigen::MatrixXd> bumps;
    for (Index j = 0; j < mc; ++j) {
        Eigen::MatrixXd b(n1, n2);
        const auto [c1, c2] = g.centers[static_cast<std::size_t>(j)];
        for (Index q = 0; q < n2; ++q)
            for (Index p = 0; p < n1; ++p) {
                const double d1 = static_cast<double>(p) - c1;
                const double d2 = static_cast<double>(q) - c2;
                b(p, q) = std::exp(-(d1 * d1 + d2 * d2) * inv2w2);
            }
        sos += b.cwiseAbs2();
        bumps.push_back(std::move(b));
    }
    const Eigen::MatrixXd norm = sos.cwiseSqrt();
    for (Index j = 0; j < mc; ++j) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(mc);
        const Complex rot = std::polar(1.0, phase);
        ComplexMatrix d = (bumps[static_cast<std::size_t>(j)].array() / norm.array()).cast<Complex>();
        out.maps.push_back(d * rot);
    }
    return out;
}

std::vector<FrameMask> make_masks(Index n1, Index n2, Index q, const MaskParams& params, std::uint64_t seed) {
    if (q < 1) throw ConfigError("frame count must be ≥ 1");
    std::vector<FrameMask> masks;
    masks.reserve(static_cast<std::size_t>(q));
    for (Index k = 0; k < q; ++k) {
        switch (params.scheme) {
            case SamplingScheme::PseudoRadial:
                masks.push_back(golden_angle_pseudo_radial(n1, n2, params.lines, k, seed));
                break;
            case SamplingScheme::CartesianVd:
                masks.push_back(cartesian_vd_mask(n1, n2, params.reduction, k, seed));
                break;
            case SamplingScheme::UniformFourier:
                masks.push_back(uniform_fourier_mask(n1, n2, params.m, k, seed));
                break;
            case SamplingScheme::Gaussian:
                throw ConfigError("gaussian sampling has no k-space masks");
        }
    }
    return masks;
}

}  // namespace lrcs
