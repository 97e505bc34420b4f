#include "lrcs/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lrcs/error.hpp"
#include "lrcs/random.hpp"

namespace lrcs {

namespace {

enum : std::uint64_t { kTagMean = 11, kTagLeft = 12, kTagRight = 13, kTagResidual = 14, kTagDrift = 15, kTagPhantom = 16 };

ComplexVector smooth_mean_image(Index n1, Index n2, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd img = Eigen::MatrixXd::Constant(n1, n2, 0.2);
    const double size = static_cast<double>(std::max(n1, n2));
    for (int blob = 0; blob < 6; ++blob) {
        const double c1 = unif(rng) * static_cast<double>(n1 - 1);
        const double c2 = unif(rng) * static_cast<double>(n2 - 1);
        const double w = (0.1 + 0.2 * unif(rng)) * size;
        const double a = 0.5 + 0.5 * unif(rng);
        for (Index j = 0; j < n2; ++j)
            for (Index i = 0; i < n1; ++i) {
                const double d1 = static_cast<double>(i) - c1;
                const double d2 = static_cast<double>(j) - c2;
                img(i, j) += a * std::exp(-(d1 * d1 + d2 * d2) / (2.0 * w * w));
            }
    }
    ComplexVector v = Eigen::Map<const Eigen::VectorXd>(img.data(), n1 * n2).cast<Complex>();
    return v;
}

// C¹ smoothstep from 0 (t ≤ −w) to 1 (t ≥ w); slope ≤ 3/(4w), compact support.
double edge(double t, double w) {
    const double u = std::clamp((t + w) / (2.0 * w), 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

}  // namespace

void SyntheticSpec::validate() const {
    if (n1 < 1 || n2 < 1 || q < 1) throw ConfigError("synthetic spec: n1, n2, q must be ≥ 1");
    if (mean_energy < 0.0 || lowrank_energy < 0.0 || residual_energy < 0.0)
        throw ConfigError("synthetic spec: energy ratios must be non-negative");
    if (mean_energy + lowrank_energy + residual_energy <= 0.0)
        throw ConfigError("synthetic spec: at least one component must carry energy");
    if (lowrank_energy > 0.0) {
        if (r < 1 || r > std::min(n1 * n2, q)) throw ConfigError("synthetic spec: need 1 ≤ r ≤ min(n, q)");
        if (subspace_drift != 0.0 && 2 * r > n1 * n2) throw ConfigError("synthetic spec: drift needs 2r ≤ n");
    }
    if (!(condition_number >= 1.0)) throw ConfigError("synthetic spec: condition number must be ≥ 1");
    if (residual_kind == ResidualKind::TemporalFourierSparse && (sparse_freqs < 1 || sparse_freqs > q))
        throw ConfigError("synthetic spec: sparse_freqs must lie in [1, q]");
}

ThreeLevelData gen_three_level(const SyntheticSpec& spec) {
    spec.validate();
    const Index n = spec.n1 * spec.n2;
    const Index q = spec.q;
    ThreeLevelData out;

    out.mean = ComplexVector::Zero(n);
    if (spec.mean_energy > 0.0) {
        Rng rng = make_rng(spec.seed, {kTagMean});
        out.mean = smooth_mean_image(spec.n1, spec.n2, rng);
        out.mean *= spec.mean_energy / (std::sqrt(static_cast<double>(q)) * out.mean.norm());
    }

    out.lowrank = ComplexMatrix::Zero(n, q);
    if (spec.lowrank_energy > 0.0) {
        const Index r = spec.r;
        RealVector sigma(r);
        for (Index j = 0; j < r; ++j)
            sigma(j) = r == 1 ? 1.0 : std::pow(spec.condition_number, -static_cast<double>(j) / static_cast<double>(r - 1));

        Rng left = make_rng(spec.seed, {kTagLeft});
        const ComplexMatrix u = thin_qr(random_complex_gaussian(n, r, left)).q.matrix();
        ComplexMatrix u_alt;
        if (spec.subspace_drift != 0.0) {
            Rng drift = make_rng(spec.seed, {kTagDrift});
            ComplexMatrix both(n, 2 * r);
            both << u, random_complex_gaussian(n, r, drift);
            u_alt = thin_qr(both).q.matrix().rightCols(r);
        }

        Rng right = make_rng(spec.seed, {kTagRight});
        constexpr int kMaxAttempts = 200;
        for (int attempt = 0;; ++attempt) {
            const ComplexMatrix v = thin_qr(random_complex_gaussian(q, r, right)).q.matrix();
            const ComplexMatrix coeffs = sigma.asDiagonal() * v.adjoint();  // r × q
            if (spec.subspace_drift == 0.0) {
                out.lowrank = u * coeffs;
            } else {
                for (Index k = 0; k < q; ++k) {
                    const double a = spec.subspace_drift * static_cast<double>(k);
                    out.lowrank.col(k) = (std::cos(a) * u + std::sin(a) * u_alt) * coeffs.col(k);
                }
            }
            out.incoherence = incoherence(out.lowrank);
            if (spec.subspace_drift != 0.0 || out.incoherence <= spec.max_incoherence) break;
            if (attempt + 1 >= kMaxAttempts)
                throw ConfigError("synthetic spec: could not draw right singular vectors with μ ≤ max_incoherence");
        }
        out.lowrank *= spec.lowrank_energy / out.lowrank.norm();
    }

    out.residual = ComplexMatrix::Zero(n, q);
    if (spec.residual_energy > 0.0) {
        Rng rng = make_rng(spec.seed, {kTagResidual});
        if (spec.residual_kind == ResidualKind::DenseSmall) {
            out.residual = random_complex_gaussian(n, q, rng);
        } else {
            ComplexMatrix s = ComplexMatrix::Zero(n, q);
            std::vector<Index> freqs(static_cast<std::size_t>(q));
            std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
            for (Index i = 0; i < n; ++i) {
                std::iota(freqs.begin(), freqs.end(), Index{0});
                for (Index t = 0; t < spec.sparse_freqs; ++t) {
                    std::uniform_int_distribution<Index> pick(t, q - 1);
                    std::swap(freqs[static_cast<std::size_t>(t)], freqs[static_cast<std::size_t>(pick(rng))]);
                    const double re = normal(rng);
                    const double im = normal(rng);
                    s(i, freqs[static_cast<std::size_t>(t)]) = Complex(re, im);
                }
            }
            out.residual = row_idft_unitary(s);
        }
        out.residual *= spec.residual_energy / out.residual.norm();
    }

    out.z = out.mean * Eigen::RowVectorXcd::Ones(q) + out.lowrank + out.residual;
    return out;
}

double incoherence(const ComplexMatrix& x) {
    if (x.size() == 0 || x.norm() == 0.0) throw DataError("incoherence: zero matrix");
    Eigen::BDCSVD<ComplexMatrix> svd(x);
    const RealVector& sigma = svd.singularValues();
    const double top = sigma(0);
    Index rank = 0;
    for (Index j = 0; j < sigma.size(); ++j)
        if (sigma(j) > 1e-8 * top) ++rank;
    const double max_col = x.colwise().squaredNorm().maxCoeff();
    return max_col * static_cast<double>(x.cols()) / (static_cast<double>(rank) * top * top);
}

ComplexMatrix gen_moving_disk_phantom(Index n1, Index n2, Index q, const PhantomParams& p) {
    if (n1 < 4 || n2 < 4 || q < 1) throw ConfigError("phantom: need n1, n2 ≥ 4 and q ≥ 1");
    if (!(p.edge_width > 0.0) || !(p.motion_period > 0.0) || !(p.uptake_tau > 0.0) || p.motion_amplitude < 0.0)
        throw ConfigError("phantom: edge width, period and uptake time constant must be positive");

    Rng rng = make_rng(p.seed, {kTagPhantom});
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    const double mid1 = static_cast<double>(n1 - 1) / 2.0 + jitter(rng);
    const double mid2 = static_cast<double>(n2 - 1) / 2.0 + jitter(rng);
    const double small = static_cast<double>(std::min(n1, n2));
    const double axis1 = 0.42 * static_cast<double>(n1);
    const double axis2 = 0.38 * static_cast<double>(n2);

    const double radius = p.disk_radius * small;
    const double disk_c2 = mid2 - 0.15 * static_cast<double>(n2);
    const double uptake_radius = 0.1 * small;
    const double uptake_c1 = mid1;
    const double uptake_c2 = mid2 + 0.2 * static_cast<double>(n2);

    const double reach = p.motion_amplitude + radius + 2.0 * p.edge_width;
    if (mid1 - reach < 0.0 || mid1 + reach > static_cast<double>(n1 - 1) || disk_c2 - radius < 0.0)
        throw ConfigError("phantom: moving disk leaves the field of view");
    if (uptake_c2 - disk_c2 < radius + uptake_radius + 2.0 * p.edge_width)
        throw ConfigError("phantom: moving disk overlaps the uptake region");

    ComplexMatrix out(n1 * n2, q);
    for (Index k = 0; k < q; ++k) {
        const double t = static_cast<double>(k);
        const double disk_c1 = mid1 + p.motion_amplitude * std::sin(2.0 * std::numbers::pi * t / p.motion_period);
        const double uptake = p.uptake_intensity * (1.0 - std::exp(-t / p.uptake_tau));
        for (Index j = 0; j < n2; ++j)
            for (Index i = 0; i < n1; ++i) {
                const double x1 = static_cast<double>(i);
                const double x2 = static_cast<double>(j);
                const double rho = std::hypot((x1 - mid1) / axis1, (x2 - mid2) / axis2);
                double v = edge((1.0 - rho) * std::min(axis1, axis2), p.edge_width);
                v += p.disk_intensity * edge(radius - std::hypot(x1 - disk_c1, x2 - disk_c2), p.edge_width);
                v += uptake * edge(uptake_radius - std::hypot(x1 - uptake_c1, x2 - uptake_c2), p.edge_width);
                out(i + j * n1, k) = Complex(v, 0.0);
            }
    }
    return out;
}

double phantom_frame_change_bound(const PhantomParams& p) {
    // Edge slope ≤ 3/(4w); the disk center moves at most 2πA/P per frame;
    // the uptake curve rises fastest on its first step.
    const double motion = p.disk_intensity * (2.0 * std::numbers::pi * p.motion_amplitude / p.motion_period) * 0.75 /
                          p.edge_width;
    const double uptake = p.uptake_intensity * (1.0 - std::exp(-1.0 / p.uptake_tau));
    return motion + uptake;
}

}  // namespace lrcs
