// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
// Usage: lrcs_acceptance [--only N[,N...]] [--expect-fail N[,N...]]
//
// Exit status is 0 when every criterion either passes or is listed in
// --expect-fail; an expected failure still prints FAIL. A listed criterion
// that passes is reported but does not change the exit status.

#include <algorithm>
#include <array>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lrcs/altgdmin.hpp"
#include "lrcs/cgls.hpp"
#include "lrcs/datagen.hpp"
#include "lrcs/dataset.hpp"
#include "lrcs/hierarchical.hpp"
#include "lrcs/random.hpp"
#include "lrcs/tracking.hpp"

namespace {

using namespace lrcs;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

ComplexVector pinv_solve(const ComplexMatrix& a, const ComplexVector& y) {
    return a.completeOrthogonalDecomposition().solve(y);
}

// ------------------------------------------------------------------ 1

void adjoint_identity(Outcome& o) {
    const auto t0 = Clock::now();
    Rng rng = make_rng(2024, {1});
    std::uniform_int_distribution<Index> side(4, 32), coils(1, 4), scheme_pick(0, 2);
    double worst = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
        const Index n1 = side(rng), n2 = side(rng), n = n1 * n2;
        std::optional<FrameOperator> op;
        if (probe % 2 == 0) {
            std::uniform_int_distribution<Index> rows(1, n);
            op = gaussian_frame_ops(n, rows(rng), 1, static_cast<std::uint64_t>(probe)).front();
        } else {
            const auto scheme = std::array{SamplingScheme::PseudoRadial, SamplingScheme::CartesianVd,
                                           SamplingScheme::UniformFourier}[static_cast<std::size_t>(scheme_pick(rng))];
            std::uniform_int_distribution<Index> cells(1, n);
            const MaskParams params{scheme, 1 + probe % 10, 2.0 + probe % 3, cells(rng)};
            SamplingPlan plan{scheme, make_masks(n1, n2, 1, params, static_cast<std::uint64_t>(probe)),
                              synth_coil_maps(n1, n2, coils(rng), static_cast<std::uint64_t>(probe))};
            op = fourier_frame_ops(plan).front();
        }
        const ComplexMatrix xy = random_complex_gaussian(op->n() + op->m_total(), 1, rng);
        const ComplexVector x = xy.topRows(op->n()).col(0);
        const ComplexVector y = xy.bottomRows(op->m_total()).col(0);
        const double gap = std::abs(y.dot(op->apply(x)) - op->adjoint(y).dot(x)) / (x.norm() * y.norm());
        worst = std::max(worst, gap);
    }
    const double seconds = since(t0);
    o.detail << "100 probes, worst |<Ax,y>-<x,A^H y>|/(|x||y|) = " << sci(worst) << ", " << seconds << " s";
    o.check(worst <= 1e-10, "gap > 1e-10");
    o.check(seconds < 5.0, "runtime >= 5 s");
}

// ------------------------------------------------------------------ 2

void gaussian_table1(Outcome& o) {
    SyntheticSpec spec;
    spec.n1 = 30;
    spec.n2 = 30;
    spec.q = 50;
    spec.r = 4;
    spec.mean_energy = 0.0;
    spec.residual_energy = 0.0;
    const ThreeLevelData d = gen_three_level(spec);
    const OperatorSet ops = gaussian_frame_ops(900, 90, 50, 1);
    const MeasurementSet y = apply_seq(ops, d.z);

    const auto t0 = Clock::now();
    AltGdminOptions opts;
    opts.error_fn = [&](const ComplexMatrix& x) { return nsmse(d.lowrank, x); };
    const AltGdminResult r = altgdmin_run(y, ops, {}, opts);
    const double seconds = since(t0);
    const double err = nsmse(d.lowrank, r.x);

    int first_increase = 0;
    for (std::size_t t = 2; t < r.trace.size(); ++t)
        if (*r.trace[t].error > *r.trace[t - 1].error && first_increase == 0) first_increase = r.trace[t].iteration;

    o.detail << "n=900 q=50 m=90 r=4: nsmse " << sci(err) << " after " << r.iterations << " iterations (rank "
             << r.u.cols() << (r.exited ? ", exit rule" : ", cap") << "), " << seconds << " s";
    o.check(err <= 1e-3, "nsmse > 1e-3");
    o.check(r.iterations <= 70, "more than 70 iterations");
    o.check(seconds < 30.0, "runtime >= 30 s");
    o.check(first_increase == 0, "error increases at iteration " + std::to_string(first_increase));
}

// ------------------------------------------------------------------ 3

void fourier_mean_table1(Outcome& o) {
    SyntheticSpec spec;
    spec.n1 = 30;
    spec.n2 = 30;
    spec.q = 50;
    spec.r = 4;
    const ThreeLevelData d = gen_three_level(spec);
    const double mean_norm = (d.mean * Eigen::RowVectorXcd::Ones(50)).norm();
    SamplingPlan plan{SamplingScheme::UniformFourier, make_masks(30, 30, 50, {SamplingScheme::UniformFourier, 0, 0.0, 90}, 1),
                      synth_coil_maps(30, 30, 1, 1)};
    const OperatorSet ops = fourier_frame_ops(plan);
    const MeasurementSet y = apply_seq(ops, d.z);

    const auto t0 = Clock::now();
    const AltGdminResult plain = altgdmin_run(y, ops);
    const double without = nsmse(d.z, plain.x);
    const ReconResult with = reconstruct(y, ops, {}, {&d.z, std::nullopt});
    const double with_mean = with.report.stage_errors.at("mean+lowrank");
    const double seconds = since(t0);

    o.detail << "|mean|/|X| = " << mean_norm / d.lowrank.norm() << ", with mean " << sci(with_mean) << ", without "
             << sci(without) << ", ratio " << sci(with_mean / without) << ", " << seconds << " s";
    o.check(mean_norm >= 10.0 * d.lowrank.norm(), "mean energy below 10x");
    o.check(with_mean < without && with_mean <= 0.5 * without, "ratio > 0.5");
    o.check(seconds < 60.0, "runtime >= 60 s");
}

// ------------------------------------------------------------------ 4

void gradient_check(Outcome& o) {
    double worst = 0.0;
    for (std::uint64_t inst = 0; inst < 3; ++inst) {
        Rng rng = make_rng(400 + inst);
        const Index n = 20 + 5 * static_cast<Index>(inst), q = 6, r = 2 + static_cast<Index>(inst % 2);
        const OperatorSet ops = gaussian_frame_ops(n, 12, q, 40 + inst);
        const MeasurementSet y = apply_seq(ops, random_complex_gaussian(n, q, rng));
        const OrthonormalBasis u = thin_qr(random_complex_gaussian(n, r, rng)).q;
        const ComplexMatrix b = random_complex_gaussian(r, q, rng);
        const ComplexMatrix g = gradient_U(u, b, y, ops);
        std::uniform_int_distribution<Index> row(0, n - 1), col(0, r - 1);
        const double h = 1e-4;
        for (int c = 0; c < 20; ++c) {
            const Index i = row(rng), j = col(rng);
            const bool imag = c % 2 == 1;
            const Complex dir = imag ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
            ComplexMatrix up = u.matrix(), down = u.matrix();
            up(i, j) += h * dir;
            down(i, j) -= h * dir;
            const double fd = (altgdmin_objective(up, b, y, ops) - altgdmin_objective(down, b, y, ops)) / (2.0 * h);
            // The gradient omits the factor 2 of the Wirtinger derivative.
            const double analytic = 2.0 * (imag ? g(i, j).imag() : g(i, j).real());
            worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
        }
    }
    o.detail << "60 coordinates, worst relative error " << sci(worst);
    o.check(worst <= 1e-5, "relative error > 1e-5");
}

// ------------------------------------------------------------------ 5

void least_squares_oracles(Outcome& o) {
    double worst_b = 0.0, worst_cgls = 0.0;
    for (std::uint64_t inst = 0; inst < 20; ++inst) {
        Rng rng = make_rng(500 + inst);
        std::uniform_int_distribution<Index> dim(8, 30), rank(1, 4);
        const Index n = dim(rng), r = rank(rng), q = 4;
        const Index m = r + 2 + static_cast<Index>(inst % 7);
        const OperatorSet ops = gaussian_frame_ops(n, m, q, 50 + inst);
        const MeasurementSet y = apply_seq(ops, random_complex_gaussian(n, q, rng));
        const OrthonormalBasis u = thin_qr(random_complex_gaussian(n, r, rng)).q;
        const ComplexMatrix b = update_B(u, y, ops);
        for (Index k = 0; k < q; ++k) {
            const ComplexMatrix au = ops[static_cast<std::size_t>(k)].gaussian()->matrix.cast<Complex>() * u.matrix();
            const ComplexVector ref = pinv_solve(au, y.frames[static_cast<std::size_t>(k)]);
            worst_b = std::max(worst_b, (b.col(k) - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.norm()));
        }

        // CGLS on a tall system against the normal equations.
        const Index rows = n + 5 + static_cast<Index>(inst);
        struct Dense {
            ComplexMatrix a;
            Index n() const { return a.cols(); }
            ComplexVector apply(const ComplexVector& x) const { return a * x; }
            ComplexVector adjoint(const ComplexVector& v) const { return a.adjoint() * v; }
        } op{random_complex_gaussian(rows, n, rng)};
        const ComplexVector rhs = random_complex_gaussian(rows, 1, rng).col(0);
        const ComplexVector ref = (op.a.adjoint() * op.a).ldlt().solve(op.a.adjoint() * rhs);
        CglsConfig cfg;
        cfg.tol = 1e-15;
        cfg.max_iter = 10 * static_cast<int>(n);
        const CglsResult res = cgls_solve(op, rhs, cfg);
        worst_cgls = std::max(worst_cgls, (res.x - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.norm()));
    }
    o.detail << "20 instances, update_B vs pinv " << sci(worst_b) << ", cgls vs normal equations " << sci(worst_cgls);
    o.check(worst_b <= 1e-8, "update_B mismatch");
    o.check(worst_cgls <= 1e-8, "cgls mismatch");
}

// ------------------------------------------------------------------ 6

void rank_rule(Outcome& o) {
    Rng rng = make_rng(600);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<Index> length(10, 120), m_pick(20, 400);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index len = length(rng), q = len, n = 4 * len, mc = 1 + trial % 4, m = m_pick(rng);
        RealVector sigma(len);
        const double power = 1.0 + 4.0 * unif(rng);
        for (Index j = 0; j < len; ++j) sigma(j) = std::pow(unif(rng), power);
        std::sort(sigma.data(), sigma.data() + len, std::greater<>());
        const Index cutoff = std::min({n, q, mc * m}) / 10;
        double total = 0.0;
        for (Index j = 0; j < cutoff; ++j) total += sigma(j) * sigma(j);
        Index expected = cutoff, run_r = 0;
        double run = 0.0;
        while (run_r < cutoff) {
            run += sigma(run_r) * sigma(run_r);
            ++run_r;
            if (run >= 0.85 * total) {
                expected = run_r;
                break;
            }
        }
        if (estimate_rank(sigma, n, q, mc, m, 85.0) != expected) ++mismatches;
    }

    // Flat exact-rank spectra for every true rank up to J = 20.
    std::vector<Index> wrong;
    RealVector flat = RealVector::Zero(200);
    for (Index r = 1; r <= 20; ++r) {
        flat.setZero();
        flat.head(r).setOnes();
        if (estimate_rank(flat, 4000, 200, 1, 2000, 85.0) != r) wrong.push_back(r);
    }
    o.detail << "scan mismatches " << mismatches << "/100; exact-rank spectra recovered for "
             << 20 - static_cast<int>(wrong.size()) << "/20 ranks";
    if (!wrong.empty()) {
        o.detail << " (ranks " << wrong.front() << ".." << wrong.back() << " return ceil(0.85 r))";
    }
    o.check(mismatches == 0, "cumulative scan disagreement");
    o.check(wrong.empty(), "exact-rank spectra");
}

// ------------------------------------------------------------------ 7, 9

struct StageRun {
    Dataset data;
    std::optional<ReconResult> mri1;
    std::optional<ReconResult> mri2;
    double seconds1 = 0.0;
    double seconds2 = 0.0;
    double zero_filled = 0.0;
};

const StageRun& stage_run() {
    static const StageRun run = [] {
        StageRun s;
        DatasetSpec spec;
        spec.synthetic.n1 = 64;
        spec.synthetic.n2 = 64;
        spec.synthetic.q = 100;
        spec.synthetic.r = 4;
        spec.sampling.scheme = SamplingScheme::PseudoRadial;
        spec.sampling.lines = 8;
        spec.sampling.coils = 4;
        s.data = synthesize(spec);
        const ComplexMatrix& truth = *s.data.truth;
        ReconConfig cfg;
        auto t0 = Clock::now();
        s.mri1 = reconstruct(s.data.y, s.data.ops, cfg, {&truth, std::nullopt});
        s.seconds1 = since(t0);
        cfg.method = Method::Mri2;
        t0 = Clock::now();
        s.mri2 = reconstruct(s.data.y, s.data.ops, cfg, {&truth, std::nullopt});
        s.seconds2 = since(t0);
        s.zero_filled = nsmse(truth, zero_filled(s.data.y, s.data.ops));
        return s;
    }();
    return run;
}

void orthonormality(Outcome& o) {
    const StageRun& s = stage_run();
    double worst = 0.0;
    Index rank = 0;
    std::size_t iterates = 0;
    for (const ReconResult* r : {&*s.mri1, &*s.mri2}) {
        rank = r->lowrank.u.cols();
        const double limit = 1e-10 * std::sqrt(static_cast<double>(rank));
        if (r->lowrank.init) worst = std::max(worst, orthonormality_error(r->lowrank.init->u0.matrix()) / limit);
        for (const auto& rec : r->lowrank.trace) worst = std::max(worst, rec.orthonormality / limit);
        iterates += r->lowrank.trace.size() + 1;
    }
    o.detail << iterates << " iterates (rank " << rank << "), worst |U^H U - I|_F / (1e-10 sqrt(r)) = " << sci(worst);
    o.check(worst <= 1.0, "orthonormality bound exceeded");
}

void stage_monotonicity(Outcome& o) {
    const StageRun& s = stage_run();
    o.detail << "64x64x100 radial 8 lines mc=4, zero-filled " << sci(s.zero_filled);
    for (const auto& [name, r, sec] : {std::tuple{"mri1", &*s.mri1, s.seconds1}, std::tuple{"mri2", &*s.mri2, s.seconds2}}) {
        const auto& e = r->report.stage_errors;
        const double mean = e.at("mean"), lowrank = e.at("mean+lowrank"), full = e.at("full");
        o.detail << "; " << name << ": mean " << sci(mean) << " >= mean+LR " << sci(lowrank) << " >= full " << sci(full)
                 << " (" << sec << " s)";
        o.check(mean >= lowrank && lowrank >= full, std::string(name) + " stage ordering");
        o.check(full < s.zero_filled, std::string(name) + " not better than zero-filled");
        o.check(sec < 120.0, std::string(name) + " runtime >= 120 s");
    }
}

// ------------------------------------------------------------------ 8

void metric_properties(Outcome& o) {
    Rng rng = make_rng(800);
    const ComplexMatrix x = random_complex_gaussian(40, 10, rng);
    ComplexMatrix scaled = x;
    for (Index k = 0; k < 10; ++k) scaled.col(k) *= random_complex_gaussian(1, 1, rng)(0, 0);
    const double scale_err = nsmse(x, scaled);

    ComplexMatrix truth = random_complex_gaussian(40, 10, rng), ortho = random_complex_gaussian(40, 10, rng);
    truth.bottomRows(20).setZero();
    ortho.topRows(20).setZero();
    const double ortho_val = nsmse(truth, ortho);

    double worst = 0.0;
    for (int pair = 0; pair < 50; ++pair) {
        const ComplexMatrix t = random_complex_gaussian(30, 8, rng);
        const ComplexMatrix e = t + 0.3 * random_complex_gaussian(30, 8, rng);
        double num = 0.0, den = 0.0;
        for (Index k = 0; k < 8; ++k) {
            // Distance to the best complex multiple: ‖x‖² − |⟨x̂,x⟩|²/‖x̂‖².
            num += t.col(k).squaredNorm() - std::norm(e.col(k).dot(t.col(k))) / e.col(k).squaredNorm();
            den += t.col(k).squaredNorm();
        }
        worst = std::max(worst, std::abs(nsmse(t, e) - num / den));
    }
    o.detail << "scaling " << sci(scale_err) << ", orthogonal " << ortho_val << ", 50-pair oracle gap " << sci(worst);
    o.check(scale_err <= 1e-12, "scaling invariance");
    o.check(ortho_val == 1.0, "orthogonal columns");
    o.check(worst <= 1e-12, "oracle mismatch");
}

// ------------------------------------------------------------------ 10

void ista_contract(Outcome& o) {
    const Index n1 = 24, n2 = 24, q = 32;
    SamplingPlan plan{SamplingScheme::PseudoRadial, make_masks(n1, n2, q, {SamplingScheme::PseudoRadial, 16, 4.0, 0}, 3),
                      synth_coil_maps(n1, n2, 4, 3)};
    const OperatorSet ops = fourier_frame_ops(plan);

    MeasurementSet zero;
    for (const auto& op : ops) zero.frames.push_back(ComplexVector::Zero(op.m_total()));
    const IstaResult z = mec_ista(zero, ops);
    o.check(z.iterations == 1 && z.e.norm() == 0.0, "zero input");

    int max_iters = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SyntheticSpec spec;
        spec.n1 = n1;
        spec.n2 = n2;
        spec.q = q;
        spec.mean_energy = 0.0;
        spec.lowrank_energy = 0.0;
        spec.residual_kind = ResidualKind::TemporalFourierSparse;
        spec.seed = seed;
        MeasurementSet y = apply_seq(ops, gen_three_level(spec).residual);
        // Dense random residuals never settle; they exercise the iteration cap.
        if (seed > 3) {
            Rng rng = make_rng(seed);
            for (auto& f : y.frames) f = random_complex_gaussian(f.size(), 1, rng).col(0);
        }
        max_iters = std::max(max_iters, mec_ista(y, ops).iterations);
    }
    o.check(max_iters <= 10, "more than 10 iterations");

    SyntheticSpec spec;
    spec.n1 = n1;
    spec.n2 = n2;
    spec.q = q;
    spec.mean_energy = 0.0;
    spec.lowrank_energy = 0.0;
    spec.residual_kind = ResidualKind::TemporalFourierSparse;
    spec.sparse_freqs = 1;
    // Radial undersampling keeps the iterates moving past the cap; a nearly
    // complete uniform grid makes the unit-step iteration contract quickly.
    SamplingPlan dense{SamplingScheme::UniformFourier,
                       make_masks(n1, n2, q, {SamplingScheme::UniformFourier, 0, 0.0, n1 * n2 - 6}, 3),
                       synth_coil_maps(n1, n2, 4, 3)};
    const OperatorSet dense_ops = fourier_frame_ops(dense);
    const IstaResult conv = mec_ista(apply_seq(dense_ops, gen_three_level(spec).residual), dense_ops);
    bool exited = conv.iterations < 10 && !conv.rel_changes.empty() && conv.rel_changes.back() < 0.0025;
    for (std::size_t t = 0; t + 1 < conv.rel_changes.size(); ++t) exited = exited && conv.rel_changes[t] >= 0.0025;
    o.detail << "zero input: " << z.iterations << " iteration, |E| = " << z.e.norm() << "; max iterations "
             << max_iters << "; converging instance stops after " << conv.iterations << " with relative change "
             << (conv.rel_changes.empty() ? 0.0 : conv.rel_changes.back());
    o.check(exited, "relative-change exit not observed");
}

// ------------------------------------------------------------------ 11

void tracking(Outcome& o) {
    // α = q against the batch pipeline.
    DatasetSpec small;
    small.synthetic.n1 = 24;
    small.synthetic.n2 = 24;
    small.synthetic.q = 64;
    small.synthetic.r = 3;
    small.sampling.lines = 8;
    small.sampling.coils = 4;
    const Dataset s = synthesize(small);
    TrackerConfig whole;
    whole.alpha1 = 64;
    whole.alpha = 64;
    const bool identical = run_tracker(s.y, s.ops, whole).z == reconstruct(s.y, s.ops).z;
    o.check(identical, "alpha = q differs from batch");

    DatasetSpec spec;
    spec.synthetic.n1 = 32;
    spec.synthetic.n2 = 32;
    spec.synthetic.q = 512;
    spec.synthetic.r = 4;
    spec.sampling.lines = 8;
    spec.sampling.coils = 4;
    const Dataset d = synthesize(spec);
    const ComplexMatrix& truth = *d.truth;
    const ReconResult batch = reconstruct(d.y, d.ops, {}, {&truth, std::nullopt});
    TrackerConfig st;
    const TrackResult mini = run_tracker(d.y, d.ops, st, &truth);
    st.mode = TrackingMode::Online;
    const TrackResult online = run_tracker(d.y, d.ops, st, &truth);

    // Per-frame latencies after the warm-up batch, compared by quarter medians.
    std::vector<double> lat(online.report.frame_seconds.begin() + 1, online.report.frame_seconds.end());
    const std::size_t quarter = lat.size() / 4;
    std::vector<double> medians;
    for (std::size_t part = 0; part < 4; ++part) {
        std::vector<double> seg(lat.begin() + static_cast<std::ptrdiff_t>(part * quarter),
                                lat.begin() + static_cast<std::ptrdiff_t>((part + 1) * quarter));
        std::nth_element(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(seg.size() / 2), seg.end());
        medians.push_back(seg[seg.size() / 2]);
    }
    const double spread = *std::max_element(medians.begin(), medians.end()) /
                          *std::min_element(medians.begin(), medians.end());

    const double ratio = *mini.report.nsmse / *batch.report.nsmse;
    o.detail << "alpha=q bit-identical " << (identical ? "yes" : "no") << "; q=512: batch " << sci(*batch.report.nsmse)
             << ", alpha=64 " << sci(*mini.report.nsmse) << " (x" << ratio << "), online "
             << sci(*online.report.nsmse) << "; online per-frame median spread x" << spread << " over " << lat.size()
             << " frames";
    o.check(ratio <= 1.25, "alpha=64 error above 1.25x batch");
    o.check(spread <= 2.0, "online per-frame cost varies more than 2x");
}

// ------------------------------------------------------------------ 12

void determinism(Outcome& o) {
    DatasetSpec spec;
    spec.synthetic.n1 = 24;
    spec.synthetic.n2 = 24;
    spec.synthetic.q = 40;
    spec.synthetic.r = 3;
    spec.sampling.coils = 2;
    bool same = true;
    for (int method = 0; method < 3; ++method) {
        std::vector<ComplexMatrix> z;
        std::vector<std::string> reports;
        for (int run = 0; run < 2; ++run) {
            const Dataset d = synthesize(spec);
            if (method < 2) {
                ReconConfig cfg;
                cfg.method = method == 0 ? Method::Mri1 : Method::Mri2;
                ReconResult r = reconstruct(d.y, d.ops, cfg, {&*d.truth, std::nullopt});
                r.report.config = cfg.to_json();
                z.push_back(r.z);
                reports.push_back(r.report.to_json(false).dump());
            } else {
                TrackerConfig cfg;
                cfg.mode = TrackingMode::Online;
                cfg.alpha1 = 20;
                TrackResult r = run_tracker(d.y, d.ops, cfg, &*d.truth);
                z.push_back(r.z);
                reports.push_back(r.report.to_json(false).dump());
            }
        }
        same = same && z[0] == z[1] && reports[0] == reports[1];
    }
    o.detail << "mri1, mri2 and online runs repeated: " << (same ? "bit-identical" : "differ");
    o.check(same, "outputs differ");
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only, expect_fail;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if ((a == "--only" || a == "--expect-fail") && i + 1 < argc) {
            (a == "--only" ? only : expect_fail) = parse_list(argv[++i]);
        } else {
            std::cerr << "usage: " << argv[0] << " [--only N,...] [--expect-fail N,...]\n";
            return 2;
        }
    }

    const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
        {1, adjoint_identity},   {2, gaussian_table1},    {3, fourier_mean_table1}, {4, gradient_check},
        {5, least_squares_oracles}, {6, rank_rule},       {7, orthonormality},      {8, metric_properties},
        {9, stage_monotonicity}, {10, ista_contract},     {11, tracking},           {12, determinism},
    };

    int unexpected = 0;
    for (const auto& [id, fn] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        const auto t0 = Clock::now();
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const bool expected = expect_fail.count(id) > 0;
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail.str() << "  ["
                  << since(t0) << " s]" << (expected && !o.pass ? " (expected failure)" : "") << std::endl;
        if (!o.pass && !expected) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
