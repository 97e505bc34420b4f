#include "lrcs/altgdmin.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "lrcs/error.hpp"

namespace lrcs {

namespace {

void require_consistent(const MeasurementSet& y, const OperatorSet& ops) {
    if (ops.empty()) throw DataError("empty operator set");
    if (static_cast<std::size_t>(y.size()) != ops.size())
        throw DataError("measurement set has " + std::to_string(y.size()) + " frames but " + std::to_string(ops.size()) +
                        " operators were given");
    for (std::size_t k = 0; k < ops.size(); ++k) {
        if (y.frames[k].size() != ops[k].m_total())
            throw DataError("frame " + std::to_string(k) + ": measurement length does not match its operator");
        if (ops[k].n() != ops.front().n()) throw DataError("operators disagree on n");
    }
}

}  // namespace

ComplexVector solve_frame_coefficients(const ComplexMatrix& au, const ComplexVector& y, Index frame) {
    const Index r = au.cols();
    if (au.rows() < r)
        throw SolverError("frame " + std::to_string(frame) + ": A_k U has fewer measurements than the rank");
    Eigen::HouseholderQR<ComplexMatrix> qr(au);
    const auto& packed = qr.matrixQR();
    double max_diag = 0.0;
    for (Index j = 0; j < r; ++j) max_diag = std::max(max_diag, std::abs(packed(j, j)));
    for (Index j = 0; j < r; ++j)
        if (max_diag == 0.0 || std::abs(packed(j, j)) <= 1e-12 * max_diag)
            throw SolverError("A_k U is rank deficient for frame " + std::to_string(frame));
    return qr.solve(y);
}

namespace {

struct BStep {
    ComplexMatrix b;
    std::vector<ComplexMatrix> au;
};

BStep b_step(const OrthonormalBasis& u, const MeasurementSet& y, const OperatorSet& ops) {
    BStep out;
    out.b.resize(u.cols(), static_cast<Index>(ops.size()));
    out.au.reserve(ops.size());
    for (std::size_t k = 0; k < ops.size(); ++k) {
        out.au.push_back(ops[k].apply_columns(u.matrix()));
        out.b.col(static_cast<Index>(k)) = solve_frame_coefficients(out.au.back(), y.frames[k], static_cast<Index>(k));
    }
    return out;
}

ComplexMatrix gradient_from(const BStep& step, const MeasurementSet& y, const OperatorSet& ops) {
    ComplexMatrix grad = ComplexMatrix::Zero(ops.front().n(), step.b.rows());
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const auto bk = step.b.col(static_cast<Index>(k));
        const ComplexVector residual = step.au[k] * bk - y.frames[k];
        grad.noalias() += ops[k].adjoint(residual) * bk.adjoint();
    }
    return grad;
}

// Σ_k ‖A_kᴴ y_k‖·‖b_k‖ bounds the data term of the gradient; used to detect a
// gradient that is zero up to rounding.
double gradient_scale(const ComplexMatrix& b, const MeasurementSet& y, const OperatorSet& ops) {
    double s = 0.0;
    for (std::size_t k = 0; k < ops.size(); ++k)
        s += ops[k].adjoint(y.frames[k]).norm() * b.col(static_cast<Index>(k)).norm();
    return s;
}

constexpr double kStationaryGradient = 1e-12;

double mean_cells(const OperatorSet& ops) {
    double s = 0.0;
    for (const auto& op : ops) s += static_cast<double>(op.m_cells());
    return s / static_cast<double>(ops.size());
}

}  // namespace

void AltGdminConfig::validate() const {
    if (t_max < 1) throw ConfigError("altgdmin: t_max must be ≥ 1");
    if (!(eps_exit > 0.0)) throw ConfigError("altgdmin: eps_exit must be > 0");
    if (!(energy_b > 0.0 && energy_b <= 100.0)) throw ConfigError("altgdmin: energy_b must lie in (0, 100]");
    if (!(eta_numerator > 0.0)) throw ConfigError("altgdmin: eta_numerator must be > 0");
    if (!(conservative_c > 0.0)) throw ConfigError("altgdmin: conservative_c must be > 0");
    if (!(truncation_factor > 0.0)) throw ConfigError("altgdmin: truncation_factor must be > 0");
    if (power_iterations < 1) throw ConfigError("altgdmin: power_iterations must be ≥ 1");
}

TruncationResult truncate(const MeasurementSet& y, double factor) {
    const Index total = y.total_count();
    if (total < 1) throw DataError("truncate: no measurements");
    TruncationResult out;
    out.gamma = factor * y.squared_norm() / static_cast<double>(total);
    const double limit = std::sqrt(out.gamma);
    out.measurements = y;
    for (auto& f : out.measurements.frames)
        for (Index i = 0; i < f.size(); ++i)
            if (std::abs(f(i)) > limit) {
                f(i) = Complex(0.0, 0.0);
                ++out.zeroed;
            }
    return out;
}

ComplexMatrix build_X0(const MeasurementSet& y_tnc, const OperatorSet& ops) {
    require_consistent(y_tnc, ops);
    const double m_bar = mean_cells(ops);
    ComplexMatrix x0(ops.front().n(), static_cast<Index>(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(ops[k].m_cells()) * m_bar);
        x0.col(static_cast<Index>(k)) = ops[k].adjoint(y_tnc.frames[k]) * scale;
    }
    return x0;
}

Index rank_cutoff(Index n, Index q, Index mc, Index min_m) {
    const Index j = std::min({n, q, mc * min_m}) / 10;
    if (j < 1)
        throw ConfigError("rank rule: min(n, q, mc·min_k m_k)/10 < 1; increase the number of frames or "
                          "measurements per frame");
    return j;
}

Index estimate_rank(const RealVector& sigma, Index n, Index q, Index mc, Index min_m, double b) {
    if (!(b > 0.0 && b <= 100.0)) throw ConfigError("rank rule: b must lie in (0, 100]");
    const Index cutoff = std::min(rank_cutoff(n, q, mc, min_m), sigma.size());
    if (cutoff < 1) throw DataError("rank rule: empty spectrum");
    double total = 0.0;
    for (Index j = 0; j < cutoff; ++j) total += sigma(j) * sigma(j);
    const double target = (b / 100.0) * total;
    double cumulative = 0.0;
    for (Index r = 1; r <= cutoff; ++r) {
        cumulative += sigma(r - 1) * sigma(r - 1);
        if (cumulative >= target) return r;
    }
    return cutoff;
}

InitResult spectral_init(const MeasurementSet& y, const OperatorSet& ops, const AltGdminConfig& cfg) {
    require_consistent(y, ops);
    TruncationResult tr = truncate(y, cfg.truncation_factor);
    ComplexMatrix x0 = build_X0(tr.measurements, ops);

    const Index n = x0.rows();
    const Index q = x0.cols();
    Index min_m = ops.front().m_cells();
    for (const auto& op : ops) min_m = std::min(min_m, op.m_cells());
    const Index mc = ops.front().coils();
    const Index cutoff = rank_cutoff(n, q, mc, min_m);

    SingularSubspace svd = top_r_left_singular(x0, cutoff);
    const Index rank = estimate_rank(svd.sigma, n, q, mc, min_m, cfg.energy_b);
    OrthonormalBasis u0 = rank == cutoff ? std::move(svd.u) : OrthonormalBasis::from_matrix(svd.u.matrix().leftCols(rank));
    return InitResult{std::move(x0), tr.gamma, tr.zeroed, rank, std::move(u0), std::move(svd.sigma)};
}

ComplexMatrix update_B(const OrthonormalBasis& u, const MeasurementSet& y, const OperatorSet& ops) {
    require_consistent(y, ops);
    if (u.rows() != ops.front().n()) throw DataError("update_B: U row count must equal n");
    return b_step(u, y, ops).b;
}

ComplexMatrix gradient_U(const OrthonormalBasis& u, const ComplexMatrix& b, const MeasurementSet& y,
                         const OperatorSet& ops) {
    require_consistent(y, ops);
    if (u.rows() != ops.front().n() || b.rows() != u.cols() || b.cols() != static_cast<Index>(ops.size()))
        throw DataError("gradient_U: shape mismatch");
    BStep step;
    step.b = b;
    for (const auto& op : ops) step.au.push_back(op.apply_columns(u.matrix()));
    return gradient_from(step, y, ops);
}

double altgdmin_objective(const ComplexMatrix& u, const ComplexMatrix& b, const MeasurementSet& y,
                          const OperatorSet& ops) {
    require_consistent(y, ops);
    double f = 0.0;
    for (std::size_t k = 0; k < ops.size(); ++k)
        f += (y.frames[k] - ops[k].apply(u * b.col(static_cast<Index>(k)))).squaredNorm();
    return f;
}

AltGdminResult altgdmin_run(const MeasurementSet& y, const OperatorSet& ops, const AltGdminConfig& cfg,
                            const AltGdminOptions& opts) {
    cfg.validate();
    require_consistent(y, ops);
    const auto start = std::chrono::steady_clock::now();

    std::optional<InitResult> init;
    if (opts.warm_start) {
        if (opts.warm_start->rows() != ops.front().n())
            throw DataError("altgdmin: warm-start U has " + std::to_string(opts.warm_start->rows()) +
                            " rows, expected " + std::to_string(ops.front().n()));
    } else {
        init = spectral_init(y, ops, cfg);
    }
    OrthonormalBasis u0 = opts.warm_start ? *opts.warm_start : init->u0;
    const double rank_sqrt = std::sqrt(static_cast<double>(u0.cols()));

    AltGdminResult res{std::move(u0), ComplexMatrix(), ComplexMatrix(), 0.0, 0, false, {}, std::move(init)};
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    for (int t = 1; t <= cfg.t_max; ++t) {
        BStep step = b_step(res.u, y, ops);
        const ComplexMatrix grad = gradient_from(step, y, ops);
        res.x = res.u.matrix() * step.b;
        res.b = std::move(step.b);
        res.iterations = t;

        IterationRecord rec;
        rec.iteration = t;
        if (opts.error_fn) rec.error = opts.error_fn(res.x);

        if (t == 1) {
            double denom = 0.0;
            if (cfg.eta_mode == StepSizeMode::GradientScaled) {
                denom = spectral_norm_power(grad, cfg.power_iterations);
                // A gradient at rounding level would turn η·∇ into a 0.14-sized step in a noise direction.
                if (denom <= kStationaryGradient * gradient_scale(res.b, y, ops)) denom = 0.0;
                if (denom > 0.0) res.eta = cfg.eta_numerator / denom;
            } else {
                const double bn = spectral_norm_power(res.b, cfg.power_iterations);
                denom = mean_cells(ops) * bn * bn;
                if (denom > 0.0) res.eta = cfg.conservative_c / denom;
            }
            if (denom == 0.0) {
                // Step size undefined (stationary U_0 or zero B): U_0 B_0 is the solution.
                rec.orthonormality = orthonormality_error(res.u.matrix());
                rec.elapsed = elapsed();
                res.trace.push_back(rec);
                res.exited = true;
                return res;
            }
        }

        QrResult qr = thin_qr(res.u.matrix() - res.eta * grad);
        rec.sd_step = subspace_distance(res.u, qr.q) / rank_sqrt;
        rec.orthonormality = orthonormality_error(qr.q.matrix());
        rec.elapsed = elapsed();
        res.trace.push_back(rec);
        res.u = std::move(qr.q);

        if (rec.sd_step < cfg.eps_exit) {
            res.exited = true;
            break;
        }
    }
    return res;
}

}  // namespace lrcs
