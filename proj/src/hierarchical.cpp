#include "lrcs/hierarchical.hpp"

#include <chrono>
#include <cmath>

#include "lrcs/cgls.hpp"
#include "lrcs/error.hpp"

namespace lrcs {

namespace {

void require_frames(const MeasurementSet& y, const OperatorSet& ops) {
    if (ops.empty()) throw DataError("empty operator set");
    if (static_cast<std::size_t>(y.size()) != ops.size())
        throw DataError("measurement set has " + std::to_string(y.size()) + " frames, operator set " +
                        std::to_string(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k)
        if (y.frames[k].size() != ops[k].m_total())
            throw DataError("frame " + std::to_string(k) + ": measurement length does not match its operator");
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const SolverError& e) {
        throw SolverError(std::string(name) + " stage: " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(name) + " stage: " + e.what());
    } catch (const DataError& e) {
        throw DataError(std::string(name) + " stage: " + e.what());
    }
}

}  // namespace

std::string to_string(Method m) { return m == Method::Mri1 ? "mri1" : "mri2"; }

Method method_from_string(const std::string& s) {
    if (s == "mri1") return Method::Mri1;
    if (s == "mri2") return Method::Mri2;
    throw ConfigError("unknown batch method '" + s + "'");
}

void MecConfig::validate() const {
    if (cgls_iters < 1) throw ConfigError("mec: cgls_iters must be ≥ 1");
    if (cgls_tol < 0.0) throw ConfigError("mec: cgls_tol must be ≥ 0");
    if (ista_max < 1) throw ConfigError("mec: ista_max must be ≥ 1");
    if (!(ista_relchange > 0.0)) throw ConfigError("mec: ista_relchange must be > 0");
    if (!(ista_omega_factor > 0.0)) throw ConfigError("mec: ista_omega_factor must be > 0");
}

nlohmann::json ReconConfig::to_json() const {
    return {
        {"method", to_string(method)},
        {"mean_cgls_tol", mean.tol},
        {"mean_cgls_iters", mean.max_iter},
        {"t_max", altgdmin.t_max},
        {"eps_exit", altgdmin.eps_exit},
        {"energy_b", altgdmin.energy_b},
        {"eta_numerator", altgdmin.eta_numerator},
        {"eta_mode", altgdmin.eta_mode == StepSizeMode::GradientScaled ? "gradient" : "conservative"},
        {"conservative_c", altgdmin.conservative_c},
        {"truncation_factor", altgdmin.truncation_factor},
        {"power_iterations", altgdmin.power_iterations},
        {"mec_cgls_iters", mec.cgls_iters},
        {"mec_cgls_tol", mec.cgls_tol},
        {"ista_max", mec.ista_max},
        {"ista_relchange", mec.ista_relchange},
        {"ista_omega_factor", mec.ista_omega_factor},
    };
}

ComplexMatrix HierarchicalModel::mean_image_matrix() const {
    return mean * Eigen::RowVectorXcd::Ones(lowrank.cols());
}

ComplexMatrix HierarchicalModel::reconstruct() const {
    ComplexMatrix z(lowrank.rows(), lowrank.cols());
    for (Index k = 0; k < z.cols(); ++k) z.col(k) = mean + lowrank.col(k) + residual.col(k);
    return z;
}

StackedOperator::StackedOperator(const OperatorSet& ops) : ops_(&ops) {
    if (ops.empty()) throw DataError("stacked operator needs at least one frame");
    offsets_.push_back(0);
    for (const auto& op : ops) {
        if (op.n() != ops.front().n()) throw DataError("operators disagree on n");
        offsets_.push_back(offsets_.back() + op.m_total());
    }
}

ComplexVector StackedOperator::apply(const ComplexVector& z) const {
    ComplexVector out(offsets_.back());
    for (std::size_t k = 0; k < ops_->size(); ++k)
        out.segment(offsets_[k], (*ops_)[k].m_total()) = (*ops_)[k].apply(z);
    return out;
}

ComplexVector StackedOperator::adjoint(const ComplexVector& y) const {
    if (y.size() != offsets_.back()) throw DataError("stacked adjoint: length mismatch");
    ComplexVector acc = ComplexVector::Zero(n());
    for (std::size_t k = 0; k < ops_->size(); ++k)
        acc += (*ops_)[k].adjoint(y.segment(offsets_[k], (*ops_)[k].m_total()));
    return acc;
}

ComplexVector StackedOperator::flatten(const MeasurementSet& y) const {
    require_frames(y, *ops_);
    ComplexVector out(offsets_.back());
    for (std::size_t k = 0; k < ops_->size(); ++k) out.segment(offsets_[k], y.frames[k].size()) = y.frames[k];
    return out;
}

ComplexVector estimate_mean(const MeasurementSet& y, const OperatorSet& ops, const MeanConfig& cfg) {
    require_frames(y, ops);
    const StackedOperator stacked(ops);
    CglsConfig c;
    c.tol = cfg.tol;
    c.max_iter = cfg.max_iter;
    return cgls_solve(stacked, stacked.flatten(y), c).x;
}

MeasurementSet residual_1(const MeasurementSet& y, const OperatorSet& ops, const ComplexVector& mean) {
    require_frames(y, ops);
    if (mean.size() != ops.front().n()) throw DataError("residual_1: mean has wrong length");
    MeasurementSet out = y;
    for (std::size_t k = 0; k < ops.size(); ++k) out.frames[k] -= ops[k].apply(mean);
    return out;
}

MeasurementSet residual_2(const MeasurementSet& y, const OperatorSet& ops, const ComplexVector& mean,
                          const ComplexMatrix& x) {
    if (x.cols() != static_cast<Index>(ops.size()) || x.rows() != ops.front().n())
        throw DataError("residual_2: low-rank estimate has wrong shape");
    MeasurementSet out = residual_1(y, ops, mean);
    for (std::size_t k = 0; k < ops.size(); ++k) out.frames[k] -= ops[k].apply(x.col(static_cast<Index>(k)));
    return out;
}

ComplexMatrix mec_unstructured(const MeasurementSet& residual, const OperatorSet& ops, const MecConfig& cfg) {
    cfg.validate();
    require_frames(residual, ops);
    CglsConfig c;
    c.tol = cfg.cgls_tol;
    c.max_iter = cfg.cgls_iters;
    ComplexMatrix e(ops.front().n(), static_cast<Index>(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k)
        e.col(static_cast<Index>(k)) = cgls_solve(ops[k], residual.frames[k], c).x;
    return e;
}

Complex soft_threshold(Complex s, double omega) {
    const double mag = std::abs(s);
    if (mag <= omega) return Complex(0.0, 0.0);
    return s * ((mag - omega) / mag);
}

ComplexMatrix soft_threshold(const ComplexMatrix& m, double omega) {
    return m.unaryExpr([omega](Complex s) { return soft_threshold(s, omega); });
}

IstaResult mec_ista(const MeasurementSet& residual, const OperatorSet& ops, const MecConfig& cfg) {
    cfg.validate();
    require_frames(residual, ops);
    IstaResult out;
    out.e = ComplexMatrix::Zero(ops.front().n(), static_cast<Index>(ops.size()));
    ComplexMatrix previous;
    for (int tau = 0;; ++tau) {
        MeasurementSet r = residual;
        r -= apply_seq(ops, out.e);
        const ComplexMatrix m = row_dft_unitary(out.e + adjoint_seq(ops, r));
        out.iterations = tau + 1;

        if (tau == 0) {
            const double max_entry = m.cwiseAbs().maxCoeff();
            if (max_entry == 0.0) return out;  // E = 0 is already the fixed point
            out.omega = cfg.ista_omega_factor * max_entry;
        } else {
            const double denom = previous.norm();
            out.rel_changes.push_back(denom > 0.0 ? (m - previous).norm() / denom : 0.0);
        }

        out.e = row_idft_unitary(soft_threshold(m, out.omega));
        if (tau + 1 >= cfg.ista_max) break;
        if (tau >= 1 && out.rel_changes.back() < cfg.ista_relchange) break;
        previous = m;
    }
    return out;
}

ComplexMatrix zero_filled(const MeasurementSet& y, const OperatorSet& ops) { return build_X0(y, ops); }

ReconResult reconstruct(const MeasurementSet& y, const OperatorSet& ops, const ReconConfig& cfg,
                        const ReconOptions& opts) {
    cfg.altgdmin.validate();
    cfg.mec.validate();
    require_frames(y, ops);
    if (opts.truth && (opts.truth->rows() != ops.front().n() || opts.truth->cols() != static_cast<Index>(ops.size())))
        throw DataError("ground truth has wrong shape");

    StageTimer timer;
    const auto start = std::chrono::steady_clock::now();

    ComplexVector mean;
    {
        auto s = timer.scope("mean");
        mean = stage("mean", [&] { return estimate_mean(y, ops, cfg.mean); });
    }

    const Index q = static_cast<Index>(ops.size());
    const ComplexMatrix mean_part = mean * Eigen::RowVectorXcd::Ones(q);

    AltGdminOptions lr_opts;
    lr_opts.warm_start = opts.warm_start;
    if (opts.truth) lr_opts.error_fn = [&](const ComplexMatrix& x) { return nsmse(*opts.truth, mean_part + x); };

    std::optional<AltGdminResult> lr;
    {
        auto s = timer.scope("altgdmin");
        lr = stage("altgdmin", [&] {
            const MeasurementSet y1 = residual_1(y, ops, mean);
            return altgdmin_run(y1, ops, cfg.altgdmin, lr_opts);
        });
    }

    ComplexMatrix e;
    IstaResult ista;
    {
        auto s = timer.scope("mec");
        e = stage("mec", [&] {
            const MeasurementSet y2 = residual_2(y, ops, mean, lr->x);
            if (cfg.method == Method::Mri1) return mec_unstructured(y2, ops, cfg.mec);
            ista = mec_ista(y2, ops, cfg.mec);
            return ista.e;
        });
    }

    HierarchicalModel model{std::move(mean), lr->x, std::move(e)};
    ComplexMatrix z = model.reconstruct();

    ReconReport report;
    report.method = to_string(cfg.method);
    report.config = cfg.to_json();
    report.trace = lr->trace;
    report.stage_seconds = timer.all();
    report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.extra["rank"] = lr->b.rows();
    report.extra["eta"] = lr->eta;
    report.extra["gd_iterations"] = lr->iterations;
    if (lr->init) {
        report.extra["gamma"] = lr->init->gamma;
        report.extra["truncated"] = lr->init->zeroed;
    }
    if (cfg.method == Method::Mri2) {
        report.extra["ista_iterations"] = ista.iterations;
        report.extra["ista_omega"] = ista.omega;
    }
    if (opts.truth) {
        report.stage_errors["mean"] = nsmse(*opts.truth, mean_part);
        report.stage_errors["mean+lowrank"] = nsmse(*opts.truth, mean_part + model.lowrank);
        report.stage_errors["full"] = nsmse(*opts.truth, z);
        report.nsmse = report.stage_errors["full"];
    }
    return ReconResult{std::move(z), std::move(model), std::move(*lr), std::move(report)};
}

}  // namespace lrcs
