#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <vector>

#include "lrcs/error.hpp"
#include "lrcs/numerics.hpp"

namespace lrcs {

/// Anything with `apply(x) -> y`, `adjoint(y) -> x` and a domain dimension `n()`.
template <class Op>
concept LinearMap = requires(const Op& op, const ComplexVector& v) {
    { op.apply(v) } -> std::convertible_to<ComplexVector>;
    { op.adjoint(v) } -> std::convertible_to<ComplexVector>;
    { op.n() } -> std::convertible_to<Index>;
};

struct CglsConfig {
    double tol = 1e-3;
    int max_iter = 10;
    std::optional<ComplexVector> x0;
};

struct CglsResult {
    ComplexVector x;
    int iterations = 0;
    double rel_residual = 0.0;  // ‖Aᴴ(y − Ax)‖ / ‖Aᴴy‖
    bool breakdown = false;
    std::vector<double> residual_norms;  // ‖y − Ax_t‖ for t = 0..iterations
};

/// Conjugate gradient on the normal equations without forming AᴴA.
///
/// Stops once ‖Aᴴ(y − Ax)‖ ≤ tol·‖Aᴴy‖ or after max_iter iterations. A zero
/// search-direction image (‖Ap‖ = 0 with p ≠ 0) flags a breakdown and returns
/// the current iterate.
template <LinearMap Op>
CglsResult cgls_solve(const Op& op, const ComplexVector& y, const CglsConfig& cfg) {
    if (cfg.tol < 0.0) throw ConfigError("cgls: tol must be ≥ 0");
    if (cfg.max_iter < 1) throw ConfigError("cgls: max_iter must be ≥ 1");
    require_finite(y, "cgls right-hand side");

    CglsResult out;
    out.x = cfg.x0 ? *cfg.x0 : ComplexVector::Zero(op.n());
    if (out.x.size() != op.n()) throw DataError("cgls: warm start has wrong length");

    ComplexVector r = cfg.x0 ? ComplexVector(y - op.apply(out.x)) : y;
    ComplexVector s = op.adjoint(r);
    const double ref = cfg.x0 ? op.adjoint(y).norm() : s.norm();
    double gamma = s.squaredNorm();
    out.residual_norms.push_back(r.norm());

    auto relative = [&](double norm_s) { return ref > 0.0 ? norm_s / ref : 0.0; };
    out.rel_residual = relative(std::sqrt(gamma));
    if (gamma == 0.0 || out.rel_residual <= cfg.tol) return out;

    ComplexVector p = s;
    for (int it = 0; it < cfg.max_iter; ++it) {
        const ComplexVector q = op.apply(p);
        const double delta = q.squaredNorm();
        if (delta == 0.0) {
            out.breakdown = true;
            break;
        }
        const double alpha = gamma / delta;
        out.x += alpha * p;
        r -= alpha * q;
        s = op.adjoint(r);
        const double gamma_next = s.squaredNorm();
        out.iterations = it + 1;
        out.residual_norms.push_back(r.norm());
        out.rel_residual = relative(std::sqrt(gamma_next));
        if (out.rel_residual <= cfg.tol || gamma_next == 0.0) break;
        p = s + (gamma_next / gamma) * p;
        gamma = gamma_next;
    }
    return out;
}

}  // namespace lrcs
