#include "rlrp/pdhg.hpp"

#include <algorithm>
#include <cmath>

#include "rlrp/errors.hpp"
#include "rlrp/metrics.hpp"
#include "rlrp/prox.hpp"

namespace rlrp {

double default_pdhg_step(DegradationOp::Kind kind) {
    switch (kind) {
        case DegradationOp::Kind::Downsample: return 0.4;
        case DegradationOp::Kind::Blur: return 0.6;
        case DegradationOp::Kind::Identity:
        case DegradationOp::Kind::Mask: return 0.35;
    }
    return 0.35;
}

PdhgSteps resolve_pdhg_steps(const SolverConfig& cfg, const DegradationOp& phi, Shape shape) {
    validate_config(cfg, Algorithm::Pdhg);
    const StackedOperator k(phi, shape);
    PdhgSteps steps;
    steps.norm_sq = cfg.norm_safety * estimate_norm_sq(k, cfg.norm_iterations, cfg.norm_seed);

    if (cfg.sigma && cfg.eta) {
        steps.sigma = *cfg.sigma;
        steps.eta = *cfg.eta;
        if (!(steps.sigma * steps.eta * steps.norm_sq < 1.0)) {
            throw ConfigError("step condition sigma*eta*||K||^2 < 1 violated (sigma*eta*||K||^2 = " +
                              format_number(steps.sigma * steps.eta * steps.norm_sq) + ")");
        }
        return steps;
    }
    const double d = default_pdhg_step(phi.kind());
    steps.sigma = d;
    steps.eta = d;
    const double product = d * d * steps.norm_sq;
    if (product >= 0.95) {
        const double f = std::sqrt(0.95 / product);
        steps.sigma *= f;
        steps.eta *= f;
    }
    return steps;
}

double gap_radius(const Image& b0) { return 2.0 * std::max(norm(b0), prox::nuclear_norm(b0)) + 1.0; }

double pdhg_gap(const PdhgState& st, const Image& b0, const DegradationOp& phi, const SolverConfig& cfg,
                double radius) {
    Image residual = apply(phi, st.u + st.v);
    residual -= b0;
    const double primal = objective_with_nuclear(st.u, prox::nuclear_norm(st.v), residual, cfg);

    double conj = dot(st.lambda2, b0);
    for (double l : st.lambda2.data()) conj += 0.5 * l * l;

    const Image phit = apply_adjoint(phi, st.lambda2);
    Image stationarity = grad_adjoint(st.lambda1);
    stationarity += phit;

    double v_term = 0.0;
    for (double s : prox::spectral_norms(phit)) v_term += std::max(0.0, s - cfg.mu);

    return std::max(0.0, primal + conj + radius * (norm(stationarity) + v_term));
}

PdhgSolver::PdhgSolver(Image b0, DegradationOp phi, SolverConfig cfg)
    : b0_(std::move(b0)), phi_(std::move(phi)), cfg_(std::move(cfg)) {
    if (!b0_.all_finite()) throw NumericalError("observation contains non-finite values");
    const Shape& s = b0_.shape();
    steps_ = resolve_pdhg_steps(cfg_, phi_, s);
    state_ = PdhgState{b0_, Image(s), GradientField(s), Image(s), b0_, Image(s)};
    if (cfg_.record_diagnostics) {
        sums_ = PdhgState{Image(s), Image(s), GradientField(s), Image(s), Image(s), Image(s)};
        radius_ = gap_radius(b0_);
    }
}

PdhgState PdhgSolver::ergodic_average() const {
    if (iterations_ == 0 || !cfg_.record_diagnostics) return state_;
    const double inv = 1.0 / iterations_;
    return PdhgState{sums_.u * inv, sums_.v * inv, sums_.lambda1 * inv, sums_.lambda2 * inv, state_.u_bar,
                     state_.v_bar};
}

TraceRecord PdhgSolver::step() {
    const double sigma = steps_.sigma;
    const double eta = steps_.eta;
    PdhgState& st = state_;

    // Dual ascent.
    st.lambda1 = prox::clip(st.lambda1 + sigma * grad(st.u_bar), cfg_.tau, cfg_.tv);
    Image dual_arg = apply(phi_, st.u_bar + st.v_bar);
    dual_arg -= b0_;
    dual_arg *= sigma;
    dual_arg += st.lambda2;
    st.lambda2 = prox::huber_conj_prox(dual_arg, sigma, cfg_.c);

    // Primal descent.
    const Image phit = apply_adjoint(phi_, st.lambda2);
    Image u_dir = grad_adjoint(st.lambda1);
    u_dir += phit;
    Image u_next = st.u - eta * u_dir;
    double nuclear = 0.0;
    Image v_next = prox::svt(st.v - eta * phit, eta * cfg_.mu, &nuclear);

    if (!u_next.all_finite() || !v_next.all_finite() || !st.lambda1.all_finite() ||
        !st.lambda2.all_finite()) {
        throw NumericalError("primal-dual iterate became non-finite");
    }

    TraceRecord rec;
    rec.tol = tol(st.u, st.v, u_next, v_next);
    rec.constraint_residual = norm(u_dir);

    // Extrapolation.
    st.u_bar = 2.0 * u_next - st.u;
    st.v_bar = 2.0 * v_next - st.v;
    st.u = std::move(u_next);
    st.v = std::move(v_next);
    ++iterations_;

    Image residual = apply(phi_, st.u + st.v);
    residual -= b0_;
    rec.objective = objective_with_nuclear(st.u, nuclear, residual, cfg_);

    if (cfg_.record_diagnostics) {
        sums_.u += st.u;
        sums_.v += st.v;
        sums_.lambda1 += st.lambda1;
        sums_.lambda2 += st.lambda2;
        rec.diagnostic = pdhg_gap(ergodic_average(), b0_, phi_, cfg_, radius_);
    }
    return rec;
}

DecompResult pdhg_solve(const Image& b0, const DegradationOp& phi, const SolverConfig& cfg) {
    PdhgSolver solver(b0, phi, cfg);
    DecompResult result;
    result.trace.reserve(static_cast<std::size_t>(cfg.max_iter));
    for (int k = 0; k < cfg.max_iter; ++k) {
        result.trace.push_back(solver.step());
        result.iterations = k + 1;
        if (result.trace.back().tol < cfg.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.u = solver.state().u;
    result.v = solver.state().v;
    return result;
}

}  // namespace rlrp
