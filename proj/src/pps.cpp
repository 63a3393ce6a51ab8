#include "rlrp/pps.hpp"

#include <cmath>

#include "rlrp/errors.hpp"
#include "rlrp/metrics.hpp"
#include "rlrp/prox.hpp"

namespace rlrp {

double pps_q_residual(const PpsState& state, const PpsPrediction& pred, const SolverConfig& cfg) {
    const Image dv = state.v - pred.v;
    const GradientField dy = state.y - pred.y;
    const Image dz = state.z - pred.z;
    const GradientField dl1 = state.lambda1 - pred.lambda1;
    const Image dl2 = state.lambda2 - pred.lambda2;
    const double rb = cfg.r * cfg.beta;
    return rb * (squared_norm(dv) + squared_norm(dy) + squared_norm(dz)) +
           (cfg.s / cfg.beta) * (squared_norm(dl1) + squared_norm(dl2)) - 2.0 * dot(dl2, dv) +
           2.0 * dot(dl1, dy) + 2.0 * dot(dl2, dz);
}

PpsSolver::PpsSolver(Image b0, SolverConfig cfg)
    : b0_(std::move(b0)), cfg_(validate_config(cfg, Algorithm::Pps)), gram_(b0_.shape()) {
    if (!b0_.all_finite()) throw NumericalError("observation contains non-finite values");
    const Shape& s = b0_.shape();
    state_ = PpsState{b0_, Image(s), GradientField(s), Image(s), GradientField(s), Image(s)};
    prediction_ = PpsPrediction{Image(s), GradientField(s), Image(s), GradientField(s), Image(s)};
}

TraceRecord PpsSolver::step() {
    const double beta = cfg_.beta;
    const double ratio = cfg_.s / beta;
    const double rb = cfg_.r * beta;
    PpsState& st = state_;

    // (1) u-update via the spectral solve.
    Image rhs = grad_adjoint(st.y + ratio * st.lambda1);
    rhs += st.z;
    rhs -= st.v;
    rhs += ratio * st.lambda2;
    Image u_next = gram_.solve(rhs);

    // (2) multiplier prediction.
    const GradientField grad_u = grad(u_next);
    PpsPrediction& pr = prediction_;
    pr.lambda1 = st.lambda1 - (1.0 / ratio) * (grad_u - st.y);
    pr.lambda2 = st.lambda2 - (1.0 / ratio) * (u_next + st.v - st.z);

    // (3) the three independent predictions.
    const Image l2_shift = (2.0 * pr.lambda2 - st.lambda2) * (1.0 / rb);
    const GradientField l1_shift = (2.0 * pr.lambda1 - st.lambda1) * (1.0 / rb);

    pr.v = prox::svt(st.v + l2_shift, cfg_.mu / rb);

    // -a_y = y - l1_shift
    pr.y = prox::shrink(st.y - l1_shift, cfg_.tau / rb, cfg_.tv);

    // -b0 - a_z = z - l2_shift - b0
    Image z_arg = st.z - l2_shift;
    z_arg -= b0_;
    pr.z = prox::huber_prox(z_arg, 1.0 / rb, cfg_.c);
    pr.z += b0_;

    TraceRecord rec;
    if (cfg_.record_diagnostics) rec.diagnostic = pps_q_residual(st, pr, cfg_);

    // (4) relaxed correction.
    const double g = cfg_.gamma;
    Image v_next = st.v - g * (st.v - pr.v);
    st.y -= g * (st.y - pr.y);
    st.z -= g * (st.z - pr.z);
    st.lambda1 -= g * (st.lambda1 - pr.lambda1);
    st.lambda2 -= g * (st.lambda2 - pr.lambda2);

    if (!u_next.all_finite() || !v_next.all_finite() || !st.y.all_finite() || !st.z.all_finite() ||
        !st.lambda1.all_finite() || !st.lambda2.all_finite()) {
        throw NumericalError("splitting iterate became non-finite");
    }

    rec.tol = tol(st.u, st.v, u_next, v_next);
    st.u = std::move(u_next);
    st.v = std::move(v_next);

    const GradientField grad_gap = grad(st.u) - st.y;
    Image sum_gap = st.u + st.v;
    sum_gap -= st.z;
    rec.grad_residual = norm(grad_gap);
    rec.sum_residual = norm(sum_gap);
    rec.constraint_residual = std::hypot(rec.grad_residual, rec.sum_residual);

    Image residual = st.u + st.v;
    residual -= b0_;
    rec.objective = objective_with_nuclear(st.u, prox::nuclear_norm(st.v), residual, cfg_);
    return rec;
}

DecompResult pps_solve(const Image& b0, const SolverConfig& cfg) {
    validate_config(cfg, Algorithm::Pps);
    DecompResult result;
    if (squared_norm(b0) == 0.0) {
        result.u = Image(b0.shape());
        result.v = Image(b0.shape());
        result.converged = true;
        return result;
    }
    PpsSolver solver(b0, cfg);
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

std::vector<double> pps_diagnostics(const DecompResult& result) {
    std::vector<double> out;
    out.reserve(result.trace.size());
    for (const auto& rec : result.trace) out.push_back(rec.diagnostic);
    return out;
}

}  // namespace rlrp
