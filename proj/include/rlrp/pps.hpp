#ifndef RLRP_PPS_HPP
#define RLRP_PPS_HPP

#include <vector>

#include "rlrp/config.hpp"
#include "rlrp/image.hpp"
#include "rlrp/linops.hpp"

namespace rlrp {

/// Iterates of the partially parallel splitting method for Phi = I.
///
/// The model is rewritten with y = grad u and z = u + v; lambda1 and lambda2
/// are the multipliers of those two constraints.
struct PpsState {
    Image u;
    Image v;
    GradientField y;
    Image z;
    GradientField lambda1;
    Image lambda2;
};

/// Predicted (v, y, z, lambda) of one iteration, before the relaxed correction.
struct PpsPrediction {
    Image v;
    GradientField y;
    Image z;
    GradientField lambda1;
    Image lambda2;
};

/// Squared Q-norm of (state - prediction) over the (v, y, z, lambda) block:
///   r beta (|dv|^2 + |dy|^2 + |dz|^2) + (s/beta) |dlambda|^2
///   - 2<dlambda2, dv> + 2<dlambda1, dy> + 2<dlambda2, dz>.
/// Q is positive definite exactly when r s > 2.
double pps_q_residual(const PpsState& state, const PpsPrediction& pred, const SolverConfig& cfg);

/// Stepwise solver. Each step performs
///   1. u from (grad^T grad + I) u = grad^T(y + s/beta lambda1) + (z - v + s/beta lambda2)
///   2. lambda prediction  lambda~ = lambda - beta/s (constraint residual at (u+, v, y, z))
///   3. v~ = svt(a_v, mu/(r beta)), y~ = shrink(-a_y, tau/(r beta)),
///      z~ = huber_prox(-b0 - a_z, 1/(r beta), c) + b0
///   4. (v, y, z, lambda) <- (v, y, z, lambda) - gamma (current - predicted)
class PpsSolver {
public:
    /// Starts from u = b0 and every other variable zero.
    PpsSolver(Image b0, SolverConfig cfg);

    /// One full iteration; returns its trace record.
    TraceRecord step();

    const PpsState& state() const noexcept { return state_; }
    const PpsPrediction& last_prediction() const noexcept { return prediction_; }
    const SolverConfig& config() const noexcept { return cfg_; }

private:
    Image b0_;
    SolverConfig cfg_;
    GradGramSolver gram_;
    PpsState state_;
    PpsPrediction prediction_;
};

/// Runs PpsSolver until Tol < epsilon or max_iter. An all-zero b0 returns
/// u = v = 0 with zero iterations. Throws ConfigError or NumericalError.
DecompResult pps_solve(const Image& b0, const SolverConfig& cfg);

/// The per-iteration Q-norm residuals recorded in a trace (needs
/// cfg.record_diagnostics).
std::vector<double> pps_diagnostics(const DecompResult& result);

}  // namespace rlrp

#endif  // RLRP_PPS_HPP
