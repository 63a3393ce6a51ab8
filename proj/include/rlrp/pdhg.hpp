#ifndef RLRP_PDHG_HPP
#define RLRP_PDHG_HPP

#include "rlrp/config.hpp"
#include "rlrp/degradation.hpp"
#include "rlrp/image.hpp"
#include "rlrp/linops.hpp"

namespace rlrp {

/// Primal (u, v), dual (lambda1, lambda2) and extrapolated primal iterates.
struct PdhgState {
    Image u;
    Image v;
    GradientField lambda1;
    Image lambda2;
    Image u_bar;
    Image v_bar;
};

struct PdhgSteps {
    double sigma = 0.0;
    double eta = 0.0;
    /// Power-iteration estimate of ||K||^2 times cfg.norm_safety.
    double norm_sq = 0.0;
};

/// Default sigma = eta for a degradation kind: 0.35 for masks and the
/// identity, 0.4 for random down-sampling, 0.6 for blur.
double default_pdhg_step(DegradationOp::Kind kind);

/// Picks (sigma, eta) for K = [grad, 0; Phi, Phi] on `shape`.
/// Explicit steps in cfg must satisfy sigma * eta * norm_sq < 1, otherwise
/// ConfigError. Without explicit steps the default for phi is used and both
/// are scaled down together until sigma * eta * norm_sq = 0.95 if needed.
PdhgSteps resolve_pdhg_steps(const SolverConfig& cfg, const DegradationOp& phi, Shape shape);

/// Restricted primal-dual gap at (u, v, lambda1, lambda2):
///   P(u, v) + F*(lambda) + R |grad^T lambda1 + Phi^T lambda2|
///           + R sum_channels max(0, sigma_max(Phi^T lambda2) - mu)
/// with P the model objective and F*(lambda) = sum rho_c^*(lambda2) + <lambda2, b0>.
/// The last two terms are the exact minimum of the Lagrangian over
/// |u| <= R and per-channel |v|_* <= R. The value is clamped at 0.
double pdhg_gap(const PdhgState& state, const Image& b0, const DegradationOp& phi, const SolverConfig& cfg,
                double radius);

/// Radius used by the gap diagnostic: 2 max(|b0|_F, |b0|_*) + 1.
double gap_radius(const Image& b0);

class PdhgSolver {
public:
    /// Starts from u = u_bar = b0 and every other variable zero.
    /// Throws ConfigError when the step condition cannot be met.
    PdhgSolver(Image b0, DegradationOp phi, SolverConfig cfg);

    /// One iteration:
    ///   lambda1 <- clip(lambda1 + sigma grad u_bar, tau)
    ///   lambda2 <- huber_conj_prox(lambda2 + sigma Phi(u_bar + v_bar) - sigma b0, sigma, c)
    ///   u <- u - eta (grad^T lambda1 + Phi^T lambda2)
    ///   v <- svt(v - eta Phi^T lambda2, eta mu)
    ///   (u_bar, v_bar) <- 2 (u, v)_new - (u, v)_old
    TraceRecord step();

    const PdhgState& state() const noexcept { return state_; }
    const PdhgSteps& steps() const noexcept { return steps_; }
    const SolverConfig& config() const noexcept { return cfg_; }

    /// Running averages of (u, v, lambda) over the iterations done so far
    /// (only maintained when cfg.record_diagnostics is set).
    PdhgState ergodic_average() const;

private:
    Image b0_;
    DegradationOp phi_;
    SolverConfig cfg_;
    PdhgSteps steps_;
    PdhgState state_;
    PdhgState sums_;
    int iterations_ = 0;
    double radius_ = 0.0;
};

DecompResult pdhg_solve(const Image& b0, const DegradationOp& phi, const SolverConfig& cfg);

}  // namespace rlrp

#endif  // RLRP_PDHG_HPP
