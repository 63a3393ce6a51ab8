#ifndef RLRP_CONFIG_HPP
#define RLRP_CONFIG_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rlrp/image.hpp"

namespace rlrp {

/// Huber threshold that turns the data term into 0.5*||.||^2 (the l2 baseline).
inline constexpr double kQuadraticLoss = std::numeric_limits<double>::infinity();

enum class Algorithm { Pps, Pdhg };

enum class TvNorm { Isotropic, Anisotropic };

/// Every scalar the model and both solvers take.
///
/// tau, mu and c define the model. beta, gamma, r, s are read only by the
/// partially parallel splitting solver; sigma and eta only by the primal-dual
/// solver. When sigma/eta are left unset the primal-dual solver picks a
/// default for the degradation kind and scales it down until the step
/// condition holds; explicitly set steps that violate it are rejected.
struct SolverConfig {
    double tau = 0.1;
    double mu = 2.0;
    double c = 0.1;

    double beta = 2.0;
    double gamma = 1.3;
    double r = 1.0;
    double s = 2.01;

    std::optional<double> sigma;
    std::optional<double> eta;

    double epsilon = 1e-2;
    int max_iter = 200;

    TvNorm tv = TvNorm::Isotropic;

    /// Record the Q-norm residual (splitting) or the restricted gap (primal-dual)
    /// in the trace. Costs extra work per iteration.
    bool record_diagnostics = false;

    int norm_iterations = 50;
    double norm_safety = 1.05;
    std::uint64_t norm_seed = 0x6b6e6f726dULL;

    bool quadratic_loss() const noexcept { return c == kQuadraticLoss; }

    /// Synthetic-image denoising: tau=0.1, mu=2, c=0.1, beta=2, gamma=1.3.
    static SolverConfig synthetic_denoising();
    /// Natural-image denoising: tau=0.015, mu=0.2, c=0.01, beta=0.2, gamma=1.6.
    static SolverConfig natural_denoising();
    /// Binary-mask inpainting: 500 iterations, eps=2.5e-4. Steps come from the
    /// per-operator defaults (0.35 for masks).
    static SolverConfig mask_inpainting();
    /// Random down-sampling: c=0.02, default steps 0.4.
    static SolverConfig downsampling();
    /// Deblurring of synthetic/cartoon images: tau=1e-3, mu=0.1, c=0.03, default steps 0.6.
    static SolverConfig deblurring();
};

/// Validates the invariants relevant to `algo` and returns `cfg` unchanged.
/// Throws ConfigError naming the violated constraint. The primal-dual step
/// condition needs the operator norm and is checked by the solver.
const SolverConfig& validate_config(const SolverConfig& cfg, Algorithm algo);

/// One row of the per-iteration trace.
struct TraceRecord {
    double objective = 0.0;
    double tol = 0.0;
    /// Splitting: sqrt(|grad u - y|^2 + |u + v - z|^2).
    /// Primal-dual: |grad^T lambda1 + Phi^T lambda2| (stationarity in u).
    double constraint_residual = 0.0;
    double grad_residual = 0.0;
    double sum_residual = 0.0;
    /// Q-norm residual or ergodic gap; NaN unless diagnostics were requested.
    double diagnostic = std::numeric_limits<double>::quiet_NaN();
};

struct DecompResult {
    Image u;
    Image v;
    int iterations = 0;
    std::vector<TraceRecord> trace;
    bool converged = false;

    Image restored() const { return u + v; }
};

}  // namespace rlrp

#endif  // RLRP_CONFIG_HPP
