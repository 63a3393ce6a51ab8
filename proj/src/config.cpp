#include "rlrp/config.hpp"

#include <cmath>

#include "rlrp/errors.hpp"

namespace rlrp {

SolverConfig SolverConfig::synthetic_denoising() { return SolverConfig{}; }

SolverConfig SolverConfig::natural_denoising() {
    SolverConfig cfg;
    cfg.tau = 0.015;
    cfg.mu = 0.2;
    cfg.c = 0.01;
    cfg.beta = 0.2;
    cfg.gamma = 1.6;
    return cfg;
}

SolverConfig SolverConfig::mask_inpainting() {
    SolverConfig cfg;
    cfg.tau = 0.015;
    cfg.mu = 0.2;
    cfg.c = 0.02;
    cfg.beta = 2.0;
    cfg.gamma = 1.6;
    cfg.epsilon = 2.5e-4;
    cfg.max_iter = 500;
    return cfg;
}

SolverConfig SolverConfig::downsampling() {
    SolverConfig cfg;
    cfg.tau = 0.015;
    cfg.mu = 0.2;
    cfg.c = 0.02;
    cfg.beta = 2.0;
    cfg.gamma = 1.6;
    cfg.epsilon = 1e-2;
    return cfg;
}

SolverConfig SolverConfig::deblurring() {
    SolverConfig cfg;
    cfg.tau = 1e-3;
    cfg.mu = 0.1;
    cfg.c = 0.03;
    cfg.beta = 2.0;
    cfg.gamma = 1.6;
    return cfg;
}

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

const SolverConfig& validate_config(const SolverConfig& cfg, Algorithm algo) {
    require(cfg.tau > 0.0 && std::isfinite(cfg.tau), "tau must be positive");
    require(cfg.mu > 0.0 && std::isfinite(cfg.mu), "mu must be positive");
    require(cfg.c > 0.0, "c must be positive (or +inf for the quadratic loss)");
    require(cfg.epsilon > 0.0, "epsilon must be positive");
    require(cfg.max_iter > 0, "max_iter must be positive");

    if (algo == Algorithm::Pps) {
        require(cfg.beta > 0.0 && std::isfinite(cfg.beta), "beta must be positive");
        require(cfg.gamma > 0.0 && cfg.gamma < 2.0, "gamma must be in (0,2)");
        require(cfg.r > 0.0 && cfg.s > 0.0, "r and s must be positive");
        require(cfg.r * cfg.s > 2.0, "rs>2 violated");
    } else {
        require(!cfg.sigma || *cfg.sigma > 0.0, "sigma must be positive");
        require(!cfg.eta || *cfg.eta > 0.0, "eta must be positive");
        require(cfg.sigma.has_value() == cfg.eta.has_value(), "sigma and eta must be set together");
        require(cfg.norm_iterations >= 1, "norm_iterations must be at least 1");
        require(cfg.norm_safety >= 1.0, "norm_safety must be at least 1");
    }
    return cfg;
}

}  // namespace rlrp
