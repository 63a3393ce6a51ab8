#ifndef RLRP_METRICS_HPP
#define RLRP_METRICS_HPP

#include <cstdint>
#include <limits>
#include <string>

#include "rlrp/config.hpp"
#include "rlrp/degradation.hpp"
#include "rlrp/image.hpp"

namespace rlrp {

/// 20 log10(|reference| / |estimate - reference|) in dB, over the whole
/// tensor. Returns +inf when the two images are bitwise equal.
double snr(const Image& reference, const Image& estimate);

/// Mean SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
/// dynamic range 1, averaged over all fully contained windows and then
/// over channels. Requires both dimensions >= 11.
double ssim(const Image& reference, const Image& estimate);

/// Stopping quantity max(|du| / (|u_prev| + 1), |dv| / (|v_prev| + 1)).
double tol(const Image& prev_u, const Image& prev_v, const Image& cur_u, const Image& cur_v);

/// sum_i |(grad u)_i| with the per-pixel Euclidean (isotropic) or l1 norm.
double total_variation(const Image& u, TvNorm norm = TvNorm::Isotropic);

struct ObjectiveTerms {
    double tv = 0.0;       // tau * TV(u)
    double nuclear = 0.0;  // mu * sum of per-channel nuclear norms
    double data = 0.0;     // rho_c(Phi(u + v) - b0)

    double total() const noexcept { return tv + nuclear + data; }
};

ObjectiveTerms objective_terms(const Image& u, const Image& v, const Image& b0, const DegradationOp& phi,
                               const SolverConfig& cfg);

/// tau TV(u) + mu ||v||_* + rho_c(Phi(u + v) - b0).
double objective(const Image& u, const Image& v, const Image& b0, const DegradationOp& phi,
                 const SolverConfig& cfg);

/// Same objective when the caller already holds the (unweighted) nuclear
/// norm of v and the residual Phi(u + v) - b0.
double objective_with_nuclear(const Image& u, double nuclear_norm_v, const Image& residual,
                              const SolverConfig& cfg);

struct MetricReport {
    std::string image;
    std::string method;
    std::string phi;
    std::string noise;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    double ssim = 0.0;
    int iterations = 0;
    double time_s = 0.0;
    double objective = 0.0;
    bool failed = false;
};

/// Fixed column order of the metrics CSV.
inline constexpr const char* kMetricsCsvHeader = "image,method,phi,noise,seed,snr_db,ssim,iterations,time_s";

/// Serializes one report in kMetricsCsvHeader order; +inf SNR is written as "inf",
/// a failed run as "nan" metrics.
std::string to_csv_row(const MetricReport& report);

/// Shortest round-trip formatting used in every CSV the library writes.
std::string format_number(double x);

}  // namespace rlrp

#endif  // RLRP_METRICS_HPP
