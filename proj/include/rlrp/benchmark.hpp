#ifndef RLRP_BENCHMARK_HPP
#define RLRP_BENCHMARK_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rlrp/metrics.hpp"
#include "rlrp/scenario.hpp"

namespace rlrp {

/// Method label of the row describing the degraded observation itself.
inline constexpr const char* kObservationMethod = "observation";

/// Median / IQR of SNR over the seeds of one (noise, method) group.
struct SummaryRow {
    std::string noise;
    double intensity = 0.0;
    std::string method;
    std::size_t runs = 0;
    std::size_t failed = 0;
    double median_snr_db = 0.0;
    double iqr_snr_db = 0.0;
    double median_ssim = 0.0;
    /// Some run reported an infinite SNR (e.g. zero noise with the identity).
    bool degenerate = false;
};

inline constexpr const char* kSummaryCsvHeader =
    "noise,intensity,method,runs,failed,median_snr_db,iqr_snr_db,median_ssim,degenerate";

struct BenchmarkResult {
    /// Ordered by intensity, then seed, then observation row followed by the
    /// scenario's methods.
    std::vector<MetricReport> rows;
    std::vector<SummaryRow> summary;
    /// One message per failed run: "seed S, method M: what()".
    std::vector<std::string> errors;
};

/// Worker cap: RLRP_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
std::size_t worker_count();

/// For every intensity and seed: build the ground truth (seed), the operator
/// (down-sampling mask seed) and the noise (seed), then run every method.
/// Seeds run concurrently on up to `threads` workers (0 = worker_count());
/// a failing solve is recorded as a failed row and does not stop the others.
BenchmarkResult run_benchmark(const BenchmarkScenario& scenario, std::size_t threads = 0);

std::string metrics_csv(const std::vector<MetricReport>& rows);

/// Inverse of metrics_csv (time_s and numbers round-trip through format_number).
/// Throws FormatError on a wrong header or malformed row.
std::vector<MetricReport> parse_metrics_csv(std::string_view text);

/// Groups rows by (noise, method) in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<MetricReport>& rows);
std::string summary_csv(const std::vector<SummaryRow>& summary);

/// Median SNR per intensity (rows) and method (columns):
/// "intensity,<method>,<method>,...".
std::string sweep_csv(const std::vector<SummaryRow>& summary);

/// Linear-interpolation quantile of a nonempty sample, q in [0,1].
double quantile(std::vector<double> values, double q);

}  // namespace rlrp

#endif  // RLRP_BENCHMARK_HPP
