#include "rlrp/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <thread>

#include "rlrp/errors.hpp"
#include "rlrp/image_io.hpp"
#include "rlrp/noise.hpp"
#include "rlrp/synth.hpp"

namespace rlrp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Job {
    double intensity;
    std::uint64_t seed;
};

struct JobOutput {
    std::vector<MetricReport> rows;
    std::vector<std::string> errors;
};

std::string image_label(const BenchmarkScenario& sc) {
    if (!sc.image_path.empty()) return std::filesystem::path(sc.image_path).stem().string();
    return "synth" + std::to_string(sc.size) + "-r" + std::to_string(sc.rank) + "-k" + std::to_string(sc.regions);
}

double ssim_or_nan(const Image& ref, const Image& est) {
    try {
        return ssim(ref, est);
    } catch (const TooSmall&) {
        return kNaN;
    }
}

JobOutput run_job(const BenchmarkScenario& sc, const Image* loaded, const Job& job) {
    JobOutput out;
    const Image truth = loaded ? *loaded
                               : make_ground_truth(sc.size, sc.rank, sc.regions, job.seed, sc.weight, sc.channels)
                                     .composite;
    const DegradationOp phi = sc.phi.build(job.seed, truth.shape());
    NoiseSpec noise = sc.noise;
    noise.intensity = job.intensity;
    noise.seed = job.seed;
    const Image b0 = corrupt(truth, phi, noise);

    MetricReport base;
    base.image = image_label(sc);
    base.phi = phi.label();
    base.noise = noise.label();
    base.seed = job.seed;

    MetricReport obs = base;
    obs.method = kObservationMethod;
    obs.snr_db = snr(truth, b0);
    obs.ssim = ssim_or_nan(truth, b0);
    out.rows.push_back(obs);

    for (Method m : sc.methods) {
        MetricReport row = base;
        row.method = method_name(m);
        const auto start = std::chrono::steady_clock::now();
        try {
            const DecompResult res = solve(m, b0, phi, sc.cfg);
            const Image restored = res.restored();
            row.snr_db = snr(truth, restored);
            row.ssim = ssim_or_nan(truth, restored);
            row.iterations = res.iterations;
        } catch (const std::exception& e) {
            row.failed = true;
            row.snr_db = kNaN;
            row.ssim = kNaN;
            out.errors.push_back("seed " + std::to_string(job.seed) + ", method " + row.method + ": " + e.what());
        }
        row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.rows.push_back(row);
    }
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

double csv_number(std::string_view s, std::size_t offset) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return kNaN;
    double x = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || end != s.data() + s.size()) throw FormatError("bad number '" + std::string(s) + "'", offset);
    return x;
}

double intensity_of(const std::string& noise_label) {
    const auto at = noise_label.rfind('@');
    if (at == std::string::npos) return kNaN;
    return csv_number(std::string_view(noise_label).substr(at + 1), 0);
}

double median_of(std::vector<double> v) { return v.empty() ? kNaN : quantile(std::move(v), 0.5); }

}  // namespace

std::size_t worker_count() {
    if (const char* env = std::getenv("RLRP_THREADS")) {
        std::size_t n = 0;
        const std::string_view s(env);
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc() && end == s.data() + s.size() && n > 0) return n;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

BenchmarkResult run_benchmark(const BenchmarkScenario& scenario, std::size_t threads) {
    scenario.validate();
    std::optional<Image> loaded;
    if (!scenario.image_path.empty()) loaded = read_image(scenario.image_path);

    std::vector<Job> jobs;
    const std::vector<double> intensities =
        scenario.intensities.empty() ? std::vector<double>{scenario.noise.intensity} : scenario.intensities;
    for (double x : intensities) {
        for (std::uint64_t seed : scenario.seeds) jobs.push_back({x, seed});
    }

    std::vector<JobOutput> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            outputs[k] = run_job(scenario, loaded ? &*loaded : nullptr, jobs[k]);
        }
    };
    const std::size_t n = std::min(jobs.size(), threads == 0 ? worker_count() : threads);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }

    BenchmarkResult result;
    for (auto& o : outputs) {
        result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
        result.errors.insert(result.errors.end(), o.errors.begin(), o.errors.end());
    }
    result.summary = summarize(result.rows);
    return result;
}

std::string metrics_csv(const std::vector<MetricReport>& rows) {
    std::string out = std::string(kMetricsCsvHeader) + "\n";
    for (const auto& r : rows) out += to_csv_row(r) + "\n";
    return out;
}

std::vector<MetricReport> parse_metrics_csv(std::string_view text) {
    std::vector<MetricReport> rows;
    std::size_t offset = 0;
    bool header = true;
    while (offset < text.size()) {
        const auto nl = text.find('\n', offset);
        std::string_view line = text.substr(offset, nl == std::string_view::npos ? std::string_view::npos : nl - offset);
        const std::size_t line_start = offset;
        offset = nl == std::string_view::npos ? text.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != kMetricsCsvHeader) throw FormatError("unexpected metrics CSV header", line_start);
            header = false;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 9) throw FormatError("expected 9 fields, got " + std::to_string(f.size()), line_start);
        MetricReport r;
        r.image = f[0];
        r.method = f[1];
        r.phi = f[2];
        r.noise = f[3];
        r.seed = static_cast<std::uint64_t>(csv_number(f[4], line_start));
        r.snr_db = csv_number(f[5], line_start);
        r.ssim = csv_number(f[6], line_start);
        r.iterations = static_cast<int>(csv_number(f[7], line_start));
        r.time_s = csv_number(f[8], line_start);
        r.failed = f[5] == "nan";
        rows.push_back(std::move(r));
    }
    if (header) throw FormatError("missing metrics CSV header", 0);
    return rows;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw ConfigError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    if (lo == hi || values[lo] == values[hi]) return values[lo];
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<MetricReport>& rows) {
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> snrs, ssims;
    for (const auto& r : rows) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const SummaryRow& s) { return s.noise == r.noise && s.method == r.method; });
        if (it == out.end()) {
            SummaryRow s;
            s.noise = r.noise;
            s.intensity = intensity_of(r.noise);
            s.method = r.method;
            out.push_back(s);
            snrs.emplace_back();
            ssims.emplace_back();
            it = out.end() - 1;
        }
        const auto k = static_cast<std::size_t>(it - out.begin());
        ++it->runs;
        if (r.failed) {
            ++it->failed;
            continue;
        }
        if (std::isinf(r.snr_db)) it->degenerate = true;
        snrs[k].push_back(r.snr_db);
        if (!std::isnan(r.ssim)) ssims[k].push_back(r.ssim);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].median_snr_db = median_of(snrs[k]);
        out[k].iqr_snr_db = snrs[k].empty() ? kNaN : quantile(snrs[k], 0.75) - quantile(snrs[k], 0.25);
        if (std::isnan(out[k].iqr_snr_db) && !snrs[k].empty()) out[k].iqr_snr_db = 0.0;
        out[k].median_ssim = median_of(ssims[k]);
    }
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
    std::string out = std::string(kSummaryCsvHeader) + "\n";
    for (const auto& s : summary) {
        out += s.noise + "," + format_number(s.intensity) + "," + s.method + "," + std::to_string(s.runs) + "," +
               std::to_string(s.failed) + "," + format_number(s.median_snr_db) + "," +
               format_number(s.iqr_snr_db) + "," + format_number(s.median_ssim) + "," +
               (s.degenerate ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SummaryRow>& summary) {
    std::vector<std::string> methods;
    std::vector<double> intensities;
    std::map<std::pair<double, std::string>, double> value;
    for (const auto& s : summary) {
        if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) methods.push_back(s.method);
        if (std::find(intensities.begin(), intensities.end(), s.intensity) == intensities.end()) {
            intensities.push_back(s.intensity);
        }
        value[{s.intensity, s.method}] = s.median_snr_db;
    }
    std::string out = "intensity";
    for (const auto& m : methods) out += "," + m;
    out += "\n";
    for (double x : intensities) {
        out += format_number(x);
        for (const auto& m : methods) {
            const auto it = value.find({x, m});
            out += "," + format_number(it == value.end() ? kNaN : it->second);
        }
        out += "\n";
    }
    return out;
}

}  // namespace rlrp
