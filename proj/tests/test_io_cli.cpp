#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rlrp/benchmark.hpp"
#include "rlrp/cli.hpp"
#include "rlrp/errors.hpp"
#include "rlrp/image_io.hpp"
#include "rlrp/scenario.hpp"
#include "rlrp/synth.hpp"

using namespace rlrp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("rlrp_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string drop_time_column(const std::string& csv) {
    std::string out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
}

std::map<std::string, double> medians(const BenchmarkResult& r) {
    std::map<std::string, double> m;
    for (const auto& s : r.summary) m[s.method] = s.median_snr_db;
    return m;
}

const char* kSmallScenario = R"(
# comment line
[scenario]
name = small
size = 16
rank = 2
regions = 3
methods = rlrp-pps, clrp
seeds = 4, 5, 6
repeats = 3

[phi]
kind = identity

[noise]
family = student-t
df = 2
intensity = 0.1

[solver]
preset = synthetic-denoising
eps = 1e-3   # tighter than the preset
max_iter = 300
)";

std::string scenario_dir() {
    const char* env = std::getenv("RLRP_TEST_SCENARIOS");
    return env ? env : "scenarios";
}

}  // namespace

TEST_CASE("native container round-trips bit for bit") {
    TempDir dir;
    std::mt19937_64 rng(1);
    Image img = oracle::random_image({5, 7, 3}, rng, -3.0, 3.0);
    img[0] = std::numeric_limits<double>::infinity();
    img[1] = -0.0;
    img[2] = std::numeric_limits<double>::denorm_min();
    img[3] = std::numeric_limits<double>::quiet_NaN();
    write_image(img, dir / "x.rlrp");
    const Image back = read_image(dir / "x.rlrp");
    REQUIRE(back.shape() == img.shape());
    CHECK(std::memcmp(back.data().data(), img.data().data(), img.size() * sizeof(double)) == 0);

    const std::string bytes = encode_native(Image(1, 2, 1, std::vector<double>{1.0, 2.0}));
    CHECK(bytes.size() == 8 + 12 + 16);
    CHECK(bytes.substr(0, 8) == "RLRPIMG1");
    CHECK(bytes[8] == 1);
    CHECK(bytes[12] == 2);
    CHECK(bytes[16] == 1);
}

TEST_CASE("binary PGM parsing") {
    const std::string bytes = std::string("P5\n2 2\n255\n") + std::string("\x00\x80\xff\x40", 4);
    const Image img = decode_netpbm(bytes);
    CHECK(img.shape() == Shape{2, 2, 1});
    CHECK(img(0, 0, 0) == 0.0);
    CHECK(img(0, 0, 1) == 128.0 / 255.0);
    CHECK(img(0, 1, 0) == 1.0);
    CHECK(img(0, 1, 1) == 64.0 / 255.0);

    const Image commented = decode_netpbm(std::string("P5 # comment\n2 # w\n1\n# maxval next\n100\n") +
                                          std::string("\x64\x00", 2));
    CHECK(commented(0, 0, 0) == 1.0);
}

TEST_CASE("8-bit quantization rounds half up and clamps") {
    CHECK(quantize_8bit(0.5) == 128);
    CHECK(quantize_8bit(-0.2) == 0);
    CHECK(quantize_8bit(1.7) == 255);
    CHECK(quantize_8bit(127.5 / 255.0) == 128);
    TempDir dir;
    write_image(Image(1, 1, 1, 0.5), dir / "half.pgm");
    CHECK(read_image(dir / "half.pgm")[0] == 128.0 / 255.0);
}

TEST_CASE("binary PPM round trip") {
    std::mt19937_64 rng(2);
    Image img(3, 4, 3);
    std::uniform_int_distribution<int> level(0, 255);
    for (double& x : img.data()) x = level(rng) / 255.0;
    TempDir dir;
    write_image(img, dir / "c.ppm");
    CHECK(read_image(dir / "c.ppm") == img);
    CHECK_THROWS_AS(write_image(img, dir / "c.pgm"), IoError);
}

TEST_CASE("format errors report offsets") {
    auto offset_of = [](const std::string& bytes) -> long {
        try {
            decode_netpbm(bytes);
        } catch (const FormatError& e) {
            return static_cast<long>(e.offset());
        }
        return -1;
    };
    CHECK(offset_of("P2\n2 2\n255\n") == 0);
    CHECK(offset_of("P5\n2 2\n255\n\x01\x02") == 13);
    CHECK(offset_of("P5\n2 x\n255\n") == 5);
    CHECK(offset_of("P5\n2 2\n65535\n") == 7);
    CHECK(offset_of("P5\n1 1\n200\n\xff") == 11);
    CHECK_THROWS_AS(decode_native("RLRPIMG1\x01"), FormatError);
    CHECK_THROWS_AS(read_image("/nonexistent/dir/img.pgm"), IoError);
}

TEST_CASE("scenario parsing") {
    const BenchmarkScenario sc = parse_scenario(kSmallScenario);
    CHECK(sc.size == 16);
    CHECK(sc.seeds == std::vector<std::uint64_t>{4, 5, 6});
    REQUIRE(sc.methods.size() == 2);
    CHECK(sc.methods[1] == Method::ClrpPps);
    CHECK(sc.cfg.epsilon == 1e-3);
    CHECK(sc.cfg.tau == 0.1);
    CHECK(sc.noise.parameter == 2.0);

    auto error_of = [](const std::string& text) -> std::string {
        try {
            parse_scenario(text);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(error_of("[scenario]\nmethods = rlrp-pps\nseeds = 1, 2\nrepeats = 3\n").find("repeats") !=
          std::string::npos);
    CHECK(error_of("[scenario]\nmethods = rlrp-pps\nseeds = 1\n[phi]\nkind = blur\n").find("identity") !=
          std::string::npos);
    CHECK(error_of("[scenario]\nmethods = rlrp-pps\nseeds = 1\nbogus = 2\n").find("line 4") != std::string::npos);
    CHECK(error_of("[solver]\nc = abc\n").find("line 2") != std::string::npos);
    CHECK_FALSE(error_of("[scenario]\nmethods = rlrp-pps\nseeds = 1\n[solver]\nc = inf\n").find("line") !=
                std::string::npos);
}

TEST_CASE("zero noise with the identity is flagged degenerate") {
    BenchmarkScenario sc = parse_scenario(kSmallScenario);
    sc.seeds = {1};
    sc.repeats = 1;
    sc.methods = {Method::RlrpPps};
    sc.noise.intensity = 0.0;
    const BenchmarkResult r = run_benchmark(sc, 1);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].method == std::string(kObservationMethod));
    CHECK(std::isinf(r.rows[0].snr_db));
    CHECK(r.summary[0].degenerate);
}

TEST_CASE("benchmark CSV is deterministic and parseable") {
    const BenchmarkScenario sc = parse_scenario(kSmallScenario);
    const BenchmarkResult a = run_benchmark(sc, 1);
    const BenchmarkResult b = run_benchmark(sc, 3);
    const std::string csv = metrics_csv(a.rows);
    CHECK(drop_time_column(csv) == drop_time_column(metrics_csv(b.rows)));
    CHECK(a.rows.size() == 9);
    CHECK(csv.substr(0, csv.find('\n')) == kMetricsCsvHeader);

    const std::vector<MetricReport> parsed = parse_metrics_csv(csv);
    CHECK(metrics_csv(parsed) == csv);
    CHECK(summary_csv(summarize(parsed)) == summary_csv(a.summary));
    CHECK_THROWS_AS(parse_metrics_csv("a,b\n"), FormatError);
}

TEST_CASE("failed runs are flagged without stopping the others") {
    BenchmarkScenario sc = parse_scenario(kSmallScenario);
    sc.methods = {Method::RlrpPps, Method::ClrpPdhg};
    sc.cfg.sigma = 1.0;
    sc.cfg.eta = 1.0;
    const BenchmarkResult r = run_benchmark(sc, 2);
    CHECK(r.errors.size() == 3);
    for (const auto& row : r.rows) CHECK(row.failed == (row.method == "clrp-pdhg"));
    for (const auto& s : r.summary) {
        if (s.method == "clrp-pdhg") CHECK(s.failed == 3);
        else CHECK(s.failed == 0);
    }
    CHECK(metrics_csv(r.rows).find(",nan,nan,") != std::string::npos);
}

TEST_CASE("quantiles") {
    CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile({5.0}, 0.75) == 5.0);
}

TEST_CASE("sweep table") {
    std::vector<SummaryRow> s(4);
    s[0] = {"t@0.1", 0.1, "a", 1, 0, 1.0, 0.0, 0.0, false};
    s[1] = {"t@0.1", 0.1, "b", 1, 0, 2.0, 0.0, 0.0, false};
    s[2] = {"t@0.2", 0.2, "a", 1, 0, 3.0, 0.0, 0.0, false};
    s[3] = {"t@0.2", 0.2, "b", 1, 0, 4.0, 0.0, 0.0, false};
    CHECK(sweep_csv(s) == "intensity,a,b\n0.1,1,2\n0.2,3,4\n");
}

TEST_CASE("RLRP_THREADS caps the worker count") {
    ::setenv("RLRP_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    ::setenv("RLRP_THREADS", "zero", 1);
    CHECK(worker_count() >= 1);
    ::unsetenv("RLRP_THREADS");
}

TEST_CASE("cli synth is reproducible") {
    TempDir dir;
    const std::string prefix = dir / "gt";
    REQUIRE(cli({"synth", "--size", "64", "--rank", "2", "--regions", "3", "--seed", "7", "--out", prefix}).code == 0);
    const std::string first = read_file(prefix + ".composite.rlrp");
    CHECK(fs::exists(prefix + ".cartoon.rlrp"));
    CHECK(fs::exists(prefix + ".texture.rlrp"));
    CHECK(read_file(prefix + ".manifest.txt").find("seed = 7") != std::string::npos);
    REQUIRE(cli({"synth", "--size", "64", "--rank", "2", "--regions", "3", "--seed", "7", "--out", prefix}).code == 0);
    CHECK(read_file(prefix + ".composite.rlrp") == first);
    CHECK(read_image(prefix + ".composite.rlrp") == make_ground_truth(64, 2, 3, 7).composite);
}

TEST_CASE("cli decompose writes u, v, restored and a metrics row") {
    TempDir dir;
    const std::string in = dir / "in.pgm";
    write_image(make_ground_truth(32, 2, 3, 2).composite, in);
    const Run r = cli({"decompose", "--phi", "identity", "--method", "rlrp-pps", "--tau", "0.015", "--mu", "0.2",
                       "--c", "0.01", "--beta", "0.2", "--gamma", "1.6", "--r", "1", "--s", "2.01", "--eps", "1e-2",
                       in});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "in.u.pgm"));
    CHECK(fs::exists(dir / "in.v.pgm"));
    CHECK(fs::exists(dir / "in.restored.pgm"));
    CHECK(r.out.starts_with(std::string(kMetricsCsvHeader) + "\nin,rlrp-pps,identity,"));
}

TEST_CASE("cli pipeline equals the in-memory benchmark") {
    TempDir dir;
    const std::string scenario = dir / "pipe.cfg";
    write_file(scenario, R"([scenario]
size = 32
rank = 2
regions = 4
methods = rlrp-pdhg
seeds = 9
[phi]
kind = downsample
keep_probability = 0.4
[noise]
family = cauchy
intensity = 0.05
[solver]
preset = downsampling
max_iter = 60
)");
    REQUIRE(cli({"benchmark", scenario, "--out", dir / "bench"}).code == 0);
    const std::vector<MetricReport> rows = parse_metrics_csv(read_file(dir / "bench.csv"));
    REQUIRE(rows.size() == 2);

    REQUIRE(cli({"synth", "--size", "32", "--rank", "2", "--regions", "4", "--seed", "9", "--out", dir / "s"}).code ==
            0);
    REQUIRE(cli({"corrupt", dir / "s.composite.rlrp", "--phi", "downsample", "--keep", "0.4", "--noise", "cauchy",
                 "--intensity", "0.05", "--seed", "9", "-o", dir / "obs.rlrp"})
                .code == 0);
    CHECK(fs::exists(dir / "obs.noise"));
    CHECK(fs::exists(dir / "obs.mask.rlrp"));
    const Run r = cli({"decompose", dir / "obs.rlrp", "--phi", "mask", "--mask", dir / "obs.mask.rlrp", "--method",
                       "rlrp-pdhg", "--preset", "downsampling", "--max-iter", "60", "--reference",
                       dir / "s.composite.rlrp", "--csv", dir / "dec.csv"});
    REQUIRE(r.code == 0);
    const std::vector<MetricReport> dec = parse_metrics_csv(read_file(dir / "dec.csv"));
    REQUIRE(dec.size() == 1);
    CHECK(dec[0].noise == rows[1].noise);
    CHECK(dec[0].seed == 9);
    CHECK(std::abs(dec[0].snr_db - rows[1].snr_db) <= 1e-12);
    CHECK(std::abs(dec[0].ssim - rows[1].ssim) <= 1e-12);
    CHECK(dec[0].iterations == rows[1].iterations);

    // Regenerating the mask from its seed is equivalent to reading it back.
    const Run again = cli({"decompose", dir / "obs.rlrp", "--phi", "downsample", "--keep", "0.4", "--phi-seed", "9",
                           "--preset", "downsampling", "--max-iter", "60", "--reference", dir / "s.composite.rlrp",
                           "--csv", dir / "dec2.csv"});
    REQUIRE(again.code == 0);
    CHECK(parse_metrics_csv(read_file(dir / "dec2.csv"))[0].snr_db == dec[0].snr_db);
}

TEST_CASE("cli diag writes the trace") {
    TempDir dir;
    write_image(make_ground_truth(16, 1, 2, 1).composite, dir / "g.rlrp");
    const Run r = cli({"diag", dir / "g.rlrp", "--max-iter", "5", "--eps", "1e-12"});
    REQUIRE(r.code == 0);
    CHECK(r.out.starts_with("iteration,objective,tol,constraint_residual,grad_residual,sum_residual,q_residual\n"));
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
    const Run p = cli({"diag", dir / "g.rlrp", "--phi", "blur", "--blur-size", "3", "--max-iter", "3"});
    REQUIRE(p.code == 0);
    CHECK(p.out.find(",gap\n") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    TempDir dir;
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"decompose", dir / "missing.pgm"}).code == kExitIo);
    write_file(dir / "bad.pgm", "P5\n2 2\n255\n");
    const Run bad = cli({"decompose", dir / "bad.pgm"});
    CHECK(bad.code == kExitIo);
    CHECK(bad.err.find("byte") != std::string::npos);

    write_image(Image(16, 16, 1, 0.5), dir / "ok.rlrp");
    const Run cfg = cli({"decompose", dir / "ok.rlrp", "--gamma", "2"});
    CHECK(cfg.code == kExitUsage);
    CHECK(cfg.err.find("gamma") != std::string::npos);
    CHECK(cli({"decompose", dir / "ok.rlrp", "--method", "rlrp-pps", "--phi", "blur"}).code == kExitUsage);

    Image nan_img(16, 16, 1, 0.5);
    nan_img[3] = std::numeric_limits<double>::quiet_NaN();
    write_image(nan_img, dir / "nan.rlrp");
    CHECK(cli({"decompose", dir / "nan.rlrp"}).code == kExitNumerical);
    CHECK(cli({"decompose", "--help"}).code == kExitOk);
}

TEST_CASE("robustness scenario: RLRP beats CLRP") {
    const BenchmarkResult r = run_benchmark(load_scenario(scenario_dir() + "/robustness.cfg"));
    const auto m = medians(r);
    CHECK(m.at("rlrp-pps") - m.at("clrp-pps") >= 2.0);
}

TEST_CASE("intensity sweep: RLRP dominates at every intensity") {
    const BenchmarkScenario sc = load_scenario(scenario_dir() + "/sweep.cfg");
    REQUIRE(sc.intensities.size() == 3);
    const BenchmarkResult r = run_benchmark(sc);
    std::map<double, std::map<std::string, double>> by;
    for (const auto& s : r.summary) by[s.intensity][s.method] = s.median_snr_db;
    REQUIRE(by.size() == 3);
    for (const auto& [x, m] : by) CHECK(m.at("rlrp-pps") > m.at("clrp-pps"));
}
