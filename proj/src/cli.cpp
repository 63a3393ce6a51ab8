#include "rlrp/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rlrp/benchmark.hpp"
#include "rlrp/errors.hpp"
#include "rlrp/image_io.hpp"
#include "rlrp/metrics.hpp"
#include "rlrp/noise.hpp"
#include "rlrp/scenario.hpp"
#include "rlrp/synth.hpp"

namespace rlrp {

namespace {

namespace fs = std::filesystem;

// Solver flags shared by decompose and diag.
struct SolverFlags {
    std::string preset;
    std::optional<double> tau, mu, beta, gamma, r, s, sigma, eta, eps;
    std::optional<std::string> c;
    std::optional<int> max_iter;
    std::string tv;

    void attach(CLI::App* app) {
        app->add_option("--preset", preset, "Parameter preset (synthetic-denoising, natural-denoising, "
                                            "mask-inpainting, downsampling, deblurring)");
        app->add_option("--tau", tau, "TV weight");
        app->add_option("--mu", mu, "Nuclear-norm weight");
        app->add_option("--c", c, "Huber threshold, or inf for the quadratic loss");
        app->add_option("--beta", beta, "Penalty parameter (splitting)");
        app->add_option("--gamma", gamma, "Relaxation factor in (0,2) (splitting)");
        app->add_option("--r", r, "Proximal parameter r (splitting)");
        app->add_option("--s", s, "Proximal parameter s (splitting)");
        app->add_option("--sigma", sigma, "Dual step (primal-dual)");
        app->add_option("--eta", eta, "Primal step (primal-dual)");
        app->add_option("--eps", eps, "Stopping tolerance");
        app->add_option("--max-iter", max_iter, "Iteration cap");
        app->add_option("--tv", tv, "isotropic or anisotropic");
    }

    SolverConfig build() const {
        SolverConfig cfg = preset.empty() ? SolverConfig{} : preset_by_name(preset);
        if (tau) cfg.tau = *tau;
        if (mu) cfg.mu = *mu;
        if (c) cfg.c = parse_double(*c, "c");
        if (beta) cfg.beta = *beta;
        if (gamma) cfg.gamma = *gamma;
        if (r) cfg.r = *r;
        if (s) cfg.s = *s;
        if (sigma) cfg.sigma = *sigma;
        if (eta) cfg.eta = *eta;
        if (eps) cfg.epsilon = *eps;
        if (max_iter) cfg.max_iter = *max_iter;
        if (!tv.empty()) set_solver_field(cfg, "tv", tv);
        return cfg;
    }
};

// Degradation flags shared by corrupt, decompose and diag.
struct PhiFlags {
    std::string kind = "identity";
    double keep = 0.4;
    std::size_t blur_size = 4;
    std::string mask;
    std::uint64_t seed = 0;

    void attach(CLI::App* app, bool with_seed) {
        app->add_option("--phi", kind, "identity, mask, downsample or blur")->capture_default_str();
        app->add_option("--keep", keep, "Keep probability for downsample")->capture_default_str();
        app->add_option("--blur-size", blur_size, "Side of the average blur kernel")->capture_default_str();
        app->add_option("--mask", mask, "0/1 mask image for --phi mask");
        if (with_seed) app->add_option("--phi-seed", seed, "Seed of the downsample mask")->capture_default_str();
    }

    DegradationOp build(Shape shape) const {
        PhiSpec spec;
        if (kind == "identity") spec.kind = DegradationOp::Kind::Identity;
        else if (kind == "mask") spec.kind = DegradationOp::Kind::Mask;
        else if (kind == "downsample") spec.kind = DegradationOp::Kind::Downsample;
        else if (kind == "blur") spec.kind = DegradationOp::Kind::Blur;
        else throw ConfigError("unknown --phi '" + kind + "'");
        spec.keep_probability = keep;
        spec.blur_size = blur_size;
        spec.mask_path = mask;
        return spec.build(seed, shape);
    }
};

// "dir/name.ext" -> "dir/name<tag><ext>", keeping the input extension unless `ext` is given.
std::string sibling(const std::string& path, const std::string& tag, const std::string& ext = "") {
    const fs::path p(path);
    const std::string e = ext.empty() ? p.extension().string() : ext;
    return (p.parent_path() / (p.stem().string() + tag + e)).string();
}

Method pick_method(const std::string& name, const DegradationOp& phi) {
    if (!name.empty()) return parse_method(name, phi.kind());
    return phi.is_identity() ? Method::RlrpPps : Method::RlrpPdhg;
}

int run_synth(std::size_t size, std::size_t rank, std::size_t regions, std::uint64_t seed, std::size_t channels,
              double weight, std::string prefix, const std::string& ext, std::ostream& out) {
    if (prefix.empty()) prefix = "synth-" + std::to_string(seed);
    const GroundTruth gt = make_ground_truth(size, rank, regions, seed, weight, channels);
    const std::string cartoon = prefix + ".cartoon" + ext;
    const std::string texture = prefix + ".texture" + ext;
    const std::string composite = prefix + ".composite" + ext;
    write_image(gt.cartoon, cartoon);
    write_image(gt.texture, texture);
    write_image(gt.composite, composite);

    std::ostringstream m;
    m << "size = " << size << "\nchannels = " << channels << "\nrank = " << rank << "\nregions = " << regions
      << "\nseed = " << seed << "\nw_cartoon = " << format_number(gt.w_cartoon)
      << "\nw_texture = " << format_number(gt.w_texture) << "\ncartoon = " << fs::path(cartoon).filename().string()
      << "\ntexture = " << fs::path(texture).filename().string()
      << "\ncomposite = " << fs::path(composite).filename().string() << "\n";
    write_file(prefix + ".manifest.txt", m.str());
    out << composite << "\n";
    return kExitOk;
}

int run_corrupt(const std::string& input, const PhiFlags& phi_flags, const std::string& family, double parameter,
                double intensity, std::uint64_t seed, std::string output, std::ostream& out) {
    const Image b = read_image(input);
    PhiFlags flags = phi_flags;
    flags.seed = seed;
    const DegradationOp phi = flags.build(b.shape());

    NoiseSpec noise;
    if (family == "student-t" || family == "t") noise = NoiseSpec::student_t(parameter, intensity, seed);
    else if (family == "cauchy") noise = NoiseSpec::cauchy(intensity, seed);
    else if (family == "ged") noise = NoiseSpec::ged(parameter, intensity, seed);
    else throw ConfigError("unknown --noise '" + family + "'");

    if (output.empty()) output = sibling(input, ".corrupt");
    write_image(corrupt(b, phi, noise), output);

    std::ostringstream replay;
    replay << "input = " << input << "\nfamily = " << family << "\nparameter = " << format_number(noise.parameter)
           << "\nintensity = " << format_number(noise.intensity) << "\nseed = " << seed
           << "\nlabel = " << noise.label() << "\nphi = " << phi.label() << "\n";
    if (phi.is_masking()) {
        const std::string mask_path = sibling(output, ".mask", ".rlrp");
        write_image(phi.mask_image(), mask_path);
        replay << "mask = " << fs::path(mask_path).filename().string() << "\n";
    }
    write_file(sibling(output, "", ".noise"), replay.str());
    out << output << "\n";
    return kExitOk;
}

int run_decompose(const std::string& input, const PhiFlags& phi_flags, const std::string& method_str,
                  const SolverFlags& solver_flags, const std::string& reference, const std::string& csv,
                  const std::string& ext, std::ostream& out) {
    const Image b0 = read_image(input);
    const DegradationOp phi = phi_flags.build(b0.shape());
    const Method method = pick_method(method_str, phi);
    const SolverConfig cfg = solver_flags.build();

    const auto start = std::chrono::steady_clock::now();
    const DecompResult res = solve(method, b0, phi, cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const Image restored = res.restored();

    write_image(res.u, sibling(input, ".u", ext));
    write_image(res.v, sibling(input, ".v", ext));
    write_image(restored, sibling(input, ".restored", ext));

    MetricReport row;
    row.image = fs::path(input).stem().string();
    row.method = method_name(method);
    row.phi = phi.label();
    row.noise = "unknown";
    if (const std::string replay = sibling(input, "", ".noise"); fs::exists(replay)) {
        std::istringstream lines(read_file(replay));
        for (std::string line; std::getline(lines, line);) {
            if (line.starts_with("label = ")) row.noise = line.substr(8);
            if (line.starts_with("seed = ")) row.seed = parse_uint(line.substr(7), "seed");
        }
    }
    row.iterations = res.iterations;
    row.time_s = seconds;
    row.snr_db = std::numeric_limits<double>::quiet_NaN();
    row.ssim = std::numeric_limits<double>::quiet_NaN();
    if (!reference.empty()) {
        const Image ref = read_image(reference);
        row.snr_db = snr(ref, restored);
        try {
            row.ssim = ssim(ref, restored);
        } catch (const TooSmall&) {
        }
    }

    if (csv.empty()) {
        out << kMetricsCsvHeader << "\n" << to_csv_row(row) << "\n";
    } else {
        const bool fresh = !fs::exists(csv) || fs::file_size(csv) == 0;
        std::ofstream f(csv, std::ios::app);
        if (!f) throw IoError("cannot open " + csv);
        if (fresh) f << kMetricsCsvHeader << "\n";
        f << to_csv_row(row) << "\n";
        if (!f) throw IoError("write failed: " + csv);
    }
    return kExitOk;
}

int run_benchmark_cmd(const std::string& scenario_path, std::string prefix, std::size_t threads, std::ostream& out,
                      std::ostream& err) {
    const BenchmarkScenario sc = load_scenario(scenario_path);
    if (prefix.empty()) prefix = (fs::path(scenario_path).parent_path() / fs::path(scenario_path).stem()).string();
    const BenchmarkResult res = run_benchmark(sc, threads);
    write_file(prefix + ".csv", metrics_csv(res.rows));
    write_file(prefix + ".summary.csv", summary_csv(res.summary));
    write_file(prefix + ".sweep.csv", sweep_csv(res.summary));
    for (const auto& e : res.errors) err << "failed: " << e << "\n";
    out << summary_csv(res.summary);
    return kExitOk;
}

int run_diag(const std::string& input, const PhiFlags& phi_flags, const std::string& method_str,
             const SolverFlags& solver_flags, const std::string& csv, std::ostream& out) {
    const Image b0 = read_image(input);
    const DegradationOp phi = phi_flags.build(b0.shape());
    const Method method = pick_method(method_str, phi);
    SolverConfig cfg = solver_flags.build();
    cfg.record_diagnostics = true;
    const DecompResult res = solve(method, b0, phi, cfg);

    std::ostringstream table;
    table << "iteration,objective,tol,constraint_residual,grad_residual,sum_residual,"
          << (is_splitting(method) ? "q_residual" : "gap") << "\n";
    for (std::size_t k = 0; k < res.trace.size(); ++k) {
        const TraceRecord& t = res.trace[k];
        table << k + 1 << "," << format_number(t.objective) << "," << format_number(t.tol) << ","
              << format_number(t.constraint_residual) << "," << format_number(t.grad_residual) << ","
              << format_number(t.sum_residual) << "," << format_number(t.diagnostic) << "\n";
    }
    if (csv.empty()) out << table.str();
    else write_file(csv, table.str());
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cartoon/texture decomposition with a robust Huber data term"};
    app.name("rlrp");
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic ground truth (cartoon, texture, composite)");
    std::size_t size = 64, rank = 2, regions = 4, channels = 1;
    std::uint64_t synth_seed = 0;
    double weight = 0.7;
    std::string synth_prefix, synth_ext = ".rlrp";
    synth->add_option("--size", size, "Image side")->capture_default_str();
    synth->add_option("--rank", rank, "Texture rank")->capture_default_str();
    synth->add_option("--regions", regions, "Cartoon regions, background included")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
    synth->add_option("--channels", channels, "Channels")->capture_default_str();
    synth->add_option("--weight", weight, "Cartoon weight in (0,1)")->capture_default_str();
    synth->add_option("--out", synth_prefix, "Output prefix (default synth-<seed>)");
    synth->add_option("--ext", synth_ext, "Output extension (.rlrp, .pgm, .ppm)")->capture_default_str();

    // corrupt
    auto* corr = app.add_subcommand("corrupt", "Degrade an image and add heavy-tailed noise");
    std::string corr_input, corr_output, family = "student-t";
    double parameter = 2.0, intensity = 0.1;
    std::uint64_t corr_seed = 0;
    PhiFlags corr_phi;
    corr->add_option("input", corr_input, "Clean image")->required();
    corr_phi.attach(corr, false);
    corr->add_option("--noise", family, "student-t, cauchy or ged")->capture_default_str();
    corr->add_option("--df,--shape", parameter, "Student-t degrees of freedom or GED shape")->capture_default_str();
    corr->add_option("--intensity", intensity, "Noise scale")->capture_default_str();
    corr->add_option("--seed", corr_seed, "Seed of the noise and of the downsample mask")->capture_default_str();
    corr->add_option("-o,--out", corr_output, "Observation path (default <input>.corrupt.<ext>)");

    // decompose
    auto* dec = app.add_subcommand("decompose", "Split an observation into cartoon u and texture v");
    std::string dec_input, dec_method, dec_reference, dec_csv, dec_ext;
    PhiFlags dec_phi;
    SolverFlags dec_solver;
    dec->add_option("input", dec_input, "Observation")->required();
    dec_phi.attach(dec, true);
    dec->add_option("--method", dec_method, "rlrp-pps, rlrp-pdhg, clrp, clrp-pps or clrp-pdhg");
    dec_solver.attach(dec);
    dec->add_option("--reference", dec_reference, "Clean image for SNR/SSIM");
    dec->add_option("--csv", dec_csv, "Append the metrics row to this file instead of printing it");
    dec->add_option("--ext", dec_ext, "Extension of the outputs (default: the input's)");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "Run a scenario file");
    std::string bench_file, bench_prefix;
    std::size_t bench_threads = 0;
    bench->add_option("scenario", bench_file, "Scenario file")->required();
    bench->add_option("--out", bench_prefix, "Output prefix (default: scenario path without extension)");
    bench->add_option("--threads", bench_threads, "Worker count (default RLRP_THREADS or all cores)");

    // diag
    auto* diag = app.add_subcommand("diag", "Write the per-iteration trace of one solve");
    std::string diag_input, diag_method, diag_csv;
    PhiFlags diag_phi;
    SolverFlags diag_solver;
    diag->add_option("input", diag_input, "Observation")->required();
    diag_phi.attach(diag, true);
    diag->add_option("--method", diag_method, "rlrp-pps, rlrp-pdhg, clrp, clrp-pps or clrp-pdhg");
    diag_solver.attach(diag);
    diag->add_option("--csv", diag_csv, "Trace file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (synth->parsed()) {
            return run_synth(size, rank, regions, synth_seed, channels, weight, synth_prefix, synth_ext, out);
        }
        if (corr->parsed()) {
            return run_corrupt(corr_input, corr_phi, family, parameter, intensity, corr_seed, corr_output, out);
        }
        if (dec->parsed()) {
            return run_decompose(dec_input, dec_phi, dec_method, dec_solver, dec_reference, dec_csv, dec_ext, out);
        }
        if (bench->parsed()) return run_benchmark_cmd(bench_file, bench_prefix, bench_threads, out, err);
        if (diag->parsed()) return run_diag(diag_input, diag_phi, diag_method, diag_solver, diag_csv, out);
    } catch (const IoError& e) {
        err << "rlrp: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericalError& e) {
        err << "rlrp: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "rlrp: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "rlrp: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("rlrp");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rlrp
