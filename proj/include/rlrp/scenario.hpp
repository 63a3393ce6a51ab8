#ifndef RLRP_SCENARIO_HPP
#define RLRP_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlrp/config.hpp"
#include "rlrp/degradation.hpp"
#include "rlrp/image.hpp"
#include "rlrp/noise.hpp"

namespace rlrp {

/// rlrp-pps and rlrp-pdhg use the Huber loss; the clrp variants force c = +inf.
enum class Method { RlrpPps, RlrpPdhg, ClrpPps, ClrpPdhg };

/// Accepts "rlrp-pps", "rlrp-pdhg", "clrp-pps", "clrp-pdhg" and "clrp", which
/// picks the splitting solver for the identity operator and primal-dual otherwise.
Method parse_method(std::string_view name, DegradationOp::Kind phi_kind);
std::string method_name(Method m);
bool is_splitting(Method m);

/// Runs the solver behind `m`; CLRP methods override cfg.c with kQuadraticLoss.
/// Splitting methods require an identity operator.
DecompResult solve(Method m, const Image& b0, const DegradationOp& phi, SolverConfig cfg);

/// "synthetic-denoising", "natural-denoising", "mask-inpainting", "downsampling", "deblurring".
SolverConfig preset_by_name(std::string_view name);

/// Sets one solver field from text ("tau", "mu", "c", "beta", "gamma", "r",
/// "s", "sigma", "eta", "eps"/"epsilon", "max_iter", "tv"). c accepts "inf".
/// Returns false for unknown keys; throws ConfigError on malformed values.
bool set_solver_field(SolverConfig& cfg, std::string_view key, std::string_view value);

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);

/// How the degradation is built for each seed.
struct PhiSpec {
    DegradationOp::Kind kind = DegradationOp::Kind::Identity;
    double keep_probability = 0.4;
    std::size_t blur_size = 4;
    std::string mask_path;

    /// Down-sampling draws its mask from `seed`; a mask kind reads mask_path.
    DegradationOp build(std::uint64_t seed, Shape shape) const;
};

struct BenchmarkScenario {
    std::string name = "scenario";

    // Ground truth: synthetic unless `image_path` is set.
    std::size_t size = 64;
    std::size_t channels = 1;
    std::size_t rank = 2;
    std::size_t regions = 4;
    double weight = 0.7;
    std::string image_path;

    PhiSpec phi;
    NoiseSpec noise;
    /// Noise intensities for the sweep table; empty means {noise.intensity}.
    std::vector<double> intensities;

    std::vector<Method> methods;
    SolverConfig cfg;
    std::size_t repeats = 0;
    std::vector<std::uint64_t> seeds;

    /// Throws ConfigError unless repeats == seeds.size(), at least one method
    /// and seed are given, and splitting methods only meet the identity operator.
    void validate() const;
};

/// Parses the key=value scenario format:
///
///     [scenario]   name, size, channels, rank, regions, weight, image,
///                  methods (comma list), seeds (comma list), repeats
///     [phi]        kind (identity|mask|downsample|blur), keep_probability,
///                  blur_size, mask
///     [noise]      family (student-t|cauchy|ged), df, shape, intensity,
///                  intensities (comma list)
///     [solver]     preset, then any set_solver_field key
///
/// '#' starts a comment. Relative image/mask paths resolve against `base_dir`.
/// Errors name the line number.
BenchmarkScenario parse_scenario(std::string_view text, const std::string& base_dir = "");
BenchmarkScenario load_scenario(const std::string& path);

}  // namespace rlrp

#endif  // RLRP_SCENARIO_HPP
