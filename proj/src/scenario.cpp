#include "rlrp/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>

#include "rlrp/errors.hpp"
#include "rlrp/image_io.hpp"
#include "rlrp/pdhg.hpp"
#include "rlrp/pps.hpp"

namespace rlrp {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

DegradationOp::Kind parse_phi_kind(std::string_view name) {
    const std::string n = lower(name);
    if (n == "identity") return DegradationOp::Kind::Identity;
    if (n == "mask") return DegradationOp::Kind::Mask;
    if (n == "downsample") return DegradationOp::Kind::Downsample;
    if (n == "blur") return DegradationOp::Kind::Blur;
    throw ConfigError("unknown phi kind '" + std::string(name) + "'");
}

NoiseFamily parse_family(std::string_view name) {
    const std::string n = lower(name);
    if (n == "student-t" || n == "t") return NoiseFamily::StudentT;
    if (n == "cauchy") return NoiseFamily::Cauchy;
    if (n == "ged") return NoiseFamily::Ged;
    throw ConfigError("unknown noise family '" + std::string(name) + "'");
}

std::string resolve(const std::string& base_dir, std::string_view path) {
    std::filesystem::path p{std::string(path)};
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return p.string();
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    const std::string n = lower(text);
    if (n == "inf" || n == "+inf" || n == "infinity") return kQuadraticLoss;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError("bad number for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    text = trim(text);
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError("bad integer for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

Method parse_method(std::string_view name, DegradationOp::Kind phi_kind) {
    const std::string n = lower(name);
    if (n == "rlrp-pps") return Method::RlrpPps;
    if (n == "rlrp-pdhg") return Method::RlrpPdhg;
    if (n == "clrp-pps") return Method::ClrpPps;
    if (n == "clrp-pdhg") return Method::ClrpPdhg;
    if (n == "clrp") return phi_kind == DegradationOp::Kind::Identity ? Method::ClrpPps : Method::ClrpPdhg;
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::RlrpPps: return "rlrp-pps";
        case Method::RlrpPdhg: return "rlrp-pdhg";
        case Method::ClrpPps: return "clrp-pps";
        case Method::ClrpPdhg: return "clrp-pdhg";
    }
    return "?";
}

bool is_splitting(Method m) { return m == Method::RlrpPps || m == Method::ClrpPps; }

DecompResult solve(Method m, const Image& b0, const DegradationOp& phi, SolverConfig cfg) {
    if (m == Method::ClrpPps || m == Method::ClrpPdhg) cfg.c = kQuadraticLoss;
    if (is_splitting(m)) {
        if (!phi.is_identity()) throw ConfigError(method_name(m) + " requires phi = identity");
        return pps_solve(b0, cfg);
    }
    return pdhg_solve(b0, phi, cfg);
}

SolverConfig preset_by_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "synthetic-denoising") return SolverConfig::synthetic_denoising();
    if (n == "natural-denoising") return SolverConfig::natural_denoising();
    if (n == "mask-inpainting") return SolverConfig::mask_inpainting();
    if (n == "downsampling") return SolverConfig::downsampling();
    if (n == "deblurring") return SolverConfig::deblurring();
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

bool set_solver_field(SolverConfig& cfg, std::string_view key, std::string_view value) {
    const std::string k = lower(key);
    if (k == "tau") cfg.tau = parse_double(value, key);
    else if (k == "mu") cfg.mu = parse_double(value, key);
    else if (k == "c") cfg.c = parse_double(value, key);
    else if (k == "beta") cfg.beta = parse_double(value, key);
    else if (k == "gamma") cfg.gamma = parse_double(value, key);
    else if (k == "r") cfg.r = parse_double(value, key);
    else if (k == "s") cfg.s = parse_double(value, key);
    else if (k == "sigma") cfg.sigma = parse_double(value, key);
    else if (k == "eta") cfg.eta = parse_double(value, key);
    else if (k == "eps" || k == "epsilon") cfg.epsilon = parse_double(value, key);
    else if (k == "max_iter") cfg.max_iter = static_cast<int>(parse_uint(value, key));
    else if (k == "tv") {
        const std::string v = lower(trim(value));
        if (v == "isotropic") cfg.tv = TvNorm::Isotropic;
        else if (v == "anisotropic") cfg.tv = TvNorm::Anisotropic;
        else throw ConfigError("tv must be isotropic or anisotropic");
    } else {
        return false;
    }
    return true;
}

DegradationOp PhiSpec::build(std::uint64_t seed, Shape shape) const {
    switch (kind) {
        case DegradationOp::Kind::Identity: return DegradationOp::identity();
        case DegradationOp::Kind::Mask: {
            if (mask_path.empty()) throw ConfigError("phi kind mask needs a mask file");
            return DegradationOp::mask(read_image(mask_path));
        }
        case DegradationOp::Kind::Downsample: return DegradationOp::downsample(keep_probability, seed, shape);
        case DegradationOp::Kind::Blur: return DegradationOp::average_blur(blur_size);
    }
    return DegradationOp::identity();
}

void BenchmarkScenario::validate() const {
    if (methods.empty()) throw ConfigError("scenario lists no methods");
    if (seeds.empty()) throw ConfigError("scenario lists no seeds");
    if (repeats != seeds.size()) {
        throw ConfigError("repeats (" + std::to_string(repeats) + ") must equal the number of seeds (" +
                          std::to_string(seeds.size()) + ")");
    }
    for (Method m : methods) {
        if (is_splitting(m) && phi.kind != DegradationOp::Kind::Identity) {
            throw ConfigError(method_name(m) + " requires phi = identity");
        }
        validate_config(cfg, is_splitting(m) ? Algorithm::Pps : Algorithm::Pdhg);
    }
    if (image_path.empty()) {
        if (size == 0 || channels == 0) throw ConfigError("size and channels must be positive");
        if (!(weight > 0.0 && weight < 1.0)) throw ConfigError("weight must be in (0,1)");
    }
    for (double x : intensities) {
        if (!(x >= 0.0)) throw ConfigError("noise intensities must be nonnegative");
    }
}

BenchmarkScenario parse_scenario(std::string_view text, const std::string& base_dir) {
    BenchmarkScenario sc;
    std::string section;
    std::vector<std::string> method_names;
    std::optional<SolverConfig> preset;
    std::vector<std::pair<std::string, std::string>> solver_fields;
    bool repeats_set = false;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section != "scenario" && section != "phi" && section != "noise" && section != "solver") {
                throw ConfigError(where + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        try {
            if (section == "scenario") {
                if (key == "name") sc.name = std::string(value);
                else if (key == "size") sc.size = parse_uint(value, key);
                else if (key == "channels") sc.channels = parse_uint(value, key);
                else if (key == "rank") sc.rank = parse_uint(value, key);
                else if (key == "regions") sc.regions = parse_uint(value, key);
                else if (key == "weight") sc.weight = parse_double(value, key);
                else if (key == "image") sc.image_path = resolve(base_dir, value);
                else if (key == "repeats") {
                    sc.repeats = parse_uint(value, key);
                    repeats_set = true;
                } else if (key == "seeds") {
                    for (auto item : split_list(value)) sc.seeds.push_back(parse_uint(item, key));
                } else if (key == "methods") {
                    for (auto item : split_list(value)) method_names.emplace_back(item);
                } else {
                    throw ConfigError("unknown key '" + key + "'");
                }
            } else if (section == "phi") {
                if (key == "kind") sc.phi.kind = parse_phi_kind(value);
                else if (key == "keep_probability") sc.phi.keep_probability = parse_double(value, key);
                else if (key == "blur_size") sc.phi.blur_size = parse_uint(value, key);
                else if (key == "mask") sc.phi.mask_path = resolve(base_dir, value);
                else throw ConfigError("unknown key '" + key + "'");
            } else if (section == "noise") {
                if (key == "family") sc.noise.family = parse_family(value);
                else if (key == "df" || key == "shape") sc.noise.parameter = parse_double(value, key);
                else if (key == "intensity") sc.noise.intensity = parse_double(value, key);
                else if (key == "intensities") {
                    for (auto item : split_list(value)) sc.intensities.push_back(parse_double(item, key));
                } else {
                    throw ConfigError("unknown key '" + key + "'");
                }
            } else if (section == "solver") {
                if (key == "preset") {
                    preset = preset_by_name(value);
                } else {
                    SolverConfig probe;
                    if (!set_solver_field(probe, key, value)) throw ConfigError("unknown key '" + key + "'");
                    solver_fields.emplace_back(key, std::string(value));
                }
            } else {
                throw ConfigError("key outside of a section");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }

    // Explicit fields override the preset regardless of their order in the file.
    sc.cfg = preset.value_or(SolverConfig{});
    for (const auto& [k, v] : solver_fields) set_solver_field(sc.cfg, k, v);
    for (const auto& n : method_names) sc.methods.push_back(parse_method(n, sc.phi.kind));
    if (!repeats_set) sc.repeats = sc.seeds.size();
    sc.validate();
    return sc;
}

BenchmarkScenario load_scenario(const std::string& path) {
    const std::string text = read_file(path);
    return parse_scenario(text, std::filesystem::path(path).parent_path().string());
}

}  // namespace rlrp
