#include "rlrp/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rlrp/errors.hpp"
#include "rlrp/linops.hpp"

namespace rlrp {

std::string NoiseSpec::label() const {
    std::ostringstream os;
    switch (family) {
        case NoiseFamily::StudentT: os << "student-t(" << parameter << ")"; break;
        case NoiseFamily::Cauchy: os << "cauchy"; break;
        case NoiseFamily::Ged: os << "ged(" << parameter << ")"; break;
    }
    os << "@" << intensity;
    return os.str();
}

Image sample_noise(const NoiseSpec& spec, Shape shape) {
    if (!(spec.intensity >= 0.0)) throw ConfigError("noise intensity must be nonnegative");
    if (spec.family != NoiseFamily::Cauchy && !(spec.parameter > 0.0)) {
        throw ConfigError("noise parameter must be positive");
    }
    Image out(shape);
    if (spec.intensity == 0.0) return out;

    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      0x4e4f4953u};
    std::mt19937_64 rng(seq);

    switch (spec.family) {
        case NoiseFamily::StudentT: {
            std::normal_distribution<double> normal(0.0, 1.0);
            std::chi_squared_distribution<double> chi2(spec.parameter);
            for (double& x : out.data()) {
                const double z = normal(rng);
                x = z / std::sqrt(chi2(rng) / spec.parameter);
            }
            break;
        }
        case NoiseFamily::Cauchy: {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (double& x : out.data()) x = std::tan(std::numbers::pi * (unif(rng) - 0.5));
            break;
        }
        case NoiseFamily::Ged: {
            const double p = spec.parameter;
            std::gamma_distribution<double> gamma(1.0 / p, 1.0);
            std::bernoulli_distribution coin(0.5);
            const double unit = std::sqrt(std::tgamma(3.0 / p) / std::tgamma(1.0 / p));
            for (double& x : out.data()) {
                const double mag = std::pow(gamma(rng), 1.0 / p) / unit;
                x = coin(rng) ? mag : -mag;
            }
            break;
        }
    }
    out *= spec.intensity;
    return out;
}

Image corrupt(const Image& b, const DegradationOp& phi, const NoiseSpec& spec) {
    Image out = apply(phi, b);
    out += sample_noise(spec, b.shape());
    return out;
}

}  // namespace rlrp
