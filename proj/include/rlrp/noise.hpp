#ifndef RLRP_NOISE_HPP
#define RLRP_NOISE_HPP

#include <cstdint>
#include <string>

#include "rlrp/degradation.hpp"
#include "rlrp/image.hpp"

namespace rlrp {

enum class NoiseFamily { StudentT, Cauchy, Ged };

/// Heavy-tailed additive noise: i.i.d. standard draws times `intensity`.
///
/// "Intensity" is a plain multiplicative scale. It is not a standard
/// deviation: Student-t with df <= 2 and Cauchy have infinite variance.
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::StudentT;
    /// Degrees of freedom (StudentT) or shape (Ged); unused for Cauchy.
    double parameter = 2.0;
    double intensity = 0.1;
    std::uint64_t seed = 0;

    static NoiseSpec student_t(double df, double intensity, std::uint64_t seed) {
        return {NoiseFamily::StudentT, df, intensity, seed};
    }
    static NoiseSpec cauchy(double intensity, std::uint64_t seed) {
        return {NoiseFamily::Cauchy, 0.0, intensity, seed};
    }
    /// shape = 1 is Laplace-like; draws are scaled to unit variance.
    static NoiseSpec ged(double shape, double intensity, std::uint64_t seed) {
        return {NoiseFamily::Ged, shape, intensity, seed};
    }

    /// e.g. "student-t(2)@0.1", "cauchy@0.05", "ged(1)@0.1".
    std::string label() const;
};

/// Field of i.i.d. draws; bitwise identical for identical (spec, shape).
/// Student-t: N(0,1) / sqrt(chi2(df)/df). Cauchy: tan(pi (U - 1/2)).
/// GED: sign * Gamma(1/p, 1)^(1/p), divided by sqrt(Gamma(3/p)/Gamma(1/p)).
Image sample_noise(const NoiseSpec& spec, Shape shape);

/// apply(phi, b) + sample_noise(spec, b.shape()). Not clamped.
Image corrupt(const Image& b, const DegradationOp& phi, const NoiseSpec& spec);

}  // namespace rlrp

#endif  // RLRP_NOISE_HPP
