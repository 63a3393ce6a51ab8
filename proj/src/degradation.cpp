#include "rlrp/degradation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "rlrp/errors.hpp"

namespace rlrp {

DegradationOp DegradationOp::identity() { return DegradationOp{}; }

DegradationOp DegradationOp::mask(Image mask) {
    for (double m : mask.data()) {
        if (m != 0.0 && m != 1.0) throw ConfigError("mask entries must be exactly 0 or 1");
    }
    DegradationOp op;
    op.kind_ = Kind::Mask;
    op.mask_ = std::move(mask);
    return op;
}

DegradationOp DegradationOp::downsample(double keep_probability, std::uint64_t seed, Shape shape) {
    if (!(keep_probability > 0.0 && keep_probability <= 1.0)) {
        throw ConfigError("keep_probability must be in (0,1]");
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x5a4d504cu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Image m(shape);
    for (std::size_t i = 0; i < shape.height; ++i) {
        for (std::size_t j = 0; j < shape.width; ++j) {
            const double keep = unif(rng) < keep_probability ? 1.0 : 0.0;
            for (std::size_t c = 0; c < shape.channels; ++c) m(c, i, j) = keep;
        }
    }
    DegradationOp op;
    op.kind_ = Kind::Downsample;
    op.mask_ = std::move(m);
    op.keep_probability_ = keep_probability;
    op.seed_ = seed;
    return op;
}

DegradationOp DegradationOp::blur(RowMatrix kernel) {
    if (kernel.size() == 0) throw ShapeMismatch("blur kernel is empty");
    if (std::abs(kernel.sum() - 1.0) > 1e-12) throw ConfigError("blur kernel must sum to 1");
    DegradationOp op;
    op.kind_ = Kind::Blur;
    op.kernel_ = std::move(kernel);
    return op;
}

DegradationOp DegradationOp::average_blur(std::size_t n) {
    if (n == 0) throw ConfigError("blur size must be positive");
    const auto k = static_cast<Eigen::Index>(n);
    return blur(RowMatrix::Constant(k, k, 1.0 / static_cast<double>(n * n)));
}

std::string DegradationOp::label() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Identity: os << "identity"; break;
        case Kind::Mask: os << "mask"; break;
        case Kind::Downsample: os << "downsample(" << keep_probability_ << ")"; break;
        case Kind::Blur: os << "blur(" << kernel_.rows() << "x" << kernel_.cols() << ")"; break;
    }
    return os.str();
}

}  // namespace rlrp
