#ifndef RLRP_DEGRADATION_HPP
#define RLRP_DEGRADATION_HPP

#include <cstdint>
#include <string>

#include "rlrp/image.hpp"

namespace rlrp {

/// Description of the known linear degradation Phi in b0 = Phi(u + v) + noise.
///
/// Masks (explicit or randomly sampled) act pointwise and are self-adjoint.
/// Blur is a circular convolution; its adjoint convolves with the kernel
/// rotated by 180 degrees. A random down-sampling operator is turned into a
/// fixed binary mask at construction, so applying it is deterministic.
class DegradationOp {
public:
    enum class Kind { Identity, Mask, Downsample, Blur };

    DegradationOp() = default;

    static DegradationOp identity();
    /// `mask` entries must be exactly 0 or 1.
    static DegradationOp mask(Image mask);
    /// Keeps each pixel (all channels together) with probability `keep_probability`.
    static DegradationOp downsample(double keep_probability, std::uint64_t seed, Shape shape);
    /// `kernel` must sum to 1 within 1e-12. The kernel origin is (rows/2, cols/2).
    static DegradationOp blur(RowMatrix kernel);
    /// n x n averaging kernel.
    static DegradationOp average_blur(std::size_t n);

    Kind kind() const noexcept { return kind_; }
    bool is_identity() const noexcept { return kind_ == Kind::Identity; }
    bool is_masking() const noexcept { return kind_ == Kind::Mask || kind_ == Kind::Downsample; }

    /// Binary mask for Mask/Downsample; empty otherwise.
    const Image& mask_image() const noexcept { return mask_; }
    const RowMatrix& kernel() const noexcept { return kernel_; }
    double keep_probability() const noexcept { return keep_probability_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Short label used in CSV output, e.g. "identity", "downsample(0.4)", "blur(4x4)".
    std::string label() const;

private:
    Kind kind_ = Kind::Identity;
    Image mask_;
    RowMatrix kernel_;
    double keep_probability_ = 1.0;
    std::uint64_t seed_ = 0;
};

}  // namespace rlrp

#endif  // RLRP_DEGRADATION_HPP
