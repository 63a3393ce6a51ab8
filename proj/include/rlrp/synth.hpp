#ifndef RLRP_SYNTH_HPP
#define RLRP_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "rlrp/image.hpp"

namespace rlrp {

/// Synthetic image with a known cartoon/texture split.
struct GroundTruth {
    Image cartoon;
    Image texture;
    Image composite;
    double w_cartoon = 0.7;
    double w_texture = 0.3;

    // Generation metadata, written to the synth manifest.
    std::size_t rank = 0;
    std::size_t regions = 0;
    std::uint64_t seed = 0;
};

/// Piecewise-constant image in [0,1]: a constant background plus
/// `regions - 1` random axis-aligned rectangles and discs, each with its own
/// gray level. Every channel has at most `regions` distinct values.
Image make_cartoon(std::size_t height, std::size_t width, std::size_t regions, std::uint64_t seed,
                   std::size_t channels = 1);

/// Sum of `rank` outer products of sinusoidal column/row profiles with
/// distinct integer frequencies, before any rescaling. Exact rank `rank`.
Image make_texture_raw(std::size_t height, std::size_t width, std::size_t rank, std::uint64_t seed,
                       std::size_t channels = 1);

/// make_texture_raw affinely rescaled to [0,1]; rank <= rank + 1 because of
/// the added constant.
Image make_texture(std::size_t height, std::size_t width, std::size_t rank, std::uint64_t seed,
                   std::size_t channels = 1);

/// sum_k rows[k] (outer) cols[k], rescaled to [0,1]. A constant result maps to 0.5.
Image texture_from_profiles(const std::vector<std::vector<double>>& rows,
                            const std::vector<std::vector<double>>& cols);

/// Affine map of every channel onto [0,1] (constant channels become 0.5).
Image rescale_unit(const Image& img);

/// composite = w_cartoon * cartoon + (1 - w_cartoon) * texture with 0 < w_cartoon < 1.
GroundTruth compose(const Image& cartoon, const Image& texture, double w_cartoon = 0.7);

/// Cartoon with `regions` regions, texture of planted rank `rank`, composed 7:3.
GroundTruth make_ground_truth(std::size_t size, std::size_t rank, std::size_t regions, std::uint64_t seed,
                              double w_cartoon = 0.7, std::size_t channels = 1);

}  // namespace rlrp

#endif  // RLRP_SYNTH_HPP
