#include "rlrp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rlrp/errors.hpp"

namespace rlrp {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
    return std::mt19937_64(seq);
}

// n distinct integers from [lo, hi], widening hi when the range is too small.
std::vector<int> distinct_frequencies(std::size_t n, int lo, int hi, std::mt19937_64& rng) {
    hi = std::max(hi, lo + static_cast<int>(n) - 1);
    std::vector<int> pool;
    for (int f = lo; f <= hi; ++f) pool.push_back(f);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(n);
    return pool;
}

}  // namespace

Image make_cartoon(std::size_t height, std::size_t width, std::size_t regions, std::uint64_t seed,
                   std::size_t channels) {
    if (regions < 1) throw ConfigError("regions must be at least 1");
    auto rng = make_rng(seed, 0x43415254u);
    std::uniform_real_distribution<double> level(0.05, 0.95);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Image img(height, width, channels);
    std::vector<double> background(channels);
    for (auto& b : background) b = level(rng);
    for (std::size_t c = 0; c < channels; ++c) {
        for (double& x : img.channel(c)) x = background[c];
    }

    const double hd = static_cast<double>(height);
    const double wd = static_cast<double>(width);
    const double small = static_cast<double>(std::min(height, width));
    for (std::size_t r = 1; r < regions; ++r) {
        std::vector<double> gray(channels);
        for (std::size_t c = 0; c < channels; ++c) {
            do {
                gray[c] = level(rng);
            } while (std::abs(gray[c] - background[c]) < 0.2);
        }
        const bool disc = unit(rng) < 0.5;
        const double ci = hd * (0.15 + 0.7 * unit(rng));
        const double cj = wd * (0.15 + 0.7 * unit(rng));
        const double ext_i = small * (0.12 + 0.18 * unit(rng));
        const double ext_j = disc ? ext_i : small * (0.12 + 0.18 * unit(rng));
        for (std::size_t i = 0; i < height; ++i) {
            for (std::size_t j = 0; j < width; ++j) {
                const double di = static_cast<double>(i) + 0.5 - ci;
                const double dj = static_cast<double>(j) + 0.5 - cj;
                const bool inside = disc ? (di * di + dj * dj <= ext_i * ext_i)
                                         : (std::abs(di) <= ext_i && std::abs(dj) <= ext_j);
                if (!inside) continue;
                for (std::size_t c = 0; c < channels; ++c) img(c, i, j) = gray[c];
            }
        }
    }
    return img;
}

Image make_texture_raw(std::size_t height, std::size_t width, std::size_t rank, std::uint64_t seed,
                       std::size_t channels) {
    if (rank < 1 || rank > std::min(height, width)) throw ConfigError("rank must be in [1, min(h, w)]");
    auto rng = make_rng(seed, 0x54455854u);
    std::uniform_real_distribution<double> amp(0.5, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const int max_freq_i = std::max(3, static_cast<int>(height / 8));
    const int max_freq_j = std::max(3, static_cast<int>(width / 8));

    Image img(height, width, channels);
    for (std::size_t c = 0; c < channels; ++c) {
        const auto fi = distinct_frequencies(rank, 2, max_freq_i, rng);
        const auto fj = distinct_frequencies(rank, 2, max_freq_j, rng);
        for (std::size_t k = 0; k < rank; ++k) {
            const double a = amp(rng);
            const double pi_ = phase(rng);
            const double pj = phase(rng);
            std::vector<double> col(height), row(width);
            for (std::size_t i = 0; i < height; ++i) {
                col[i] = std::cos(2.0 * std::numbers::pi * fi[k] * static_cast<double>(i) / static_cast<double>(height) + pi_);
            }
            for (std::size_t j = 0; j < width; ++j) {
                row[j] = std::cos(2.0 * std::numbers::pi * fj[k] * static_cast<double>(j) / static_cast<double>(width) + pj);
            }
            for (std::size_t i = 0; i < height; ++i) {
                for (std::size_t j = 0; j < width; ++j) img(c, i, j) += a * col[i] * row[j];
            }
        }
    }
    return img;
}

Image rescale_unit(const Image& img) {
    Image out(img.shape());
    for (std::size_t c = 0; c < img.channels(); ++c) {
        auto in = img.channel(c);
        auto dst = out.channel(c);
        const auto [lo, hi] = std::minmax_element(in.begin(), in.end());
        const double range = *hi - *lo;
        for (std::size_t k = 0; k < in.size(); ++k) dst[k] = range > 0.0 ? (in[k] - *lo) / range : 0.5;
    }
    return out;
}

Image make_texture(std::size_t height, std::size_t width, std::size_t rank, std::uint64_t seed,
                   std::size_t channels) {
    return rescale_unit(make_texture_raw(height, width, rank, seed, channels));
}

Image texture_from_profiles(const std::vector<std::vector<double>>& rows,
                            const std::vector<std::vector<double>>& cols) {
    if (rows.empty() || rows.size() != cols.size()) throw ShapeMismatch("profile lists must match and be nonempty");
    const std::size_t h = rows.front().size();
    const std::size_t w = cols.front().size();
    Image img(h, w, 1);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != h || cols[k].size() != w) throw ShapeMismatch("profile lengths differ");
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < w; ++j) img(0, i, j) += rows[k][i] * cols[k][j];
        }
    }
    return rescale_unit(img);
}

GroundTruth compose(const Image& cartoon, const Image& texture, double w_cartoon) {
    require_same_shape(cartoon.shape(), texture.shape(), "compose");
    if (!(w_cartoon > 0.0 && w_cartoon < 1.0)) throw ConfigError("w_cartoon must be in (0,1)");
    GroundTruth gt;
    gt.cartoon = cartoon;
    gt.texture = texture;
    gt.w_cartoon = w_cartoon;
    gt.w_texture = 1.0 - w_cartoon;
    gt.composite = Image(cartoon.shape());
    for (std::size_t k = 0; k < cartoon.size(); ++k) {
        gt.composite[k] = gt.w_cartoon * cartoon[k] + gt.w_texture * texture[k];
    }
    return gt;
}

GroundTruth make_ground_truth(std::size_t size, std::size_t rank, std::size_t regions, std::uint64_t seed,
                              double w_cartoon, std::size_t channels) {
    GroundTruth gt = compose(make_cartoon(size, size, regions, seed, channels),
                             make_texture(size, size, rank, seed, channels), w_cartoon);
    gt.rank = rank;
    gt.regions = regions;
    gt.seed = seed;
    return gt;
}

}  // namespace rlrp
