#include "rlrp/linops.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <vector>

#include <fftw3.h>

#include "rlrp/errors.hpp"

namespace rlrp {

GradientField grad(const Image& img) {
    const Shape& s = img.shape();
    GradientField f(s);
    auto dx = f.dx();
    auto dy = f.dy();
    for (std::size_t c = 0; c < s.channels; ++c) {
        const std::size_t base = c * s.plane();
        for (std::size_t i = 0; i < s.height; ++i) {
            const std::size_t down = (i + 1 == s.height) ? 0 : i + 1;
            for (std::size_t j = 0; j < s.width; ++j) {
                const std::size_t right = (j + 1 == s.width) ? 0 : j + 1;
                const std::size_t k = base + i * s.width + j;
                dx[k] = img[base + i * s.width + right] - img[k];
                dy[k] = img[base + down * s.width + j] - img[k];
            }
        }
    }
    return f;
}

Image grad_adjoint(const GradientField& f) {
    const Shape& s = f.shape();
    Image out(s);
    auto dx = f.dx();
    auto dy = f.dy();
    for (std::size_t c = 0; c < s.channels; ++c) {
        const std::size_t base = c * s.plane();
        for (std::size_t i = 0; i < s.height; ++i) {
            const std::size_t up = (i == 0) ? s.height - 1 : i - 1;
            for (std::size_t j = 0; j < s.width; ++j) {
                const std::size_t left = (j == 0) ? s.width - 1 : j - 1;
                const std::size_t k = base + i * s.width + j;
                out[k] = (dx[base + i * s.width + left] - dx[k]) + (dy[base + up * s.width + j] - dy[k]);
            }
        }
    }
    return out;
}

Image neg_laplacian(const Image& img) {
    const Shape& s = img.shape();
    Image out(s);
    for (std::size_t c = 0; c < s.channels; ++c) {
        for (std::size_t i = 0; i < s.height; ++i) {
            const std::size_t up = (i == 0) ? s.height - 1 : i - 1;
            const std::size_t down = (i + 1 == s.height) ? 0 : i + 1;
            for (std::size_t j = 0; j < s.width; ++j) {
                const std::size_t left = (j == 0) ? s.width - 1 : j - 1;
                const std::size_t right = (j + 1 == s.width) ? 0 : j + 1;
                out(c, i, j) = 4.0 * img(c, i, j) - img(c, up, j) - img(c, down, j) -
                               img(c, i, left) - img(c, i, right);
            }
        }
    }
    return out;
}

namespace {

std::size_t wrap(std::ptrdiff_t k, std::size_t n) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    k %= m;
    return static_cast<std::size_t>(k < 0 ? k + m : k);
}

// sign = +1: out(i,j) = sum k(a,b) x(i - (a-ah), j - (b-aw))  (convolution)
// sign = -1: out(i,j) = sum k(a,b) x(i + (a-ah), j + (b-aw))  (its adjoint)
Image circular_filter(const RowMatrix& kernel, const Image& img, int sign) {
    const Shape& s = img.shape();
    if (static_cast<std::size_t>(kernel.rows()) > s.height ||
        static_cast<std::size_t>(kernel.cols()) > s.width) {
        throw ShapeMismatch("blur kernel larger than image");
    }
    const std::ptrdiff_t ah = kernel.rows() / 2;
    const std::ptrdiff_t aw = kernel.cols() / 2;
    Image out(s);
    for (std::size_t c = 0; c < s.channels; ++c) {
        for (std::size_t i = 0; i < s.height; ++i) {
            for (std::size_t j = 0; j < s.width; ++j) {
                double acc = 0.0;
                for (Eigen::Index a = 0; a < kernel.rows(); ++a) {
                    const std::size_t ii =
                        wrap(static_cast<std::ptrdiff_t>(i) - sign * (a - ah), s.height);
                    for (Eigen::Index b = 0; b < kernel.cols(); ++b) {
                        const std::size_t jj =
                            wrap(static_cast<std::ptrdiff_t>(j) - sign * (b - aw), s.width);
                        acc += kernel(a, b) * img(c, ii, jj);
                    }
                }
                out(c, i, j) = acc;
            }
        }
    }
    return out;
}

Image apply_mask(const Image& mask, const Image& img) {
    require_same_shape(mask.shape(), img.shape(), "mask");
    Image out(img.shape());
    for (std::size_t k = 0; k < img.size(); ++k) out[k] = mask[k] * img[k];
    return out;
}

}  // namespace

Image apply(const DegradationOp& op, const Image& img) {
    switch (op.kind()) {
        case DegradationOp::Kind::Identity: return img;
        case DegradationOp::Kind::Mask:
        case DegradationOp::Kind::Downsample: return apply_mask(op.mask_image(), img);
        case DegradationOp::Kind::Blur: return circular_filter(op.kernel(), img, +1);
    }
    return img;
}

Image apply_adjoint(const DegradationOp& op, const Image& img) {
    if (op.kind() == DegradationOp::Kind::Blur) return circular_filter(op.kernel(), img, -1);
    return apply(op, img);
}

// ---------------------------------------------------------------------------

namespace {

// The FFTW planner is not thread-safe; execution of existing plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

}  // namespace

struct GradGramSolver::Plans {
    Shape shape;
    std::size_t spectrum_width;  // W/2 + 1
    std::vector<double> inverse_symbol;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

GradGramSolver::GradGramSolver(Shape shape) : plans_(std::make_unique<Plans>()) {
    if (shape.size() == 0) throw ShapeMismatch("empty shape");
    plans_->shape = shape;
    const std::size_t h = shape.height;
    const std::size_t w = shape.width;
    const std::size_t wc = w / 2 + 1;
    plans_->spectrum_width = wc;

    // 1/(1 + |eigenvalue of grad^T grad|) scaled by the unnormalized FFT round trip.
    plans_->inverse_symbol.resize(h * wc);
    const double scale = 1.0 / static_cast<double>(h * w);
    for (std::size_t p = 0; p < h; ++p) {
        const double sp = std::sin(std::numbers::pi * static_cast<double>(p) / static_cast<double>(h));
        for (std::size_t q = 0; q < wc; ++q) {
            const double sq = std::sin(std::numbers::pi * static_cast<double>(q) / static_cast<double>(w));
            plans_->inverse_symbol[p * wc + q] = scale / (1.0 + 4.0 * sp * sp + 4.0 * sq * sq);
        }
    }

    FftwBuffer real(sizeof(double) * h * w);
    FftwBuffer spec(sizeof(fftw_complex) * h * wc);
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_r2c_2d(static_cast<int>(h), static_cast<int>(w),
                                           static_cast<double*>(real.ptr),
                                           static_cast<fftw_complex*>(spec.ptr), FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_c2r_2d(static_cast<int>(h), static_cast<int>(w),
                                            static_cast<fftw_complex*>(spec.ptr),
                                            static_cast<double*>(real.ptr), FFTW_ESTIMATE);
    if (!plans_->forward || !plans_->backward) throw NumericalError("FFTW planning failed");
}

GradGramSolver::~GradGramSolver() = default;
GradGramSolver::GradGramSolver(GradGramSolver&&) noexcept = default;
GradGramSolver& GradGramSolver::operator=(GradGramSolver&&) noexcept = default;

const Shape& GradGramSolver::shape() const noexcept { return plans_->shape; }

Image GradGramSolver::solve(const Image& rhs) const {
    const Shape& s = plans_->shape;
    require_same_shape(s, rhs.shape(), "spectral solve");
    const std::size_t n = s.plane();
    const std::size_t nspec = s.height * plans_->spectrum_width;

    FftwBuffer real_buf(sizeof(double) * n);
    FftwBuffer spec_buf(sizeof(fftw_complex) * nspec);
    auto* real = static_cast<double*>(real_buf.ptr);
    auto* spec = static_cast<fftw_complex*>(spec_buf.ptr);

    Image out(s);
    for (std::size_t c = 0; c < s.channels; ++c) {
        auto in_ch = rhs.channel(c);
        std::copy(in_ch.begin(), in_ch.end(), real);
        fftw_execute_dft_r2c(plans_->forward, real, spec);
        for (std::size_t k = 0; k < nspec; ++k) {
            spec[k][0] *= plans_->inverse_symbol[k];
            spec[k][1] *= plans_->inverse_symbol[k];
        }
        fftw_execute_dft_c2r(plans_->backward, spec, real);
        auto out_ch = out.channel(c);
        std::copy(real, real + n, out_ch.begin());
    }
    return out;
}

Image solve_grad_gram_plus_identity(const Image& rhs) { return GradGramSolver(rhs.shape()).solve(rhs); }

// ---------------------------------------------------------------------------

StackedOperator::StackedOperator(DegradationOp phi, Shape shape) : phi_(std::move(phi)), shape_(shape) {
    if (phi_.is_masking()) require_same_shape(phi_.mask_image().shape(), shape_, "stacked operator mask");
}

std::pair<GradientField, Image> StackedOperator::apply(const Image& u, const Image& v) const {
    require_same_shape(u.shape(), shape_, "stacked operator u");
    require_same_shape(v.shape(), shape_, "stacked operator v");
    return {grad(u), rlrp::apply(phi_, u + v)};
}

std::pair<Image, Image> StackedOperator::apply_adjoint(const GradientField& g, const Image& w) const {
    Image phit = rlrp::apply_adjoint(phi_, w);
    Image first = grad_adjoint(g);
    first += phit;
    return {std::move(first), std::move(phit)};
}

namespace {

Image random_image(Shape shape, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Image x(shape);
    for (double& v : x.data()) v = normal(rng);
    return x;
}

}  // namespace

double estimate_norm_sq(const StackedOperator& k, int iterations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Image u = random_image(k.shape(), rng);
    Image v = random_image(k.shape(), rng);
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double xn = std::sqrt(squared_norm(u) + squared_norm(v));
        if (xn == 0.0) return estimate;
        u *= 1.0 / xn;
        v *= 1.0 / xn;
        auto [g, w] = k.apply(u, v);
        estimate = squared_norm(g) + squared_norm(w);
        std::tie(u, v) = k.apply_adjoint(g, w);
    }
    return estimate;
}

double estimate_grad_norm_sq(Shape shape, int iterations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Image u = random_image(shape, rng);
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double xn = norm(u);
        if (xn == 0.0) return estimate;
        u *= 1.0 / xn;
        GradientField g = grad(u);
        estimate = squared_norm(g);
        u = grad_adjoint(g);
    }
    return estimate;
}

}  // namespace rlrp
