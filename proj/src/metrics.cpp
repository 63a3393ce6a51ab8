#include "rlrp/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "rlrp/errors.hpp"
#include "rlrp/linops.hpp"
#include "rlrp/prox.hpp"

namespace rlrp {

double snr(const Image& reference, const Image& estimate) {
    require_same_shape(reference.shape(), estimate.shape(), "snr");
    const double ref = norm(reference);
    if (ref == 0.0) throw ZeroReference("snr: reference image is zero");
    if (reference == estimate) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(ref / distance(estimate, reference));
}

namespace {

constexpr std::size_t kWindow = 11;

std::array<double, kWindow * kWindow> gaussian_window() {
    std::array<double, kWindow * kWindow> w{};
    constexpr double sigma = 1.5;
    const double half = static_cast<double>(kWindow / 2);
    double total = 0.0;
    for (std::size_t a = 0; a < kWindow; ++a) {
        for (std::size_t b = 0; b < kWindow; ++b) {
            const double da = static_cast<double>(a) - half;
            const double db = static_cast<double>(b) - half;
            w[a * kWindow + b] = std::exp(-(da * da + db * db) / (2.0 * sigma * sigma));
            total += w[a * kWindow + b];
        }
    }
    for (double& x : w) x /= total;
    return w;
}

}  // namespace

double ssim(const Image& reference, const Image& estimate) {
    require_same_shape(reference.shape(), estimate.shape(), "ssim");
    const std::size_t h = reference.height();
    const std::size_t w = reference.width();
    if (h < kWindow || w < kWindow) throw TooSmall("ssim needs both dimensions >= 11");

    static const auto window = gaussian_window();
    constexpr double c1 = (0.01 * 1.0) * (0.01 * 1.0);
    constexpr double c2 = (0.03 * 1.0) * (0.03 * 1.0);

    double channel_sum = 0.0;
    for (std::size_t c = 0; c < reference.channels(); ++c) {
        double map_sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i0 = 0; i0 + kWindow <= h; ++i0) {
            for (std::size_t j0 = 0; j0 + kWindow <= w; ++j0) {
                double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
                for (std::size_t a = 0; a < kWindow; ++a) {
                    for (std::size_t b = 0; b < kWindow; ++b) {
                        const double wt = window[a * kWindow + b];
                        const double x = reference(c, i0 + a, j0 + b);
                        const double y = estimate(c, i0 + a, j0 + b);
                        mx += wt * x;
                        my += wt * y;
                        sxx += wt * (x * x);
                        syy += wt * (y * y);
                        sxy += wt * (x * y);
                    }
                }
                const double vx = sxx - mx * mx;
                const double vy = syy - my * my;
                const double cov = sxy - mx * my;
                const double num = (2.0 * (mx * my) + c1) * (2.0 * cov + c2);
                const double den = ((mx * mx + my * my) + c1) * ((vx + vy) + c2);
                map_sum += num / den;
                ++count;
            }
        }
        channel_sum += map_sum / static_cast<double>(count);
    }
    return channel_sum / static_cast<double>(reference.channels());
}

double tol(const Image& prev_u, const Image& prev_v, const Image& cur_u, const Image& cur_v) {
    const double du = distance(cur_u, prev_u) / (norm(prev_u) + 1.0);
    const double dv = distance(cur_v, prev_v) / (norm(prev_v) + 1.0);
    return std::max(du, dv);
}

double total_variation(const Image& u, TvNorm norm) {
    const GradientField g = grad(u);
    auto dx = g.dx(), dy = g.dy();
    double s = 0.0;
    if (norm == TvNorm::Isotropic) {
        for (std::size_t k = 0; k < g.size(); ++k) s += std::hypot(dx[k], dy[k]);
    } else {
        for (std::size_t k = 0; k < g.size(); ++k) s += std::abs(dx[k]) + std::abs(dy[k]);
    }
    return s;
}

ObjectiveTerms objective_terms(const Image& u, const Image& v, const Image& b0, const DegradationOp& phi,
                               const SolverConfig& cfg) {
    require_same_shape(u.shape(), b0.shape(), "objective u");
    require_same_shape(v.shape(), b0.shape(), "objective v");
    Image residual = apply(phi, u + v);
    residual -= b0;
    ObjectiveTerms t;
    t.tv = cfg.tau * total_variation(u, cfg.tv);
    t.nuclear = cfg.mu * prox::nuclear_norm(v);
    t.data = prox::huber_value(residual.data(), cfg.c);
    return t;
}

double objective(const Image& u, const Image& v, const Image& b0, const DegradationOp& phi,
                 const SolverConfig& cfg) {
    return objective_terms(u, v, b0, phi, cfg).total();
}

double objective_with_nuclear(const Image& u, double nuclear_norm_v, const Image& residual,
                              const SolverConfig& cfg) {
    return cfg.tau * total_variation(u, cfg.tv) + cfg.mu * nuclear_norm_v +
           prox::huber_value(residual.data(), cfg.c);
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string to_csv_row(const MetricReport& r) {
    std::string row;
    row += r.image + "," + r.method + "," + r.phi + "," + r.noise + "," + std::to_string(r.seed) + ",";
    if (r.failed) {
        row += "nan,nan,";
    } else {
        row += format_number(r.snr_db) + "," + format_number(r.ssim) + ",";
    }
    row += std::to_string(r.iterations) + "," + format_number(r.time_s);
    return row;
}

}  // namespace rlrp
