// Reference implementations written straight from the definitions, for
// checking the library. None of them calls into the code under test.
#ifndef RLRP_TESTS_ORACLES_HPP
#define RLRP_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "rlrp/image.hpp"

namespace oracle {

using Dense = Eigen::MatrixXd;

inline rlrp::Image random_image(rlrp::Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    rlrp::Image img(shape);
    for (double& x : img.data()) x = d(rng);
    return img;
}

inline rlrp::GradientField random_field(rlrp::Shape shape, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    rlrp::GradientField f(shape);
    for (double& x : f.dx()) x = d(rng);
    for (double& x : f.dy()) x = d(rng);
    return f;
}

inline double huber(double x, double c) {
    const double ax = std::abs(x);
    return ax <= c ? 0.5 * x * x : c * ax - 0.5 * c * c;
}

/// Golden-section minimum of a unimodal f on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi, int iterations = 200) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int k = 0; k < iterations && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++k) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// argmin_z huber(z, c) + (z - a)^2 / (2 beta) by direct search; the minimiser
/// lies between 0 and a.
inline double huber_prox(double a, double beta, double c) {
    auto f = [&](double z) { return huber(z, c) + (z - a) * (z - a) / (2.0 * beta); };
    return golden_min(f, std::min(0.0, a) - 1e-3, std::max(0.0, a) + 1e-3);
}

/// Periodic forward differences as a dense (2hw x hw) matrix: rows [dx; dy]
/// with dx along columns j and dy along rows i, pixel index i*w + j.
inline Dense grad_matrix(std::size_t h, std::size_t w) {
    const auto n = static_cast<Eigen::Index>(h * w);
    Dense d = Dense::Zero(2 * n, n);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            const auto k = static_cast<Eigen::Index>(i * w + j);
            d(k, static_cast<Eigen::Index>(i * w + (j + 1) % w)) += 1.0;
            d(k, k) -= 1.0;
            d(n + k, static_cast<Eigen::Index>(((i + 1) % h) * w + j)) += 1.0;
            d(n + k, k) -= 1.0;
        }
    }
    return d;
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix: (values, vectors).
inline std::pair<Eigen::VectorXd, Dense> jacobi_eigen(Dense a) {
    const Eigen::Index n = a.rows();
    Dense v = Dense::Identity(n, n);
    const double scale = a.norm();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (std::sqrt(off) <= 1e-15 * scale) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    return {a.diagonal(), v};
}

/// Singular values of a from the eigenvalues of a^T a.
inline Eigen::VectorXd singular_values(const Dense& a) {
    Eigen::VectorXd ev = jacobi_eigen(a.transpose() * a).first;
    for (double& x : ev) x = std::sqrt(std::max(0.0, x));
    return ev;
}

inline double nuclear_norm(const Dense& a) { return singular_values(a).sum(); }

/// Nuclear-norm prox through a^T a = V L V^T: a V diag(max(0, 1 - t / sqrt(l))) V^T.
inline Dense svt(const Dense& a, double t) {
    const auto [ev, v] = jacobi_eigen(a.transpose() * a);
    Eigen::VectorXd f(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        const double s = std::sqrt(std::max(0.0, ev(k)));
        f(k) = s > t ? 1.0 - t / s : 0.0;
    }
    return a * v * f.asDiagonal() * v.transpose();
}

/// 20 log10(|ref| / |est - ref|) accumulated in long double.
inline double snr(const rlrp::Image& ref, const rlrp::Image& est) {
    long double num = 0.0L, den = 0.0L;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        const long double r = ref[k];
        const long double e = static_cast<long double>(est[k]) - r;
        num += r * r;
        den += e * e;
    }
    return static_cast<double>(10.0L * std::log10(num / den));
}

}  // namespace oracle

#endif  // RLRP_TESTS_ORACLES_HPP
