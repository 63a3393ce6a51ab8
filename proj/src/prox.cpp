#include "rlrp/prox.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "rlrp/errors.hpp"

namespace rlrp::prox {

namespace {

double sign(double a) { return (a > 0.0) - (a < 0.0); }

}  // namespace

double shrink(double a, double t) { return sign(a) * std::max(std::abs(a) - t, 0.0); }

std::vector<double> shrink(std::span<const double> a, double t) {
    std::vector<double> out(a.size());
    std::transform(a.begin(), a.end(), out.begin(), [t](double x) { return shrink(x, t); });
    return out;
}

GradientField shrink(const GradientField& f, double t, TvNorm norm) {
    GradientField out(f.shape());
    auto ix = f.dx(), iy = f.dy();
    auto ox = out.dx(), oy = out.dy();
    if (norm == TvNorm::Anisotropic) {
        for (std::size_t k = 0; k < f.size(); ++k) {
            ox[k] = shrink(ix[k], t);
            oy[k] = shrink(iy[k], t);
        }
        return out;
    }
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double mag = std::hypot(ix[k], iy[k]);
        const double scale = mag > t ? (mag - t) / mag : 0.0;
        ox[k] = scale * ix[k];
        oy[k] = scale * iy[k];
    }
    return out;
}

double clip(double a, double t) { return sign(a) * std::min(std::abs(a), t); }

std::vector<double> clip(std::span<const double> a, double t) {
    std::vector<double> out(a.size());
    std::transform(a.begin(), a.end(), out.begin(), [t](double x) { return clip(x, t); });
    return out;
}

GradientField clip(const GradientField& f, double t, TvNorm norm) {
    GradientField out(f.shape());
    auto ix = f.dx(), iy = f.dy();
    auto ox = out.dx(), oy = out.dy();
    if (norm == TvNorm::Anisotropic) {
        for (std::size_t k = 0; k < f.size(); ++k) {
            ox[k] = clip(ix[k], t);
            oy[k] = clip(iy[k], t);
        }
        return out;
    }
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double mag = std::hypot(ix[k], iy[k]);
        const double scale = mag > t ? t / mag : 1.0;
        ox[k] = scale * ix[k];
        oy[k] = scale * iy[k];
    }
    return out;
}

// ---------------------------------------------------------------------------

std::size_t SvdFactors::rank(double rel_tol) const {
    if (singular_values.size() == 0) return 0;
    const double cutoff = rel_tol * singular_values(0);
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < singular_values.size(); ++k) {
        if (singular_values(k) > cutoff) ++r;
    }
    return r;
}

Matrix SvdFactors::reconstruct() const {
    return u_factor * singular_values.asDiagonal() * v_factor.transpose();
}

SvdFactors thin_svd(const Matrix& x) {
    if (!x.allFinite()) throw SvdFailure("SVD input contains non-finite values");
    Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw SvdFailure("SVD did not converge");
    return SvdFactors{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

namespace {

Matrix svt_with_norm(const Matrix& x, double t, double& nuclear) {
    SvdFactors f = thin_svd(x);
    nuclear = 0.0;
    Eigen::Index keep = 0;
    for (Eigen::Index k = 0; k < f.singular_values.size(); ++k) {
        const double s = std::max(f.singular_values(k) - t, 0.0);
        f.singular_values(k) = s;
        nuclear += s;
        if (s > 0.0) keep = k + 1;
    }
    if (keep == 0) return Matrix::Zero(x.rows(), x.cols());
    return f.u_factor.leftCols(keep) * f.singular_values.head(keep).asDiagonal() *
           f.v_factor.leftCols(keep).transpose();
}

}  // namespace

Matrix svt(const Matrix& x, double t) {
    if (t == 0.0) return x;
    double unused = 0.0;
    return svt_with_norm(x, t, unused);
}

Image svt(const Image& x, double t, double* nuclear_out) {
    Image out(x.shape());
    double total = 0.0;
    for (std::size_t c = 0; c < x.channels(); ++c) {
        double nuc = 0.0;
        Matrix m = x.matrix(c);
        out.matrix(c) = svt_with_norm(m, t, nuc);
        total += nuc;
    }
    if (nuclear_out) *nuclear_out = total;
    return out;
}

double nuclear_norm(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    return thin_svd(x).singular_values.sum();
}

double nuclear_norm(const Image& x) {
    double total = 0.0;
    for (std::size_t c = 0; c < x.channels(); ++c) total += nuclear_norm(Matrix(x.matrix(c)));
    return total;
}

std::vector<double> spectral_norms(const Image& x) {
    std::vector<double> out;
    out.reserve(x.channels());
    for (std::size_t c = 0; c < x.channels(); ++c) {
        Matrix m = x.matrix(c);
        if (!m.allFinite()) throw SvdFailure("SVD input contains non-finite values");
        Eigen::BDCSVD<Matrix> svd(m);
        if (svd.info() != Eigen::Success) throw SvdFailure("SVD did not converge");
        out.push_back(svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
    }
    return out;
}

// ---------------------------------------------------------------------------

double huber_value(double x, double c) {
    const double ax = std::abs(x);
    if (ax <= c) return 0.5 * x * x;
    return c * ax - 0.5 * c * c;
}

double huber_value(std::span<const double> x, double c) {
    double s = 0.0;
    for (double v : x) s += huber_value(v, c);
    return s;
}

double huber_derivative(double x, double c) { return std::abs(x) <= c ? x : c * sign(x); }

double huber_prox(double a, double beta, double c) {
    if (std::abs(a) <= c * (1.0 + beta)) return a / (1.0 + beta);
    return a - c * beta * sign(a);
}

Image huber_prox(const Image& a, double beta, double c) {
    Image out(a.shape());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = huber_prox(a[k], beta, c);
    return out;
}

double huber_conj_prox(double a, double sigma, double c) {
    if (std::abs(a) <= (1.0 + sigma) * c) return a / (1.0 + sigma);
    return c * sign(a);
}

Image huber_conj_prox(const Image& a, double sigma, double c) {
    Image out(a.shape());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = huber_conj_prox(a[k], sigma, c);
    return out;
}

}  // namespace rlrp::prox
