#ifndef RLRP_PROX_HPP
#define RLRP_PROX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rlrp/config.hpp"
#include "rlrp/image.hpp"

namespace rlrp::prox {

using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Soft threshold / projection
// ---------------------------------------------------------------------------

/// sign(a) * max(|a| - t, 0).
double shrink(double a, double t);
std::vector<double> shrink(std::span<const double> a, double t);

/// Isotropic: each per-pixel pair (dx, dy) has its magnitude soft-thresholded
/// by t with the direction kept. Anisotropic: elementwise shrink.
GradientField shrink(const GradientField& f, double t, TvNorm norm = TvNorm::Isotropic);

/// sign(a) * min(|a|, t), the projection onto [-t, t].
double clip(double a, double t);
std::vector<double> clip(std::span<const double> a, double t);

/// Isotropic: projection of each pair (dx, dy) onto the Euclidean ball of
/// radius t. Anisotropic: elementwise clip.
GradientField clip(const GradientField& f, double t, TvNorm norm = TvNorm::Isotropic);

// ---------------------------------------------------------------------------
// Singular values
// ---------------------------------------------------------------------------

struct SvdFactors {
    Matrix u_factor;                 // H x r
    Eigen::VectorXd singular_values; // r, nonincreasing
    Matrix v_factor;                 // W x r

    /// Number of singular values above rel_tol * sigma_max.
    std::size_t rank(double rel_tol = 1e-12) const;
    Matrix reconstruct() const;
};

/// Thin SVD; throws SvdFailure if the input is non-finite or the
/// decomposition does not converge.
SvdFactors thin_svd(const Matrix& x);

/// Prox of t*||.||_*: singular values soft-thresholded by t.
Matrix svt(const Matrix& x, double t);

/// Per-channel singular value thresholding. If `nuclear_out` is given it
/// receives the summed nuclear norm of the result (free, since the
/// thresholded singular values are at hand).
Image svt(const Image& x, double t, double* nuclear_out = nullptr);

double nuclear_norm(const Matrix& x);
/// Sum of per-channel nuclear norms.
double nuclear_norm(const Image& x);

/// Largest singular value of each channel.
std::vector<double> spectral_norms(const Image& x);

// ---------------------------------------------------------------------------
// Huber loss
// ---------------------------------------------------------------------------
//
// rho_c(x) = x^2/2 for |x| <= c and c|x| - c^2/2 otherwise. c = +inf
// (kQuadraticLoss) gives the pure quadratic x^2/2 everywhere.

double huber_value(double x, double c);
/// Elementwise sum.
double huber_value(std::span<const double> x, double c);
double huber_derivative(double x, double c);

/// argmin_z rho_c(z) + (z - a)^2 / (2 beta):
///   a / (1 + beta)          if |a| <= c (1 + beta)
///   a - c beta sign(a)      otherwise
double huber_prox(double a, double beta, double c);
Image huber_prox(const Image& a, double beta, double c);

/// Prox of sigma * rho_c^*, where rho_c^*(x) = x^2/2 on [-c, c] and +inf outside:
///   a / (1 + sigma)         if |a| <= (1 + sigma) c
///   c sign(a)               otherwise
double huber_conj_prox(double a, double sigma, double c);
Image huber_conj_prox(const Image& a, double sigma, double c);

}  // namespace rlrp::prox

#endif  // RLRP_PROX_HPP
