#ifndef RLRP_LINOPS_HPP
#define RLRP_LINOPS_HPP

#include <cstdint>
#include <memory>
#include <utility>

#include "rlrp/degradation.hpp"
#include "rlrp/image.hpp"

namespace rlrp {

// ---------------------------------------------------------------------------
// Discrete gradient, periodic boundary
// ---------------------------------------------------------------------------

/// dx(i,j) = x(i, j+1 mod W) - x(i,j), dy(i,j) = x(i+1 mod H, j) - x(i,j).
GradientField grad(const Image& img);

/// Adjoint of grad (the negative divergence).
Image grad_adjoint(const GradientField& f);

/// grad^T grad applied directly with the periodic 5-point stencil:
/// 4 x(i,j) - x(i-1,j) - x(i+1,j) - x(i,j-1) - x(i,j+1). This is the
/// negative Laplacian.
Image neg_laplacian(const Image& img);

// ---------------------------------------------------------------------------
// Degradation operators
// ---------------------------------------------------------------------------

Image apply(const DegradationOp& op, const Image& img);
Image apply_adjoint(const DegradationOp& op, const Image& img);

// ---------------------------------------------------------------------------
// (grad^T grad + I) u = rhs
// ---------------------------------------------------------------------------

/// Solves (grad^T grad + I) u = rhs exactly by diagonalizing the periodic
/// operator with a 2-D real FFT: u_hat = rhs_hat / (1 + 4 sin^2(pi p/H) + 4 sin^2(pi q/W)).
/// Plans are built once per shape; solve() is safe to call concurrently.
class GradGramSolver {
public:
    explicit GradGramSolver(Shape shape);
    ~GradGramSolver();
    GradGramSolver(GradGramSolver&&) noexcept;
    GradGramSolver& operator=(GradGramSolver&&) noexcept;
    GradGramSolver(const GradGramSolver&) = delete;
    GradGramSolver& operator=(const GradGramSolver&) = delete;

    Image solve(const Image& rhs) const;
    const Shape& shape() const noexcept;

private:
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

Image solve_grad_gram_plus_identity(const Image& rhs);

// ---------------------------------------------------------------------------
// Stacked operator K(u, v) = (grad u, Phi(u + v))
// ---------------------------------------------------------------------------

class StackedOperator {
public:
    StackedOperator(DegradationOp phi, Shape shape);

    std::pair<GradientField, Image> apply(const Image& u, const Image& v) const;
    /// K^T(g, w) = (grad^T g + Phi^T w, Phi^T w).
    std::pair<Image, Image> apply_adjoint(const GradientField& g, const Image& w) const;

    const DegradationOp& phi() const noexcept { return phi_; }
    const Shape& shape() const noexcept { return shape_; }

private:
    DegradationOp phi_;
    Shape shape_;
};

/// Power iteration on K^T K from a seeded random start. The returned
/// Rayleigh quotient is a lower bound on ||K||^2 and is nondecreasing in
/// `iterations`.
double estimate_norm_sq(const StackedOperator& k, int iterations = 50, std::uint64_t seed = 0);

/// Same estimate for grad alone.
double estimate_grad_norm_sq(Shape shape, int iterations = 50, std::uint64_t seed = 0);

}  // namespace rlrp

#endif  // RLRP_LINOPS_HPP
