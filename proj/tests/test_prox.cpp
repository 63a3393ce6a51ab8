#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rlrp/config.hpp"
#include "rlrp/errors.hpp"
#include "rlrp/prox.hpp"

using namespace rlrp;
using prox::Matrix;

TEST_CASE("scalar shrink and clip") {
    CHECK(prox::shrink(0.5, 0.2) == doctest::Approx(0.3));
    CHECK(prox::shrink(-0.1, 0.2) == 0.0);
    CHECK(prox::shrink(-0.5, 0.2) == doctest::Approx(-0.3));
    CHECK(prox::clip(1.5, 1.0) == 1.0);
    CHECK(prox::clip(-0.3, 1.0) == -0.3);
    CHECK(prox::clip(-2.0, 1.0) == -1.0);
}

TEST_CASE("isotropic shrink and clip of a pixel pair") {
    GradientField f({1, 1, 1});
    f.dx()[0] = 3.0;
    f.dy()[0] = 4.0;

    // Prox of the Euclidean norm by direct search along the ray.
    const double m = oracle::golden_min([](double r) { return r + 0.5 * (r - 5.0) * (r - 5.0); }, 0.0, 5.0);
    const GradientField s = prox::shrink(f, 1.0);
    CHECK(s.dx()[0] == doctest::Approx(3.0 * m / 5.0));
    CHECK(s.dy()[0] == doctest::Approx(4.0 * m / 5.0));
    CHECK(s.dx()[0] == doctest::Approx(2.4));
    CHECK(s.dy()[0] == doctest::Approx(3.2));

    const GradientField c = prox::clip(f, 1.0);
    CHECK(c.dx()[0] == doctest::Approx(0.6));
    CHECK(c.dy()[0] == doctest::Approx(0.8));

    const GradientField a = prox::shrink(f, 1.0, TvNorm::Anisotropic);
    CHECK(a.dx()[0] == doctest::Approx(2.0));
    CHECK(a.dy()[0] == doctest::Approx(3.0));
}

TEST_CASE("shrink and clip are the Moreau pair for the pixel norm") {
    std::mt19937_64 rng(1);
    const Shape s{4, 5, 2};
    GradientField f = oracle::random_field(s, rng);
    f *= 3.0;
    for (TvNorm n : {TvNorm::Isotropic, TvNorm::Anisotropic}) {
        const GradientField sum = prox::shrink(f, 0.7, n) + prox::clip(f, 0.7, n);
        for (std::size_t k = 0; k < s.size(); ++k) {
            CHECK(sum.dx()[k] == doctest::Approx(f.dx()[k]).epsilon(1e-14));
            CHECK(sum.dy()[k] == doctest::Approx(f.dy()[k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("svt on diagonal matrices and at zero threshold") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 3.0, 1.0, 0.2;
    Matrix expect = Matrix::Zero(3, 3);
    expect.diagonal() << 2.5, 0.5, 0.0;
    CHECK((prox::svt(d, 0.5) - expect).norm() < 1e-12);

    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    Matrix x(4, 6);
    for (double& v : x.reshaped()) v = g(rng);
    CHECK(prox::svt(x, 0.0) == x);
}

TEST_CASE("svt matches the eigen-based oracle and is optimal") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Matrix x(6, 6);
        for (double& v : x.reshaped()) v = g(rng);
        const double t = 0.4;
        const Matrix z = prox::svt(x, t);
        CHECK((z - oracle::svt(x, t)).cwiseAbs().maxCoeff() < 1e-4);

        auto objective = [&](const Matrix& m) { return t * oracle::nuclear_norm(m) + 0.5 * (m - x).squaredNorm(); };
        const double best = objective(z);
        for (int p = 0; p < 5; ++p) {
            Matrix e(6, 6);
            for (double& v : e.reshaped()) v = 1e-3 * g(rng);
            CHECK(objective(z + e) >= best - 1e-12);
        }
    }
}

TEST_CASE("nuclear norm") {
    CHECK(prox::nuclear_norm(Matrix::Zero(3, 4)) == 0.0);
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 2.0, 3.0;
    CHECK(prox::nuclear_norm(d) == doctest::Approx(5.0));

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    Matrix x(5, 7);
    for (double& v : x.reshaped()) v = g(rng);
    CHECK(std::abs(prox::nuclear_norm(x) - oracle::nuclear_norm(x)) < 1e-7);
}

TEST_CASE("image svt works per channel and reports the nuclear norm") {
    std::mt19937_64 rng(5);
    const Image x = oracle::random_image({6, 5, 2}, rng);
    double nuc = -1.0;
    const Image z = prox::svt(x, 0.3, &nuc);
    double expect = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
        const Matrix zc = z.matrix(c);
        const Matrix xc = x.matrix(c);
        CHECK((zc - oracle::svt(xc, 0.3)).cwiseAbs().maxCoeff() < 1e-8);
        expect += oracle::nuclear_norm(zc);
    }
    CHECK(nuc == doctest::Approx(expect).epsilon(1e-10));
    CHECK(prox::nuclear_norm(z) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("large threshold annihilates") {
    std::mt19937_64 rng(6);
    const Image x = oracle::random_image({8, 8, 1}, rng);
    CHECK(prox::nuclear_norm(x) > 1.0);
    CHECK(prox::nuclear_norm(prox::svt(x, 1e3)) == 0.0);
}

TEST_CASE("svd factors") {
    Matrix x(3, 2);
    x << 1, 2, 2, 4, 3, 6;
    const prox::SvdFactors f = prox::thin_svd(x);
    CHECK(f.rank() == 1);
    CHECK((f.reconstruct() - x).norm() < 1e-12);
    Matrix bad = x;
    bad(0, 0) = NAN;
    CHECK_THROWS_AS(prox::thin_svd(bad), SvdFailure);
}

TEST_CASE("huber value and derivative") {
    CHECK(prox::huber_value(0.05, 0.1) == doctest::Approx(0.00125));
    CHECK(prox::huber_value(0.3, 0.1) == doctest::Approx(0.025));
    CHECK(prox::huber_value(-0.3, 0.1) == doctest::Approx(0.025));
    CHECK(prox::huber_value(0.1, 0.1) == doctest::Approx(0.005));
    CHECK(prox::huber_value(std::nextafter(0.1, 1.0), 0.1) == doctest::Approx(0.005));
    CHECK(prox::huber_derivative(0.1, 0.1) == doctest::Approx(0.1));
    CHECK(prox::huber_derivative(std::nextafter(0.1, 1.0), 0.1) == doctest::Approx(0.1));
    CHECK(prox::huber_derivative(-5.0, 0.1) == doctest::Approx(-0.1));
    CHECK(prox::huber_value(7.0, kQuadraticLoss) == doctest::Approx(24.5));
}

TEST_CASE("huber prox") {
    CHECK(prox::huber_prox(0.0, 0.7, 0.2) == 0.0);
    CHECK(prox::huber_prox(3.0, 0.5, kQuadraticLoss) == doctest::Approx(2.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(-5.0, 5.0), ub(0.0, 10.0), uc(0.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double a = ua(rng), beta = std::max(1e-6, ub(rng)), c = std::max(1e-6, uc(rng));
        worst = std::max(worst, std::abs(prox::huber_prox(a, beta, c) - oracle::huber_prox(a, beta, c)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("huber conjugate prox") {
    CHECK(prox::huber_conj_prox(0.0, 1.0, 0.1) == 0.0);
    CHECK(prox::huber_conj_prox(0.5, 1.0, 0.1) == doctest::Approx(0.1));
    CHECK(prox::huber_conj_prox(0.1, 1.0, 0.1) == doctest::Approx(0.05));
    CHECK(prox::huber_conj_prox(0.3, 2.0, kQuadraticLoss) == doctest::Approx(0.1));

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ua(-5.0, 5.0), us(0.01, 10.0), uc(0.01, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double a = ua(rng), sigma = us(rng), c = uc(rng);
        const double moreau = a - sigma * prox::huber_prox(a / sigma, 1.0 / sigma, c);
        worst = std::max(worst, std::abs(prox::huber_conj_prox(a, sigma, c) - moreau));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("image prox variants apply elementwise") {
    std::mt19937_64 rng(9);
    const Image a = oracle::random_image({3, 4, 2}, rng, -2.0, 2.0);
    const Image p = prox::huber_prox(a, 0.6, 0.3);
    const Image q = prox::huber_conj_prox(a, 0.6, 0.3);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(p[k] == prox::huber_prox(a[k], 0.6, 0.3));
        CHECK(q[k] == prox::huber_conj_prox(a[k], 0.6, 0.3));
    }
}
