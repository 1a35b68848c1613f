#include <cmath>

#include <gtest/gtest.h>

#include "burgers/core_fields.hpp"
#include "burgers/hermite.hpp"
#include "burgers/linearized.hpp"

using namespace burgers;

namespace {

// sum_i c_i phi_{k1}(x) phi_{k2}(y) at one point.
double eval_series(const HermiteBasis2D& B, const Eigen::VectorXd& c, double x, double y) {
    std::vector<double> px(B.K()), py(B.K());
    weighted_hermite(x, B.K(), px.data());
    weighted_hermite(y, B.K(), py.data());
    double s = 0;
    for (int i = 0; i < B.size(); ++i) s += c(i) * px[B.mode(i)[0]] * py[B.mode(i)[1]];
    return s;
}

Eigen::VectorXd random_coeffs(int n, unsigned seed) {
    std::srand(seed);
    return Eigen::VectorXd::Random(n);
}

}  // namespace

TEST(Hermite, FunctionsAreOrthonormal) {
    const int K = 30;
    const auto q = gauss_hermite_modified(60);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, K);
    std::vector<double> p(K);
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        hermite_functions(q.x[i], K, p.data());
        for (int a = 0; a < K; ++a)
            for (int b = 0; b < K; ++b) G(a, b) += q.w[i] * p[a] * p[b];
    }
    EXPECT_LT((G - Eigen::MatrixXd::Identity(K, K)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Hermite, WeightedFunctionsAreOrthonormalInGaussianWeight) {
    // int phi_i phi_j e^{x^2/4} dx = delta_ij, checked with a plain trapezoid rule.
    const int K = 12;
    const double h = 0.01;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, K);
    std::vector<double> p(K);
    for (int i = -2000; i <= 2000; ++i) {
        const double x = i * h;
        weighted_hermite(x, K, p.data());
        for (int a = 0; a < K; ++a)
            for (int b = 0; b < K; ++b) G(a, b) += h * std::exp(0.25 * x * x) * p[a] * p[b];
    }
    EXPECT_LT((G - Eigen::MatrixXd::Identity(K, K)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Hermite, GaussLaguerreIntegratesPolynomials) {
    const auto q = gauss_laguerre(20);
    double fact = 1;
    for (int k = 0; k < 30; ++k) {
        if (k > 0) fact *= k;
        double s = 0;
        for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(q.x[i], k);
        EXPECT_NEAR(s / fact, 1.0, 1e-10) << "k = " << k;
    }
}

TEST(Hermite, BasisIndexing) {
    const HermiteBasis2D B(9);
    EXPECT_EQ(B.size(), 45);
    for (int i = 0; i < B.size(); ++i) {
        const auto m = B.mode(i);
        EXPECT_EQ(B.index(m[0], m[1]), i);
        EXPECT_EQ(B.degree(i), m[0] + m[1]);
    }
    EXPECT_EQ(B.index(9, 0), -1);
    EXPECT_EQ(B.index(-1, 2), -1);
    EXPECT_EQ(B.shell_start(3), 6);
    EXPECT_THROW(HermiteBasis2D(1), ConfigError);
}

TEST(Hermite, DerivativeAndPositionMatrices) {
    const HermiteBasis2D B(8), E(9);
    const Eigen::VectorXd c = random_coeffs(B.size(), 7);
    const double h = 1e-5;
    for (int axis = 0; axis < 2; ++axis) {
        const Eigen::VectorXd dc = B.derivative(axis, E) * c;
        const Eigen::VectorXd xc = B.position(axis, E) * c;
        for (double x : {-1.3, 0.4, 2.2})
            for (double y : {-0.6, 1.7}) {
                const double fd = (eval_series(B, c, x + (axis == 0 ? h : 0), y + (axis == 1 ? h : 0)) -
                                   eval_series(B, c, x - (axis == 0 ? h : 0), y - (axis == 1 ? h : 0))) / (2 * h);
                EXPECT_NEAR(eval_series(E, dc, x, y), fd, 1e-8);
                EXPECT_NEAR(eval_series(E, xc, x, y), (axis == 0 ? x : y) * eval_series(B, c, x, y), 1e-12);
            }
    }
}

TEST(Hermite, LhIsDiagonal) {
    // L_h f = Delta f + xi/2 . grad f + f, checked with point differences.
    const HermiteBasis2D B(7);
    const Eigen::VectorXd lam = B.lh_diagonal();
    const double h = 1e-3;
    for (int i : {0, 1, 4, 9, 20}) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(B.size());
        c(i) = 1;
        for (double x : {0.3, -1.1})
            for (double y : {0.8, 2.0}) {
                auto f = [&](double a, double b) { return eval_series(B, c, a, b); };
                const double f0 = f(x, y);
                const double lap = (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4 * f0) / (h * h);
                const double adv = 0.5 * x * (f(x + h, y) - f(x - h, y)) / (2 * h) + 0.5 * y * (f(x, y + h) - f(x, y - h)) / (2 * h);
                EXPECT_NEAR(lap + adv + f0, lam(i) * f0, 2e-6);
            }
        EXPECT_DOUBLE_EQ(lam(i), -0.5 * B.degree(i));
    }
}

TEST(Hermite, RotationGenerator) {
    const HermiteBasis2D B(8);
    const Eigen::VectorXd c = random_coeffs(B.size(), 11);
    const Eigen::VectorXd jc = B.rotation_generator() * c;
    const double h = 1e-5;
    for (double x : {0.5, -1.9})
        for (double y : {1.2, -0.3}) {
            const double d1 = (eval_series(B, c, x + h, y) - eval_series(B, c, x - h, y)) / (2 * h);
            const double d2 = (eval_series(B, c, x, y + h) - eval_series(B, c, x, y - h)) / (2 * h);
            EXPECT_NEAR(eval_series(B, jc, x, y), y * d1 - x * d2, 1e-8);
        }
}

TEST(Hermite, GaussianCoefficientsSynthesizeGaussian) {
    const HermiteBasis2D B(10);
    const Grid2D g(10, 40);
    const auto s = B.synthesize(hermite_g(B), g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) EXPECT_NEAR(s[g.idx(i, j)], eval_g(g.coord(i), g.coord(j)), 1e-15);
    const auto d = B.synthesize(hermite_dg(B, 1), g);
    for (int i = 0; i < g.n; i += 3)
        for (int j = 0; j < g.n; j += 3) EXPECT_NEAR(d[g.idx(i, j)], eval_dg(1, g.coord(i), g.coord(j)), 1e-15);
}
