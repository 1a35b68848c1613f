#include <cmath>

#include <gtest/gtest.h>

#include "burgers/semigroup.hpp"
#include "burgers/weighted_spaces.hpp"

using namespace burgers;

namespace {

double sup_diff(const ScalarField2D& a, const std::function<double(double, double)>& f) {
    double e = 0;
    for (int i = 0; i < a.grid.n; ++i)
        for (int j = 0; j < a.grid.n; ++j) e = std::max(e, std::abs(a(i, j) - f(a.grid.coord(i), a.grid.coord(j))));
    return e;
}

// Unit-mass Gaussian of variance 2a per axis.
double gauss(double a, double x, double y) { return std::exp(-(x * x + y * y) / (4 * a)) / (4 * pi * a); }

}  // namespace

TEST(LhSemigroup, GaussianIsStationary) {
    const Grid2D g(12, 96);
    const auto out = apply_Lh_semigroup(ScalarField2D::sample(g, eval_g), 1.0);
    EXPECT_LT(sup_diff(out, eval_g), 1e-12);
}

TEST(LhSemigroup, FirstDerivativesDecayAtHalfRate) {
    const Grid2D g(12, 96);
    const double tau = 0.7;
    for (int a = 0; a < 2; ++a) {
        const auto f = ScalarField2D::sample(g, [a](double x, double y) { return eval_dg(a, x, y); });
        const auto out = apply_Lh_semigroup(f, tau);
        EXPECT_LT(sup_diff(out, [&](double x, double y) { return std::exp(-0.5 * tau) * eval_dg(a, x, y); }), 1e-12);
    }
}

TEST(LhSemigroup, GaussianFamilyRelaxes) {
    // Variance parameter a(tau) = 1 + (a0 - 1) e^{-tau}, mass conserved.
    // R = 16 so the widest member is below roundoff at the edge.
    const Grid2D g(16, 128);
    for (double a0 : {0.5, 2.0})
        for (double tau : {0.2, 1.5}) {
            const double a = 1 + (a0 - 1) * std::exp(-tau);
            const auto out = apply_Lh_semigroup(ScalarField2D::sample(g, [&](double x, double y) { return gauss(a0, x, y); }), tau);
            EXPECT_LT(sup_diff(out, [&](double x, double y) { return gauss(a, x, y); }), 1e-11);
        }
}

TEST(LhSemigroup, SemigroupProperty) {
    const Grid2D g(12, 96);
    const auto f = ScalarField2D::sample(g, [](double x, double y) { return std::exp(-0.5 * ((x - 1) * (x - 1) + 2 * y * y)) * (1 + x * y); });
    const auto a = apply_Lh_semigroup(apply_Lh_semigroup(f, 0.3), 0.5);
    const auto b = apply_Lh_semigroup(f, 0.8);
    double e = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) e = std::max(e, std::abs(a.v[i] - b.v[i]));
    EXPECT_LT(e, 1e-11);
    // mean preserved
    EXPECT_NEAR(moments(b).zeroth, moments(f).zeroth, 1e-11);
}

TEST(LhSemigroup, Guards) {
    const Grid2D g(12, 64);
    EXPECT_THROW(LhSemigroup(g, 0.0), GuardError);
    EXPECT_THROW(LhSemigroup(g, 10.0), GuardError);  // e^{5} exceeds R/(10h)
    EXPECT_THROW(apply_Lh_semigroup(ScalarField2D::sample(g, [](double, double) { return 1.0; }), 0.1), GuardError);
}

TEST(PeriodicHeat, MatchesFourierSeries) {
    const int n = 16;
    const double h = 0.5, a = 0.3, P = n * h;
    const RowMatrix H = periodic_heat_matrix(n, h, a);
    // cos(2 pi x / P) is an eigenvector with eigenvalue e^{-a (2 pi / P)^2}
    const double k = 2 * pi / P, lam = std::exp(-a * k * k);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += H(i, j) * std::cos(k * j * h);
        EXPECT_NEAR(s, lam * std::cos(k * i * h), 1e-14);
    }
}

namespace {
std::vector<double> sample_axis(const UniformAxis& ax, const std::function<double(double)>& f) {
    std::vector<double> v(ax.n);
    for (int i = 0; i < ax.n; ++i) v[i] = f(ax.node(i));
    return v;
}
}  // namespace

TEST(L3Semigroup, PolynomialMoments) {
    // Ornstein-Uhlenbeck: E[f(e^{-chi tau} x + sigma Z)], sigma^2 = (1 - e^{-2 chi tau}) / chi.
    const UniformAxis ax{-24.0, 0.25, 192};
    const KernelParams kp{0.6, 2.5};
    const double c = std::exp(-kp.chi * kp.tau), var = (1 - std::exp(-2 * kp.chi * kp.tau)) / kp.chi;
    const auto one = apply_L3_semigroup(sample_axis(ax, [](double) { return 1.0; }), ax, kp);
    const auto lin = apply_L3_semigroup(sample_axis(ax, [](double x) { return x; }), ax, kp);
    const auto sq = apply_L3_semigroup(sample_axis(ax, [](double x) { return x * x; }), ax, kp);
    for (int i = 40; i < 152; ++i) {
        const double x = ax.node(i);
        EXPECT_NEAR(one[i], 1.0, 1e-13);
        EXPECT_NEAR(lin[i], c * x, 1e-12);
        EXPECT_NEAR(sq[i], c * c * x * x + var, 1e-10);
    }
}

TEST(L3Semigroup, UnscaledFormAgrees) {
    const UniformAxis ax{-12.0, 0.125, 192};
    const KernelParams kp{0.4, 1.5};
    auto f = [](double x) { return std::exp(-0.5 * x * x) * std::cos(x); };
    const auto a = apply_L3_semigroup(sample_axis(ax, f), ax, kp);
    std::vector<double> xs;
    for (int i = 60; i < 132; i += 7) xs.push_back(ax.node(i));
    const auto b = apply_L3_semigroup_unscaled(f, xs, kp);
    for (std::size_t q = 0; q < xs.size(); ++q) EXPECT_NEAR(a[60 + 7 * q], b[q], 1e-7);
}

TEST(L3Semigroup, LongTimeLimit) {
    const UniformAxis ax{-12.0, 0.125, 192};
    const double chi = 1.5;
    // (chi / 2 pi)^{1/2} int e^{-chi x^2 / 2} x^2 dx = 1 / chi
    const auto v = sample_axis(ax, [](double x) { return x * x; });
    EXPECT_NEAR(L3_longtime_limit(v, ax, chi), 1 / chi, 1e-10);
    // and the semigroup at large tau approaches it at the centre
    const auto late = apply_L3_semigroup(v, ax, KernelParams{8.0, chi});
    EXPECT_NEAR(late[96], 1 / chi, 1e-9);
    EXPECT_THROW(L3_semigroup_matrix(ax, KernelParams{0.0, chi}), GuardError);
}
