#include <cmath>

#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "burgers/core_fields.hpp"

using namespace burgers;

namespace {

// Oseen velocity written out directly: (1 - e^{-r^2/4}) / (2 pi r^2) (-x2, x1).
std::array<double, 2> oseen_direct(double x1, double x2) {
    const double r2 = x1 * x1 + x2 * x2;
    const double f = (1.0 - std::exp(-0.25 * r2)) / (2.0 * pi * r2);
    return {-f * x2, f * x1};
}

}  // namespace

TEST(CoreFields, GaussianHasUnitMass) {
    const double h = 0.05;
    double s = 0;
    for (int i = -400; i < 400; ++i)
        for (int j = -400; j < 400; ++j) s += eval_g(i * h, j * h) * h * h;
    EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(CoreFields, OseenMatchesDirectFormulaAwayFromOrigin) {
    for (double x1 : {-5.0, -1.3, 0.7, 2.0, 8.0})
        for (double x2 : {-3.0, 0.9, 4.5}) {
            const auto U = eval_UG(x1, x2);
            const auto D = oseen_direct(x1, x2);
            EXPECT_NEAR(U[0], D[0], 1e-14 * (1 + std::abs(D[0])));
            EXPECT_NEAR(U[1], D[1], 1e-14 * (1 + std::abs(D[1])));
            EXPECT_DOUBLE_EQ(U[2], 0.0);
        }
}

TEST(CoreFields, RadialProfileIsSmoothAcrossSeriesCut) {
    const double c = detail::series_cut;
    const auto a = radial_profile(c * (1 - 1e-12)), b = radial_profile(c * (1 + 1e-12));
    EXPECT_NEAR(a.f, b.f, 1e-13);
    EXPECT_NEAR(a.df, b.df, 1e-13);
    EXPECT_NEAR(a.d2f, b.d2f, 1e-12);
    // f(0) = 1/(8 pi), f'(0) = -1/(64 pi)
    EXPECT_NEAR(radial_profile(0).f, 1.0 / (8 * pi), 1e-16);
    EXPECT_NEAR(radial_profile(0).df, -1.0 / (64 * pi), 1e-16);
}

TEST(CoreFields, CurlOfOseenIsGaussian) {
    for (double x1 : {0.0, 0.3, 1.0, 3.0})
        for (double x2 : {0.0, -0.5, 2.5}) EXPECT_NEAR(eval_curl_UG(x1, x2), eval_g(x1, x2), 1e-15);
}

TEST(CoreFields, DerivativesMatchFiniteDifferences) {
    const double h = 1e-4;
    for (double x1 : {0.2, 1.1, -2.4})
        for (double x2 : {0.5, -1.7}) {
            const auto J = eval_grad_UG(x1, x2);
            const auto e = eval_UG(x1 + h, x2), w = eval_UG(x1 - h, x2);
            const auto n = eval_UG(x1, x2 + h), s = eval_UG(x1, x2 - h);
            const auto c = eval_UG(x1, x2);
            const auto lap = eval_lap_UG(x1, x2);
            for (int i = 0; i < 2; ++i) {
                EXPECT_NEAR(J[i][0], (e[i] - w[i]) / (2 * h), 1e-9);
                EXPECT_NEAR(J[i][1], (n[i] - s[i]) / (2 * h), 1e-9);
                EXPECT_NEAR(lap[i], (e[i] + w[i] + n[i] + s[i] - 4 * c[i]) / (h * h), 2e-6);
                // second derivatives from differences of the analytic Jacobian
                for (int a = 0; a < 2; ++a) {
                    const auto Jp = eval_grad_UG(x1 + (a == 0 ? h : 0), x2 + (a == 1 ? h : 0));
                    const auto Jm = eval_grad_UG(x1 - (a == 0 ? h : 0), x2 - (a == 1 ? h : 0));
                    for (int b = 0; b < 2; ++b)
                        EXPECT_NEAR(eval_d2UG(i, b, a, x1, x2), (Jp[i][b] - Jm[i][b]) / (2 * h), 1e-9);
                }
            }
            EXPECT_NEAR(eval_dg(0, x1, x2), (eval_g(x1 + h, x2) - eval_g(x1 - h, x2)) / (2 * h), 1e-10);
            EXPECT_NEAR(eval_d2g(0, 1, x1, x2), (eval_dg(0, x1, x2 + h) - eval_dg(0, x1, x2 - h)) / (2 * h), 1e-10);
        }
}

TEST(CoreFields, OseenIdentityHoldsToRoundoff) {
    EXPECT_LT(oseen_identity_residual(Grid2D(12, 128)), 1e-13);
    // the second-order stencil converges at rate 2
    const double a = oseen_identity_residual_fd2(Grid2D(6, 64)), b = oseen_identity_residual_fd2(Grid2D(6, 128));
    EXPECT_NEAR(std::log2(a / b), 2.0, 0.1);
}

TEST(CoreFields, PressureIntegralMatchesExponentialIntegrals) {
    // int_a^inf (e^{-r/4} - e^{-r/2}) / r dr = E1(a/4) - E1(a/2), and ln 2 at a = 0.
    EXPECT_NEAR(pressure_integral(0.0), std::log(2.0), 1e-11);
    for (double a : {0.1, 1.0, 7.5, 40.0}) {
        const double ref = boost::math::expint(1, a / 4) - boost::math::expint(1, a / 2);
        EXPECT_NEAR(pressure_integral(a), ref, 1e-11 * (1 + ref));
    }
    EXPECT_THROW(pressure_integral(-1.0), GuardError);
}

TEST(CoreFields, SteadyBurgersSolvesNavierStokes) {
    EXPECT_LT(burgers_steady_residual(4 * pi, 1.0, ResidualBox{}), 1e-5);
    EXPECT_LT(burgers_steady_residual(0.0, 2.0, ResidualBox{}), 1e-9);
}

TEST(CoreFields, SingularBurgersSolvesNavierStokes) {
    const StrainParams p(2.0, 1.0, 1.0);
    for (double t : {0.0, 0.5}) EXPECT_LT(singular_burgers_residual(p, t, ResidualBox{}), 1e-5);
    const StrainParams q(3.5, -2.0, 2.0);
    EXPECT_LT(singular_burgers_residual(q, 1.0, ResidualBox{}), 1e-5);
}

TEST(CoreFields, ParasiticStrainSolvesEuler) {
    // rho(t) = 1/(2(1 - t)) so that rho' = 2 rho^2
    auto flow = [](const Vec3& x, double t) {
        const double r = 0.5 / (1 - t);
        return eval_parasitic(x, r, 2 * r * r);
    };
    EXPECT_LT(ns_residual(flow, 0.3, 1e-5, ResidualBox{}), 1e-5);
}

TEST(CoreFields, SingularVelocityTwoPaths) {
    const StrainParams p(2.5, 3.0, 1.0);
    for (double t : {0.0, 0.4, 0.95}) {
        const Vec3 x{0.3, -0.2, 0.7};
        const auto a = eval_singular_burgers(x, t, p).velocity;
        const auto b = eval_singular_velocity_split(x, t, p);
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(a[c], b[c], 1e-13 * (1 + std::abs(a[c])));
    }
}

TEST(CoreFields, VorticityIsCurlOfVelocity) {
    const StrainParams p(2.0, 5.0, 1.0);
    const double t = 0.3, h = 1e-5;
    const Vec3 x{0.2, 0.1, 0.4};
    auto u = [&](int c, Vec3 y) { return eval_singular_burgers(y, t, p).velocity[c]; };
    auto shift = [&](int ax, double d) {
        Vec3 y = x;
        y[ax] += d;
        return y;
    };
    const double w3 = (u(1, shift(0, h)) - u(1, shift(0, -h)) - u(0, shift(1, h)) + u(0, shift(1, -h))) / (2 * h);
    EXPECT_NEAR(w3, eval_singular_burgers(x, t, p).vorticity[2], 1e-6 * std::abs(w3));
}

TEST(CoreFields, Guards) {
    const StrainParams p(2.0, 1.0, 1.0);
    EXPECT_THROW(eval_singular_burgers({0, 0, 0}, 1.0, p), GuardError);
    EXPECT_THROW(eval_burgers({0, 0, 0}, 1.0, 0.0), ConfigError);
    EXPECT_THROW(StrainParams(1.0, 0.0), ConfigError);
    EXPECT_THROW(StrainParams(2.0, 0.0, -1.0), ConfigError);
}
