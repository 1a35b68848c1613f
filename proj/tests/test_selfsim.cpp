#include <cmath>

#include <gtest/gtest.h>

#include "burgers/core_fields.hpp"
#include "burgers/selfsim.hpp"

using namespace burgers;

TEST(SelfSim, TimeMapClosedForm) {
    const StrainParams p(2.0, 1.0, 1.0);
    EXPECT_NEAR(to_selfsim_time(0.5, p), std::log(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(to_selfsim_time(0.0, p), 0.0);
    const StrainParams q(4.0, 0.0, 3.0);
    // tau = (mu - 1) log(T / (T - t))
    EXPECT_NEAR(to_selfsim_time(2.0, q), 3.0 * std::log(3.0), 1e-14);
    for (double tau : {0.0, 0.1, 3.0, 20.0}) EXPECT_NEAR(to_selfsim_time(from_selfsim_time(tau, q), q), tau, 1e-10 * (1 + tau));
    EXPECT_THROW(to_selfsim_time(3.0, q), GuardError);
    EXPECT_THROW(from_selfsim_time(-0.1, q), GuardError);
}

TEST(SelfSim, DTauDtEqualsBeta) {
    // d tau / dt = beta(t)
    const StrainParams p(3.0, 0.0, 1.5);
    const double t = 0.7, h = 1e-6;
    const double d = (to_selfsim_time(t + h, p) - to_selfsim_time(t - h, p)) / (2 * h);
    EXPECT_NEAR(d, p.beta(t), 1e-6 * p.beta(t));
}

TEST(SelfSim, PointRoundTrip) {
    const StrainParams p(2.5, 0.0, 1.0);
    const FramePoint x{Frame::Physical, {0.3, -1.2, 2.0}, 0.6};
    const FramePoint xi = to_selfsim(x, p);
    EXPECT_EQ(xi.frame, Frame::SelfSimilar);
    const double sb = std::sqrt(1.5 / 0.4);
    EXPECT_NEAR(xi.coords[0], 0.3 * sb, 1e-14);
    const FramePoint back = to_physical(xi, p);
    EXPECT_NEAR(back.time, 0.6, 1e-14);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(back.coords[c], x.coords[c], 1e-14);
    // frame already matches: identity
    EXPECT_EQ(to_selfsim(xi, p).coords, xi.coords);
}

TEST(SelfSim, PullbackOfGaussianIsSingularVorticity) {
    // W = alpha g in the self-similar frame is the vertical vorticity of the singular vortex.
    const StrainParams p(2.0, 3.0, 1.0);
    const Grid2D ss(12, 128);
    const auto W = ScalarField2D::sample(ss, [&](double x, double y) { return p.alpha * eval_g(x, y); });
    const double tau = 0.8, t = from_selfsim_time(tau, p);
    const double sb = std::sqrt(p.beta(t));
    const Grid2D phys(8 / sb, 64);
    const auto om = pullback_vorticity(W, tau, p, phys);
    double err = 0, scale = 0;
    for (int i = 0; i < phys.n; ++i)
        for (int j = 0; j < phys.n; ++j) {
            const double ref = eval_singular_burgers({phys.coord(i), phys.coord(j), 0.0}, t, p).vorticity[2];
            err = std::max(err, std::abs(om(i, j) - ref));
            scale = std::max(scale, std::abs(ref));
        }
    EXPECT_LT(err / scale, 1e-6);
}

TEST(SelfSim, PushforwardUndoesPullback3D) {
    const StrainParams p(2.0, 0.0, 1.0);
    const Grid3D ss(12, 96, 8, 128);
    const auto W = VectorField3D::sample(ss, [](double x, double y, double z) -> std::array<double, 3> {
        const double e = std::exp(-0.3 * z * z);
        return {eval_g(x, y) * e, eval_dg(0, x, y) * e, eval_dg(1, x, y) * e};
    });
    const double tau = 0.4, t = from_selfsim_time(tau, p);
    const double sb = std::sqrt(p.beta(t));
    const Grid3D phys(6 / sb, 96, 4 / sb, 64);
    const auto om = pullback_vorticity(W, tau, p, phys);
    // spot value: omega = beta W(sqrt(beta) x)
    const int i = 40, j = 50, k = 30;
    const double x = phys.h2.coord(i), y = phys.h2.coord(j), z = phys.z(k);
    EXPECT_NEAR(om.c[0][phys.idx(k, i, j)], p.beta(t) * eval_g(sb * x, sb * y) * std::exp(-0.3 * sb * sb * z * z),
                3e-3 * p.beta(t) * eval_g(0, 0));
    const Grid3D back_grid(3, 48, 2, 16);
    const auto back = pushforward_vorticity(om, t, p, back_grid);
    double err = 0;
    for (int kk = 0; kk < back_grid.n3; ++kk)
        for (int ii = 0; ii < 48; ++ii)
            for (int jj = 0; jj < 48; ++jj) {
                const double X = back_grid.h2.coord(ii), Y = back_grid.h2.coord(jj), Z = back_grid.z(kk);
                err = std::max(err, std::abs(back.c[1][back_grid.idx(kk, ii, jj)] - eval_dg(0, X, Y) * std::exp(-0.3 * Z * Z)));
            }
    EXPECT_LT(err, 1e-4);
}

TEST(SelfSim, VelocityScalesWithSqrtBeta) {
    const StrainParams p(3.0, 0.0, 1.0);
    const Grid3D ss(10, 128, 4, 16);
    const auto V = VectorField3D::sample(ss, [](double x, double y, double) -> std::array<double, 3> {
        const auto U = eval_UG(x, y);
        return {U[0], U[1], 0.0};
    });
    const double tau = 0.3, t = from_selfsim_time(tau, p), sb = std::sqrt(p.beta(t));
    const Grid3D phys(2, 32, 1, 8);
    const auto u = pullback_velocity(V, tau, p, phys);
    const int i = 20, j = 9, k = 3;
    const auto U = eval_UG(sb * phys.h2.coord(i), sb * phys.h2.coord(j));
    EXPECT_NEAR(u.c[0][phys.idx(k, i, j)], sb * U[0], 1e-6);
    EXPECT_NEAR(u.c[1][phys.idx(k, i, j)], sb * U[1], 1e-6);
}

TEST(SelfSim, ResamplingOutsideTheSourceGridThrows) {
    const StrainParams p(2.0, 0.0, 1.0);
    const Grid2D ss(4, 32);
    const auto W = ScalarField2D::sample(ss, eval_g);
    EXPECT_THROW(pullback_vorticity(W, 1.0, p, Grid2D(40, 32)), GuardError);
}
