#include <cmath>

#include <gtest/gtest.h>

#include "burgers/biot_savart.hpp"
#include "burgers/core_fields.hpp"

using namespace burgers;

TEST(BiotSavart2D, GaussianGivesOseen) {
    const Grid2D g(12, 128);
    BiotSavart2D bs(g);
    const auto u = bs(ScalarField2D::sample(g, eval_g));
    double err = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const auto U = eval_UG(g.coord(i), g.coord(j));
            for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(u.c[c][g.idx(i, j)] - U[c]));
        }
    EXPECT_LT(err, 1e-10);
}

TEST(BiotSavart2D, DerivativeOfGaussianGivesDerivativeOfOseen) {
    const Grid2D g(12, 96);
    BiotSavart2D bs(g);
    for (int a = 0; a < 2; ++a) {
        const auto u = bs(ScalarField2D::sample(g, [a](double x, double y) { return eval_dg(a, x, y); }));
        double err = 0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                const auto J = eval_grad_UG(g.coord(i), g.coord(j));
                for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(u.c[c][g.idx(i, j)] - J[c][a]));
            }
        EXPECT_LT(err, 1e-10);
    }
}

TEST(BiotSavart2D, OffCentreGaussianIsTranslatedOseen) {
    const Grid2D g(12, 128);
    BiotSavart2D bs(g);
    const double a = 1.5, b = -0.75;
    const auto u = bs(ScalarField2D::sample(g, [&](double x, double y) { return eval_g(x - a, y - b); }));
    for (int i : {10, 64, 90})
        for (int j : {5, 70}) {
            const auto U = eval_UG(g.coord(i) - a, g.coord(j) - b);
            EXPECT_NEAR(u.c[0][g.idx(i, j)], U[0], 1e-10);
            EXPECT_NEAR(u.c[1][g.idx(i, j)], U[1], 1e-10);
        }
}

TEST(BiotSavart2D, Guards) {
    const Grid2D g(6, 32);
    BiotSavart2D bs(g);
    EXPECT_THROW(bs(ScalarField2D::sample(g, [](double, double) { return 1.0; })), GuardError);
    EXPECT_THROW(bs(ScalarField2D(Grid2D(6, 64))), GuardError);
}

TEST(BiotSavart2D, Kernel) {
    // 1 - x K_1(x) ~ x^2/2 log(...) near 0 and -> 1 for large x
    EXPECT_NEAR(one_minus_xK1(1e-8), 0.0, 1e-12);
    EXPECT_NEAR(one_minus_xK1(40.0), 1.0, 1e-12);
    EXPECT_NEAR(one_minus_xK1(1.0), 1.0 - 0.6019072301972346, 1e-13);  // K_1(1)
}

namespace {

// psi = (0, 0, G(x') cos(k eta)) with G = e^{-r^2/4}; u = curl psi, w = -Delta psi.
struct CurlOracle {
    double k, s;
    double G(double x, double y) const { return std::exp(-0.25 * (x * x + y * y)); }
    std::array<double, 3> w(double x, double y, double eta) const {
        const double r2 = x * x + y * y, kp = s * k;
        return {0.0, 0.0, (1.0 - 0.25 * r2 + kp * kp) * G(x, y) * std::cos(k * eta)};
    }
    std::array<double, 3> u(double x, double y, double eta) const {
        return {-0.5 * y * G(x, y) * std::cos(k * eta), 0.5 * x * G(x, y) * std::cos(k * eta), 0.0};
    }
    std::array<double, 3> d3u(double x, double y, double eta) const {
        const double f = -s * k * std::sin(k * eta);
        return {-0.5 * y * G(x, y) * f, 0.5 * x * G(x, y) * f, 0.0};
    }
};

double check(BiotSavart3D& bs, const Grid3D& g, const CurlOracle& o) {
    const auto W = VectorField3D::sample(g, [&](double x, double y, double z) { return o.w(x, y, z); });
    BS3DRequest req;
    req.d3 = true;
    const Velocity3D V = bs(W, req);
    double err = 0;
    for (int q = 0; q < g.n3; ++q)
        for (int i = 0; i < g.h2.n; ++i)
            for (int j = 0; j < g.h2.n; ++j) {
                const double x = g.h2.coord(i), y = g.h2.coord(j), z = g.z(q);
                const auto u = o.u(x, y, z), d = o.d3u(x, y, z);
                const auto id = g.idx(q, i, j);
                for (int c = 0; c < 3; ++c) {
                    err = std::max(err, std::abs(V.u[c][id] - u[c]));
                    err = std::max(err, std::abs(V.du[c][2][id] - d[c]));
                }
            }
    return err;
}

}  // namespace

TEST(BiotSavart3D, CurlOfVectorPotential) {
    const Grid3D g(12, 64, 8, 16);
    BiotSavart3D bs(g);
    EXPECT_LT(check(bs, g, {pi / 8, 1.0}), 1e-9);
    EXPECT_LT(check(bs, g, {3 * pi / 8, 1.0}), 1e-9);
}

TEST(BiotSavart3D, ComovingVerticalScale) {
    const Grid3D g(12, 64, 8, 16);
    BiotSavart3D bs(g);
    bs.set_vertical_scale(0.3);
    EXPECT_DOUBLE_EQ(bs.vertical_scale(), 0.3);
    EXPECT_LT(check(bs, g, {2 * pi / 8, 0.3}), 1e-9);
    EXPECT_THROW(bs.set_vertical_scale(0.0), ConfigError);
}

TEST(BiotSavart3D, ColumnReducesToTwoDimensionalLaw) {
    const Grid3D g(12, 64, 4, 8);
    BiotSavart3D bs(g);
    const auto W = VectorField3D::sample(g, [](double x, double y, double) -> std::array<double, 3> {
        return {0.0, 0.0, eval_g(x, y)};
    });
    const Velocity3D V = bs(W);
    for (int q : {0, 5})
        for (int i : {20, 33})
            for (int j : {31, 45}) {
                const auto U = eval_UG(g.h2.coord(i), g.h2.coord(j));
                EXPECT_NEAR(V.u[0][g.idx(q, i, j)], U[0], 1e-10);
                EXPECT_NEAR(V.u[1][g.idx(q, i, j)], U[1], 1e-10);
                EXPECT_NEAR(V.u[2][g.idx(q, i, j)], 0.0, 1e-12);
            }
    // only the mean vertical mode carries content
    EXPECT_EQ(bs.active_modes(), std::vector<int>{0});
}

TEST(BiotSavart3D, HorizontalGradientMatchesOseenJacobian) {
    const Grid3D g(12, 64, 4, 8);
    BiotSavart3D bs(g);
    const auto W = VectorField3D::sample(g, [](double x, double y, double) -> std::array<double, 3> {
        return {0.0, 0.0, eval_g(x, y)};
    });
    BS3DRequest req;
    req.horizontal_grad = true;
    const Velocity3D V = bs(W, req);
    ASSERT_TRUE(V.has_grad);
    const int i = 29, j = 37;
    const auto J = eval_grad_UG(g.h2.coord(i), g.h2.coord(j));
    for (int c = 0; c < 2; ++c)
        for (int a = 0; a < 2; ++a) EXPECT_NEAR(V.du[c][a][g.idx(2, i, j)], J[c][a], 1e-10);
}

TEST(BiotSavart3D, PeriodicImagesFadeUnderZDoubling) {
    // W = curl (0, 0, G e^{-eta^2}) is localized in eta; the periodic surrogate differs from
    // free space only through the images, so doubling Z must shrink the change on |eta| <= 4.
    auto velocity = [](double Z) {
        const Grid3D g(10, 40, Z, static_cast<int>(4 * Z));
        BiotSavart3D bs(g);
        const auto W = VectorField3D::sample(g, [](double x, double y, double z) -> std::array<double, 3> {
            const double p = std::exp(-0.25 * (x * x + y * y) - z * z);
            return {-0.5 * y * p, 0.5 * x * p, 0.0};
        });
        return std::make_pair(g, bs(W));
    };
    const auto [g1, v1] = velocity(6);
    const auto [g2, v2] = velocity(12);
    const auto [g3, v3] = velocity(24);
    // slices with |eta| <= 4 share their heights across the three grids (h3 = 1/4)
    auto diff = [](const Grid3D& a, const Velocity3D& va, const Grid3D& b, const Velocity3D& vb) {
        double e = 0, s = 0;
        for (int k = 0; k < a.n3; ++k) {
            if (std::abs(a.z(k)) > 4) continue;
            const int kb = static_cast<int>(std::lround((a.z(k) + b.Z) / b.h3()));
            for (std::size_t h = 0; h < a.slice(); ++h)
                for (int c = 0; c < 3; ++c) {
                    e = std::max(e, std::abs(va.u[c][k * a.slice() + h] - vb.u[c][kb * b.slice() + h]));
                    s = std::max(s, std::abs(vb.u[c][kb * b.slice() + h]));
                }
        }
        return e / s;
    };
    const double d12 = diff(g1, v1, g2, v2), d23 = diff(g2, v2, g3, v3);
    // the far field of this ring-like W is a dipole, so the image error scales like Z^{-3}
    EXPECT_GT(d23 / d12, 1.0 / 16);
    EXPECT_LT(d23 / d12, 1.0 / 4);
    EXPECT_LT(d23, 2e-3);
}
