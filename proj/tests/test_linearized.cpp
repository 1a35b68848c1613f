#include <cmath>

#include <gtest/gtest.h>

#include "burgers/linearized.hpp"
#include "burgers/operator3d.hpp"

using namespace burgers;

namespace {

std::vector<double> synth(const HermiteBasis2D& B, const Eigen::VectorXd& c, const Grid2D& g) { return B.synthesize(c, g); }

// Low-degree test vector supported on degrees < dmax.
Eigen::VectorXd low_degree(const HermiteBasis2D& B, int dmax, unsigned seed) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(B.size());
    std::srand(seed);
    for (int i = 0; i < B.size(); ++i)
        if (B.degree(i) < dmax) c(i) = Eigen::VectorXd::Random(1)(0);
    return c;
}

}  // namespace

TEST(Linearized, BoundValues) {
    EXPECT_DOUBLE_EQ(horizontal_eigen_bound(2.0), -3.0);
    EXPECT_DOUBLE_EQ(horizontal_eigen_bound(3.0), -2.25);
    EXPECT_DOUBLE_EQ(essential_threshold_3(WeightExponent::finite(4)), -1.5);
    EXPECT_TRUE(std::isinf(essential_threshold_h(2.0, WeightExponent::inf())));
}

TEST(Linearized, ZeroCirculationSpectrumIsExplicit) {
    // alpha = 0: L_h - c has eigenvalues -d/2 - c; on zero-mean scalars L_h gives -d/2, d >= 1.
    const SpectralFamily a(10), b(14);
    for (double mu : {2.0, 5.0}) {
        const auto h = spectrum_h(a, b, mu, 0.0, WeightExponent::inf());
        const double c = 1 + (mu + 2) / (2 * (mu - 1));
        EXPECT_NEAR(h.abscissa(), -c, 1e-12);
        EXPECT_NEAR(h.abscissa(), horizontal_eigen_bound(mu), 1e-12);
        for (const auto& e : h.entries) {
            const double d = -2 * (e.value.real() + c);
            EXPECT_NEAR(d, std::round(d), 1e-10);
            EXPECT_NEAR(e.value.imag(), 0.0, 1e-10);
        }
        const auto v = spectrum_3(a, b, mu, 0.0, WeightExponent::inf());
        EXPECT_NEAR(v.abscissa(), -0.5, 1e-12);
    }
}

TEST(Linearized, SpectrumSymmetricInCirculationAndBelowBound) {
    const SpectralFamily a(20), b(26);
    for (double alpha : {3.0, 12.0}) {
        const auto p = spectrum_h(a, b, 2.0, alpha, WeightExponent::inf());
        const auto m = spectrum_h(a, b, 2.0, -alpha, WeightExponent::inf());
        EXPECT_GT(p.converged_count(), 0);
        EXPECT_NEAR(p.abscissa(), m.abscissa(), 1e-9);
        EXPECT_LE(p.abscissa(), horizontal_eigen_bound(2.0) + 1e-6);
        const auto v = spectrum_3(a, b, 2.0, alpha, WeightExponent::inf());
        EXPECT_LE(v.abscissa(), -0.5 + 1e-6);
    }
}

TEST(Linearized, HermiteMatrixMatchesGridOperator) {
    // Two independent routes: Galerkin matrices versus spectral differentiation on a grid.
    // The U^G products converge geometrically in K; K = 30 still leaves 3e-5.
    const int K = 50;
    const LambdaMatrices L = assemble_lambda(K);
    const HermiteBasis2D B(K);
    const int N = B.size();
    const Grid2D g(14, 96);
    const double mu = 2.5, alpha = 3.0;
    const Eigen::VectorXd w1 = low_degree(B, 5, 1), w2 = low_degree(B, 5, 2), w3 = low_degree(B, 5, 3);
    Eigen::VectorXd wh(2 * N);
    wh << w1, w2;
    const Eigen::VectorXd Ah = script_L_h_matrix(L, mu, alpha) * wh;
    const Eigen::VectorXd A3 = script_L_3_matrix(L, alpha) * w3;
    const auto grid = apply_script_L_grid(g, {synth(B, w1, g), synth(B, w2, g), synth(B, w3, g)}, mu, alpha);
    const std::array<std::vector<double>, 3> mat{synth(B, Ah.head(N), g), synth(B, Ah.tail(N), g), synth(B, A3, g)};
    for (int c = 0; c < 3; ++c) {
        double err = 0, scale = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            err = std::max(err, std::abs(grid[c][i] - mat[c][i]));
            scale = std::max(scale, std::abs(grid[c][i]));
        }
        EXPECT_LT(err / scale, 1e-6) << "component " << c;
    }
}

TEST(Linearized, QuadraticIdentities) {
    const int K = 24;
    const LambdaMatrices L = assemble_lambda(K);
    const HermiteBasis2D B(K);
    const int N = B.size();
    const Eigen::VectorXd w1 = low_degree(B, 6, 5), w2 = low_degree(B, 6, 6);
    Eigen::VectorXd w(2 * N);
    w << w1, w2;
    // cross integral on a grid: int e^{r^2/4} (xi.w)(xi^perp.w) f'(r^2)
    const Grid2D g(16, 192);
    const auto s1 = synth(B, w1, g), s2 = synth(B, w2, g);
    double cross = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double x = g.coord(i), y = g.coord(j), r2 = x * x + y * y;
            const auto id = g.idx(i, j);
            const double a = x * s1[id] + y * s2[id], b = -y * s1[id] + x * s2[id];
            cross += std::exp(0.25 * r2) * a * b * radial_profile(r2).df * g.h() * g.h();
        }
    for (double alpha : {0.0, 2.0, -7.0}) {
        const auto ids = quadratic_identities(L, 2.0, alpha, w, cross);
        for (const auto& c : ids) EXPECT_LT(c.error(), 1e-8 * (1 + std::abs(c.lhs))) << "alpha " << alpha;
    }
    Eigen::VectorXd high = Eigen::VectorXd::Zero(2 * N);
    high(N - 1) = 1;
    EXPECT_THROW(quadratic_identities(L, 2.0, 1.0, high, 0.0), ConfigError);
}

TEST(Linearized, ZeroMeanSectorDropsTheMean) {
    const LambdaMatrices L = assemble_lambda(10);
    const int N = static_cast<int>(L.lh.size());
    EXPECT_EQ(script_L_3_matrix(L, 1.0, true).rows(), N - 1);
    // the mean row of the full matrix vanishes: the operator maps into zero-mean functions
    const Eigen::MatrixXd A = script_L_3_matrix(L, 4.0);
    EXPECT_LT(A.row(0).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_THROW(assemble_script_L_h(StrainParams(2, 1), WeightExponent::finite(1), 10), ConfigError);
}

TEST(Linearized, FirstMomentProjection) {
    const Grid3D g(12, 64, 4, 8);
    auto phi = [](double z) { return 1 + 0.3 * z; };
    // f3 = a(z) d_1 g + b(z) d_2 g + radial part, theta = (a, b)
    const auto f = VectorField3D::sample(g, [&](double x, double y, double z) -> std::array<double, 3> {
        const double r2 = x * x + y * y;
        return {0.1 * eval_g(x, y), 0.0,
                phi(z) * eval_dg(0, x, y) - 2.0 * eval_dg(1, x, y) + std::exp(-r2) * (1 - r2) + x * y * std::exp(-r2)};
    });
    const auto th = theta_moments(f.c[2], g);
    for (int k = 0; k < g.n3; ++k) {
        EXPECT_NEAR(th[k][0], phi(g.z(k)), 1e-12);
        EXPECT_NEAR(th[k][1], -2.0, 1e-12);
    }
    const auto p = apply_P1(f);
    const auto pp = apply_P1(p);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(pp.c[c][i], p.c[c][i], 1e-14);
    for (int c = 0; c < 2; ++c) EXPECT_EQ(max_abs(p.c[c]), 0.0);
    // (I - P1) f has vanishing first moments
    VectorField3D q = f;
    for (std::size_t i = 0; i < g.size(); ++i) q.c[2][i] -= p.c[2][i];
    for (const auto& t : theta_moments(q.c[2], g)) {
        EXPECT_NEAR(t[0], 0.0, 1e-12);
        EXPECT_NEAR(t[1], 0.0, 1e-12);
    }
}
