#pragma once

// The ten acceptance criteria. Each returns a verdict, a one-line detail with the measured
// numbers, and its wall time. Runtime budgets are part of the verdict.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "burgers/biot_savart.hpp"
#include "burgers/core_fields.hpp"
#include "burgers/evolution.hpp"
#include "burgers/linearized.hpp"
#include "burgers/operator3d.hpp"
#include "burgers/semigroup.hpp"

namespace burgers {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

namespace acceptance {

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}
inline std::string fix(double x, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

// 1. Steady Burgers and singular Burgers Navier-Stokes residuals.
inline CriterionResult exact_residuals() {
    CriterionResult r{1, "exact-solution residuals"};
    const double alpha = 4 * pi;
    const StrainParams p(2.0, alpha);
    ResidualBox box;
    box.n = 128;
    double worst = burgers_steady_residual(alpha, 1.0, box);
    std::string d = "steady " + sci(worst);
    for (double t : {0.0, 0.5, 0.9}) {
        const double v = singular_burgers_residual(p, t, box);
        d += ", t=" + fix(t, 1) + " " + sci(v);
        worst = std::max(worst, v);
    }
    r.pass = worst < 1e-5;
    r.detail = d + " (limit 1e-5)";
    return r;
}

// 2. Oseen identity and U^G x curl U^G.
inline CriterionResult oseen() {
    CriterionResult r{2, "Oseen identities"};
    const Grid2D g(12.0, 256);
    const double a = oseen_identity_residual(g), b = oseen_cross_residual(g);
    r.pass = a < 1e-12 && b < 1e-10;
    r.detail = "identity " + sci(a) + " (limit 1e-12), |U x curl U| " + sci(b) + " (limit 1e-10)";
    return r;
}

// 3. bs2d(g) against U^G.
inline CriterionResult biot_savart_oracle() {
    CriterionResult r{3, "Biot-Savart oracle"};
    const Grid2D g(12.0, 256);
    BiotSavart2D bs(g);
    const auto w = ScalarField2D::sample(g, eval_g);
    const VectorField2D u = bs(w);
    double err = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const auto U = eval_UG(g.coord(i), g.coord(j));
            for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(u.c[c][g.idx(i, j)] - U[c]));
        }
    r.pass = err < 1e-6;
    r.detail = "sup error " + sci(err) + " (limit 1e-6)";
    return r;
}

// 4. Semigroup kernels.
inline CriterionResult semigroups() {
    CriterionResult r{4, "semigroup kernels"};
    const Grid2D g(12.0, 256);
    auto sup_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
        return s;
    };
    const LhSemigroup S1(g, 1.0);
    const auto G = ScalarField2D::sample(g, eval_g);
    const auto D1 = ScalarField2D::sample(g, [](double x, double y) { return eval_dg(0, x, y); });
    const double fixed = sup_diff(S1(G).v, G.v);
    auto D1e = D1;
    for (double& x : D1e.v) x *= std::exp(-0.5);
    const double decay = sup_diff(S1(D1).v, D1e.v);
    const auto f = ScalarField2D::sample(g, [](double x, double y) {
        return eval_g(x - 1.0, y + 0.5) + 0.3 * eval_dg(1, x + 0.7, y);
    });
    const double law = sup_diff(LhSemigroup(g, 0.6)(LhSemigroup(g, 0.4)(f)).v, S1(f).v) / max_abs(f.v);
    const UniformAxis ax{-24.0, 1.0, 48};
    const auto ones = apply_L3_semigroup(std::vector<double>(48, 1.0), ax, KernelParams{1.0, 2.5});
    double cst = 0;
    for (double x : ones) cst = std::max(cst, std::abs(x - 1.0));
    r.pass = fixed < 1e-8 && decay < 1e-7 && law < 1e-6 && cst < 1e-10;
    r.detail = "fixed point " + sci(fixed) + ", eigen-decay " + sci(decay) + ", semigroup law " + sci(law) +
               ", constants " + sci(cst);
    return r;
}

// 5. Spectral bounds at K = 32 (refinement K + 8).
inline CriterionResult spectra() {
    CriterionResult r{5, "spectral bounds"};
    const int K = 32;
    const SpectralFamily coarse(K), fine(K + 8);
    const WeightExponent m = WeightExponent::inf();
    double worst_h = -1e300;  // max over sweep of abscissa - bound
    int empty = 0;
    for (double mu : {1.5, 2.0, 5.0, 10.0})
        for (double alpha : {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
            const SpectrumReport rep = spectrum_h(coarse, fine, mu, alpha, m);
            if (rep.converged_count() == 0) ++empty;
            worst_h = std::max(worst_h, rep.abscissa() - horizontal_eigen_bound(mu));
        }
    double worst_gap = 0, worst_vec = 0;
    const HermiteBasis2D& B = coarse.basis();
    for (double alpha : {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
        const SpectrumReport rep = spectrum_3(coarse, fine, 2.0, alpha, m);
        worst_gap = std::max(worst_gap, std::abs(rep.abscissa() + 0.5));
        const Eigen::MatrixXd A = script_L_3_matrix(coarse.lambda(), alpha, true);
        for (int axis = 0; axis < 2; ++axis) {
            const Eigen::VectorXd v = hermite_dg(B, axis).tail(B.size() - 1);
            worst_vec = std::max(worst_vec, (A * v + 0.5 * v).norm() / v.norm());
        }
    }
    r.pass = worst_h <= 1e-6 && empty == 0 && worst_gap <= 1e-6 && worst_vec < 1e-6;
    r.detail = "max(abscissa - bound) " + sci(worst_h) + ", |abscissa_3 + 1/2| " + sci(worst_gap) +
               ", eigenspace residual " + sci(worst_vec) + (empty ? ", sweep points without converged values" : "");
    return r;
}

// 6. [d_3, L_mu - alpha Lambda] = -chi d_3 on three fields.
inline CriterionResult commutation() {
    CriterionResult r{6, "commutation"};
    const Grid3D g(12.0, 64, 16.0, 64);
    Operator3D op(g);
    auto phi = [](double z) { return std::sin(z) * std::exp(-z * z / 8.0); };
    auto dphi = [](double z) { return (std::cos(z) - 0.25 * z * std::sin(z)) * std::exp(-z * z / 8.0); };
    auto psi = [](double z) { return std::exp(-z * z / 4.0) * (1.0 + 0.5 * z); };
    const std::vector<VectorField3D> fields{
        VectorField3D::sample(g, [&](double x, double y, double z) -> std::array<double, 3> {
            return {0.0, 0.0, eval_g(x, y) * phi(z)};
        }),
        VectorField3D::sample(g, [&](double x, double y, double z) -> std::array<double, 3> {
            return {-eval_g(x, y) * dphi(z), 0.0, eval_dg(0, x, y) * phi(z)};
        }),
        VectorField3D::sample(g, [&](double x, double y, double z) -> std::array<double, 3> {
            return {eval_dg(1, x - 0.5, y) * psi(z), -eval_g(x, y + 1.0) * phi(z), eval_dg(0, x, y) * psi(z)};
        })};
    double worst = 0;
    std::string d;
    for (const auto& f : fields) {
        const double v = op.commutator_residual(f, 2.0, 4 * pi);
        worst = std::max(worst, v);
        d += (d.empty() ? "" : ", ") + sci(v);
    }
    r.pass = worst < 1e-5;
    r.detail = "relative residuals " + d + " (limit 1e-5)";
    return r;
}

// 7. evolve2d from d_1 g.
inline CriterionResult decay2d() {
    CriterionResult r{7, "2D nonlinear decay"};
    const Grid2D g(12.0, 256);
    Evolve2DConfig c;
    c.params = StrainParams(2.0, 1.0);
    c.m = WeightExponent::finite(4.0);
    c.tau_end = 8.0;
    c.dt = 0.05;
    const auto st = evolve2d(d1g_field(g), c);
    const DecayRateFit f = fit_decay(st.history, "norm", 2.0, 6.0, -0.5);
    ScalarField2D d(g);
    const ScalarField2D D1 = d1g_field(g);
    const double e = std::exp(0.5 * st.tau);
    for (std::size_t i = 0; i < d.v.size(); ++i) d.v[i] = e * st.w.v[i] - D1.v[i];
    const double dist = norm_L2m(d, c.m, false);
    r.pass = f.matches(0.05) && dist < 0.05;
    r.detail = "rate " + fix(f.rate) + " (fit residual " + sci(f.residual) + "), distance at tau=8 " + sci(dist);
    return r;
}

// 8. ||d_3 W|| decay in the linear regime.
inline CriterionResult decay3d() {
    CriterionResult r{8, "3D vertical-derivative decay"};
    const Grid3D g(12.0, 96, 24.0, 48);
    Evolve3DConfig c;
    c.params = StrainParams(2.0, 1.0);
    c.tau_end = 6.0;
    c.dt = 0.05;
    c.nonlinear = false;
    const auto st = evolve3d(modulated_field(g, 1e-3), c);
    const double target = -(0.5 + c.params.chi());
    const DecayRateFit f = fit_decay(st.history, "d3_norm", 2.0, 6.0, target);
    r.pass = f.matches(0.1 * std::abs(target));
    r.detail = "rate " + fix(f.rate) + " target " + fix(target, 1) + " (fit residual " + sci(f.residual) + ")";
    return r;
}

// 9. Secondary profile with and without a 3D perturbation.
inline CriterionResult secondary_profile() {
    CriterionResult r{9, "secondary profile"};
    const Grid3D g(12.0, 96, 24.0, 48);
    Evolve3DConfig c;
    c.params = StrainParams(2.0, 1.0);
    c.tau_end = 8.0;
    c.dt = 0.05;
    const ScalarField2D w2d = d1g_field(g.h2);
    const Moments mo = moments(w2d);
    const double lam[2] = {-mo.first[0], -mo.first[1]};

    VectorField3D W = modulated_field(g, 1.0);
    const double eps = 1e-3, s = eps / norm_Xbb(W, c.m);
    for (auto& v : W.c)
        for (double& x : v) x *= s;
    const auto with = evolve3d(W, c, &w2d);
    const auto pw = extract_secondary_profile(with.W, with.tau, c.params, c.m, c.delta);
    const double d1 = pw.coef[0] - lam[0];

    const auto without = evolve3d(VectorField3D(g), c, &w2d);
    const auto p0 = extract_secondary_profile(without.W, without.tau, c.params, c.m, c.delta);
    const double d0 = std::max(std::abs(p0.coef[0] - lam[0]), std::abs(p0.coef[1] - lam[1]));

    r.pass = std::abs(d1) <= 10 * eps && pw.residual < 5e-3 && d0 < 1e-6;
    r.detail = "d1 " + sci(d1) + " (limit 1e-2), residual " + sci(pw.residual) + " (limit 5e-3), d without 3D part " +
               sci(d0) + " (limit 1e-6)";
    return r;
}

// 10. Second-order paths: Strang splitting under dt halving, central differences under h halving.
inline CriterionResult convergence_orders() {
    CriterionResult r{10, "convergence orders"};
    const Grid2D g(12.0, 64);
    const auto w0 = ScalarField2D::sample(g, [](double x, double y) { return 20.0 * (eval_g(x - 1.0, y - 0.5) - eval_g(x, y)); });
    std::vector<ScalarField2D> w;
    for (double dt : {0.1, 0.05, 0.025}) {
        Evolve2DConfig c;
        c.params = StrainParams(2.0, 10.0);
        c.tau_end = 1.0;
        c.dt = dt;
        w.push_back(evolve2d(w0, c).w);
    }
    auto diff = [](const ScalarField2D& a, const ScalarField2D& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.v.size(); ++i) s = std::max(s, std::abs(a.v[i] - b.v[i]));
        return s;
    };
    const double strang = diff(w[0], w[1]) / diff(w[1], w[2]);
    const double fd = oseen_identity_residual_fd2(Grid2D(12.0, 64)) / oseen_identity_residual_fd2(Grid2D(12.0, 128));
    r.pass = std::abs(strang - 4.0) <= 0.5 && std::abs(fd - 4.0) <= 0.5;
    r.detail = "Strang ratio " + fix(strang, 3) + ", finite-difference ratio " + fix(fd, 3) + " (target 4 +- 0.5)";
    return r;
}

struct Entry {
    int id;
    double budget_s;  // runtime budget; infinity when none is stated
    std::function<CriterionResult()> run;
};

inline std::vector<Entry> entries() {
    const double none = std::numeric_limits<double>::infinity();
    return {{1, 30.0, exact_residuals},    {2, none, oseen},          {3, none, biot_savart_oracle},
            {4, none, semigroups},         {5, 600.0, spectra},       {6, none, commutation},
            {7, 300.0, decay2d},           {8, 900.0, decay3d},       {9, none, secondary_profile},
            {10, none, convergence_orders}};
}

}  // namespace acceptance

inline std::string format_result(const CriterionResult& r) {
    return std::string(r.pass ? "PASS" : "FAIL") + "  " + std::to_string(r.id) + ". " + r.title + ": " + r.detail +
           " [" + acceptance::fix(r.seconds, 1) + " s]";
}

// Runs the selected criteria (all when `only` is empty) on `jobs` workers. Each line is
// printed as its criterion finishes; the returned vector is ordered by id.
inline std::vector<CriterionResult> run_acceptance(std::ostream& os, int jobs = 1, const std::vector<int>& only = {}) {
    std::vector<acceptance::Entry> todo;
    for (auto& e : acceptance::entries())
        if (only.empty() || std::find(only.begin(), only.end(), e.id) != only.end()) todo.push_back(e);
    std::vector<CriterionResult> out(todo.size());
    std::atomic<std::size_t> next{0};
    std::mutex io;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < todo.size();) {
            const auto t0 = std::chrono::steady_clock::now();
            CriterionResult r;
            try {
                r = todo[i].run();
            } catch (const std::exception& e) {
                r = {todo[i].id, "criterion " + std::to_string(todo[i].id), false, std::string("error: ") + e.what()};
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (r.seconds > todo[i].budget_s) {
                r.pass = false;
                r.detail += ", over the " + acceptance::fix(todo[i].budget_s, 0) + " s budget";
            }
            std::lock_guard<std::mutex> lk(io);
            os << format_result(r) << std::endl;
            out[i] = std::move(r);
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < std::max(1, jobs); ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace burgers
