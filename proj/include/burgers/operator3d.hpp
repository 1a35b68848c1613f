#pragma once

// Grid appliers for the three-dimensional linearized operator
//   (L_mu - alpha Lambda) W,  L_mu = Delta + xi'/2 . grad' - chi xi_3 d_3 + (mu M - I)/(mu - 1),
//   Lambda W = U^G . grad W + V . grad G - W . grad U^G - G . grad V,  V = K_3d * W,
// and for the two-dimensional operator script_L_{mu,alpha} acting on (w', w_3).
// All derivatives are spectral; fields must decay inside the box (or be xi_3-independent).

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "burgers/biot_savart.hpp"
#include "burgers/core_fields.hpp"
#include "burgers/fft.hpp"
#include "burgers/grid.hpp"

namespace burgers {

// U^G, grad U^G, g and grad g sampled on one horizontal slice.
struct Background2D {
    std::array<std::vector<double>, 2> U, dg;
    std::array<std::array<std::vector<double>, 2>, 2> dU;  // dU[i][k] = d_k U_i
    std::vector<double> g;

    explicit Background2D(const Grid2D& gr) {
        const std::size_t N = gr.size();
        for (auto& v : U) v.resize(N);
        for (auto& v : dg) v.resize(N);
        for (auto& r : dU)
            for (auto& v : r) v.resize(N);
        g.resize(N);
        for (int i = 0; i < gr.n; ++i)
            for (int j = 0; j < gr.n; ++j) {
                const double x1 = gr.coord(i), x2 = gr.coord(j);
                const auto id = gr.idx(i, j);
                const auto u = eval_UG(x1, x2);
                const auto J = eval_grad_UG(x1, x2);
                for (int a = 0; a < 2; ++a) {
                    U[a][id] = u[a];
                    dg[a][id] = eval_dg(a, x1, x2);
                    for (int k = 0; k < 2; ++k) dU[a][k][id] = J[a][k];
                }
                g[id] = eval_g(x1, x2);
            }
    }
};

inline constexpr double mu_limit = std::numeric_limits<double>::infinity();

// chi and the component shifts of (mu M - I)/(mu - 1); mu = infinity selects the operator L.
inline double chi_of(double mu) { return std::isinf(mu) ? 1.0 : (2.0 * mu + 1.0) / (2.0 * (mu - 1.0)); }
inline double horizontal_strain_shift(double mu) { return std::isinf(mu) ? -0.5 : -(mu + 2.0) / (2.0 * (mu - 1.0)); }

class Operator3D {
public:
    explicit Operator3D(const Grid3D& g)
        : g_(g), bg_(g.h2), bs_(g), d_(g.h2.n, g.h2.R, g.n3, g.Z) {}

    const Grid3D& grid() const { return g_; }
    const Background2D& background() const { return bg_; }
    BiotSavart3D& biot_savart() { return bs_; }

    // L_mu W (mu = mu_limit gives L).
    VectorField3D apply_L(const VectorField3D& W, double mu) {
        check(W);
        VectorField3D out(g_);
        const double chi = chi_of(mu);
        const double shift[3] = {horizontal_strain_shift(mu), horizontal_strain_shift(mu), 1.0};
        std::vector<double> d(g_.size());
        for (int c = 0; c < 3; ++c) {
            auto& o = out.c[c];
            d_.load(W.c[c].data());
            d_.laplacian(o.data());
            for (int ax = 0; ax < 3; ++ax) {
                d_.derivative(ax, d.data());
                for_each([&](std::size_t id, int k, int i, int j) {
                    const double coef = ax == 0 ? 0.5 * g_.h2.coord(i) : ax == 1 ? 0.5 * g_.h2.coord(j) : -chi * g_.z(k);
                    o[id] += coef * d[id];
                });
            }
            for (std::size_t id = 0; id < o.size(); ++id) o[id] += shift[c] * W.c[c][id];
        }
        return out;
    }

    // Lambda W.
    VectorField3D apply_Lambda(const VectorField3D& W) {
        check(W);
        BS3DRequest req;
        req.d3 = true;
        const Velocity3D V = bs_(W, req);
        VectorField3D out(g_);
        std::vector<double> d1(g_.size()), d2(g_.size());
        const std::size_t S = g_.slice();
        for (int c = 0; c < 3; ++c) {
            d_.load(W.c[c].data());
            d_.derivative(0, d1.data());
            d_.derivative(1, d2.data());
            auto& o = out.c[c];
            for (std::size_t id = 0; id < o.size(); ++id) {
                const std::size_t s = id % S;
                double v = bg_.U[0][s] * d1[id] + bg_.U[1][s] * d2[id] - bg_.g[s] * V.du[c][2][id];
                if (c == 2) v += V.u[0][id] * bg_.dg[0][s] + V.u[1][id] * bg_.dg[1][s];
                else v -= W.c[0][id] * bg_.dU[c][0][s] + W.c[1][id] * bg_.dU[c][1][s];
                o[id] = v;
            }
        }
        return out;
    }

    // (L_mu - alpha Lambda) W.
    VectorField3D apply(const VectorField3D& W, double mu, double alpha) {
        VectorField3D out = apply_L(W, mu);
        if (alpha != 0.0) {
            const VectorField3D lam = apply_Lambda(W);
            for (int c = 0; c < 3; ++c) axpy(-alpha, lam.c[c], out.c[c]);
        }
        return out;
    }

    // d_3 of every component.
    VectorField3D d3(const VectorField3D& W) {
        VectorField3D out(g_);
        for (int c = 0; c < 3; ++c) {
            d_.load(W.c[c].data());
            d_.derivative(2, out.c[c].data());
        }
        return out;
    }

    // ||d_3(A f) - A(d_3 f) + chi d_3 f|| / ||d_3 f|| in the discrete L^2 norm.
    double commutator_residual(const VectorField3D& f, double mu, double alpha) {
        const VectorField3D df = d3(f);
        const VectorField3D lhs = d3(apply(f, mu, alpha));
        const VectorField3D rhs = apply(df, mu, alpha);
        const double chi = chi_of(mu);
        double num = 0, den = 0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t id = 0; id < g_.size(); ++id) {
                const double r = lhs.c[c][id] - rhs.c[c][id] + chi * df.c[c][id];
                num += r * r;
                den += df.c[c][id] * df.c[c][id];
            }
        if (den == 0.0) return std::sqrt(num);  // xi_3-independent input: both sides vanish
        return std::sqrt(num / den);
    }

    // ||(L_mu - L) f|| / ||f||.
    double limit_gap(const VectorField3D& f, double mu) {
        const VectorField3D a = apply_L(f, mu), b = apply_L(f, mu_limit);
        double num = 0, den = 0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t id = 0; id < g_.size(); ++id) {
                num += (a.c[c][id] - b.c[c][id]) * (a.c[c][id] - b.c[c][id]);
                den += f.c[c][id] * f.c[c][id];
            }
        return std::sqrt(num / den);
    }

private:
    void check(const VectorField3D& W) const {
        if (W.grid != g_) throw GuardError("grid_mismatch", "operator applied to a field on another grid");
        if (W.weighted_repr) throw GuardError("weighted_repr", "3D operator works on plain samples");
    }
    template <class F>
    void for_each(F&& f) const {
        for (int k = 0; k < g_.n3; ++k)
            for (int i = 0; i < g_.h2.n; ++i)
                for (int j = 0; j < g_.h2.n; ++j) f(g_.idx(k, i, j), k, i, j);
    }

    Grid3D g_;
    Background2D bg_;
    BiotSavart3D bs_;
    SpectralDiff3D d_;
};

// script_L_{mu,alpha} on a horizontal grid, the route independent of the 3D law:
//   horizontal: (L_h - c) w' - alpha (U^G . grad w' - w' . grad U^G)
//   vertical:    L_h w_3     - alpha (U^G . grad w_3 + (K_2d * w_3) . grad g)
inline std::array<std::vector<double>, 3> apply_script_L_grid(const Grid2D& g, const std::array<std::vector<double>, 3>& w,
                                                              double mu, double alpha) {
    const Background2D bg(g);
    SpectralDiff2D D(g.n, g.h());
    BiotSavart2D bs(g);
    const double c = 1.0 - horizontal_strain_shift(mu);
    const std::size_t N = g.size();
    std::array<std::vector<double>, 3> out;
    std::vector<double> d1(N), d2(N), lap(N), u1(N), u2(N);
    bs.apply(w[2].data(), u1.data(), u2.data());
    for (int comp = 0; comp < 3; ++comp) {
        D.derivative(w[comp].data(), d1.data(), 0);
        D.derivative(w[comp].data(), d2.data(), 1);
        D.laplacian(w[comp].data(), lap.data());
        auto& o = out[comp];
        o.resize(N);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                const auto id = g.idx(i, j);
                const double lh = lap[id] + 0.5 * (g.coord(i) * d1[id] + g.coord(j) * d2[id]) + w[comp][id];
                const double transport = bg.U[0][id] * d1[id] + bg.U[1][id] * d2[id];
                if (comp < 2) {
                    const double stretch = w[0][id] * bg.dU[comp][0][id] + w[1][id] * bg.dU[comp][1][id];
                    o[id] = lh - c * w[comp][id] - alpha * (transport - stretch);
                } else {
                    o[id] = lh - alpha * (transport + u1[id] * bg.dg[0][id] + u2[id] * bg.dg[1][id]);
                }
            }
    }
    return out;
}

}  // namespace burgers
