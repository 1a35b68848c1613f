#pragma once

// Time integration in self-similar variables.
//
// 2D: d_tau w = L_h w - alpha (U^G . grad w + v . grad g) - v . grad w,  v = K_2d * w,
//     written conservatively as L_h w - div((alpha U^G + v) w + alpha g v).
// 3D: d_tau W = (L_mu - alpha Lambda) W - V . grad W + W . grad V,  V = K_3d * W,
//     with the transport part in curl form  curl((alpha U^G + V) x W + alpha V x G),
//     which keeps the discrete divergence and the slice means of W_3 at round-off.
//
// The 3D field lives on the comoving vertical coordinate eta = e^{-chi tau} xi_3. There the
// drift -chi xi_3 d_3 disappears, physical d_3 = e^{-chi tau} d_eta, and the vertical part of
// L_mu is the Fourier multiplier exp(-k^2 int e^{-2 chi s} ds).  At tau = 0 eta = xi_3.
//
// Both integrators are Strang splittings: half exact linear step, RK4 on the transport
// terms (velocity refreshed per stage), half exact linear step.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "burgers/biot_savart.hpp"
#include "burgers/core_fields.hpp"
#include "burgers/fft.hpp"
#include "burgers/grid.hpp"
#include "burgers/io.hpp"
#include "burgers/linearized.hpp"
#include "burgers/operator3d.hpp"
#include "burgers/selfsim.hpp"
#include "burgers/semigroup.hpp"
#include "burgers/weighted_spaces.hpp"

namespace burgers {

// ---- decay fits --------------------------------------------------------------

struct DecayRateFit {
    double tau0 = 0, tau1 = 0;
    double rate = 0;      // least-squares slope of log(norm) against tau
    double residual = 0;  // RMS deviation from the line, log units
    double target = 0;
    int samples = 0;
    // Claims are made only on clean fits.
    bool reliable() const { return residual < 0.05; }
    bool matches(double tol) const { return reliable() && std::abs(rate - target) <= tol; }
};

// Transient cut used when no window is given.
inline double default_fit_start(double dt) { return std::max(2.0, 4.0 * dt * 100.0); }

inline DecayRateFit fit_decay(const std::vector<double>& tau, const std::vector<double>& norm, double tau0,
                              double tau1, double target) {
    if (tau.size() != norm.size()) throw std::invalid_argument("fit_decay: size mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (tau[i] >= tau0 - 1e-12 && tau[i] <= tau1 + 1e-12) {
            if (!(norm[i] > 0)) throw GuardError("nonpositive_norm", "fit_decay needs positive norms");
            x.push_back(tau[i]);
            y.push_back(std::log(norm[i]));
        }
    if (x.size() < 10) throw GuardError("insufficient_samples", "fit_decay needs >= 10 samples in the window");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    DecayRateFit f;
    f.tau0 = tau0;
    f.tau1 = tau1;
    f.target = target;
    f.samples = static_cast<int>(x.size());
    f.rate = sxy / sxx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + f.rate * (x[i] - mx));
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

inline DecayRateFit fit_decay(const Table& history, const std::string& column, double tau0, double tau1,
                              double target) {
    return fit_decay(history.values("tau"), history.values(column), tau0, tau1, target);
}

// ---- 2D ------------------------------------------------------------------------

struct Evolve2DConfig {
    StrainParams params;
    WeightExponent m = WeightExponent::finite(4.0);
    double tau_end = 8.0;
    double dt = 0.05;
    bool nonlinear = true;
    int record_every = 1;
    double blowup_factor = 1e6;  // guard: norm growth relative to the initial norm
};

struct EvolutionState2D {
    ScalarField2D w;
    double tau = 0;
    Table history;
};

inline const std::vector<std::string>& history2d_columns() {
    static const std::vector<std::string> c{"tau",    "norm",  "grad_norm", "mean", "moment1",
                                            "moment2", "coef1", "coef2",     "profile_residual"};
    return c;
}

// Profile of e^{tau/2} w against lambda_i d_i g, lambda_i = e^{tau/2} theta_i.
struct Profile2D {
    std::array<double, 2> coef{0, 0};
    double residual = 0;
};

inline Profile2D profile2d(const ScalarField2D& w, double tau, const WeightExponent& m) {
    const Grid2D& g = w.grid;
    const double e = std::exp(0.5 * tau);
    const Moments mo = moments(w);
    Profile2D p;
    p.coef = {-e * mo.first[0], -e * mo.first[1]};
    ScalarField2D r(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double x1 = g.coord(i), x2 = g.coord(j);
            r(i, j) = e * w(i, j) - p.coef[0] * eval_dg(0, x1, x2) - p.coef[1] * eval_dg(1, x1, x2);
        }
    p.residual = norm_L2m(r, m, false);
    return p;
}

class Evolver2D {
public:
    Evolver2D(const Grid2D& g, const Evolve2DConfig& cfg)
        : g_(g), cfg_(checked(cfg)), half_(g, 0.5 * cfg.dt), bs_(g), d_(g.n, g.h()), bg_(g) {
        const std::size_t N = g.size();
        for (auto* v : {&u1_, &u2_, &f1_, &f2_, &t1_, &t2_}) v->resize(N);
    }

    // Transport right side: -div((alpha U + v) w + alpha g v).
    void rhs(const std::vector<double>& w, std::vector<double>& out) {
        const double a = cfg_.params.alpha;
        bs_.apply(w.data(), u1_.data(), u2_.data());
        double vmax = 0;
        for (std::size_t id = 0; id < w.size(); ++id) {
            const double c1 = a * bg_.U[0][id] + (cfg_.nonlinear ? u1_[id] : 0.0);
            const double c2 = a * bg_.U[1][id] + (cfg_.nonlinear ? u2_[id] : 0.0);
            vmax = std::max({vmax, std::abs(c1), std::abs(c2)});
            f1_[id] = c1 * w[id] + a * bg_.g[id] * u1_[id];
            f2_[id] = c2 * w[id] + a * bg_.g[id] * u2_[id];
        }
        if (cfg_.dt * vmax > g_.h()) throw GuardError("cfl", "transport CFL number exceeds 1");
        d_.derivative(f1_.data(), t1_.data(), 0);
        d_.derivative(f2_.data(), t2_.data(), 1);
        out.resize(w.size());
        for (std::size_t id = 0; id < w.size(); ++id) out[id] = -(t1_[id] + t2_[id]);
    }

    void step(std::vector<double>& w) {
        linear_half(w);
        rk4(w);
        linear_half(w);
    }

    EvolutionState2D run(const ScalarField2D& w0) {
        if (w0.grid != g_) throw GuardError("grid_mismatch", "initial data on another grid");
        EvolutionState2D st;
        st.w = project_zero_mean(w0.weighted_repr ? from_weighted(w0) : w0);
        st.history = Table(history2d_columns());
        const double n0 = norm_L2m(st.w, cfg_.m, false);
        record(st);
        const int steps = static_cast<int>(std::llround(cfg_.tau_end / cfg_.dt));
        for (int s = 1; s <= steps; ++s) {
            step(st.w.v);
            st.tau = s * cfg_.dt;
            const double nrm = norm_L2m(st.w, cfg_.m, false);
            if (!std::isfinite(nrm) || nrm > cfg_.blowup_factor * std::max(n0, 1e-300))
                throw GuardError("blowup", "norm growth beyond the blow-up guard at tau = " + format_double(st.tau));
            if (s % cfg_.record_every == 0 || s == steps) record(st);
        }
        return st;
    }

private:
    // Runs before any member that depends on dt is built.
    static const Evolve2DConfig& checked(const Evolve2DConfig& cfg) {
        if (!(cfg.dt > 0) || !(cfg.tau_end >= 0)) throw ConfigError("dt must be positive and tau_end nonnegative");
        cfg.params.validate();
        cfg.m.require_space();
        return cfg;
    }
    void linear_half(std::vector<double>& w) {
        tmp_.resize(w.size());
        half_.apply(w.data(), tmp_.data());
        w.swap(tmp_);
    }
    void rk4(std::vector<double>& w) {
        const double dt = cfg_.dt;
        const std::size_t N = w.size();
        k_.resize(N);
        acc_ = w;
        stage_.resize(N);
        const double c[4] = {0.0, 0.5, 0.5, 1.0}, b[4] = {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};
        for (int s = 0; s < 4; ++s) {
            if (s == 0) stage_ = w;
            else
                for (std::size_t i = 0; i < N; ++i) stage_[i] = w[i] + c[s] * dt * k_[i];
            rhs(stage_, k_);
            for (std::size_t i = 0; i < N; ++i) acc_[i] += b[s] * dt * k_[i];
        }
        w.swap(acc_);
    }
    void record(EvolutionState2D& st) {
        const ScalarField2D& w = st.w;
        ScalarField2D d1(g_), d2(g_);
        d_.derivative(w.v.data(), d1.v.data(), 0);
        d_.derivative(w.v.data(), d2.v.data(), 1);
        const double a = norm_L2m(d1, cfg_.m, false), b = norm_L2m(d2, cfg_.m, false);
        const Moments mo = moments(w);
        const Profile2D p = profile2d(w, st.tau, cfg_.m);
        st.history.add({st.tau, norm_L2m(w, cfg_.m, false), std::hypot(a, b), mo.zeroth, mo.first[0], mo.first[1],
                        p.coef[0], p.coef[1], p.residual});
    }

    Grid2D g_;
    Evolve2DConfig cfg_;
    LhSemigroup half_;
    BiotSavart2D bs_;
    SpectralDiff2D d_;
    Background2D bg_;
    std::vector<double> u1_, u2_, f1_, f2_, t1_, t2_, tmp_, k_, acc_, stage_;
};

inline EvolutionState2D evolve2d(const ScalarField2D& w0, const Evolve2DConfig& cfg) {
    Evolver2D ev(w0.grid, cfg);
    return ev.run(w0);
}

// ---- 3D ------------------------------------------------------------------------

// Fourier operations on the comoving grid; the physical vertical wavenumber is s * k_eta.
class ComovingSpectral {
public:
    explicit ComovingSpectral(const Grid3D& g) : g_(g), n_(g.h2.n), n3_(g.n3), fft_({g.n3, g.h2.n, g.h2.n}) {
        kh_.resize(n_);
        for (int i = 0; i < n_; ++i) kh_[i] = pi * signed_mode(i, n_) / g.h2.R;
        kv_.resize(n3_);
        for (int k = 0; k < n3_; ++k) kv_[k] = pi * signed_mode(k, n3_) / g.Z;
        for (auto& s : spec_) s.resize(fft_.spec_size());
    }

    // Physical derivative along axis (2 = vertical) of one scalar array.
    void derivative(const std::vector<double>& f, int axis, double s, std::vector<double>& out) {
        load(f, 0);
        emit(out, [&](int k, int i, int j) {
            const cplx ik[3] = {ik_h(i, 0), ik_h(j, 1), ik_v(k, s)};
            return ik[axis] * spec_[0][q(k, i, j)];
        });
    }

    // curl F for F given by three arrays.
    void curl(const std::array<std::vector<double>, 3>& F, double s, std::array<std::vector<double>, 3>& out) {
        for (int c = 0; c < 3; ++c) load(F[c], c);
        for (int c = 0; c < 3; ++c) {
            const int a = (c + 1) % 3, b = (c + 2) % 3;  // (curl F)_c = d_a F_b - d_b F_a
            emit(out[c], [&](int k, int i, int j) {
                const cplx ik[3] = {ik_h(i, 0), ik_h(j, 1), ik_v(k, s)};
                const std::size_t p = q(k, i, j);
                return ik[a] * spec_[b][p] - ik[b] * spec_[a][p];
            });
        }
    }

    void divergence(const std::array<std::vector<double>, 3>& W, double s, std::vector<double>& out) {
        for (int c = 0; c < 3; ++c) load(W[c], c);
        emit(out, [&](int k, int i, int j) {
            const std::size_t p = q(k, i, j);
            return ik_h(i, 0) * spec_[0][p] + ik_h(j, 1) * spec_[1][p] + ik_v(k, s) * spec_[2][p];
        });
    }

    // Leray projection W <- W - grad Delta^{-1} div W in physical wavenumbers.
    void leray(std::array<std::vector<double>, 3>& W, double s) {
        for (int c = 0; c < 3; ++c) load(W[c], c);
        std::array<cplx, 3> kk;
        auto proj = [&](int k, int i, int j, int c) {
            kk = {ik_h(i, 0), ik_h(j, 1), ik_v(k, s)};
            const std::size_t p = q(k, i, j);
            const cplx div = kk[0] * spec_[0][p] + kk[1] * spec_[1][p] + kk[2] * spec_[2][p];
            const double k2 = -std::real(kk[0] * kk[0] + kk[1] * kk[1] + kk[2] * kk[2]);
            return k2 > 0 ? spec_[c][p] + kk[c] * div / k2 : spec_[c][p];
        };
        for (int c = 0; c < 3; ++c) emit(W[c], [&](int k, int i, int j) { return proj(k, i, j, c); });
    }

    // Multiply the eta spectrum by exp(-a k_eta^2).
    void vertical_heat(std::vector<double>& f, double a) {
        load(f, 0);
        emit(f, [&](int k, int i, int j) { return std::exp(-a * kv_[k] * kv_[k]) * spec_[0][q(k, i, j)]; });
    }

private:
    std::size_t q(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * n_ + i) * (n_ / 2 + 1) + j;
    }
    cplx ik_h(int i, int) const { return i == n_ / 2 ? cplx(0) : cplx(0, kh_[i]); }
    cplx ik_v(int k, double s) const { return k == n3_ / 2 ? cplx(0) : cplx(0, s * kv_[k]); }

    void load(const std::vector<double>& f, int slot) {
        std::copy(f.begin(), f.end(), fft_.real());
        fft_.forward();
        spec_[slot].assign(fft_.spec(), fft_.spec() + fft_.spec_size());
    }
    template <class F>
    void emit(std::vector<double>& out, F&& value) {
        const int nc = n_ / 2 + 1;
        cplx* s = fft_.spec();
        const double norm = 1.0 / static_cast<double>(fft_.real_size());
        for (int k = 0; k < n3_; ++k)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < nc; ++j) s[q(k, i, j)] = value(k, i, j) * norm;
        fft_.backward();
        out.assign(fft_.real(), fft_.real() + fft_.real_size());
    }

    Grid3D g_;
    int n_, n3_;
    RealFFT fft_;
    std::vector<double> kh_, kv_;
    std::array<std::vector<cplx>, 3> spec_;
};

struct Evolve3DConfig {
    StrainParams params;
    WeightExponent m = WeightExponent::finite(4.0);
    double tau_end = 8.0;
    double dt = 0.05;
    bool nonlinear = true;
    int record_every = 1;
    double blowup_factor = 1e6;
    // Leray step when ||div W|| / ||grad W|| exceeds this; <= 0 disables projection.
    double divergence_tol = 1e-8;
    // bs3d skips vertical modes below this fraction of the largest.
    double mode_tolerance = 1e-14;
    // Window half-width parameter for coefficient extraction: |xi_3| <= e^{(chi - delta) tau}.
    double delta = 0.25;
};

struct EvolutionState3D {
    VectorField3D W;  // on the comoving grid (vertical coordinate eta)
    double tau = 0;
    Table history;
    std::vector<std::string> warnings;
    int leray_steps = 0;
};

inline const std::vector<std::string>& history3d_columns() {
    static const std::vector<std::string> c{"tau",   "norm",  "d3_norm",          "div_rel", "mean3",     "coef1",
                                            "coef2", "profile_residual", "u_norm",  "coef1_pred", "coef2_pred"};
    return c;
}

// Window of comoving slices |eta| <= min(e^{-delta tau}, Z), i.e. |xi_3| <= e^{(chi-delta) tau}
// inside the simulated column.
inline std::vector<int> central_window(const Grid3D& g, double tau, double delta) {
    const double half = std::min(std::exp(-delta * tau), g.Z);
    std::vector<int> ks;
    for (int k = 0; k < g.n3; ++k)
        if (std::abs(g.z(k)) <= half + 1e-12) ks.push_back(k);
    if (ks.empty()) throw GuardError("window_collapse", "central window contains no slice");
    return ks;
}

struct SecondaryProfile {
    std::array<double, 2> coef{0, 0};  // lambda_i + d_i
    double residual = 0;               // sup over window slices, L^2(m)^3
    double velocity_residual = -1;     // sup |e^{tau/2} V - sum coef_i d_i U^G| on the window
    int window_slices = 0;
    // Physical reading: u - u^sB ~ (T* - t)^{mu/2 - 1} sum coef_i d_i U^G(x sqrt(beta)) / sqrt(mu - 1)^{...}
    double physical_t = 0;
    double physical_exponent = 0;   // mu/2 - 1
    double physical_amplitude = 0;  // sup of the physical correction at physical_t
};

// Coefficients and residual of e^{tau/2} W against span{d_1 G, d_2 G} on the central window.
inline SecondaryProfile extract_secondary_profile(const VectorField3D& W, double tau, const StrainParams& p,
                                                  const WeightExponent& m, double delta,
                                                  BiotSavart3D* bs = nullptr) {
    const Grid3D& g = W.grid;
    const double chi = p.chi();
    const auto ks = central_window(g, tau, delta);
    const double e = std::exp(0.5 * tau);
    const auto th = theta_moments(W.c[2], g);
    SecondaryProfile sp;
    sp.window_slices = static_cast<int>(ks.size());
    for (int k : ks)
        for (int i = 0; i < 2; ++i) sp.coef[i] += e * th[k][i] / ks.size();

    const Grid2D& h = g.h2;
    std::array<std::vector<double>, 2> dg{std::vector<double>(h.size()), std::vector<double>(h.size())};
    std::array<std::vector<double>, 2> dU1{dg[0], dg[0]}, dU2{dg[0], dg[0]};  // dUi[c] = d_i U_c
    for (int i = 0; i < h.n; ++i)
        for (int j = 0; j < h.n; ++j) {
            const double x1 = h.coord(i), x2 = h.coord(j);
            const auto id = h.idx(i, j);
            const auto J = eval_grad_UG(x1, x2);
            for (int a = 0; a < 2; ++a) {
                dg[a][id] = eval_dg(a, x1, x2);
                dU1[a][id] = J[a][0];
                dU2[a][id] = J[a][1];
            }
        }
    std::vector<double> r(h.size());
    for (int k : ks) {
        double s2 = 0;
        for (int c = 0; c < 3; ++c) {
            const double* w = W.c[c].data() + k * g.slice();
            for (std::size_t id = 0; id < h.size(); ++id)
                r[id] = e * w[id] - (c == 2 ? sp.coef[0] * dg[0][id] + sp.coef[1] * dg[1][id] : 0.0);
            const double nc = norm_L2m(r.data(), h, m, false, false);
            s2 += nc * nc;
        }
        sp.residual = std::max(sp.residual, std::sqrt(s2));
    }

    if (bs) {
        bs->set_vertical_scale(std::exp(-chi * tau));
        const Velocity3D V = (*bs)(W);
        double worst = 0;
        for (int k : ks)
            for (std::size_t id = 0; id < h.size(); ++id)
                for (int c = 0; c < 2; ++c) {
                    const double prof = sp.coef[0] * dU1[c][id] + sp.coef[1] * dU2[c][id];
                    worst = std::max(worst, std::abs(e * V.u[c][k * g.slice() + id] - prof));
                }
        sp.velocity_residual = worst;
    }

    // Physical correction sqrt(beta) e^{-tau/2} sum coef_i d_i U^G(sqrt(beta) x): its sup is
    // sqrt(beta) e^{-tau/2} max|sum coef_i d_i U^G|, with beta e^{-tau} = (mu-1)/T* (1-t/T*)^{mu-2}.
    sp.physical_t = from_selfsim_time(tau, p);
    sp.physical_exponent = 0.5 * p.mu - 1.0;
    double prof_max = 0;
    for (std::size_t id = 0; id < h.size(); ++id)
        for (int c = 0; c < 2; ++c)
            prof_max = std::max(prof_max, std::abs(sp.coef[0] * dU1[c][id] + sp.coef[1] * dU2[c][id]));
    sp.physical_amplitude = std::sqrt(p.beta(sp.physical_t)) * std::exp(-0.5 * tau) * prof_max;
    return sp;
}

class Evolver3D {
public:
    Evolver3D(const Grid3D& g, const Evolve3DConfig& cfg)
        : g_(g), cfg_(cfg), bs_(g), bs2_(g.h2), sp_(g), bg_(g.h2), gh_(gauss_hermite_modified(24)) {
        if (!(cfg.dt > 0) || !(cfg.tau_end >= 0)) throw ConfigError("dt must be positive and tau_end nonnegative");
        cfg.params.validate();
        cfg.m.require_space();
        if (!(cfg.delta > 0)) throw ConfigError("delta must be positive");
        bs_.set_mode_tolerance(cfg.mode_tolerance);
        chi_ = cfg.params.chi();
        hshift_ = horizontal_strain_shift(cfg.params.mu) - 1.0;
        for (auto& f : F_) f.resize(g.size());
        for (std::size_t q = 0; q < gh_.x.size(); ++q) gh_.w[q] *= std::exp(-gh_.x[q] * gh_.x[q]) / std::sqrt(pi);
    }

    BiotSavart3D& biot_savart() { return bs_; }
    double scale(double tau) const { return std::exp(-chi_ * tau); }

    // curl((alpha U + V) x W + alpha V x G) at time tau.
    void rhs(const std::array<std::vector<double>, 3>& W, double tau, std::array<std::vector<double>, 3>& out) {
        const double a = cfg_.params.alpha, s = scale(tau);
        bs_.set_vertical_scale(s);
        VectorField3D wf(g_);
        wf.c = W;
        const Velocity3D V = bs_(wf, BS3DRequest{true, false, false});
        const std::size_t S = g_.slice();
        const bool nl = cfg_.nonlinear;
        double vmax_h = 0, vmax_v = 0;
        for (std::size_t id = 0; id < g_.size(); ++id) {
            const std::size_t h = id % S;
            const double c1 = a * bg_.U[0][h] + (nl ? V.u[0][id] : 0.0);
            const double c2 = a * bg_.U[1][h] + (nl ? V.u[1][id] : 0.0);
            const double c3 = nl ? V.u[2][id] : 0.0;
            vmax_h = std::max({vmax_h, std::abs(c1), std::abs(c2)});
            vmax_v = std::max(vmax_v, std::abs(c3));
            const double w1 = W[0][id], w2 = W[1][id], w3 = W[2][id];
            const double G = a * bg_.g[h];
            // (c x W) + V x (0, 0, alpha g)
            F_[0][id] = c2 * w3 - c3 * w2 + V.u[1][id] * G;
            F_[1][id] = c3 * w1 - c1 * w3 - V.u[0][id] * G;
            F_[2][id] = c1 * w2 - c2 * w1;
        }
        const double cfl = cfg_.dt * (vmax_h / g_.h2.h() + vmax_v / (g_.h3() / s));
        if (cfl > 1.0) throw GuardError("cfl", "transport CFL number exceeds 1");
        sp_.curl(F_, s, out);
    }

    EvolutionState3D run(const VectorField3D& W0) {
        if (W0.grid != g_) throw GuardError("grid_mismatch", "initial data on another grid");
        if (W0.weighted_repr) throw GuardError("weighted_repr", "3D evolution works on plain samples");
        EvolutionState3D st;
        st.W = W0;
        st.history = Table(history3d_columns());
        const double n0 = norm_Xbb(st.W, cfg_.m, g_.Z, false);
        const double div0 = divergence_ratio(st.W.c, 0.0);
        if (div0 > std::max(cfg_.divergence_tol, 1e-8))
            throw ConfigError("initial data is not divergence-free (relative divergence " + format_double(div0) + ")");
        const double mean0 = max_third_slice_mean(st.W);
        if (mean0 > moment_tolerance(n0))
            throw ConfigError("third component of the initial data has nonzero slice means");
        // Linear prediction of the profile coefficients: the N(0, 1/chi) average of theta_i[w_3]
        // minus alpha int_0^tau e^{s/2} <h_i(s)> ds, integrated with the trapezoid rule.
        const bool forced = cfg_.params.alpha != 0.0;
        std::array<double, 2> f_prev{0, 0};
        {
            const auto th = theta_moments(st.W.c[2], g_);
            std::vector<double> t(g_.n3);
            for (int i = 0; i < 2; ++i) {
                for (int k = 0; k < g_.n3; ++k) t[k] = th[k][i];
                pred_[i] = limit_average(t, 0.0);
            }
            if (forced) f_prev = forcing_average(st.W.c, 0.0);
        }
        record(st);
        const int steps = static_cast<int>(std::llround(cfg_.tau_end / cfg_.dt));
        for (int s = 1; s <= steps; ++s) {
            const double tau = (s - 1) * cfg_.dt;
            step(st.W.c, tau);
            st.tau = s * cfg_.dt;
            if (cfg_.divergence_tol > 0) {
                const double dr = divergence_ratio(st.W.c, st.tau);
                if (dr > cfg_.divergence_tol) {
                    sp_.leray(st.W.c, scale(st.tau));
                    ++st.leray_steps;
                    st.warnings.push_back("leray projection at tau = " + format_double(st.tau) +
                                          " (relative divergence " + format_double(dr) + ")");
                }
            }
            if (forced) {
                const auto f = forcing_average(st.W.c, st.tau);
                for (int i = 0; i < 2; ++i)
                    pred_[i] -= cfg_.params.alpha * 0.5 * cfg_.dt *
                                (std::exp(0.5 * (st.tau - cfg_.dt)) * f_prev[i] + std::exp(0.5 * st.tau) * f[i]);
                f_prev = f;
            }
            const double nrm = norm_Xbb(st.W, cfg_.m, g_.Z, false);
            if (!std::isfinite(nrm) || nrm > cfg_.blowup_factor * std::max(n0, 1e-300))
                throw GuardError("blowup", "norm growth beyond the blow-up guard at tau = " + format_double(st.tau));
            if (s % cfg_.record_every == 0 || s == steps) record(st);
        }
        return st;
    }

    void step(std::array<std::vector<double>, 3>& W, double tau) {
        const double h = 0.5 * cfg_.dt;
        linear(W, tau, h);
        rk4(W, tau);
        linear(W, tau + h, h);
    }

    // ||div W|| / ||grad W|| with physical derivatives (discrete L^2).
    double divergence_ratio(const std::array<std::vector<double>, 3>& W, double tau) {
        const double s = scale(tau);
        sp_.divergence(W, s, tmp_);
        double num = 0, den = 0;
        for (double x : tmp_) num += x * x;
        for (int c = 0; c < 3; ++c)
            for (int ax = 0; ax < 3; ++ax) {
                sp_.derivative(W[c], ax, s, tmp_);
                for (double x : tmp_) den += x * x;
            }
        return den > 0 ? std::sqrt(num / den) : 0.0;
    }

private:
    // e^{h L_mu} from tau: horizontal kernel with component shifts, then the vertical multiplier.
    void linear(std::array<std::vector<double>, 3>& W, double tau, double h) {
        if (!semigroup_ || std::abs(semigroup_->tau() - h) > 1e-15) semigroup_.emplace(g_.h2, h);
        const double a = std::exp(-2.0 * chi_ * tau) * (-std::expm1(-2.0 * chi_ * h)) / (2.0 * chi_);
        const std::size_t S = g_.slice();
        std::vector<double> out(S);
        for (int c = 0; c < 3; ++c) {
            const double f = c < 2 ? std::exp(h * hshift_) : 1.0;
            for (int k = 0; k < g_.n3; ++k) {
                double* slice = W[c].data() + k * S;
                semigroup_->apply(slice, out.data());
                for (std::size_t id = 0; id < S; ++id) slice[id] = f * out[id];
            }
            sp_.vertical_heat(W[c], a);
        }
    }

    void rk4(std::array<std::vector<double>, 3>& W, double tau) {
        const double dt = cfg_.dt;
        const double c[4] = {0.0, 0.5, 0.5, 1.0}, b[4] = {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};
        auto acc = W, stage = W;
        std::array<std::vector<double>, 3> k;
        // The stretching of eta belongs to the linear flow; the transport substep sits at the
        // split midpoint with s frozen, so every stage increment is divergence-free there.
        const double mid = tau + 0.5 * dt;
        for (int s = 0; s < 4; ++s) {
            if (s > 0)
                for (int d = 0; d < 3; ++d)
                    for (std::size_t i = 0; i < W[d].size(); ++i) stage[d][i] = W[d][i] + c[s] * dt * k[d][i];
            rhs(stage, mid, k);
            for (int d = 0; d < 3; ++d)
                for (std::size_t i = 0; i < W[d].size(); ++i) acc[d][i] += b[s] * dt * k[d][i];
        }
        W.swap(acc);
    }

    void record(EvolutionState3D& st) {
        const double s = scale(st.tau);
        VectorField3D d3(g_);
        for (int c = 0; c < 3; ++c) sp_.derivative(st.W.c[c], 2, s, d3.c[c]);
        const double nrm = norm_Xbb(st.W, cfg_.m, g_.Z, false);
        const double d3n = norm_Xbb(d3, cfg_.m, g_.Z, false);
        const SecondaryProfile prof = extract_secondary_profile(st.W, st.tau, cfg_.params, cfg_.m, cfg_.delta);
        // Running U-norm: sup of e^{tau/2} ||W|| + e^{(1/2 + chi) tau} ||d_3 W||.
        const double u = std::exp(0.5 * st.tau) * nrm + std::exp((0.5 + chi_) * st.tau) * d3n;
        unorm_ = std::max(unorm_, u);
        st.history.add({st.tau, nrm, d3n, divergence_ratio(st.W.c, st.tau), max_third_slice_mean(st.W), prof.coef[0],
                        prof.coef[1], prof.residual, unorm_, pred_[0], pred_[1]});
    }

    // Average of per-slice values v(eta_k) against the limit density N(0, 1/chi) of e^{tau L_3},
    // read at eta = e^{-chi tau} xi_3 by Gauss-Hermite nodes in xi_3.
    double limit_average(const std::vector<double>& v, double tau) const {
        std::vector<double> eta(gh_.x.size());
        const double c = scale(tau) * std::sqrt(2.0 / chi_);
        for (std::size_t q = 0; q < eta.size(); ++q) eta[q] = c * gh_.x[q];
        const Eigen::VectorXd at = lagrange_matrix(vertical_axis(g_), eta, OutOfRange::Clamp) *
                                   Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        double s = 0;
        for (std::size_t q = 0; q < eta.size(); ++q) s += gh_.w[q] * at(static_cast<Eigen::Index>(q));
        return s;
    }

    // <h_i(tau)> with h_i(xi_3) = -int xi_i ((V' - K_2d * w_3) . grad' g - g d_3 V_3) dxi'.
    std::array<double, 2> forcing_average(const std::array<std::vector<double>, 3>& W, double tau) {
        bs_.set_vertical_scale(scale(tau));
        VectorField3D wf(g_);
        wf.c = W;
        const Velocity3D V = bs_(wf, BS3DRequest{true, true, false});
        const Grid2D& h = g_.h2;
        const std::size_t S = g_.slice();
        std::vector<double> u1(S), u2(S), f(S);
        std::array<std::vector<double>, 2> hk{std::vector<double>(g_.n3), std::vector<double>(g_.n3)};
        for (int k = 0; k < g_.n3; ++k) {
            const std::size_t o = k * S;
            bs2_.apply(W[2].data() + o, u1.data(), u2.data());
            for (std::size_t id = 0; id < S; ++id)
                f[id] = (V.u[0][o + id] - u1[id]) * bg_.dg[0][id] + (V.u[1][o + id] - u2[id]) * bg_.dg[1][id] -
                        bg_.g[id] * V.du[2][2][o + id];
            const Moments mo = moments(f.data(), h);
            hk[0][k] = -mo.first[0];
            hk[1][k] = -mo.first[1];
        }
        return {limit_average(hk[0], tau), limit_average(hk[1], tau)};
    }

    Grid3D g_;
    Evolve3DConfig cfg_;
    BiotSavart3D bs_;
    BiotSavart2D bs2_;
    ComovingSpectral sp_;
    Background2D bg_;
    Quadrature1D gh_;
    std::array<double, 2> pred_{0, 0};
    std::optional<LhSemigroup> semigroup_;
    double chi_ = 0, hshift_ = 0, unorm_ = 0;
    std::array<std::vector<double>, 3> F_;
    std::vector<double> tmp_;
};

// Optional w2d is a horizontal profile added to the third component of every slice.
inline EvolutionState3D evolve3d(const VectorField3D& W0, const Evolve3DConfig& cfg,
                                 const ScalarField2D* w2d = nullptr) {
    VectorField3D W = W0;
    if (w2d) {
        if (w2d->grid != W0.grid.h2) throw GuardError("grid_mismatch", "w2d on another horizontal grid");
        const ScalarField2D base = project_zero_mean(*w2d);
        for (int k = 0; k < W.grid.n3; ++k)
            for (std::size_t id = 0; id < W.grid.slice(); ++id) W.c[2][k * W.grid.slice() + id] += base.v[id];
    }
    Evolver3D ev(W.grid, cfg);
    return ev.run(W);
}

// ---- initial data ---------------------------------------------------------------

// eps (-g phi', 0, d_1 g phi) with phi = sin(pi xi_3 / Z): divergence-free, zero slice means.
inline VectorField3D modulated_field(const Grid3D& g, double eps) {
    const double k = pi / g.Z;
    return VectorField3D::sample(g, [&](double x1, double x2, double z) -> std::array<double, 3> {
        return {-eps * eval_g(x1, x2) * k * std::cos(k * z), 0.0, eps * eval_dg(0, x1, x2) * std::sin(k * z)};
    });
}

inline ScalarField2D d1g_field(const Grid2D& g) {
    return ScalarField2D::sample(g, [](double x1, double x2) { return eval_dg(0, x1, x2); });
}

// Zero-mean column: g minus the unit-mass Gaussian of variance 2 (radial, so no first moments).
inline ScalarField2D gaussian_column_field(const Grid2D& g) {
    return ScalarField2D::sample(g, [](double x1, double x2) {
        const double r2 = x1 * x1 + x2 * x2;
        return eval_g(x1, x2) - std::exp(-r2 / 8.0) / (8.0 * pi);
    });
}

}  // namespace burgers
