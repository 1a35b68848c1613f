#pragma once

// Free-space Biot-Savart solvers.
//
// Horizontal convolutions use the truncated-kernel method: the Green's function
// of -Delta (2D log kernel, or the modified Helmholtz kernel K0 for a vertical
// Fourier mode a != 0) is cut off at radius L beyond the grid diagonal, its
// Fourier transform is known in closed form, and the resulting kernel is
// sampled on a 4x oversampled grid. Restricting it to the offsets needed by an
// aperiodic convolution on the 2x padded grid gives an exact discrete kernel.
// The vertical direction is periodic on [-Z, Z).

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "burgers/fft.hpp"
#include "burgers/grid.hpp"
#include "burgers/weighted_spaces.hpp"

namespace burgers {

enum class KernelKind { G, D1, D2, D11, D12, D22 };

// 1 - x K_1(x); for small x the leading terms cancel, so use the ascending series
//   x K_1(x) = 1 + x I_1(x) ln(x/2) - (x^2/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!).
inline double one_minus_xK1(double x) {
    if (x >= 1.0) return 1.0 - x * std::cyl_bessel_k(1.0, x);
    const double y = 0.25 * x * x;
    double term = 1.0, I1 = 0.0, S = 0.0;
    double psi1 = -0.57721566490153286061, psi2 = psi1 + 1.0;  // psi(k+1), psi(k+2)
    for (int k = 0; k < 30; ++k) {
        if (k > 0) {
            term *= y / (k * (k + 1.0));
            psi1 += 1.0 / k;
            psi2 += 1.0 / (k + 1.0);
        }
        I1 += term;
        S += (psi1 + psi2) * term;
    }
    I1 *= 0.5 * x;
    return -x * I1 * std::log(0.5 * x) + y * S;
}

class TruncatedKernel {
public:
    // Horizontal grid with n points on [-R, R).
    TruncatedKernel(int n, double R) : n_(n), h_(2 * R / n), L_(2.0 * std::sqrt(2.0) * R * 1.05) {
        const int N4 = 4 * n_;
        const double P4 = N4 * h_;
        const int nc = N4 / 2 + 1;
        jl_.resize(static_cast<std::size_t>(N4) * nc);
        kabs_.resize(jl_.size());
        // J0(kL), J1(kL) depend only on |k|; cache by integer m1^2 + m2^2.
        std::map<long, std::pair<double, double>> cache;
        for (int i = 0; i < N4; ++i)
            for (int j = 0; j < nc; ++j) {
                const int m1 = signed_mode(i, N4), m2 = j;
                const long key = static_cast<long>(m1) * m1 + static_cast<long>(m2) * m2;
                const double k = 2 * pi / P4 * std::sqrt(static_cast<double>(key));
                auto it = cache.find(key);
                if (it == cache.end())
                    it = cache.emplace(key, std::make_pair(std::cyl_bessel_j(0.0, k * L_), std::cyl_bessel_j(1.0, k * L_)))
                             .first;
                jl_[static_cast<std::size_t>(i) * nc + j] = it->second;
                kabs_[static_cast<std::size_t>(i) * nc + j] = k;
            }
    }

    double cutoff() const { return L_; }

    // Spectrum (layout 2n x (n+1)) of h^2 * kernel restricted to the padded grid,
    // for vertical wavenumber a >= 0 and the requested derivative.
    std::vector<cplx> padded_transform(double a, KernelKind kind) const {
        const int N4 = 4 * n_, nc4 = N4 / 2 + 1;
        const double P4 = N4 * h_;
        if (!big_) {
            big_ = std::make_unique<RealFFT>(std::vector<int>{N4, N4});
            pad_ = std::make_unique<RealFFT>(std::vector<int>{2 * n_, 2 * n_});
        }
        RealFFT& big = *big_;
        cplx* s = big.spec();
        double K0 = 0, K1 = 0, om = 0;
        if (a > 0) {
            K0 = std::cyl_bessel_k(0.0, a * L_);
            K1 = std::cyl_bessel_k(1.0, a * L_);
            om = one_minus_xK1(a * L_);
        }
        for (int i = 0; i < N4; ++i)
            for (int j = 0; j < nc4; ++j) {
                const std::size_t id = static_cast<std::size_t>(i) * nc4 + j;
                const double k = kabs_[id];
                const auto [J0, J1] = jl_[id];
                double G;
                if (a == 0.0) {
                    if (k == 0.0)
                        G = L_ * L_ / 4.0 - 0.5 * L_ * L_ * std::log(L_);
                    else
                        G = (1.0 - J0) / (k * k) - L_ * std::log(L_) * J1 / k;
                } else {
                    // 1 + kL K0 J1 - aL K1 J0, regrouped so the k = 0 entry has no cancellation
                    G = (om + a * L_ * K1 * (1.0 - J0) + k * L_ * K0 * J1) / (k * k + a * a);
                }
                const double k1 = 2 * pi / P4 * signed_mode(i, N4), k2 = 2 * pi / P4 * j;
                const bool ny1 = (i == N4 / 2), ny2 = (j == N4 / 2);
                cplx m = 1.0;
                switch (kind) {
                    case KernelKind::G: break;
                    case KernelKind::D1: m = ny1 ? 0.0 : cplx(0, k1); break;
                    case KernelKind::D2: m = ny2 ? 0.0 : cplx(0, k2); break;
                    case KernelKind::D11: m = -k1 * k1; break;
                    case KernelKind::D22: m = -k2 * k2; break;
                    case KernelKind::D12: m = (ny1 || ny2) ? 0.0 : -k1 * k2; break;
                }
                s[id] = G * m / (P4 * P4);
            }
        big.backward();  // sampled kernel at offsets on the 4n periodic grid
        const int N2 = 2 * n_;
        RealFFT& pad = *pad_;
        double* r = pad.real();
        for (int o1 = -n_; o1 < n_; ++o1)
            for (int o2 = -n_; o2 < n_; ++o2) {
                const int src = ((o1 + N4) % N4) * N4 + (o2 + N4) % N4;
                r[((o1 + N2) % N2) * N2 + (o2 + N2) % N2] = h_ * h_ * big.real()[src];
            }
        pad.forward();
        return {pad.spec(), pad.spec() + pad.spec_size()};
    }

private:
    int n_;
    double h_, L_;
    std::vector<std::pair<double, double>> jl_;
    std::vector<double> kabs_;
    // Work transforms reused across calls (plans are the expensive part).
    mutable std::unique_ptr<RealFFT> big_, pad_;
};

// Two-dimensional law u = K_2d * w = (d2 psi, -d1 psi), -Delta psi = w.
class BiotSavart2D {
public:
    explicit BiotSavart2D(const Grid2D& g) : g_(g), fft_({2 * g.n, 2 * g.n}) {
        TruncatedKernel tk(g.n, g.R);
        k1_ = tk.padded_transform(0.0, KernelKind::D1);
        k2_ = tk.padded_transform(0.0, KernelKind::D2);
    }

    const Grid2D& grid() const { return g_; }

    VectorField2D operator()(const ScalarField2D& w, bool check_tail = true) {
        if (w.grid != g_) throw GuardError("grid_mismatch", "bs2d field on a different grid");
        if (w.weighted_repr) return (*this)(from_weighted(w), check_tail);
        if (check_tail && tail_fraction(w.v.data(), g_, WeightExponent::finite(0), false) > tail_fraction_limit)
            throw GuardError("tail_mass", "bs2d input does not decay inside the grid");
        VectorField2D u(g_);
        apply(w.v.data(), u.c[0].data(), u.c[1].data());
        return u;
    }

    // Raw-array form used by the evolution code.
    void apply(const double* w, double* u1, double* u2) {
        load(w);
        fft_.forward();
        spec_.assign(fft_.spec(), fft_.spec() + fft_.spec_size());
        // u1 = d2 G * w
        emit(k2_, 1.0, u1);
        emit(k1_, -1.0, u2);
    }

private:
    void load(const double* w) {
        const int n = g_.n, N2 = 2 * n;
        double* r = fft_.real();
        std::fill(r, r + fft_.real_size(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[i * N2 + j] = w[i * n + j];
    }
    void emit(const std::vector<cplx>& K, double sign, double* out) {
        const int n = g_.n, N2 = 2 * n;
        cplx* s = fft_.spec();
        const double norm = sign / static_cast<double>(fft_.real_size());
        for (std::size_t q = 0; q < spec_.size(); ++q) s[q] = spec_[q] * K[q] * norm;
        fft_.backward();
        const double* r = fft_.real();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[i * n + j] = r[i * N2 + j];
    }

    Grid2D g_;
    RealFFT fft_;
    std::vector<cplx> k1_, k2_, spec_;
};

// Output of the 3D law: velocity, and optionally its gradient.
struct Velocity3D {
    std::array<std::vector<double>, 3> u;
    // du[i][j] = d u_i / d xi_j (filled only when requested)
    std::array<std::array<std::vector<double>, 3>, 3> du;
    bool has_grad = false;
    bool has_d3 = false;
};

// Which outputs bs3d should compute.
struct BS3DRequest {
    bool velocity_vertical = true;  // u_3
    bool d3 = false;                // d u_i / d xi_3
    bool horizontal_grad = false;   // d u_i / d xi_{1,2}
};

// Three-dimensional law u = curl psi, -Delta psi = w, periodic in the vertical grid
// coordinate. The physical vertical wavenumber of grid mode q is scale * pi q / Z, so a
// comoving coordinate eta = xi_3 / scale is handled by set_vertical_scale. Vertical
// modes whose content is below mode_tolerance times the largest are skipped.
class BiotSavart3D {
public:
    explicit BiotSavart3D(const Grid3D& g)
        : g_(g), tk_(g.h2.n, g.h2.R), nm_(g.n3 / 2 + 1), plane_(g.h2.size()) {
        const int n3 = g.n3, N2 = 2 * g.h2.n;
        eta_real_.reset(fftw_alloc_real(g.size()));
        eta_spec_.reset(fftw_alloc_complex(static_cast<std::size_t>(nm_) * plane_));
        const int howmany = static_cast<int>(plane_), stride = howmany;
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        r2c_ = fftw_plan_many_dft_r2c(1, &n3, howmany, eta_real_.get(), nullptr, stride, 1, eta_spec_.get(), nullptr,
                                      stride, 1, FFTW_ESTIMATE);
        c2r_ = fftw_plan_many_dft_c2r(1, &n3, howmany, eta_spec_.get(), nullptr, stride, 1, eta_real_.get(), nullptr,
                                      stride, 1, FFTW_ESTIMATE);
        pad_.reset(fftw_alloc_complex(static_cast<std::size_t>(N2) * N2));
        fwd_ = fftw_plan_dft_2d(N2, N2, pad_.get(), pad_.get(), FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(N2, N2, pad_.get(), pad_.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~BiotSavart3D() {
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        for (auto p : {r2c_, c2r_, fwd_, bwd_}) fftw_destroy_plan(p);
    }
    BiotSavart3D(const BiotSavart3D&) = delete;
    BiotSavart3D& operator=(const BiotSavart3D&) = delete;

    const Grid3D& grid() const { return g_; }

    void set_vertical_scale(double s) {
        if (!(s > 0)) throw ConfigError("vertical scale must be positive");
        if (s != scale_) {
            scale_ = s;
            for (auto& [key, k] : cache_)
                if (key.first != 0) k.clear();  // recomputed on demand
        }
    }
    double vertical_scale() const { return scale_; }
    void set_mode_tolerance(double t) { mode_tol_ = t; }
    const std::vector<int>& active_modes() const { return active_; }

    Velocity3D operator()(const VectorField3D& w, const BS3DRequest& req = {}) {
        if (w.grid != g_) throw GuardError("grid_mismatch", "bs3d field on a different grid");
        if (w.weighted_repr) throw GuardError("weighted_repr", "bs3d works on plain samples");
        const std::size_t M = static_cast<std::size_t>(nm_) * plane_;
        for (int c = 0; c < 3; ++c) {
            std::copy(w.c[c].begin(), w.c[c].end(), eta_real_.get());
            fftw_execute(r2c_);
            const cplx* e = reinterpret_cast<const cplx*>(eta_spec_.get());
            what_[c].assign(e, e + M);
        }
        select_modes();

        // u = curl psi: u1 = d2 psi3 - d3 psi2, u2 = d3 psi1 - d1 psi3, u3 = d1 psi2 - d2 psi1.
        const std::array<std::vector<Term>, 3> curl{{{{2, 2, 1.0}, {1, 3, -1.0}},
                                                     {{0, 3, 1.0}, {2, 1, -1.0}},
                                                     {{1, 1, 1.0}, {0, 2, -1.0}}}};
        struct Output {
            const std::vector<Term>* terms;
            int extra;
            std::vector<double>* dst;
        };
        Velocity3D out;
        std::vector<Output> outs;
        const bool need_u3 = req.velocity_vertical || req.d3 || req.horizontal_grad;
        for (int i = 0; i < 3; ++i)
            if (i < 2 || need_u3) outs.push_back({&curl[i], 0, &out.u[i]});
        if (req.d3) {
            out.has_d3 = true;
            for (int i = 0; i < 3; ++i) outs.push_back({&curl[i], 3, &out.du[i][2]});
        }
        if (req.horizontal_grad) {
            out.has_grad = true;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 2; ++j) outs.push_back({&curl[i], j + 1, &out.du[i][j]});
        }

        std::vector<std::vector<cplx>> spec(outs.size(), std::vector<cplx>(M, cplx(0)));
        const int n = g_.h2.n, N2 = 2 * n;
        const std::size_t P = static_cast<std::size_t>(N2) * N2;
        std::array<std::vector<cplx>, 3> padded;
        std::vector<cplx> acc(P);
        cplx* pad = reinterpret_cast<cplx*>(pad_.get());
        const double norm = 1.0 / (static_cast<double>(P) * g_.n3);
        for (int q : active_) {
            for (int c = 0; c < 3; ++c) {
                std::fill(pad, pad + P, cplx(0));
                const cplx* src = what_[c].data() + q * plane_;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) pad[static_cast<std::size_t>(i) * N2 + j] = src[static_cast<std::size_t>(i) * n + j];
                fftw_execute(fwd_);
                padded[c].assign(pad, pad + P);
            }
            const double a = scale_ * pi * q / g_.Z;
            for (std::size_t o = 0; o < outs.size(); ++o) {
                std::fill(acc.begin(), acc.end(), cplx(0));
                for (const auto& t : *outs[o].terms) {
                    int h1 = 0, h2 = 0, v = 0;
                    for (int ax : {t.axis, outs[o].extra}) {
                        if (ax == 1) ++h1;
                        if (ax == 2) ++h2;
                        if (ax == 3) ++v;
                    }
                    cplx vert = 1.0;
                    if (v == 1) vert = (q == g_.n3 / 2) ? cplx(0) : cplx(0, a);
                    if (v == 2) vert = -a * a;
                    if (vert == cplx(0)) continue;
                    const std::vector<cplx>& K = kernel(q, kind_of(h1, h2));
                    const cplx f = vert * t.sign;
                    const cplx* pc = padded[t.c].data();
                    for (std::size_t k = 0; k < P; ++k) acc[k] += f * K[k] * pc[k];
                }
                std::copy(acc.begin(), acc.end(), pad);
                fftw_execute(bwd_);
                cplx* dst = spec[o].data() + q * plane_;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        dst[static_cast<std::size_t>(i) * n + j] = pad[static_cast<std::size_t>(i) * N2 + j] * norm;
            }
        }
        for (std::size_t o = 0; o < outs.size(); ++o) {
            std::copy(spec[o].begin(), spec[o].end(), reinterpret_cast<cplx*>(eta_spec_.get()));
            fftw_execute(c2r_);
            outs[o].dst->assign(eta_real_.get(), eta_real_.get() + g_.size());
        }
        return out;
    }

private:
    // sign * d_axis psi_c with axis in {1, 2, 3}.
    struct Term {
        int c;
        int axis;
        double sign;
    };

    static int kind_of(int h1, int h2) {
        if (h1 == 0 && h2 == 0) return 0;
        if (h1 == 1 && h2 == 0) return 1;
        if (h1 == 0 && h2 == 1) return 2;
        if (h1 == 2) return 3;
        if (h1 == 1 && h2 == 1) return 4;
        return 5;
    }

    void select_modes() {
        std::vector<double> content(nm_, 0.0);
        for (int c = 0; c < 3; ++c)
            for (int q = 0; q < nm_; ++q) {
                const cplx* p = what_[c].data() + q * plane_;
                for (std::size_t k = 0; k < plane_; ++k) content[q] = std::max(content[q], std::abs(p[k]));
            }
        const double top = *std::max_element(content.begin(), content.end());
        active_.clear();
        for (int q = 0; q < nm_; ++q)
            if (content[q] > 0.0 && content[q] > mode_tol_ * top) active_.push_back(q);
    }

    // Full 2n x 2n spectrum of the kernel for mode q, expanded from the r2c layout.
    const std::vector<cplx>& kernel(int q, int kind) {
        auto& k = cache_[{q, kind}];
        if (!k.empty()) return k;
        static constexpr std::array<KernelKind, 6> kinds{KernelKind::G,   KernelKind::D1,  KernelKind::D2,
                                                         KernelKind::D11, KernelKind::D12, KernelKind::D22};
        const double a = q == 0 ? 0.0 : scale_ * pi * q / g_.Z;
        const std::vector<cplx> half = tk_.padded_transform(a, kinds[kind]);
        const int n = g_.h2.n, N2 = 2 * n, nc = n + 1;
        k.resize(static_cast<std::size_t>(N2) * N2);
        for (int i = 0; i < N2; ++i)
            for (int j = 0; j < N2; ++j)
                k[static_cast<std::size_t>(i) * N2 + j] =
                    j < nc ? half[static_cast<std::size_t>(i) * nc + j]
                           : std::conj(half[static_cast<std::size_t>((N2 - i) % N2) * nc + (N2 - j)]);
        return k;
    }

    struct RealFree {
        void operator()(double* p) const { fftw_free(p); }
    };
    struct CplxFree {
        void operator()(fftw_complex* p) const { fftw_free(p); }
    };

    Grid3D g_;
    TruncatedKernel tk_;
    int nm_;
    std::size_t plane_;
    double scale_ = 1.0, mode_tol_ = 0.0;
    std::unique_ptr<double, RealFree> eta_real_;
    std::unique_ptr<fftw_complex, CplxFree> eta_spec_, pad_;
    fftw_plan r2c_ = nullptr, c2r_ = nullptr, fwd_ = nullptr, bwd_ = nullptr;
    std::map<std::pair<int, int>, std::vector<cplx>> cache_;
    std::array<std::vector<cplx>, 3> what_;
    std::vector<int> active_;
};

}  // namespace burgers
