#pragma once

// Galerkin matrices of the two-dimensional linearized operators on the
// Gaussian-weighted Hermite basis, their rotation-block spectra, and the
// first-moment projection P_1.
//
//   script_L_h = (L_h - c) - alpha (Lambda_1 - Lambda~_2)   on 2-vectors, c = 1 + (mu+2)/(2(mu-1))
//   script_L_3 =  L_h      - alpha (Lambda_1 + Lambda~_3)   on scalars
//
// Lambda_1 and Lambda~_2 are multiplication/transport operators with U^G and are
// projected with a Gauss-Hermite rule. Lambda~_3 w = (K_2d * w) . grad g = -(g/2) d_theta psi
// with -Delta psi = w, so its entries are computed in Fourier space where 1/|omega|^2 is explicit.

#include <algorithm>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "burgers/core_fields.hpp"
#include "burgers/grid.hpp"
#include "burgers/hermite.hpp"
#include "burgers/weighted_spaces.hpp"

namespace burgers {

enum class BasisKind { Hermite2D, Collocation };

struct OperatorMatrix {
    Eigen::MatrixXd matrix;
    BasisKind basis = BasisKind::Hermite2D;
    int K = 0;
    WeightExponent weight = WeightExponent::inf();
};

// mu- and alpha-independent pieces for one truncation K.
struct LambdaMatrices {
    int K = 0;
    Eigen::MatrixXd L1;   // N x N, U^G . grad
    Eigen::MatrixXd L2t;  // 2N x 2N, w -> w . grad U^G
    Eigen::MatrixXd L3t;  // N x N, w -> (K_2d * w) . grad g
    Eigen::VectorXd lh;   // diagonal of L_h
};

namespace detail {

inline int gauss_hermite_nodes_for(int K) { return 2 * K + 40; }

// <F phi_c, phi_r> for r in `rows` (deg < K) and c in `cols` (deg < Kc), with F sampled at
// the tensor Gauss-Hermite nodes x = 2y. psi[k*Q + q] = psi_k(y_q).
inline Eigen::MatrixXd multiplication_matrix(const HermiteBasis2D& rows, const HermiteBasis2D& cols,
                                             const std::vector<double>& F, const std::vector<double>& psi,
                                             const std::vector<double>& w, int Q) {
    const int P = cols.K();  // per-axis range 0..P-1 covers both bases
    // T[(i1*P + j1)*Q + q2] = sum_q1 w psi_i1 psi_j1 F(q1, q2)
    std::vector<double> T(static_cast<std::size_t>(P) * P * Q, 0.0);
    for (int i1 = 0; i1 < P; ++i1)
        for (int j1 = 0; j1 <= i1; ++j1) {
            double* t = T.data() + (static_cast<std::size_t>(i1) * P + j1) * Q;
            for (int q1 = 0; q1 < Q; ++q1) {
                const double a = w[q1] * psi[i1 * Q + q1] * psi[j1 * Q + q1];
                const double* f = F.data() + static_cast<std::size_t>(q1) * Q;
                for (int q2 = 0; q2 < Q; ++q2) t[q2] += a * f[q2];
            }
            if (j1 != i1) std::copy(t, t + Q, T.data() + (static_cast<std::size_t>(j1) * P + i1) * Q);
        }
    Eigen::MatrixXd M(rows.size(), cols.size());
    std::vector<double> wp(static_cast<std::size_t>(P) * P * Q);  // w psi_i2 psi_j2 at q2
    for (int i = 0; i < P; ++i)
        for (int j = 0; j < P; ++j)
            for (int q = 0; q < Q; ++q)
                wp[(static_cast<std::size_t>(i) * P + j) * Q + q] = w[q] * psi[i * Q + q] * psi[j * Q + q];
    for (int r = 0; r < rows.size(); ++r) {
        const auto [i1, i2] = rows.mode(r);
        for (int c = 0; c < cols.size(); ++c) {
            const auto [j1, j2] = cols.mode(c);
            const double* t = T.data() + (static_cast<std::size_t>(i1) * P + j1) * Q;
            const double* v = wp.data() + (static_cast<std::size_t>(i2) * P + j2) * Q;
            double s = 0;
            for (int q = 0; q < Q; ++q) s += t[q] * v[q];
            M(r, c) = s;
        }
    }
    return M;
}

// Lambda~_3 through Parseval: entry (i, j) = -(1/32 pi^3) Re int phî_i conj(d_theta phî_j) / |omega|^2.
// phî_k = (-i)^k R_k(omega) per axis with R_k = (sqrt2 omega)^k sqrt(2 sqrt(pi)) e^{-omega^2} / sqrt(k!).
inline Eigen::MatrixXd lambda3_matrix(const HermiteBasis2D& B) {
    const int K = B.K(), N = B.size();
    const Quadrature1D lag = gauss_laguerre(K + 4);
    const int Nr = static_cast<int>(lag.x.size()), Nt = 2 * K + 8, P = Nr * Nt;
    Eigen::MatrixXd R(N, P), T(N, P);
    std::vector<double> p1(K), p2(K), d1(K), d2(K);
    auto poly = [K](double om, double* p, double* d) {
        p[0] = std::sqrt(2.0 * std::sqrt(pi));
        for (int k = 1; k < K; ++k) p[k] = p[k - 1] * std::sqrt(2.0) * om / std::sqrt(static_cast<double>(k));
        for (int k = 0; k < K; ++k) d[k] = (k > 0 ? std::sqrt(2.0 * k) * p[k - 1] : 0.0) - 2.0 * om * p[k];
    };
    for (int a = 0; a < Nr; ++a) {
        const double r2 = 0.5 * lag.x[a], r = std::sqrt(r2);
        for (int b = 0; b < Nt; ++b) {
            const double th = 2 * pi * b / Nt;
            const double o1 = r * std::cos(th), o2 = r * std::sin(th);
            poly(o1, p1.data(), d1.data());
            poly(o2, p2.data(), d2.data());
            const double wt = 0.25 * lag.w[a] * (2 * pi / Nt) / r2;
            const int col = a * Nt + b;
            for (int i = 0; i < N; ++i) {
                const auto [k1, k2] = B.mode(i);
                R(i, col) = wt * p1[k1] * p2[k2];
                T(i, col) = o1 * p1[k1] * d2[k2] - o2 * d1[k1] * p2[k2];
            }
        }
    }
    Eigen::MatrixXd E = R * T.transpose();
    const double pref = -1.0 / (32.0 * pi * pi * pi);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const int di = B.degree(i), dj = B.degree(j);
            if ((di + dj) % 2) {
                E(i, j) = 0.0;
            } else {
                E(i, j) *= pref * (((dj - di) / 2) % 2 == 0 ? 1.0 : -1.0);
            }
        }
    return E;
}

}  // namespace detail

inline LambdaMatrices assemble_lambda(int K) {
    if (K < 8) throw ConfigError("Hermite truncation K must be >= 8");
    const HermiteBasis2D B(K), E(K + 1);
    const int N = B.size();
    const int Q = detail::gauss_hermite_nodes_for(K);
    const Quadrature1D gh = gauss_hermite_modified(Q);
    std::vector<double> psi(static_cast<std::size_t>(K + 1) * Q), tmp(K + 1);
    for (int q = 0; q < Q; ++q) {
        hermite_functions(gh.x[q], K + 1, tmp.data());
        for (int k = 0; k <= K; ++k) psi[static_cast<std::size_t>(k) * Q + q] = tmp[k];
    }
    const std::size_t QQ = static_cast<std::size_t>(Q) * Q;
    std::vector<double> U[2], dU[2][2];
    for (auto& u : U) u.resize(QQ);
    for (auto& r : dU)
        for (auto& u : r) u.resize(QQ);
    for (int a = 0; a < Q; ++a)
        for (int b = 0; b < Q; ++b) {
            const double x1 = 2 * gh.x[a], x2 = 2 * gh.x[b];
            const auto u = eval_UG(x1, x2);
            const auto J = eval_grad_UG(x1, x2);
            const std::size_t id = static_cast<std::size_t>(a) * Q + b;
            for (int i = 0; i < 2; ++i) {
                U[i][id] = u[i];
                for (int k = 0; k < 2; ++k) dU[i][k][id] = J[i][k];
            }
        }

    LambdaMatrices L;
    L.K = K;
    L.lh = B.lh_diagonal();
    L.L1 = Eigen::MatrixXd::Zero(N, N);
    for (int a = 0; a < 2; ++a)
        L.L1 += detail::multiplication_matrix(B, E, U[a], psi, gh.w, Q) * B.derivative(a, E);
    L.L2t = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            L.L2t.block(i * N, j * N, N, N) = detail::multiplication_matrix(B, E, dU[i][j], psi, gh.w, Q).leftCols(N);
    L.L3t = detail::lambda3_matrix(B);
    return L;
}

// Bounds quoted by the spectral theory.
inline double horizontal_eigen_bound(double mu) { return -1.0 - (mu + 2.0) / (2.0 * (mu - 1.0)); }
// Essential-spectrum abscissa in L^2(m): (1 - m)/2 for L_h, shifted by -c for the horizontal block.
inline double essential_threshold_h(double mu, const WeightExponent& m) {
    return m.infinite ? -std::numeric_limits<double>::infinity() : 0.5 * (1.0 - m.m) + horizontal_eigen_bound(mu);
}
inline double essential_threshold_3(const WeightExponent& m) {
    return m.infinite ? -std::numeric_limits<double>::infinity() : 0.5 * (1.0 - m.m);
}

inline Eigen::MatrixXd script_L_h_matrix(const LambdaMatrices& L, double mu, double alpha) {
    const int N = static_cast<int>(L.lh.size());
    const double c = StrainParams(mu, alpha).horizontal_shift();
    Eigen::MatrixXd A = alpha * L.L2t;
    for (int b = 0; b < 2; ++b) A.block(b * N, b * N, N, N) -= alpha * L.L1;
    for (int i = 0; i < 2 * N; ++i) A(i, i) += L.lh(i % N) - c;
    return A;
}

inline Eigen::MatrixXd script_L_3_matrix(const LambdaMatrices& L, double alpha, bool zero_mean = false) {
    Eigen::MatrixXd A = -alpha * (L.L1 + L.L3t);
    A.diagonal() += L.lh;
    if (!zero_mean) return A;
    const int N = static_cast<int>(A.rows());
    return A.bottomRightCorner(N - 1, N - 1);  // mode (0,0) carries the mean
}

// The finite-m inner products share the L^2(infinity) discrete spectrum above the
// essential threshold, so every request is answered on the Hermite basis and `weight`
// only records which space the caller asked about.
inline OperatorMatrix assemble_script_L_h(const StrainParams& p, const WeightExponent& m, int K) {
    m.require_space();
    return {script_L_h_matrix(assemble_lambda(K), p.mu, p.alpha), BasisKind::Hermite2D, K, m};
}
inline OperatorMatrix assemble_script_L_3(const StrainParams& p, const WeightExponent& m, int K, bool zero_mean) {
    m.require_space();
    return {script_L_3_matrix(assemble_lambda(K), p.alpha, zero_mean), BasisKind::Hermite2D, K, m};
}

// Hermite coefficients of g and of d_i g: g = phi_00 / (2 sqrt(pi)), d_1 phi_00 = -phi_10 / sqrt(2).
inline Eigen::VectorXd hermite_g(const HermiteBasis2D& B) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(B.size());
    c(B.index(0, 0)) = 0.5 / std::sqrt(pi);
    return c;
}
inline Eigen::VectorXd hermite_dg(const HermiteBasis2D& B, int axis) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(B.size());
    c(axis == 0 ? B.index(1, 0) : B.index(0, 1)) = -0.5 / std::sqrt(2.0 * pi);
    return c;
}

// ---- rotation blocks ---------------------------------------------------------

// Angular-momentum decomposition: the operators commute with rotations, whose generator
// J preserves every degree shell, so eigenvectors of iJ on each shell split the matrix
// into independent blocks labelled by the integer l.
struct RotationBlock {
    int ell = 0;
    std::vector<int> rows;  // global indices touched by the block
    Eigen::MatrixXcd Q;     // rows.size() x m, orthonormal columns
    Eigen::VectorXd shift;  // L_h eigenvalue of each column
};

class RotationBlocks {
public:
    // components = 1 (scalars) or 2 (planar vectors); drop_mean removes mode (0,0).
    RotationBlocks(const HermiteBasis2D& B, int components, bool drop_mean = false) {
        const int N = B.size();
        const Eigen::MatrixXd Js = B.rotation_generator();
        std::map<int, std::vector<std::pair<Eigen::VectorXcd, std::vector<int>>>> cols;
        std::map<int, std::vector<double>> shifts;
        for (int d = 0; d < B.K(); ++d) {
            const int s = B.shell_start(d), w = d + 1;
            std::vector<int> idx;
            for (int c = 0; c < components; ++c)
                for (int k = 0; k < w; ++k) idx.push_back(c * N + s + k);
            const int m = static_cast<int>(idx.size());
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
            for (int c = 0; c < components; ++c) J.block(c * w, c * w, w, w) = Js.block(s, s, w, w);
            if (components == 2) {  // spin part of the vector rotation
                J.block(0, w, w, w) -= Eigen::MatrixXd::Identity(w, w);
                J.block(w, 0, w, w) += Eigen::MatrixXd::Identity(w, w);
            }
            const Eigen::MatrixXcd H = std::complex<double>(0, 1) * J.cast<std::complex<double>>();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
            for (int e = 0; e < m; ++e) {
                const double lv = es.eigenvalues()(e);
                const int l = static_cast<int>(std::lround(lv));
                if (std::abs(lv - l) > 1e-8) throw GuardError("rotation_blocks", "non-integer angular momentum");
                if (drop_mean && d == 0 && components == 1) continue;
                cols[l].push_back({es.eigenvectors().col(e), idx});
                shifts[l].push_back(-0.5 * d);
            }
        }
        for (auto& [l, list] : cols) {
            RotationBlock blk;
            blk.ell = l;
            for (auto& [v, idx] : list) blk.rows.insert(blk.rows.end(), idx.begin(), idx.end());
            std::sort(blk.rows.begin(), blk.rows.end());
            blk.rows.erase(std::unique(blk.rows.begin(), blk.rows.end()), blk.rows.end());
            std::map<int, int> pos;
            for (int i = 0; i < static_cast<int>(blk.rows.size()); ++i) pos[blk.rows[i]] = i;
            blk.Q = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(blk.rows.size()), static_cast<Eigen::Index>(list.size()));
            for (int c = 0; c < static_cast<int>(list.size()); ++c)
                for (int k = 0; k < static_cast<int>(list[c].second.size()); ++k)
                    blk.Q(pos[list[c].second[k]], c) = list[c].first(k);
            blk.shift = Eigen::Map<const Eigen::VectorXd>(shifts[l].data(), static_cast<Eigen::Index>(shifts[l].size()));
            blocks_.push_back(std::move(blk));
        }
    }

    const std::vector<RotationBlock>& blocks() const { return blocks_; }

    // Q^H A Q for every block; A must commute with the rotation generator.
    std::vector<Eigen::MatrixXcd> reduce(const Eigen::MatrixXd& A) const {
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(blocks_.size());
        for (const auto& b : blocks_) {
            const int r = static_cast<int>(b.rows.size());
            Eigen::MatrixXd Ar(r, r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) Ar(i, j) = A(b.rows[i], b.rows[j]);
            out.push_back(b.Q.adjoint() * Ar * b.Q);
        }
        return out;
    }

private:
    std::vector<RotationBlock> blocks_;
};

// ---- spectra -----------------------------------------------------------------

using cplx = std::complex<double>;

struct BlockSpectrum {
    int ell = 0;
    std::vector<cplx> values;
};

// Precomputed block reductions of the alpha-dependent parts for one K.
class SpectralFamily {
public:
    explicit SpectralFamily(int K)
        : K_(K), L_(assemble_lambda(K)), B_(K), hblocks_(B_, 2), vblocks_(B_, 1, true) {
        const int N = B_.size();
        Eigen::MatrixXd Lam = -L_.L2t;
        for (int b = 0; b < 2; ++b) Lam.block(b * N, b * N, N, N) += L_.L1;
        hred_ = hblocks_.reduce(Lam);
        vred_ = vblocks_.reduce(L_.L1 + L_.L3t);
    }

    int K() const { return K_; }
    const LambdaMatrices& lambda() const { return L_; }
    const HermiteBasis2D& basis() const { return B_; }

    std::vector<BlockSpectrum> horizontal(double mu, double alpha) const {
        const double c = StrainParams(mu, alpha).horizontal_shift();
        return solve(hblocks_, hred_, -c, alpha);
    }
    // Zero-mean sector.
    std::vector<BlockSpectrum> vertical(double alpha) const { return solve(vblocks_, vred_, 0.0, alpha); }

private:
    static std::vector<BlockSpectrum> solve(const RotationBlocks& rb, const std::vector<Eigen::MatrixXcd>& red,
                                            double shift, double alpha) {
        std::vector<BlockSpectrum> out;
        for (std::size_t k = 0; k < red.size(); ++k) {
            const auto& blk = rb.blocks()[k];
            Eigen::MatrixXcd A = -alpha * red[k];
            for (int i = 0; i < A.rows(); ++i) A(i, i) += blk.shift(i) + shift;
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
            if (es.info() != Eigen::Success) throw GuardError("eigensolver", "complex eigensolver failed");
            BlockSpectrum bs;
            bs.ell = blk.ell;
            bs.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
            out.push_back(std::move(bs));
        }
        return out;
    }

    int K_;
    LambdaMatrices L_;
    HermiteBasis2D B_;
    RotationBlocks hblocks_, vblocks_;
    std::vector<Eigen::MatrixXcd> hred_, vred_;
};

struct SpectrumEntry {
    cplx value;
    int ell = 0;
    bool converged = false;
};

struct SpectrumReport {
    double mu = 0, alpha = 0;
    WeightExponent m = WeightExponent::inf();
    int K = 0;
    std::vector<SpectrumEntry> entries;  // sorted by decreasing real part
    double threshold = -std::numeric_limits<double>::infinity();

    // Largest real part among converged eigenvalues.
    double abscissa() const {
        double a = -std::numeric_limits<double>::infinity();
        for (const auto& e : entries)
            if (e.converged) a = std::max(a, e.value.real());
        return a;
    }
    int converged_count() const {
        return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.converged; }));
    }
};

inline constexpr double eigen_drift_tol = 1e-6;

// Match each coarse eigenvalue to the nearest fine one with the same angular momentum.
inline SpectrumReport compare_spectra(const std::vector<BlockSpectrum>& coarse, const std::vector<BlockSpectrum>& fine,
                                      double threshold) {
    SpectrumReport r;
    r.threshold = threshold;
    std::map<int, const BlockSpectrum*> fmap;
    for (const auto& b : fine) fmap[b.ell] = &b;
    for (const auto& b : coarse) {
        const auto it = fmap.find(b.ell);
        for (const cplx& v : b.values) {
            SpectrumEntry e{v, b.ell, false};
            if (it != fmap.end()) {
                double best = std::numeric_limits<double>::infinity();
                for (const cplx& u : it->second->values) best = std::min(best, std::abs(u - v));
                e.converged = best <= eigen_drift_tol * std::max(1.0, std::abs(v));
            }
            if (v.real() < threshold) e.converged = false;  // inside the essential spectrum
            r.entries.push_back(e);
        }
    }
    std::sort(r.entries.begin(), r.entries.end(),
              [](const auto& a, const auto& b) { return a.value.real() > b.value.real(); });
    return r;
}

inline SpectrumReport spectrum_h(const SpectralFamily& coarse, const SpectralFamily& fine, double mu, double alpha,
                                 const WeightExponent& m) {
    SpectrumReport r = compare_spectra(coarse.horizontal(mu, alpha), fine.horizontal(mu, alpha), essential_threshold_h(mu, m));
    r.mu = mu;
    r.alpha = alpha;
    r.m = m;
    r.K = coarse.K();
    return r;
}

inline SpectrumReport spectrum_3(const SpectralFamily& coarse, const SpectralFamily& fine, double mu, double alpha,
                                 const WeightExponent& m) {
    SpectrumReport r = compare_spectra(coarse.vertical(alpha), fine.vertical(alpha), essential_threshold_3(m));
    r.mu = mu;
    r.alpha = alpha;
    r.m = m;
    r.K = coarse.K();
    return r;
}

// ---- quadratic-form identities ----------------------------------------------------

struct IdentityCheck {
    double lhs = 0, rhs = 0;
    double error() const { return std::abs(lhs - rhs); }
};

// The three energy identities obtained by testing the eigen-equation against w, xi.w and div w.
// w holds 2N Hermite coefficients of degree < K - 4; `cross_integral` is the independently
// computed int e^{|xi|^2/4} (xi.w)(xi^perp.w) f'(|xi|^2).
inline std::array<IdentityCheck, 3> quadratic_identities(const LambdaMatrices& L, double mu, double alpha,
                                                         const Eigen::VectorXd& w, double cross_integral) {
    const HermiteBasis2D B(L.K);
    const int N = B.size();
    for (int i = 0; i < N; ++i)
        if (B.degree(i) >= L.K - 4 && (w(i) != 0.0 || w(N + i) != 0.0))
            throw ConfigError("identity test vector must have degree < K - 4");
    const double c = StrainParams(mu, alpha).horizontal_shift();
    const Eigen::MatrixXd A = script_L_h_matrix(L, mu, alpha);
    const Eigen::VectorXd Aw = A * w;
    const Eigen::VectorXd w1 = w.head(N), w2 = w.tail(N);
    auto lh_form = [&](const Eigen::VectorXd& v) { return (L.lh.array() * v.array() * v.array()).sum(); };

    std::array<IdentityCheck, 3> out;
    out[0].lhs = Aw.dot(w);
    out[0].rhs = lh_form(w1) + lh_form(w2) - c * w.squaredNorm() + 2.0 * alpha * cross_integral;

    const Eigen::VectorXd v = B.position(0, B) * w1 + B.position(1, B) * w2;  // xi . w
    Eigen::VectorXd z(2 * N);
    z << B.position(0, B).transpose() * v, B.position(1, B).transpose() * v;
    const Eigen::VectorXd q = B.derivative(0, B) * w1 + B.derivative(1, B) * w2;  // div w
    out[1].lhs = Aw.dot(z);
    out[1].rhs = lh_form(v) - (0.5 + c) * v.squaredNorm() - 2.0 * q.dot(v);

    Eigen::VectorXd y(2 * N);
    y << B.derivative(0, B).transpose() * q, B.derivative(1, B).transpose() * q;
    out[2].lhs = Aw.dot(y);
    out[2].rhs = lh_form(q) - (c - 0.5) * q.squaredNorm();
    return out;
}

// ---- first-moment projection -------------------------------------------------

// theta_i[f3](xi3) = -int xi_i f3 dxi' per slice.
inline std::vector<std::array<double, 2>> theta_moments(const std::vector<double>& f3, const Grid3D& g) {
    std::vector<std::array<double, 2>> th(g.n3);
    for (int k = 0; k < g.n3; ++k) {
        const Moments mo = moments(f3.data() + k * g.slice(), g.h2);
        th[k] = {-mo.first[0], -mo.first[1]};
    }
    return th;
}

// P_1 f = sum_i theta_i[f3] d_i G with G = (0, 0, g).
inline VectorField3D apply_P1(const VectorField3D& f) {
    const Grid3D& g = f.grid;
    const auto th = theta_moments(f.c[2], g);
    VectorField3D out(g);
    for (int k = 0; k < g.n3; ++k)
        for (int i = 0; i < g.h2.n; ++i)
            for (int j = 0; j < g.h2.n; ++j) {
                const double x1 = g.h2.coord(i), x2 = g.h2.coord(j);
                out.c[2][g.idx(k, i, j)] = th[k][0] * eval_dg(0, x1, x2) + th[k][1] * eval_dg(1, x1, x2);
            }
    return out;
}

}  // namespace burgers
