#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace burgers {

inline constexpr double pi = std::numbers::pi;

// Every numerical guard throws this; the CLI maps it to exit status 1.
class GuardError : public std::runtime_error {
public:
    GuardError(std::string guard, const std::string& what)
        : std::runtime_error(guard + ": " + what), guard_(std::move(guard)) {}
    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

// Raised for invalid parameters before any computation starts.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct StrainParams {
    double mu = 2.0;
    double alpha = 1.0;
    double t_star = 1.0;

    StrainParams() = default;
    StrainParams(double mu_, double alpha_, double t_star_ = 1.0)
        : mu(mu_), alpha(alpha_), t_star(t_star_) {
        validate();
    }

    void validate() const {
        if (!(mu > 1.0)) throw ConfigError("mu must exceed 1");
        if (!(t_star > 0.0)) throw ConfigError("t_star must be positive");
        if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
    }
    double chi() const { return (2.0 * mu + 1.0) / (2.0 * (mu - 1.0)); }
    // Constant shift of the horizontal block: 1 + (mu+2)/(2(mu-1)).
    double horizontal_shift() const { return 1.0 + (mu + 2.0) / (2.0 * (mu - 1.0)); }
    double beta(double t) const {
        if (!(t < t_star)) throw GuardError("blowup_time", "t must be below t_star");
        return (mu - 1.0) / (t_star - t);
    }
};

// Even sizes whose only prime factors are 2, 3 and 5 (powers of two are the default).
inline bool fft_friendly(int n) {
    if (n <= 0 || n % 2) return false;
    for (int p : {2, 3, 5})
        while (n % p == 0) n /= p;
    return n == 1;
}

// Uniform cell-vertex grid on [-R, R)^2 with n points per axis.
struct Grid2D {
    double R = 12.0;
    int n = 256;

    Grid2D() = default;
    Grid2D(double R_, int n_) : R(R_), n(n_) { validate(); }

    void validate() const {
        if (!(R > 0.0)) throw ConfigError("grid radius R must be positive");
        if (n < 8 || !fft_friendly(n)) throw ConfigError("grid n must be >= 8, even, with prime factors 2, 3, 5 only");
    }
    double h() const { return 2.0 * R / n; }
    double coord(int i) const { return -R + i * h(); }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n + j; }
    bool operator==(const Grid2D&) const = default;
};

// Horizontal Grid2D times a periodic vertical axis on [-Z, Z) with n3 points.
struct Grid3D {
    Grid2D h2;
    double Z = 24.0;
    int n3 = 48;

    Grid3D() = default;
    Grid3D(double R, int n, double Z_, int n3_) : h2(R, n), Z(Z_), n3(n3_) { validate(); }

    void validate() const {
        h2.validate();
        if (!(Z > 0.0)) throw ConfigError("half-height Z must be positive");
        if (n3 < 4 || (n3 % 2) != 0) throw ConfigError("n3 must be even and >= 4");
    }
    double h3() const { return 2.0 * Z / n3; }
    double z(int k) const { return -Z + k * h3(); }
    std::size_t slice() const { return h2.size(); }
    std::size_t size() const { return h2.size() * n3; }
    std::size_t idx(int k, int i, int j) const { return k * h2.size() + h2.idx(i, j); }
    bool operator==(const Grid3D&) const = default;
};

struct ScalarField2D {
    Grid2D grid;
    std::vector<double> v;
    bool weighted_repr = false;

    ScalarField2D() = default;
    explicit ScalarField2D(const Grid2D& g, bool weighted = false)
        : grid(g), v(g.size(), 0.0), weighted_repr(weighted) {}

    double& operator()(int i, int j) { return v[grid.idx(i, j)]; }
    double operator()(int i, int j) const { return v[grid.idx(i, j)]; }

    template <class F>
    static ScalarField2D sample(const Grid2D& g, F&& f) {
        ScalarField2D out(g);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) out(i, j) = f(g.coord(i), g.coord(j));
        return out;
    }
};

struct VectorField2D {
    Grid2D grid;
    std::array<std::vector<double>, 2> c;

    VectorField2D() = default;
    explicit VectorField2D(const Grid2D& g) : grid(g) {
        for (auto& a : c) a.assign(g.size(), 0.0);
    }
};

struct VectorField3D {
    Grid3D grid;
    std::array<std::vector<double>, 3> c;
    bool weighted_repr = false;

    VectorField3D() = default;
    explicit VectorField3D(const Grid3D& g) : grid(g) {
        for (auto& a : c) a.assign(g.size(), 0.0);
    }

    template <class F>
    static VectorField3D sample(const Grid3D& g, F&& f) {
        VectorField3D out(g);
        for (int k = 0; k < g.n3; ++k)
            for (int i = 0; i < g.h2.n; ++i)
                for (int j = 0; j < g.h2.n; ++j) {
                    const std::array<double, 3> w = f(g.h2.coord(i), g.h2.coord(j), g.z(k));
                    const auto id = g.idx(k, i, j);
                    for (int d = 0; d < 3; ++d) out.c[d][id] = w[d];
                }
        return out;
    }
};

// Signed wavenumber index for an FFT of length n.
inline int signed_mode(int m, int n) { return m <= n / 2 ? m : m - n; }

inline void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw GuardError("finite_samples", std::string(what) + " has non-finite samples");
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// out = a*x + y, sizes must agree.
inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace burgers
