#pragma once

// Run configuration: an INI file (sections [strain], [weight], [grid], [run], [sweep],
// [tolerance], [output]) read with Boost.PropertyTree and applied to the CLI11 options
// that the command line left unset, so flags take precedence over the file.
// Every key is validated before any computation; errors name the offending key.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "burgers/evolution.hpp"
#include "burgers/grid.hpp"
#include "burgers/weighted_spaces.hpp"

namespace burgers {

struct RunConfig {
    std::string command;
    // [strain]
    double mu = 2.0, alpha = 1.0, t_star = 1.0;
    // [weight]
    std::string m = "4";
    // [grid]
    int n = 256;
    double R = 12.0;
    int n3 = 48;
    double Z = 24.0;
    int K = 32;
    // [run]
    std::string initial = "d1g";  // preset name or path to a field dump
    double eps = 1e-3;
    double tau_end = 8.0, dt = 0.05;
    bool nonlinear = true;
    double t = 0.5;                            // physical time for residual checks
    std::string flow = "singular-burgers";     // residual target: singular-burgers | burgers
    double delta = 0.25;
    std::uint64_t seed = 1;
    // [sweep]
    std::vector<double> mu_list{2.0}, alpha_list{0.0};
    // [tolerance]
    double residual_tol = 1e-5, divergence_tol = 1e-8, mode_tol = 1e-14;
    // [output]
    std::string out = "out";
    int jobs = 1;

    StrainParams strain() const { return StrainParams(mu, alpha, t_star); }
    WeightExponent weight() const {
        if (m == "inf" || m == "infinity") return WeightExponent::inf();
        return WeightExponent::finite(std::stod(m));
    }
    Grid2D grid2d() const { return Grid2D(R, n); }
    Grid3D grid3d() const { return Grid3D(R, n, Z, n3); }

    // Throws ConfigError("<key>: <reason>") on the first invalid value.
    void validate() const {
        auto bad = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };
        if (!(mu > 1.0) || !std::isfinite(mu)) bad("strain.mu", "must be a finite number above 1");
        if (!std::isfinite(alpha)) bad("strain.alpha", "must be finite");
        if (!(t_star > 0.0) || !std::isfinite(t_star)) bad("strain.t_star", "must be positive");
        try {
            weight().require_space();
        } catch (const std::exception&) {
            bad("weight.m", "must be 'inf' or a number above 1");
        }
        if (n < 8 || !fft_friendly(n)) bad("grid.n", "must be >= 8, even, with prime factors 2, 3, 5 only");
        if (!(R > 0.0) || !std::isfinite(R)) bad("grid.R", "must be positive");
        if (n3 < 4 || n3 % 2) bad("grid.n3", "must be even and >= 4");
        if (!(Z > 0.0) || !std::isfinite(Z)) bad("grid.Z", "must be positive");
        if (K < 8 || K > 50) bad("grid.K", "must lie in [8, 50]");
        if (initial.empty()) bad("run.initial", "must name a preset or a file");
        if (!is_preset(initial) && !std::filesystem::exists(initial))
            bad("run.initial", "unknown preset and no such file: " + initial);
        if (!std::isfinite(eps) || eps < 0) bad("run.eps", "must be finite and >= 0");
        if (!(tau_end >= 0.0) || !std::isfinite(tau_end)) bad("run.tau_end", "must be >= 0");
        if (!(dt > 0.0) || !std::isfinite(dt)) bad("run.dt", "must be positive");
        if (dt > tau_end && tau_end > 0) bad("run.dt", "exceeds run.tau_end");
        if (!(t >= 0.0 && t < t_star)) bad("run.t", "must lie in [0, strain.t_star)");
        if (flow != "singular-burgers" && flow != "burgers") bad("run.flow", "must be singular-burgers or burgers");
        if (!(delta > 0.0) || !std::isfinite(delta)) bad("run.delta", "must be positive");
        if (mu_list.empty()) bad("sweep.mu_list", "must not be empty");
        for (double v : mu_list)
            if (!(v > 1.0) || !std::isfinite(v)) bad("sweep.mu_list", "entries must be finite and above 1");
        if (alpha_list.empty()) bad("sweep.alpha_list", "must not be empty");
        for (double v : alpha_list)
            if (!std::isfinite(v)) bad("sweep.alpha_list", "entries must be finite");
        if (!(residual_tol > 0)) bad("tolerance.residual", "must be positive");
        if (!(divergence_tol >= 0)) bad("tolerance.divergence", "must be >= 0");
        if (!(mode_tol >= 0 && mode_tol < 1)) bad("tolerance.mode", "must lie in [0, 1)");
        if (out.empty()) bad("output.dir", "must not be empty");
        if (jobs < 1) bad("jobs", "must be >= 1");
    }

    static bool is_preset(const std::string& s) {
        return s == "d1g" || s == "gaussian-column" || s == "modulated-3d" || s == "zero";
    }

    nlohmann::json to_json() const {
        return {{"command", command},
                {"strain", {{"mu", mu}, {"alpha", alpha}, {"t_star", t_star}}},
                {"weight", {{"m", m}}},
                {"grid", {{"n", n}, {"R", R}, {"n3", n3}, {"Z", Z}, {"K", K}}},
                {"run",
                 {{"initial", initial},
                  {"eps", eps},
                  {"tau_end", tau_end},
                  {"dt", dt},
                  {"nonlinear", nonlinear},
                  {"t", t},
                  {"flow", flow},
                  {"delta", delta},
                  {"seed", seed}}},
                {"sweep", {{"mu_list", mu_list}, {"alpha_list", alpha_list}}},
                {"tolerance", {{"residual", residual_tol}, {"divergence", divergence_tol}, {"mode", mode_tol}}},
                {"output", {{"dir", out}}},
                {"jobs", jobs}};
    }
};

// Registers every key as --section.key (plus a short alias for common ones) and --config.
inline void register_options(CLI::App& app, RunConfig& c, std::string& config_path) {
    app.add_option("--config", config_path, "INI configuration file");
    app.add_option("--strain.mu,--mu", c.mu, "strain strength mu > 1");
    app.add_option("--strain.alpha,--alpha", c.alpha, "circulation parameter");
    app.add_option("--strain.t_star", c.t_star, "blow-up time");
    app.add_option("--weight.m,--m", c.m, "weight exponent (number > 1 or inf)");
    app.add_option("--grid.n,--n", c.n, "horizontal points per axis");
    app.add_option("--grid.R,--R", c.R, "horizontal half-width");
    app.add_option("--grid.n3,--n3", c.n3, "vertical points");
    app.add_option("--grid.Z,--Z", c.Z, "vertical half-height");
    app.add_option("--grid.K,--K", c.K, "Hermite truncation");
    app.add_option("--run.initial,--initial", c.initial, "preset (d1g, gaussian-column, modulated-3d, zero) or dump path");
    app.add_option("--run.eps,--eps", c.eps, "amplitude of the 3D part");
    app.add_option("--run.tau_end,--tau-end", c.tau_end, "final self-similar time");
    app.add_option("--run.dt,--dt", c.dt, "time step");
    app.add_option("--run.nonlinear,--nonlinear", c.nonlinear, "include the quadratic term");
    app.add_option("--run.t,--t", c.t, "physical time for residual checks");
    app.add_option("--run.flow,--flow", c.flow, "residual target");
    app.add_option("--run.delta,--delta", c.delta, "window parameter for profile extraction");
    app.add_option("--run.seed,--seed", c.seed, "RNG seed");
    app.add_option("--sweep.mu_list,--mu-list", c.mu_list, "mu values for spectrum sweeps")->delimiter(',');
    app.add_option("--sweep.alpha_list,--alpha-list", c.alpha_list, "alpha values for spectrum sweeps")->delimiter(',');
    app.add_option("--tolerance.residual", c.residual_tol, "pass threshold for residual checks");
    app.add_option("--tolerance.divergence", c.divergence_tol, "Leray trigger (relative divergence)");
    app.add_option("--tolerance.mode", c.mode_tol, "bs3d vertical-mode cut");
    app.add_option("--output.dir,--out", c.out, "output directory");
    app.add_option("--jobs", c.jobs, "worker count for sweeps");
}

// Applies [section] key = value entries to options not given on the command line.
// Call after CLI::App::parse; unknown keys are rejected by name.
inline void apply_config_file(CLI::App& app, const std::filesystem::path& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError(section + ": key outside a section");
        for (const auto& [key, val] : body) {
            const std::string name = section + "." + key;
            CLI::Option* opt = app.get_option_no_throw("--" + name);
            if (!opt) throw ConfigError(name + ": unknown key");
            if (opt->count() > 0) continue;  // flag wins
            try {
                opt->add_result(val.data());
                opt->run_callback();
            } catch (const CLI::Error& e) {
                throw ConfigError(name + ": " + e.what());
            }
        }
    }
}

// ---- initial data ----------------------------------------------------------------

inline ScalarField2D read_field2d(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    char magic[4];
    std::int32_t hdr[3];
    double geo[2];
    if (!is.read(magic, 4) || std::string(magic, 4) != "BVF1" || !is.read(reinterpret_cast<char*>(hdr), sizeof hdr) ||
        !is.read(reinterpret_cast<char*>(geo), sizeof geo))
        throw ConfigError("run.initial: not a field dump: " + p.string());
    if (hdr[0] != 1 || hdr[2] != 1) throw ConfigError("run.initial: expected a scalar 2D dump");
    ScalarField2D f(Grid2D(geo[0], hdr[1]));
    if (!is.read(reinterpret_cast<char*>(f.v.data()), static_cast<std::streamsize>(f.v.size() * sizeof(double))))
        throw ConfigError("run.initial: truncated dump");
    return f;
}

inline VectorField3D read_field3d(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    char magic[4];
    std::int32_t hdr[3];
    double geo[2];
    if (!is.read(magic, 4) || std::string(magic, 4) != "BVF1" || !is.read(reinterpret_cast<char*>(hdr), sizeof hdr) ||
        !is.read(reinterpret_cast<char*>(geo), sizeof geo))
        throw ConfigError("run.initial: not a field dump: " + p.string());
    if (hdr[0] != 3) throw ConfigError("run.initial: expected a 3-component dump");
    VectorField3D f(Grid3D(geo[0], hdr[1], geo[1], hdr[2]));
    for (auto& c : f.c)
        if (!is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double))))
            throw ConfigError("run.initial: truncated dump");
    return f;
}

inline ScalarField2D initial_2d(const RunConfig& c) {
    const Grid2D g = c.grid2d();
    if (c.initial == "d1g") return d1g_field(g);
    if (c.initial == "gaussian-column") return gaussian_column_field(g);
    if (c.initial == "zero") return ScalarField2D(g);
    if (c.initial == "modulated-3d") throw ConfigError("run.initial: modulated-3d is a 3D preset");
    ScalarField2D f = read_field2d(c.initial);
    if (f.grid != g) throw ConfigError("run.initial: dump grid differs from [grid]");
    return f;
}

// 3D data: horizontal profile w2d for the third component plus a 3D part W.
struct Initial3D {
    ScalarField2D w2d;
    VectorField3D W;
};

// modulated-3d: w2d = d_1 g and W scaled to ||W||_XX(m) = eps. The 2D presets give W = 0.
inline Initial3D initial_3d(const RunConfig& c) {
    const Grid3D g = c.grid3d();
    Initial3D out{ScalarField2D(g.h2), VectorField3D(g)};
    if (c.initial == "modulated-3d") {
        out.w2d = d1g_field(g.h2);
        if (c.eps > 0) {
            out.W = modulated_field(g, 1.0);
            const double s = c.eps / norm_Xbb(out.W, c.weight());
            for (auto& v : out.W.c)
                for (double& x : v) x *= s;
        }
    } else if (RunConfig::is_preset(c.initial)) {
        RunConfig c2 = c;
        c2.n = g.h2.n;
        out.w2d = initial_2d(c2);
    } else {
        out.W = read_field3d(c.initial);
        if (out.W.grid != g) throw ConfigError("run.initial: dump grid differs from [grid]");
    }
    return out;
}

}  // namespace burgers
