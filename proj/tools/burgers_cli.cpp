// burgers_cli: fields | residual | spectrum | evolve2d | evolve3d | accept
// Exit status: 0 success, 1 numerical failure or guard trip, 2 configuration error.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "burgers/acceptance.hpp"
#include "burgers/config.hpp"
#include "burgers/evolution.hpp"
#include "burgers/io.hpp"
#include "burgers/linearized.hpp"

namespace fs = std::filesystem;
using namespace burgers;

namespace {

// Window [2, min(6, tau_end)] when it holds enough samples, null otherwise.
nlohmann::json fit_or_null(const Table& h, const std::string& col, double tau_end, double dt, double target) {
    const double t0 = 2.0, t1 = std::min(6.0, tau_end);
    if (t1 - t0 < 9 * dt) return nullptr;
    const DecayRateFit f = fit_decay(h, col, t0, t1, target);
    return {{"tau0", f.tau0}, {"tau1", f.tau1}, {"rate", f.rate}, {"residual", f.residual},
            {"target", f.target}, {"samples", f.samples}, {"reliable", f.reliable()}};
}

int cmd_fields(const RunConfig& c, Manifest& man) {
    const Grid2D g = c.grid2d();
    Table t({"xi1", "g", "d1g", "UG1", "UG2", "curl_UG"});
    for (int i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        const auto U = eval_UG(x, 0.0);
        t.add({x, eval_g(x, 0.0), eval_dg(0, x, 0.0), U[0], U[1], eval_curl_UG(x, 0.0)});
    }
    const fs::path out(c.out);
    write_csv(out / "fields.csv", t);
    write_field(out / "g.bin", ScalarField2D::sample(g, eval_g));
    BiotSavart2D bs(g);
    const VectorField2D u = bs(ScalarField2D::sample(g, eval_g));
    double err = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const auto U = eval_UG(g.coord(i), g.coord(j));
            for (int k = 0; k < 2; ++k) err = std::max(err, std::abs(u.c[k][g.idx(i, j)] - U[k]));
        }
    man.json()["results"] = {{"oseen_identity_residual", oseen_identity_residual(g)},
                             {"oseen_cross_residual", oseen_cross_residual(g)},
                             {"bs2d_oracle_error", err}};
    return 0;
}

int cmd_residual(const RunConfig& c, Manifest& man) {
    ResidualBox box;
    const StrainParams p = c.strain();
    const double r = c.flow == "burgers" ? burgers_steady_residual(c.alpha, 1.0, box)
                                         : singular_burgers_residual(p, c.t, box);
    man.json()["results"] = {{"flow", c.flow}, {"t", c.t}, {"residual", r}, {"tolerance", c.residual_tol},
                             {"box", {{"L", box.L}, {"n", box.n}, {"z0", box.z0}}}};
    std::cout << c.flow << " residual " << format_double(r) << '\n';
    return r < c.residual_tol ? 0 : 1;
}

int cmd_spectrum(const RunConfig& c, Manifest& man) {
    const WeightExponent m = c.weight();
    const SpectralFamily coarse(c.K), fine(c.K + 8);
    struct Point {
        double mu, alpha;
        SpectrumReport h, v;
    };
    std::vector<Point> pts;
    for (double mu : c.mu_list)
        for (double a : c.alpha_list) pts.push_back({mu, a, {}, {}});
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < pts.size();) {
            pts[i].h = spectrum_h(coarse, fine, pts[i].mu, pts[i].alpha, m);
            pts[i].v = spectrum_3(coarse, fine, pts[i].mu, pts[i].alpha, m);
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < c.jobs; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    const std::vector<std::string> cols{"mu", "alpha", "m", "K", "re", "im", "converged"};
    Table th(cols), tv(cols);
    const double mval = m.infinite ? std::numeric_limits<double>::infinity() : m.m;
    bool ok = true;
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& p : pts) {
        for (const auto& e : p.h.entries)
            th.add({p.mu, p.alpha, mval, double(c.K), e.value.real(), e.value.imag(), e.converged ? 1.0 : 0.0});
        for (const auto& e : p.v.entries)
            tv.add({p.mu, p.alpha, mval, double(c.K), e.value.real(), e.value.imag(), e.converged ? 1.0 : 0.0});
        const double bound = horizontal_eigen_bound(p.mu);
        const bool pass = p.h.abscissa() <= bound + 1e-6 && p.v.abscissa() <= -0.5 + 1e-6;
        ok = ok && pass;
        summary.push_back({{"mu", p.mu}, {"alpha", p.alpha}, {"abscissa_h", p.h.abscissa()}, {"bound_h", bound},
                           {"abscissa_3", p.v.abscissa()}, {"converged_h", p.h.converged_count()},
                           {"converged_3", p.v.converged_count()}, {"within_bounds", pass}});
        std::cout << "mu " << p.mu << " alpha " << p.alpha << ": top eigenvalue " << format_double(p.h.abscissa())
                  << " (bound " << format_double(bound) << "), vertical abscissa " << format_double(p.v.abscissa())
                  << '\n';
    }
    write_csv(fs::path(c.out) / "spectrum_h.csv", th);
    write_csv(fs::path(c.out) / "spectrum_3.csv", tv);
    man.json()["results"] = {{"points", summary}, {"drift_tolerance", eigen_drift_tol}, {"refinement_K", c.K + 8}};
    return ok ? 0 : 1;
}

int cmd_evolve2d(const RunConfig& c, Manifest& man) {
    Evolve2DConfig e;
    e.params = c.strain();
    e.m = c.weight();
    e.tau_end = c.tau_end;
    e.dt = c.dt;
    e.nonlinear = c.nonlinear;
    const EvolutionState2D st = evolve2d(initial_2d(c), e);
    write_csv(fs::path(c.out) / "history.csv", st.history);
    write_field(fs::path(c.out) / "w_final.bin", st.w);
    const Profile2D p = profile2d(st.w, st.tau, e.m);
    const auto fit = fit_or_null(st.history, "norm", c.tau_end, c.dt, -0.5);
    man.json()["results"] = {{"tau", st.tau}, {"fit_norm", fit}, {"coef", {p.coef[0], p.coef[1]}},
                             {"profile_residual", p.residual}};
    if (!fit.is_null()) std::cout << "fitted rate " << format_double(fit["rate"].get<double>()) << '\n';
    std::cout << "coefficients " << format_double(p.coef[0]) << ' ' << format_double(p.coef[1]) << ", residual "
              << format_double(p.residual) << '\n';
    return 0;
}

int cmd_evolve3d(const RunConfig& c, Manifest& man) {
    Evolve3DConfig e;
    e.params = c.strain();
    e.m = c.weight();
    e.tau_end = c.tau_end;
    e.dt = c.dt;
    e.nonlinear = c.nonlinear;
    e.divergence_tol = c.divergence_tol;
    e.mode_tolerance = c.mode_tol;
    e.delta = c.delta;
    const Initial3D init = initial_3d(c);
    const EvolutionState3D st = evolve3d(init.W, e, &init.w2d);
    write_csv(fs::path(c.out) / "history.csv", st.history);
    write_field(fs::path(c.out) / "W_final.bin", st.W);
    BiotSavart3D bs(st.W.grid);
    bs.set_mode_tolerance(c.mode_tol);
    const SecondaryProfile sp = extract_secondary_profile(st.W, st.tau, e.params, e.m, e.delta, &bs);
    const double chi = e.params.chi();
    man.json()["results"] = {
        {"tau", st.tau},
        {"vertical_coordinate", "eta = exp(-chi tau) xi_3"},
        {"fit_norm", fit_or_null(st.history, "norm", c.tau_end, c.dt, -0.5)},
        {"fit_d3_norm", fit_or_null(st.history, "d3_norm", c.tau_end, c.dt, -(0.5 + chi))},
        {"profile",
         {{"coef", {sp.coef[0], sp.coef[1]}},
          {"coef_linear_prediction",
           {st.history.values("coef1_pred").back(), st.history.values("coef2_pred").back()}},
          {"residual", sp.residual},
          {"velocity_residual", sp.velocity_residual},
          {"window_slices", sp.window_slices},
          {"physical_t", sp.physical_t},
          {"physical_exponent", sp.physical_exponent},
          {"physical_amplitude", sp.physical_amplitude}}},
        {"leray_steps", st.leray_steps},
        {"warnings", st.warnings}};
    for (const auto& w : st.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "coefficients " << format_double(sp.coef[0]) << ' ' << format_double(sp.coef[1]) << ", residual "
              << format_double(sp.residual) << '\n';
    return 0;
}

int cmd_accept(const RunConfig& c, Manifest& man) {
    const auto res = run_acceptance(std::cout, c.jobs);
    Table t({"criterion", "pass", "seconds"});
    nlohmann::json j = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : res) {
        t.add({double(r.id), r.pass ? 1.0 : 0.0, r.seconds});
        j.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
        ok = ok && r.pass;
    }
    write_csv(fs::path(c.out) / "acceptance.csv", t);
    man.json()["results"] = j;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Burgers-vortex blow-up laboratory"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string config_path;
    register_options(app, cfg, config_path);
    const std::vector<std::pair<std::string, std::string>> subs{
        {"fields", "sample the explicit fields and check their identities"},
        {"residual", "Navier-Stokes residual of an explicit solution"},
        {"spectrum", "eigenvalues of the 2D linearized operators over a (mu, alpha) sweep"},
        {"evolve2d", "integrate the scalar 2D equation"},
        {"evolve3d", "integrate the 3D perturbation system"},
        {"accept", "run the acceptance suite"}};
    for (const auto& [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) apply_config_file(app, config_path);
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.validate();
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    Manifest man(cfg.command);
    man.json()["config"] = cfg.to_json();
    int rc = 0;
    try {
        if (cfg.command == "fields") rc = cmd_fields(cfg, man);
        else if (cfg.command == "residual") rc = cmd_residual(cfg, man);
        else if (cfg.command == "spectrum") rc = cmd_spectrum(cfg, man);
        else if (cfg.command == "evolve2d") rc = cmd_evolve2d(cfg, man);
        else if (cfg.command == "evolve3d") rc = cmd_evolve3d(cfg, man);
        else rc = cmd_accept(cfg, man);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        man.json()["error"] = {{"kind", "config"}, {"message", e.what()}};
        rc = 2;
    } catch (const GuardError& e) {
        std::cerr << "guard tripped: " << e.guard() << " (" << e.what() << ")\n";
        man.json()["error"] = {{"kind", "guard"}, {"guard", e.guard()}, {"message", e.what()}};
        rc = 1;
    }
    man.json()["status"] = rc;
    man.write(fs::path(cfg.out) / "manifest.json");
    return rc;
}
