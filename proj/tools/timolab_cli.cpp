#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "timolab/config.hpp"
#include "timolab/gamma.hpp"
#include "timolab/io.hpp"

namespace fs = std::filesystem;
using namespace timolab;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::vector<double> eps_grid;
    std::string field_path;
    unsigned seed = 0;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool field = false) {
    cmd->add_option("--config", o.config_path, "experiment config file")->required();
    cmd->add_option("--out", o.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--eps-grid", o.eps_grid, "override eps grid (strictly decreasing)");
    cmd->add_option("--seed", o.seed, "seed for randomized checks");
    if (field) cmd->add_option("--field", o.field_path, "serialized 1D field to check");
}

/// Removes every file it registered unless keep() was called.
class OutputGuard {
public:
    ~OutputGuard() {
        if (keep_) return;
        for (const std::string& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    std::string track(const std::string& p) {
        paths_.push_back(p);
        return p;
    }
    void keep() { keep_ = true; }

private:
    std::vector<std::string> paths_;
    bool keep_ = false;
};

ExperimentConfig load_config(const CommonOpts& o) {
    ExperimentConfig cfg = ExperimentConfig::load(o.config_path);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (!o.eps_grid.empty()) {
        for (std::size_t i = 0; i < o.eps_grid.size(); ++i) {
            if (!(o.eps_grid[i] > 0))
                throw ConfigError("--eps-grid: entries must be positive");
            if (i > 0 && !(o.eps_grid[i] < o.eps_grid[i - 1]))
                throw ConfigError("--eps-grid: grid must be strictly decreasing");
        }
        cfg.eps_grid = o.eps_grid;
    }
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

int cmd_material_check(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o);
    const MaterialModuli& m = cfg.moduli;
    std::printf("mu = %g, lambda = %g, tau1 = %g, tau2 = %g, gamma = %g, tau_R = %g\n",
                m.mu, m.lambda, m.tau1, m.tau2, m.gamma, m.tau_R);
    ModuliValidation v = validate_moduli(m);
    auto line = [](const char* name, double value, bool ok) {
        std::printf("  %-28s = %-14g %s\n", name, value, ok ? "ok" : "VIOLATED");
    };
    line("mu", m.mu, m.mu > 0);
    line("gamma", m.gamma, m.gamma > 0);
    line("tau1", m.tau1, m.tau1 > 0);
    line("tau1(lambda+mu) - tau2^2", m.tau1 * (m.lambda + m.mu) - m.tau2 * m.tau2,
         m.tau1 * (m.lambda + m.mu) - m.tau2 * m.tau2 > 0);
    line("tau_R", m.tau_R, m.tau_R > 0);
    if (!v.ok) {
        for (const std::string& s : v.violations)
            std::printf("violated: %s\n", s.c_str());
        return 1;
    }
    const double c0 = coercivity_constant(m);
    std::printf("coercivity constant = %s\n", fmt(c0).c_str());

    std::mt19937 rng(o.seed);
    std::normal_distribution<double> nd;
    double worst = 1e300;
    for (int i = 0; i < 1000; ++i) {
        SymStrain e{nd(rng), nd(rng), nd(rng), nd(rng), nd(rng), nd(rng)};
        const double f2 = e.frobenius_sq();
        if (f2 > 0) worst = std::min(worst, density_W(e, m) / (c0 * f2));
    }
    std::printf("random coercivity ratio W / (c |E|^2): min = %s (seed %u)\n",
                fmt(worst).c_str(), o.seed);
    if (cfg.isotropic) {
        const double ref =
            m.mu * (3.0 * m.lambda + 2.0 * m.mu) / (m.lambda + m.mu);
        const double res = std::abs(m.axial_modulus() - ref) / std::abs(ref);
        std::printf("isotropic Young-modulus identity residual = %s\n", fmt(res).c_str());
    }
    std::printf("axial modulus = %s, eta = %s\n", fmt(m.axial_modulus()).c_str(),
                fmt(m.eta()).c_str());
    return 0;
}

int cmd_solve1d(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o);
    OutputGuard guard;
    ClampedBasis basis(cfg.p3, cfg.length);
    ReducedLoads rl = reduce_loads(cfg.loads, cfg.section, cfg.length);
    BeamStiffness st = BeamStiffness::from(cfg.moduli, cfg.section, cfg.eps_r);
    TimoshenkoField f = solve_1d(st, rl, basis);
    Energy1d e = energy_1d(f, st, rl);
    const double L = cfg.length;

    write_field_file(guard.track(cfg.out_dir + "/field1d.txt"), f);
    {
        std::ofstream out(guard.track(cfg.out_dir + "/profile_1d.csv"));
        out << "x3,u1,u2,u3,psi1,psi2\n";
        for (int i = 0; i <= 100; ++i) {
            const double x = L * i / 100.0;
            out << fmt(x) << ',' << fmt(f.u1(x)) << ',' << fmt(f.u2(x)) << ','
                << fmt(f.u3(x)) << ',' << fmt(f.psi1(x)) << ',' << fmt(f.psi2(x)) << '\n';
        }
    }
    guard.keep();
    std::printf("energy = %s (axial %s, bending %s)\n", fmt(e.total).c_str(),
                fmt(e.axial).c_str(), fmt(e.bending).c_str());
    std::printf("tip deflection: u1(L) = %s, u2(L) = %s, u3(L) = %s\n",
                fmt(f.u1(L)).c_str(), fmt(f.u2(L)).c_str(), fmt(f.u3(L)).c_str());
    return 0;
}

int cmd_solve3d(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o);
    OutputGuard guard;
    SweepSetup s = cfg.sweep_setup();
    const int load_deg = s.loads.max_degree();
    std::ofstream out(guard.track(cfg.out_dir + "/solve3d.csv"));
    out << "eps,energy3d,penalty,cond_est,residual_rel\n";
    double last_energy = 0;
    for (double eps : s.eps_grid) {
        RitzBasis3D basis(s.p1, s.p2, s.p3, s.section, s.length, s.layer_width(eps));
        QuadTables tables =
            build_tables(basis, 2 * (s.p1 + s.p2) + 2 + load_deg, 2 * s.p3 + 2 + load_deg);
        AssembledSystem sys = assemble(basis, tables, s.moduli, s.eps_r, s.loads);
        SolveResult sol = solve_min(sys, eps, s.cond_limit, true);
        if (sol.cond_warning)
            throw std::runtime_error("solve3d: condition estimate above limit at eps = " +
                                     std::to_string(eps));
        const double pen = (eps - s.eps_r) / eps;
        const double penalty =
            0.5 * s.moduli.tau_R * pen * pen * sol.coeffs.dot(sys.KP * sol.coeffs);
        out << fmt(eps) << ',' << fmt(sol.energy) << ',' << fmt(penalty) << ','
            << fmt(sol.cond_est) << ',' << fmt(sol.residual_rel) << '\n';
        last_energy = sol.energy;
    }
    guard.keep();
    std::printf("solved %zu eps values, final energy = %s\n", s.eps_grid.size(),
                fmt(last_energy).c_str());
    return 0;
}

void write_gap_svg(const std::string& path, const ConvergenceReport& rep) {
    std::vector<double> lx, ly;
    for (const SweepRow& r : rep.rows)
        if (r.gap > 0) {
            lx.push_back(std::log10(r.eps));
            ly.push_back(std::log10(r.gap));
        }
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='480' height='360' "
           "viewBox='0 0 480 360'>\n"
           "<rect width='480' height='360' fill='white'/>\n";
    if (lx.size() >= 2) {
        const auto [x0, x1] = std::minmax_element(lx.begin(), lx.end());
        const auto [y0, y1] = std::minmax_element(ly.begin(), ly.end());
        auto px = [&](double v) { return 40 + 400 * (v - *x0) / std::max(1e-12, *x1 - *x0); };
        auto py = [&](double v) { return 320 - 280 * (v - *y0) / std::max(1e-12, *y1 - *y0); };
        out << "<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
        for (std::size_t i = 0; i < lx.size(); ++i)
            out << px(lx[i]) << ',' << py(ly[i]) << ' ';
        out << "'/>\n";
        for (std::size_t i = 0; i < lx.size(); ++i)
            out << "<circle cx='" << px(lx[i]) << "' cy='" << py(ly[i])
                << "' r='3' fill='steelblue'/>\n";
    }
    out << "<text x='200' y='350' font-size='12'>log10 eps</text>\n"
           "<text x='8' y='20' font-size='12'>log10 gap</text>\n</svg>\n";
}

int cmd_sweep(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o);
    OutputGuard guard;
    ConvergenceReport rep = run_sweep(cfg.sweep_setup());
    for (const SweepRow& r : rep.rows)
        if (r.cond_est > cfg.cond_limit)
            throw std::runtime_error("sweep: condition estimate above limit at eps = " +
                                     std::to_string(r.eps));
    write_report_csv(guard.track(cfg.out_dir + "/report.csv"), rep);
    write_rates_csv(guard.track(cfg.out_dir + "/rates.csv"), rep);
    if (o.svg) write_gap_svg(guard.track(cfg.out_dir + "/gap_vs_eps.svg"), rep);
    guard.keep();
    const SweepRow& last = rep.rows.back();
    std::printf("energy1d = %s, final energy3d = %s, final gap = %s\n",
                fmt(rep.energy1d).c_str(), fmt(last.energy3d).c_str(),
                fmt(last.gap).c_str());
    std::printf("rates: energy_gap %s, s11 %s, s12 %s, s22 %s\n",
                fmt(rep.rate_energy_gap).c_str(), fmt(rep.rate_s11).c_str(),
                fmt(rep.rate_s12).c_str(), fmt(rep.rate_s22).c_str());
    return 0;
}

int cmd_recovery_check(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o);
    OutputGuard guard;
    TimoshenkoField f;
    if (!o.field_path.empty()) {
        f = read_field_file(o.field_path);
    } else {
        ClampedBasis basis(cfg.p3, cfg.length);
        ReducedLoads rl = reduce_loads(cfg.loads, cfg.section, cfg.length);
        BeamStiffness st = BeamStiffness::from(cfg.moduli, cfg.section, cfg.eps_r);
        f = solve_1d(st, rl, basis);
    }
    const double L = f.u3.basis().length();
    const int deg = 2 * f.u3.basis().degree() + 8;
    TdField3 base(f);
    const double w_tau =
        energy_W_tau_field(base, cfg.section, L, cfg.eps_r, cfg.moduli, deg);

    SectionQuadrature sq = cfg.section.quadrature(8);
    GaussRule ax = gauss_on_interval(0.0, L, 8);

    std::ofstream out(guard.track(cfg.out_dir + "/recovery.csv"));
    out << "eps,w_eps,w_tau,gap,identity_residual\n";
    std::vector<double> xs, gaps;
    double worst_id = 0;
    for (double eps : cfg.eps_grid) {
        RecoveryField rec(f, eps, cfg.moduli);
        const double w_eps =
            energy_W_eps_field(rec, cfg.section, L, eps, cfg.eps_r, cfg.moduli, deg);
        double idres = 0;
        for (const Vec2& qn : sq.nodes)
            for (double x3 : ax.nodes) {
                const Eigen::Vector3d x(qn.x1, qn.x2, x3);
                const SymStrain se = scaled_strain(rec.grad(x), eps);
                const auto [e13u, e23u, e33u] = f.strains(x);
                const Eigen::Matrix3d gh = rec.hat_grad(x);
                const double eta = cfg.moduli.eta();
                idres = std::max(idres, std::abs(se.e11 + eta * e33u));
                idres = std::max(idres, std::abs(se.e22 + eta * e33u));
                idres = std::max(idres, std::abs(se.e12));
                idres = std::max(idres, std::abs(se.e33 - e33u));
                const double h13 = 0.5 * (gh(0, 2) + gh(2, 0));
                const double h23 = 0.5 * (gh(1, 2) + gh(2, 1));
                idres = std::max(idres,
                                 std::abs(se.e13 - (e13u + eps * eps * h13) / eps));
                idres = std::max(idres,
                                 std::abs(se.e23 - (e23u + eps * eps * h23) / eps));
            }
        worst_id = std::max(worst_id, idres);
        const double gap = std::abs(w_eps - w_tau);
        out << fmt(eps) << ',' << fmt(w_eps) << ',' << fmt(w_tau) << ',' << fmt(gap)
            << ',' << fmt(idres) << '\n';
        xs.push_back(eps);
        gaps.push_back(gap);
    }
    guard.keep();
    const double slope = loglog_slope(xs, gaps, 1e-14 * std::abs(w_tau));
    std::printf("w_tau = %s, gap slope = %s, max identity residual = %s\n",
                fmt(w_tau).c_str(), fmt(slope).c_str(), fmt(worst_id).c_str());
    return 0;
}

int cmd_bn_limit(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o);
    OutputGuard guard;
    ClampedBasis basis(cfg.p3, cfg.length);
    ReducedLoads rl = reduce_loads(cfg.loads, cfg.section, cfg.length);
    std::vector<BnRow> rows =
        bernoulli_navier_limit(cfg.moduli, cfg.section, rl, basis, cfg.bn_eps_r_grid);
    std::ofstream out(guard.track(cfg.out_dir + "/bn.csv"));
    out << "eps_r,tip_u1,tip_u2,shear_measure\n";
    for (const BnRow& r : rows)
        out << fmt(r.eps_r) << ',' << fmt(r.tip_u1) << ',' << fmt(r.tip_u2) << ','
            << fmt(r.shear_measure) << '\n';
    guard.keep();
    const BnRow& last = rows.back();
    std::printf("eps_r = %g: tip u1 = %s, tip u2 = %s, shear measure = %s\n", last.eps_r,
                fmt(last.tip_u1).c_str(), fmt(last.tip_u2).c_str(),
                fmt(last.shear_measure).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timoshenko beam-limit laboratory"};
    app.require_subcommand(1);
    CommonOpts o;
    bool svg = false;

    CLI::App* c_mat = app.add_subcommand("material-check", "validate moduli and bounds");
    CLI::App* c_1d = app.add_subcommand("solve1d", "solve the limit beam problem");
    CLI::App* c_3d = app.add_subcommand("solve3d", "solve the 3D problem on the eps grid");
    CLI::App* c_sw = app.add_subcommand("sweep", "full convergence sweep and rate fit");
    CLI::App* c_rc = app.add_subcommand("recovery-check", "recovery-sequence diagnostics");
    CLI::App* c_bn = app.add_subcommand("bn-limit", "shear-rigid limit study");
    for (CLI::App* c : {c_mat, c_1d, c_3d, c_sw, c_bn}) add_common(c, o);
    add_common(c_rc, o, true);
    c_sw->add_flag("--svg", svg, "emit a log-log gap chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    o.svg = svg;

    try {
        if (c_mat->parsed()) return cmd_material_check(o);
        if (c_1d->parsed()) return cmd_solve1d(o);
        if (c_3d->parsed()) return cmd_solve3d(o);
        if (c_sw->parsed()) return cmd_sweep(o);
        if (c_rc->parsed()) return cmd_recovery_check(o);
        if (c_bn->parsed()) return cmd_bn_limit(o);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
