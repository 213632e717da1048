#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "timolab/energies.hpp"
#include "timolab/kinematics.hpp"
#include "timolab/loads.hpp"
#include "timolab/material.hpp"
#include "timolab/section.hpp"
#include "timolab/solver1d.hpp"
#include "timolab/solver3d.hpp"

namespace timolab {

struct SweepRow {
    double eps = 0;
    double energy3d = 0;         // Pi^eps at the 3D minimizer
    double energy1d = 0;         // Pi at the limit minimizer
    double gap = 0;              // |energy3d - energy1d|
    double h1_dist = 0;          // ||u^eps_min - u_min||_H1
    double s11 = 0, s12 = 0, s22 = 0;  // in-plane strain L2 norms
    double penalty = 0;          // second-gradient term at the minimizer
    double recovery_energy = 0;  // Pi^eps of the recovery field of u_min
    double cond_est = 0;
    double residual_rel = 0;
};

struct ConvergenceReport {
    std::vector<SweepRow> rows;
    double rate_energy_gap = 0;
    double rate_recovery_gap = 0;
    double rate_s11 = 0, rate_s12 = 0, rate_s22 = 0;
    double energy1d = 0;
    double h1_norm_1d = 0;  // ||u_min||_H1 in the 3D embedding
    TimoshenkoField u1d;
    Eigen::VectorXd c1d;               // embedding of u1d (basis of the last row)
    std::vector<Eigen::VectorXd> c3d;  // 3D minimizers, one per eps (per-row basis)
};

struct SweepSetup {
    MaterialModuli moduli;
    CrossSection section = CrossSection::rectangle(1.0, 1.0);
    double length = 1.0;
    double eps_r = 0.1;
    LoadSpec loads;
    int p1 = 4, p2 = 4, p3 = 10;
    std::vector<double> eps_grid = default_eps_grid();
    double cond_limit = 1e12;
    bool estimate_cond = true;
    // Resolve the clamp boundary layer with an eps-wide axial element.  The
    // minimizer's cross-section correctors cannot vanish at the clamped face
    // without a transition zone of width O(eps); without the layer element the
    // discrete minimum stalls at the fixed-basis approximation floor.
    bool clamp_layer = true;

    double layer_width(double eps) const {
        return clamp_layer ? std::min(eps, 0.5 * length) : 0.0;
    }

    static std::vector<double> default_eps_grid() {
        std::vector<double> g;
        for (double e : {-0.5, -1.0, -1.5, -2.0, -2.5}) g.push_back(std::pow(10.0, e));
        return g;
    }
};

/// Least-squares slope of log|y| vs log x over the selected rows.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                           double floor = 0.0) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(std::abs(y[i]) > floor)) continue;
        const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Solve the 3D problem on a decreasing eps grid, the 1D limit problem once,
/// and tabulate the convergence diagnostics.
inline ConvergenceReport run_sweep(const SweepSetup& s) {
    for (std::size_t i = 1; i < s.eps_grid.size(); ++i)
        if (!(s.eps_grid[i] < s.eps_grid[i - 1]) || !(s.eps_grid[i] > 0))
            throw std::invalid_argument("run_sweep: eps grid must be positive and "
                                        "strictly decreasing");
    ModuliValidation mv = validate_moduli(s.moduli);
    if (!mv.ok) throw std::invalid_argument("run_sweep: invalid moduli");

    ConvergenceReport rep;
    const int load_deg = s.loads.max_degree();
    // total-degree exactness: in-plane basis products reach degree 2(p1+p2)
    const int deg_plane = 2 * (s.p1 + s.p2) + 2 + load_deg;
    const int deg_axial = 2 * s.p3 + 2 + load_deg;

    // 1D limit problem.
    ClampedBasis axial(s.p3, s.length);
    ReducedLoads rl = reduce_loads(s.loads, s.section, s.length);
    BeamStiffness st = BeamStiffness::from(s.moduli, s.section, s.eps_r);
    rep.u1d = solve_1d(st, rl, axial);
    rep.energy1d = energy_1d(rep.u1d, st, rl).total;

    // The axial layer element tracks eps, so the basis (and with it the
    // assembly and the embedding of the 1D minimizer) is rebuilt per row.
    for (double eps : s.eps_grid) {
        RitzBasis3D basis(s.p1, s.p2, s.p3, s.section, s.length, s.layer_width(eps));
        QuadTables tables = build_tables(basis, deg_plane, deg_axial);
        AssembledSystem sys = assemble(basis, tables, s.moduli, s.eps_r, s.loads);
        rep.c1d = embed_timoshenko(basis, rep.u1d);
        rep.h1_norm_1d = h1_norm(sys, rep.c1d);
        const int ns = basis.scalar_size();
        SolveResult sol = solve_min(sys, eps, s.cond_limit, s.estimate_cond);
        SweepRow row;
        row.eps = eps;
        row.energy3d = sol.energy;
        row.energy1d = rep.energy1d;
        row.gap = std::abs(sol.energy - rep.energy1d);
        row.h1_dist = h1_norm(sys, sol.coeffs - rep.c1d);
        auto sn = inplane_strain_norms(tables, ns, sol.coeffs);
        row.s11 = sn[0];
        row.s12 = sn[1];
        row.s22 = sn[2];
        const double pen = (eps - s.eps_r) / eps;
        row.penalty = 0.5 * s.moduli.tau_R * pen * pen * sol.coeffs.dot(sys.KP * sol.coeffs);
        RecoveryField rec(rep.u1d, eps, s.moduli);
        row.recovery_energy = total_potential_eps(rec, s.section, s.length, eps, s.eps_r,
                                                  s.moduli, s.loads,
                                                  std::max(deg_plane, deg_axial));
        row.cond_est = sol.cond_est;
        row.residual_rel = sol.residual_rel;
        rep.rows.push_back(row);
        rep.c3d.push_back(sol.coeffs);
    }

    // Rate fits; ignore rows drowned in solver residual.
    double res_floor = 0;
    for (const SweepRow& r : rep.rows)
        res_floor = std::max(res_floor, r.residual_rel * std::abs(r.energy3d));
    res_floor *= 100.0;
    std::vector<double> xs, gap, rgap, s11, s12, s22;
    for (const SweepRow& r : rep.rows) {
        xs.push_back(r.eps);
        gap.push_back(r.gap);
        rgap.push_back(std::abs(r.recovery_energy - rep.energy1d));
        s11.push_back(r.s11);
        s12.push_back(r.s12);
        s22.push_back(r.s22);
    }
    rep.rate_energy_gap = loglog_slope(xs, gap, res_floor);
    rep.rate_recovery_gap = loglog_slope(xs, rgap, res_floor);
    rep.rate_s11 = loglog_slope(xs, s11, 0.0);
    rep.rate_s12 = loglog_slope(xs, s12, 0.0);
    rep.rate_s22 = loglog_slope(xs, s22, 0.0);
    return rep;
}

struct LiminfRow {
    double eps = 0;
    double pi_eps = 0;
    double pi_limit = 0;
    bool flagged = false;  // pi_eps < pi_limit - tol
};

/// Tabulate Pi^eps along a user-supplied family and flag values below the
/// limit energy: a persistent flag as eps -> 0 would contradict the liminf
/// inequality.
inline std::vector<LiminfRow> liminf_probe(const std::function<double(double)>& pi_eps_of,
                                           double pi_limit, const std::vector<double>& grid,
                                           double tol = 1e-10) {
    std::vector<LiminfRow> rows;
    for (double eps : grid) {
        LiminfRow r;
        r.eps = eps;
        r.pi_eps = pi_eps_of(eps);
        r.pi_limit = pi_limit;
        r.flagged = r.pi_eps < pi_limit - tol;
        rows.push_back(r);
    }
    return rows;
}

/// Evaluator of the real-domain field x^r -> (R^{eps_r})^{-1} u(R^{1/eps_r} x^r).
inline RescaledField3 unscale_minimizer(const SmoothField3& u, double eps_r) {
    return RescaledField3(u, 1.0 / eps_r);
}

namespace detail {
inline std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}
}  // namespace detail

inline void write_report_csv(const std::string& path, const ConvergenceReport& rep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "eps,energy3d,energy1d,gap,h1_dist,s11,s12,s22,penalty,recovery_energy,cond_est\n";
    for (const SweepRow& r : rep.rows) {
        out << detail::fmt_g(r.eps) << ',' << detail::fmt_g(r.energy3d) << ','
            << detail::fmt_g(r.energy1d) << ',' << detail::fmt_g(r.gap) << ','
            << detail::fmt_g(r.h1_dist) << ',' << detail::fmt_g(r.s11) << ','
            << detail::fmt_g(r.s12) << ',' << detail::fmt_g(r.s22) << ','
            << detail::fmt_g(r.penalty) << ',' << detail::fmt_g(r.recovery_energy) << ','
            << detail::fmt_g(r.cond_est) << '\n';
    }
}

inline void write_rates_csv(const std::string& path, const ConvergenceReport& rep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "quantity,rate\n";
    out << "energy_gap," << detail::fmt_g(rep.rate_energy_gap) << '\n';
    out << "recovery_gap," << detail::fmt_g(rep.rate_recovery_gap) << '\n';
    out << "s11," << detail::fmt_g(rep.rate_s11) << '\n';
    out << "s12," << detail::fmt_g(rep.rate_s12) << '\n';
    out << "s22," << detail::fmt_g(rep.rate_s22) << '\n';
}

}  // namespace timolab
