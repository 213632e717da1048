#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "timolab/energies.hpp"
#include "timolab/kinematics.hpp"
#include "timolab/legendre.hpp"
#include "timolab/loads.hpp"
#include "timolab/material.hpp"
#include "timolab/section.hpp"

namespace timolab {

/// Stiffnesses of the limit beam.
struct BeamStiffness {
    double e_mod = 0;      // tau1 - tau2^2/(lambda+mu)
    double a_stretch = 0;  // e_mod * A
    double b1 = 0;         // e_mod * J1
    double b2 = 0;         // e_mod * J2
    double shear = 0;      // gamma * A / eps_r^2
    double area = 0;

    static BeamStiffness from(const MaterialModuli& m, const CrossSection& cs, double eps_r) {
        BeamStiffness st;
        st.e_mod = m.axial_modulus();
        st.area = cs.area();
        st.a_stretch = st.e_mod * cs.area();
        st.b1 = st.e_mod * cs.j1();
        st.b2 = st.e_mod * cs.j2();
        st.shear = m.gamma * cs.area() / (eps_r * eps_r);
        return st;
    }
};

struct Energy1d {
    double total = 0, axial = 0, bending = 0;
};

namespace detail {

struct Gram1d {
    Eigen::MatrixXd dd, vv, dv;  // ∫phi' phi', ∫phi phi, ∫phi_i' phi_j
    Eigen::VectorXd at_L, d_at_L;
};

inline Gram1d gram_matrices(const ClampedBasis& basis) {
    const int p = basis.size();
    const double L = basis.length();
    Gram1d g;
    g.dd = Eigen::MatrixXd::Zero(p, p);
    g.vv = Eigen::MatrixXd::Zero(p, p);
    g.dv = Eigen::MatrixXd::Zero(p, p);
    GaussRule rule = gauss_on_interval(0.0, L, 2 * p);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Eigen::VectorXd v = basis.eval_all(rule.nodes[i], 0);
        const Eigen::VectorXd d = basis.eval_all(rule.nodes[i], 1);
        const double w = rule.weights[i];
        g.dd.noalias() += w * d * d.transpose();
        g.vv.noalias() += w * v * v.transpose();
        g.dv.noalias() += w * d * v.transpose();
    }
    g.at_L = basis.eval_all(L, 0);
    g.d_at_L = basis.eval_all(L, 1);
    return g;
}

inline Eigen::VectorXd load_vector(const ClampedBasis& basis, const Poly1& f, double end) {
    const int p = basis.size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
    if (!f.empty()) {
        GaussRule rule =
            gauss_on_interval(0.0, basis.length(), p + static_cast<int>(f.size()) + 1);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            rhs += rule.weights[i] * poly1_eval(f, rule.nodes[i]) *
                   basis.eval_all(rule.nodes[i], 0);
    }
    rhs += end * basis.eval_all(basis.length(), 0);
    return rhs;
}

}  // namespace detail

/// Pi_a, Pi_b and their sum for a given Timoshenko field.
inline Energy1d energy_1d(const TimoshenkoField& f, const BeamStiffness& st,
                          const ReducedLoads& rl) {
    const ClampedBasis& basis = f.u3.basis();
    const double L = basis.length();
    int pdeg = 0;
    for (const Poly1* p : {&rl.f1, &rl.f2, &rl.f3, &rl.m1, &rl.m2})
        pdeg = std::max<int>(pdeg, static_cast<int>(p->size()));
    GaussRule g = gauss_on_interval(0.0, L, 2 * basis.degree() + pdeg + 1);
    double wa = 0, wb = 0, la = 0, lb = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double x = g.nodes[i], w = g.weights[i];
        const double du3 = f.u3(x, 1);
        const double s1 = f.u1(x, 1) - f.psi2(x);
        const double s2 = f.u2(x, 1) + f.psi1(x);
        const double dp1 = f.psi1(x, 1), dp2 = f.psi2(x, 1);
        wa += w * 0.5 * st.a_stretch * du3 * du3;
        wb += w * (0.5 * st.shear * (s1 * s1 + s2 * s2) +
                   0.5 * (st.b1 * dp1 * dp1 + st.b2 * dp2 * dp2));
        la += w * poly1_eval(rl.f3, x) * f.u3(x);
        lb += w * (poly1_eval(rl.f1, x) * f.u1(x) + poly1_eval(rl.f2, x) * f.u2(x) +
                   poly1_eval(rl.m1, x) * f.psi1(x) + poly1_eval(rl.m2, x) * f.psi2(x));
    }
    la += rl.F3 * f.u3(L);
    lb += rl.F1 * f.u1(L) + rl.F2 * f.u2(L) + rl.M1 * f.psi1(L) + rl.M2 * f.psi2(L);
    Energy1d e;
    e.axial = wa - la;
    e.bending = wb - lb;
    e.total = e.axial + e.bending;
    return e;
}

/// Minimizer of Pi_a over the clamped basis.
inline Profile1D solve_axial(const BeamStiffness& st, const ReducedLoads& rl,
                             const ClampedBasis& basis) {
    detail::Gram1d g = detail::gram_matrices(basis);
    Eigen::MatrixXd K = st.a_stretch * g.dd;
    Eigen::VectorXd rhs = detail::load_vector(basis, rl.f3, rl.F3);
    Eigen::VectorXd c = K.ldlt().solve(rhs);
    return Profile1D(basis, c);
}

struct BendingSolution {
    Profile1D u1, u2, psi1, psi2;
};

/// Minimizer of Pi_b; the two planes decouple (J12 = 0 by construction).
inline BendingSolution solve_bending(const BeamStiffness& st, const ReducedLoads& rl,
                                     const ClampedBasis& basis) {
    detail::Gram1d g = detail::gram_matrices(basis);
    const int p = basis.size();
    auto solve_plane = [&](double bend, double cross_sign, const Poly1& f, double F,
                           const Poly1& mom, double M) {
        Eigen::MatrixXd K(2 * p, 2 * p);
        K.topLeftCorner(p, p) = st.shear * g.dd;
        K.topRightCorner(p, p) = cross_sign * st.shear * g.dv;
        K.bottomLeftCorner(p, p) = cross_sign * st.shear * g.dv.transpose();
        K.bottomRightCorner(p, p) = st.shear * g.vv + bend * g.dd;
        Eigen::VectorXd rhs(2 * p);
        rhs.head(p) = detail::load_vector(basis, f, F);
        rhs.tail(p) = detail::load_vector(basis, mom, M);
        Eigen::VectorXd c = K.ldlt().solve(rhs);
        return std::make_pair(Profile1D(basis, c.head(p)), Profile1D(basis, c.tail(p)));
    };
    BendingSolution sol;
    // plane (u1, psi2): shear strain u1' - psi2
    auto [u1, psi2] = solve_plane(st.b2, -1.0, rl.f1, rl.F1, rl.m2, rl.M2);
    // plane (u2, psi1): shear strain u2' + psi1
    auto [u2, psi1] = solve_plane(st.b1, 1.0, rl.f2, rl.F2, rl.m1, rl.M1);
    sol.u1 = std::move(u1);
    sol.psi2 = std::move(psi2);
    sol.u2 = std::move(u2);
    sol.psi1 = std::move(psi1);
    return sol;
}

/// Full 1D minimization: axial and bending solved independently.
inline TimoshenkoField solve_1d(const BeamStiffness& st, const ReducedLoads& rl,
                                const ClampedBasis& basis) {
    TimoshenkoField f = TimoshenkoField::zero(basis);
    f.u3 = solve_axial(st, rl, basis);
    BendingSolution b = solve_bending(st, rl, basis);
    f.u1 = std::move(b.u1);
    f.u2 = std::move(b.u2);
    f.psi1 = std::move(b.psi1);
    f.psi2 = std::move(b.psi2);
    return f;
}

struct BnRow {
    double eps_r = 0;
    double tip_u1 = 0, tip_u2 = 0;
    double shear_measure = 0;  // L2 norms of (u1' - psi2) and (u2' + psi1)
};

/// Shear-rigid limit study: resolve the bending problem on a decreasing
/// eps_r grid and report tip deflections and the shear measure.
inline std::vector<BnRow> bernoulli_navier_limit(const MaterialModuli& m,
                                                 const CrossSection& cs,
                                                 const ReducedLoads& rl,
                                                 const ClampedBasis& basis,
                                                 const std::vector<double>& eps_r_grid) {
    std::vector<BnRow> rows;
    const double L = basis.length();
    GaussRule g = gauss_on_interval(0.0, L, 2 * basis.degree() + 2);
    for (double er : eps_r_grid) {
        BeamStiffness st = BeamStiffness::from(m, cs, er);
        BendingSolution sol = solve_bending(st, rl, basis);
        BnRow row;
        row.eps_r = er;
        row.tip_u1 = sol.u1(L);
        row.tip_u2 = sol.u2(L);
        double s = 0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double x = g.nodes[i], w = g.weights[i];
            const double s1 = sol.u1(x, 1) - sol.psi2(x);
            const double s2 = sol.u2(x, 1) + sol.psi1(x);
            s += w * (s1 * s1 + s2 * s2);
        }
        row.shear_measure = std::sqrt(s);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace timolab
