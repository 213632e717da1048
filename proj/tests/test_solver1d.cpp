#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "timolab/solver1d.hpp"

using namespace timolab;

namespace {

const MaterialModuli kModuli{1.0, 1.0, 3.0, 1.0, 1.0, 1.0};
const double kEpsR = 0.1;

BeamStiffness cantilever_stiffness() {
    return BeamStiffness::from(kModuli, CrossSection::rectangle(1.0, 1.0), kEpsR);
}

// Independent oracle: linear finite elements for the shear-deformable plane
// problem, one-point (reduced) shear integration to avoid locking.
// Minimizes 1/2 S (u' + sg*psi)^2 + 1/2 B psi'^2 - loads.
struct FePlane {
    double tip_u = 0, tip_psi = 0;
};

FePlane fe_plane(double S, double B, double sg, double f_line, double tip_f, double tip_m,
                 double L, int ne) {
    const int n = ne + 1;
    const double h = L / ne;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * n, 2 * n);  // dofs: u_0..u_n, psi_0..psi_n
    Eigen::VectorXd F = Eigen::VectorXd::Zero(2 * n);
    for (int e = 0; e < ne; ++e) {
        const int a = e, b = e + 1;
        // shear: one midpoint, strain = (u_b - u_a)/h + sg*(psi_a + psi_b)/2
        Eigen::Vector4d g(-1.0 / h, 1.0 / h, sg * 0.5, sg * 0.5);
        Eigen::Matrix4d ke = S * h * g * g.transpose();
        // bending: psi' = (psi_b - psi_a)/h
        ke(2, 2) += B / h;
        ke(3, 3) += B / h;
        ke(2, 3) -= B / h;
        ke(3, 2) -= B / h;
        const int idx[4] = {a, b, n + a, n + b};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) K(idx[i], idx[j]) += ke(i, j);
        F(a) += 0.5 * f_line * h;
        F(b) += 0.5 * f_line * h;
    }
    F(n - 1) += tip_f;
    F(2 * n - 1) += tip_m;
    // clamp u_0 and psi_0
    for (int d : {0, n}) {
        K.row(d).setZero();
        K.col(d).setZero();
        K(d, d) = 1.0;
        F(d) = 0.0;
    }
    Eigen::VectorXd x = K.ldlt().solve(F);
    return {x(n - 1), x(2 * n - 1)};
}

}  // namespace

TEST_CASE("beam stiffness from moduli and section") {
    BeamStiffness st = cantilever_stiffness();
    CHECK(st.e_mod == doctest::Approx(2.5));
    CHECK(st.a_stretch == doctest::Approx(2.5));
    CHECK(st.b1 == doctest::Approx(2.5 / 12.0));
    CHECK(st.b2 == doctest::Approx(2.5 / 12.0));
    CHECK(st.shear == doctest::Approx(100.0));
}

TEST_CASE("cantilever tip force: closed-form deflection 1.61") {
    BeamStiffness st = cantilever_stiffness();
    ReducedLoads rl;
    rl.F1 = 1.0;
    ClampedBasis basis(10, 1.0);
    TimoshenkoField f = solve_1d(st, rl, basis);
    const double exact = 1.0 / (3.0 * st.b2) + 1.0 / st.shear;  // L^3/(3B) + L/S
    CHECK(exact == doctest::Approx(1.61).epsilon(1e-14));
    CHECK(std::abs(f.u1(1.0) - exact) / exact < 1e-8);
    CHECK(f.psi2(1.0) == doctest::Approx(1.0 / (2.0 * st.b2)).epsilon(1e-8));  // L^2/(2B)
    CHECK(f.u2(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // minimum-energy value: -F u(L)/2 for a single tip load
    Energy1d e = energy_1d(f, st, rl);
    CHECK(e.total == doctest::Approx(-0.5 * exact).epsilon(1e-8));
    CHECK(e.axial == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("cantilever tip force in the other plane") {
    BeamStiffness st = cantilever_stiffness();
    ReducedLoads rl;
    rl.F2 = 1.0;
    ClampedBasis basis(10, 1.0);
    TimoshenkoField f = solve_1d(st, rl, basis);
    CHECK(f.u2(1.0) == doctest::Approx(1.61).epsilon(1e-8));
    CHECK(f.psi1(1.0) == doctest::Approx(-1.0 / (2.0 * st.b1)).epsilon(1e-8));
    CHECK(f.u1(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("cantilever tip couples") {
    BeamStiffness st = cantilever_stiffness();
    ClampedBasis basis(10, 1.0);
    {
        ReducedLoads rl;
        rl.M2 = 1.0;
        TimoshenkoField f = solve_1d(st, rl, basis);
        CHECK(f.psi2(1.0) == doctest::Approx(1.0 / st.b2).epsilon(1e-9));       // L/B
        CHECK(f.u1(1.0) == doctest::Approx(1.0 / (2.0 * st.b2)).epsilon(1e-9));  // L^2/(2B)
    }
    {
        ReducedLoads rl;
        rl.M1 = 1.0;
        TimoshenkoField f = solve_1d(st, rl, basis);
        CHECK(f.psi1(1.0) == doctest::Approx(1.0 / st.b1).epsilon(1e-9));
        CHECK(f.u2(1.0) == doctest::Approx(-1.0 / (2.0 * st.b1)).epsilon(1e-9));
    }
}

TEST_CASE("uniform distributed load") {
    BeamStiffness st = cantilever_stiffness();
    ReducedLoads rl;
    rl.f1 = {2.0};  // q = 2
    ClampedBasis basis(10, 1.0);
    TimoshenkoField f = solve_1d(st, rl, basis);
    const double exact = 2.0 / (8.0 * st.b2) + 2.0 / (2.0 * st.shear);  // qL^4/8B + qL^2/2S
    CHECK(std::abs(f.u1(1.0) - exact) / exact < 1e-8);
}

TEST_CASE("axial stretching benchmarks") {
    BeamStiffness st = cantilever_stiffness();
    ClampedBasis basis(10, 1.0);
    {
        ReducedLoads rl;
        rl.F3 = 1.0;
        TimoshenkoField f = solve_1d(st, rl, basis);
        CHECK(f.u3(1.0) == doctest::Approx(1.0 / st.a_stretch).epsilon(1e-10));  // FL/EA
    }
    {
        ReducedLoads rl;
        rl.f3 = {3.0};
        TimoshenkoField f = solve_1d(st, rl, basis);
        CHECK(f.u3(1.0) == doctest::Approx(3.0 / (2.0 * st.a_stretch)).epsilon(1e-10));
    }
}

TEST_CASE("spectral solution matches the reduced-integration FE oracle") {
    BeamStiffness st = cantilever_stiffness();
    ClampedBasis basis(10, 1.0);
    ReducedLoads rl;
    rl.F1 = 0.7;
    rl.f1 = {1.3};
    rl.M2 = -0.4;
    TimoshenkoField f = solve_1d(st, rl, basis);
    // plane (u1, psi2): shear strain u1' - psi2 -> sg = -1
    FePlane fe = fe_plane(st.shear, st.b2, -1.0, 1.3, 0.7, -0.4, 1.0, 400);
    CHECK(f.u1(1.0) == doctest::Approx(fe.tip_u).epsilon(5e-5));
    CHECK(f.psi2(1.0) == doctest::Approx(fe.tip_psi).epsilon(5e-5));
}

TEST_CASE("joint minimization equals the split solve (decoupling)") {
    BeamStiffness st = cantilever_stiffness();
    const int p = 8;
    ClampedBasis basis(p, 1.0);
    ReducedLoads rl;
    rl.F1 = 1.0;
    rl.F2 = -0.5;
    rl.F3 = 0.3;
    rl.M1 = 0.2;
    rl.M2 = 0.1;
    rl.f1 = {0.4};
    rl.f3 = {-0.6, 1.0};
    TimoshenkoField split = solve_1d(st, rl, basis);

    // joint 5p x 5p assembly straight from the energy, one block at a time
    GaussRule g = gauss_on_interval(0.0, 1.0, 2 * p + 4);
    const int n = 5 * p;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
    // layout: [u1, u2, u3, psi1, psi2]
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double x = g.nodes[i], w = g.weights[i];
        const Eigen::VectorXd v = basis.eval_all(x, 0), d = basis.eval_all(x, 1);
        Eigen::VectorXd s1 = Eigen::VectorXd::Zero(n), s2 = s1, e3 = s1, k1 = s1, k2 = s1;
        s1.segment(0, p) = d;
        s1.segment(4 * p, p) = -v;  // u1' - psi2
        s2.segment(p, p) = d;
        s2.segment(3 * p, p) = v;  // u2' + psi1
        e3.segment(2 * p, p) = d;
        k1.segment(3 * p, p) = d;
        k2.segment(4 * p, p) = d;
        K += w * (st.shear * (s1 * s1.transpose() + s2 * s2.transpose()) +
                  st.a_stretch * e3 * e3.transpose() + st.b1 * k1 * k1.transpose() +
                  st.b2 * k2 * k2.transpose());
        F.segment(0, p) += w * poly1_eval(rl.f1, x) * v;
        F.segment(2 * p, p) += w * poly1_eval(rl.f3, x) * v;
    }
    const Eigen::VectorXd vL = basis.eval_all(1.0, 0);
    F.segment(0, p) += rl.F1 * vL;
    F.segment(p, p) += rl.F2 * vL;
    F.segment(2 * p, p) += rl.F3 * vL;
    F.segment(3 * p, p) += rl.M1 * vL;
    F.segment(4 * p, p) += rl.M2 * vL;
    Eigen::VectorXd c = K.ldlt().solve(F);

    CHECK((c.segment(0, p) - split.u1.coeffs()).norm() < 1e-12 * (1.0 + c.norm()));
    CHECK((c.segment(p, p) - split.u2.coeffs()).norm() < 1e-12 * (1.0 + c.norm()));
    CHECK((c.segment(2 * p, p) - split.u3.coeffs()).norm() < 1e-12 * (1.0 + c.norm()));
    CHECK((c.segment(3 * p, p) - split.psi1.coeffs()).norm() < 1e-12 * (1.0 + c.norm()));
    CHECK((c.segment(4 * p, p) - split.psi2.coeffs()).norm() < 1e-12 * (1.0 + c.norm()));
}

TEST_CASE("minimizer beats perturbed fields (Galerkin optimality)") {
    BeamStiffness st = cantilever_stiffness();
    ClampedBasis basis(8, 1.0);
    ReducedLoads rl;
    rl.F1 = 1.0;
    rl.f2 = {0.5};
    TimoshenkoField f = solve_1d(st, rl, basis);
    const double e0 = energy_1d(f, st, rl).total;
    std::mt19937 rng(17);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        TimoshenkoField g = f;
        for (Profile1D* p : {&g.u1, &g.u2, &g.u3, &g.psi1, &g.psi2})
            for (int i = 0; i < p->coeffs().size(); ++i) p->coeffs()[i] += 0.01 * nd(rng);
        CHECK(energy_1d(g, st, rl).total >= e0 - 1e-13);
    }
}

TEST_CASE("shear-rigid limit: tip deflection approaches 1.6") {
    ClampedBasis basis(10, 1.0);
    ReducedLoads rl;
    rl.F1 = 1.0;
    CrossSection cs = CrossSection::rectangle(1.0, 1.0);
    std::vector<BnRow> rows =
        bernoulli_navier_limit(kModuli, cs, rl, basis, {0.1, 0.05, 0.025});
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double er = rows[i].eps_r;
        const double exact = 1.6 + er * er;  // L^3/3B + L S^{-1}, S = A gamma / er^2
        CHECK(rows[i].tip_u1 == doctest::Approx(exact).epsilon(1e-8));
        if (i > 0) CHECK(rows[i].shear_measure < rows[i - 1].shear_measure);
    }
    CHECK(std::abs(rows.back().tip_u1 - 1.6) / 1.6 < 1e-3);
}
