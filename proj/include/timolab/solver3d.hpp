#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "timolab/energies.hpp"
#include "timolab/kinematics.hpp"
#include "timolab/legendre.hpp"
#include "timolab/loads.hpp"
#include "timolab/material.hpp"
#include "timolab/quadrature.hpp"
#include "timolab/section.hpp"

namespace timolab {

/// Tensor-product Ritz basis on omega x (0, L):
/// Legendre(xi1) * Legendre(xi2) * clamped axial basis in x3.
/// Every function vanishes on omega x {0}; all derivatives are exact.
/// A positive `layer` splits the axial direction into a thin clamp element
/// (0, layer) and a main element (layer, L); see AxialBasis.
class RitzBasis3D {
public:
    RitzBasis3D(int p1, int p2, int p3, const CrossSection& cs, double L, double layer = 0.0)
        : p1_(p1), p2_(p2), p3_(p3), cs_(cs), L_(L), axial_(p3, L, layer) {
        if (p1 < 1 || p2 < 1 || p3 < 1)
            throw std::invalid_argument("RitzBasis3D: degrees must be >= 1");
        const Vec2 lo = cs.bbox_lo(), hi = cs.bbox_hi();
        c1_ = 0.5 * (lo.x1 + hi.x1);
        h1_ = 0.5 * (hi.x1 - lo.x1);
        c2_ = 0.5 * (lo.x2 + hi.x2);
        h2_ = 0.5 * (hi.x2 - lo.x2);
    }

    int p1() const { return p1_; }
    int p2() const { return p2_; }
    int p3() const { return p3_; }
    int scalar_size() const { return (p1_ + 1) * (p2_ + 1) * axial_.size(); }
    int size() const { return 3 * scalar_size(); }
    const CrossSection& section() const { return cs_; }
    double length() const { return L_; }
    const AxialBasis& axial() const { return axial_; }
    double center1() const { return c1_; }
    double half1() const { return h1_; }
    double center2() const { return c2_; }
    double half2() const { return h2_; }

    int index(int a, int b, int c) const {
        return (a * (p2_ + 1) + b) * axial_.size() + (c - 1);
    }

    /// Row of all scalar basis functions differentiated (d1, d2, d3) times.
    Eigen::VectorXd eval_all(const Eigen::Vector3d& x, int d1, int d2, int d3) const {
        const double xi1 = (x(0) - c1_) / h1_;
        const double xi2 = (x(1) - c2_) / h2_;
        Eigen::MatrixXd t1 = legendre_table(xi1, p1_, d1);
        Eigen::MatrixXd t2 = legendre_table(xi2, p2_, d2);
        Eigen::VectorXd t3 = axial_.eval_all(x(2), d3);
        const double s1 = std::pow(1.0 / h1_, d1);
        const double s2 = std::pow(1.0 / h2_, d2);
        Eigen::VectorXd row(scalar_size());
        const int m = axial_.size();
        for (int a = 0; a <= p1_; ++a)
            for (int b = 0; b <= p2_; ++b)
                for (int c = 1; c <= m; ++c)
                    row(index(a, b, c)) = s1 * t1(a, d1) * s2 * t2(b, d2) * t3(c - 1);
        return row;
    }

private:
    int p1_, p2_, p3_;
    CrossSection cs_;
    double L_;
    AxialBasis axial_;
    double c1_ = 0, h1_ = 1, c2_ = 0, h2_ = 1;
};

/// Basis and derivative values at all volume quadrature points, plus the
/// boundary tables used by the load vector.
struct QuadTables {
    Eigen::VectorXd w;                            // volume weights
    Eigen::MatrixXd V, D1, D2, D3;                // values and gradients
    Eigen::MatrixXd D11, D12, D22, D13, D23;      // second derivatives
    std::vector<Eigen::Vector3d> points;          // volume points
    Eigen::VectorXd w_lat;                        // lateral boundary weights
    Eigen::MatrixXd V_lat;
    std::vector<Eigen::Vector3d> points_lat;
    Eigen::VectorXd w_end;                        // end-face weights
    Eigen::MatrixXd V_end;
    std::vector<Eigen::Vector3d> points_end;
};

inline QuadTables build_tables(const RitzBasis3D& basis, int deg_plane, int deg_axial) {
    const int ns = basis.scalar_size();
    QuadTables t;
    SectionQuadrature sq = basis.section().quadrature(deg_plane);
    GaussRule ax = basis.axial().quadrature(deg_axial);
    const int nq = static_cast<int>(sq.nodes.size() * ax.nodes.size());
    t.w.resize(nq);
    t.V.resize(nq, ns);
    t.D1.resize(nq, ns);
    t.D2.resize(nq, ns);
    t.D3.resize(nq, ns);
    t.D11.resize(nq, ns);
    t.D12.resize(nq, ns);
    t.D22.resize(nq, ns);
    t.D13.resize(nq, ns);
    t.D23.resize(nq, ns);
    int row = 0;
    for (std::size_t q = 0; q < sq.nodes.size(); ++q)
        for (std::size_t a = 0; a < ax.nodes.size(); ++a, ++row) {
            const Eigen::Vector3d x(sq.nodes[q].x1, sq.nodes[q].x2, ax.nodes[a]);
            t.points.push_back(x);
            t.w(row) = sq.weights[q] * ax.weights[a];
            t.V.row(row) = basis.eval_all(x, 0, 0, 0);
            t.D1.row(row) = basis.eval_all(x, 1, 0, 0);
            t.D2.row(row) = basis.eval_all(x, 0, 1, 0);
            t.D3.row(row) = basis.eval_all(x, 0, 0, 1);
            t.D11.row(row) = basis.eval_all(x, 2, 0, 0);
            t.D12.row(row) = basis.eval_all(x, 1, 1, 0);
            t.D22.row(row) = basis.eval_all(x, 0, 2, 0);
            t.D13.row(row) = basis.eval_all(x, 1, 0, 1);
            t.D23.row(row) = basis.eval_all(x, 0, 1, 1);
        }
    BoundaryQuadrature bq = basis.section().boundary_quadrature(deg_plane);
    const int nb = static_cast<int>(bq.nodes.size() * ax.nodes.size());
    t.w_lat.resize(nb);
    t.V_lat.resize(nb, ns);
    row = 0;
    for (std::size_t q = 0; q < bq.nodes.size(); ++q)
        for (std::size_t a = 0; a < ax.nodes.size(); ++a, ++row) {
            const Eigen::Vector3d x(bq.nodes[q].x1, bq.nodes[q].x2, ax.nodes[a]);
            t.points_lat.push_back(x);
            t.w_lat(row) = bq.weights[q] * ax.weights[a];
            t.V_lat.row(row) = basis.eval_all(x, 0, 0, 0);
        }
    const int ne = static_cast<int>(sq.nodes.size());
    t.w_end.resize(ne);
    t.V_end.resize(ne, ns);
    for (int q = 0; q < ne; ++q) {
        const Eigen::Vector3d x(sq.nodes[q].x1, sq.nodes[q].x2, basis.length());
        t.points_end.push_back(x);
        t.w_end(q) = sq.weights[q];
        t.V_end.row(q) = basis.eval_all(x, 0, 0, 0);
    }
    return t;
}

/// Stiffness split by epsilon power:
///   K(eps) = KA/eps^4 + KC/eps^2 + KS + tau_R ((eps-eps_r)/eps)^2 KP,
/// so one assembly serves every epsilon in a sweep.  c^T K c = 2 W^eps.
struct AssembledSystem {
    int n = 0;
    Eigen::MatrixXd KA, KC, KS, KP;
    Eigen::MatrixXd M, H1;  // vector mass / H1 Gram
    Eigen::VectorXd F;
    double eps_r = 0;
    double tau_R = 0;

    Eigen::MatrixXd K_of(double eps) const {
        const double e2 = eps * eps;
        const double pen = (eps - eps_r) / eps;
        return KA / (e2 * e2) + KC / e2 + KS + (tau_R * pen * pen) * KP;
    }
};

inline AssembledSystem assemble(const RitzBasis3D& basis, const QuadTables& t,
                                const MaterialModuli& m, double eps_r,
                                const LoadSpec& loads) {
    ModuliValidation mv = validate_moduli(m);
    if (!mv.ok) throw std::invalid_argument("assemble: invalid moduli");
    const int ns = basis.scalar_size();
    const int n = 3 * ns;
    AssembledSystem sys;
    sys.n = n;
    sys.eps_r = eps_r;
    sys.tau_R = m.tau_R;
    sys.KA = Eigen::MatrixXd::Zero(n, n);
    sys.KC = Eigen::MatrixXd::Zero(n, n);
    sys.KS = Eigen::MatrixXd::Zero(n, n);
    sys.KP = Eigen::MatrixXd::Zero(n, n);
    sys.M = Eigen::MatrixXd::Zero(n, n);
    sys.H1 = Eigen::MatrixXd::Zero(n, n);
    sys.F = Eigen::VectorXd::Zero(n);

    auto weighted = [&](const Eigen::MatrixXd& X) -> Eigen::MatrixXd {
        return (X.array().colwise() * t.w.array()).matrix();
    };
    const Eigen::MatrixXd Vw = weighted(t.V), D1w = weighted(t.D1), D2w = weighted(t.D2),
                          D3w = weighted(t.D3), D11w = weighted(t.D11),
                          D12w = weighted(t.D12), D22w = weighted(t.D22),
                          D13w = weighted(t.D13), D23w = weighted(t.D23);
    auto gram = [&](const Eigen::MatrixXd& Xw, const Eigen::MatrixXd& Y) -> Eigen::MatrixXd {
        return Xw.transpose() * Y;
    };
    auto add = [&](Eigen::MatrixXd& K, int bi, int bj, const Eigen::MatrixXd& G, double c) {
        K.block(bi * ns, bj * ns, ns, ns) += c * G;
        if (bi != bj) K.block(bj * ns, bi * ns, ns, ns) += c * G.transpose();
    };

    const Eigen::MatrixXd G11 = gram(D1w, t.D1), G22 = gram(D2w, t.D2),
                          G33 = gram(D3w, t.D3), G12 = gram(D1w, t.D2),
                          G13 = gram(D1w, t.D3), G23 = gram(D2w, t.D3),
                          G31 = gram(D3w, t.D1), G32 = gram(D3w, t.D2);

    // KA: 2mu E_ab E_ab + lambda (E_aa)^2 (pure in-plane, weight 1/eps^4)
    add(sys.KA, 0, 0, G11, 2.0 * m.mu + m.lambda);
    add(sys.KA, 1, 1, G22, 2.0 * m.mu + m.lambda);
    add(sys.KA, 0, 0, G22, m.mu);
    add(sys.KA, 1, 1, G11, m.mu);
    add(sys.KA, 0, 1, G12, m.lambda);
    add(sys.KA, 0, 1, G12.transpose().eval(), m.mu);  // gram(D2, D1)

    // KC: 2 tau2 E33 (E11 + E22) (weight 1/eps^2)
    add(sys.KC, 0, 2, G13, m.tau2);
    add(sys.KC, 1, 2, G23, m.tau2);

    // KS: 4 gamma/eps_r^2 (E13^2 + E23^2) + tau1 E33^2 (eps-independent)
    const double gs = m.gamma / (eps_r * eps_r);
    add(sys.KS, 0, 0, G33, gs);
    add(sys.KS, 1, 1, G33, gs);
    add(sys.KS, 2, 2, G11, gs);
    add(sys.KS, 2, 2, G22, gs);
    add(sys.KS, 0, 2, G31, gs);
    add(sys.KS, 1, 2, G32, gs);
    add(sys.KS, 2, 2, G33, m.tau1);

    // KP: sum over (a, b) of (u3,ab + ua,3b)^2
    struct PTerm {
        const Eigen::MatrixXd* X;   // acts on component 2 (u3)
        const Eigen::MatrixXd* Xw;
        const Eigen::MatrixXd* Y;   // acts on component a
        const Eigen::MatrixXd* Yw;
        int a;
    };
    const PTerm pterms[4] = {{&t.D11, &D11w, &t.D13, &D13w, 0},
                             {&t.D12, &D12w, &t.D23, &D23w, 0},
                             {&t.D12, &D12w, &t.D13, &D13w, 1},
                             {&t.D22, &D22w, &t.D23, &D23w, 1}};
    for (const PTerm& p : pterms) {
        add(sys.KP, 2, 2, gram(*p.Xw, *p.X), 1.0);
        add(sys.KP, p.a, p.a, gram(*p.Yw, *p.Y), 1.0);
        Eigen::MatrixXd cross = gram(*p.Xw, *p.Y);
        sys.KP.block(2 * ns, p.a * ns, ns, ns) += cross;
        sys.KP.block(p.a * ns, 2 * ns, ns, ns) += cross.transpose();
    }

    // Mass and H1 Grams (block diagonal over components).
    const Eigen::MatrixXd Mv = gram(Vw, t.V);
    const Eigen::MatrixXd Hv = Mv + G11 + G22 + G33;
    for (int i = 0; i < 3; ++i) {
        sys.M.block(i * ns, i * ns, ns, ns) = Mv;
        sys.H1.block(i * ns, i * ns, ns, ns) = Hv;
    }

    // Load vector.
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd bvals(t.points.size());
        for (std::size_t q = 0; q < t.points.size(); ++q) bvals(q) = loads.body[i](t.points[q]);
        sys.F.segment(i * ns, ns) += Vw.transpose() * bvals;
        Eigen::VectorXd cvals(t.points_lat.size());
        for (std::size_t q = 0; q < t.points_lat.size(); ++q)
            cvals(q) = loads.lateral[i](t.points_lat[q]);
        sys.F.segment(i * ns, ns) +=
            t.V_lat.transpose() * (t.w_lat.array() * cvals.array()).matrix();
        Eigen::VectorXd evals(t.points_end.size());
        for (std::size_t q = 0; q < t.points_end.size(); ++q)
            evals(q) = loads.end[i](t.points_end[q]);
        sys.F.segment(i * ns, ns) +=
            t.V_end.transpose() * (t.w_end.array() * evals.array()).matrix();
    }
    return sys;
}

struct SolveResult {
    Eigen::VectorXd coeffs;
    double energy = 0;        // Pi^eps at the minimizer
    double residual_rel = 0;  // ||Kc - F|| / ||F|| after refinement
    double cond_est = 0;      // condition estimate of the equilibrated matrix
    bool cond_warning = false;
};

namespace detail {

/// Power/inverse-power condition estimate for an SPD matrix with Cholesky.
inline double cond_estimate(const Eigen::MatrixXd& K, const Eigen::LLT<Eigen::MatrixXd>& llt) {
    const int n = static_cast<int>(K.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    double lmax = 0;
    for (int it = 0; it < 40; ++it) {
        v = (K * v).normalized();
    }
    lmax = v.dot(K * v);
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n).normalized();
    double lmin = lmax;
    for (int it = 0; it < 40; ++it) {
        u = llt.solve(u).normalized();
    }
    lmin = u.dot(K * u);
    return lmax / lmin;
}

}  // namespace detail

/// Minimize the quadratic Pi^eps(c) = c^T K c / 2 - F^T c by symmetrically
/// equilibrated Cholesky with one iterative-refinement pass.
inline SolveResult solve_min(const AssembledSystem& sys, double eps,
                             double cond_warn_threshold = 1e12, bool estimate_cond = true) {
    const Eigen::MatrixXd K = sys.K_of(eps);
    Eigen::VectorXd d = K.diagonal().array().sqrt().inverse().matrix();
    const Eigen::MatrixXd Ks = d.asDiagonal() * K * d.asDiagonal();
    Eigen::LLT<Eigen::MatrixXd> llt(Ks);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("solve_min: Cholesky factorization failed");
    SolveResult out;
    Eigen::VectorXd c = d.asDiagonal() * llt.solve(d.asDiagonal() * sys.F);
    // one refinement pass
    Eigen::VectorXd r = sys.F - K * c;
    c += d.asDiagonal() * llt.solve(d.asDiagonal() * r);
    out.coeffs = c;
    out.energy = 0.5 * c.dot(K * c) - sys.F.dot(c);
    const double fn = sys.F.norm();
    out.residual_rel = fn > 0 ? (sys.F - K * c).norm() / fn : (K * c).norm();
    out.cond_est = estimate_cond ? detail::cond_estimate(Ks, llt) : 0.0;
    out.cond_warning = out.cond_est > cond_warn_threshold;
    return out;
}

/// Ritz expansion viewed as a smooth 3D field (exact derivatives).
class RitzField3 : public SmoothField3 {
public:
    RitzField3(const RitzBasis3D& basis, Eigen::VectorXd coeffs)
        : basis_(basis), c_(std::move(coeffs)) {
        if (c_.size() != basis.size())
            throw std::invalid_argument("RitzField3: coefficient size mismatch");
    }

    const Eigen::VectorXd& coeffs() const { return c_; }
    const RitzBasis3D& basis() const { return basis_; }

    Eigen::Vector3d value(const Eigen::Vector3d& x) const override {
        const Eigen::VectorXd row = basis_.eval_all(x, 0, 0, 0);
        return components(row);
    }
    Eigen::Matrix3d grad(const Eigen::Vector3d& x) const override {
        Eigen::Matrix3d g;
        g.col(0) = components(basis_.eval_all(x, 1, 0, 0));
        g.col(1) = components(basis_.eval_all(x, 0, 1, 0));
        g.col(2) = components(basis_.eval_all(x, 0, 0, 1));
        return g;
    }
    double second(const Eigen::Vector3d& x, int i, int j, int k) const override {
        int d[3] = {0, 0, 0};
        ++d[j];
        ++d[k];
        const Eigen::VectorXd row = basis_.eval_all(x, d[0], d[1], d[2]);
        const int ns = basis_.scalar_size();
        return row.dot(c_.segment(i * ns, ns));
    }

private:
    Eigen::Vector3d components(const Eigen::VectorXd& row) const {
        const int ns = basis_.scalar_size();
        return {row.dot(c_.segment(0, ns)), row.dot(c_.segment(ns, ns)),
                row.dot(c_.segment(2 * ns, ns))};
    }
    const RitzBasis3D& basis_;
    Eigen::VectorXd c_;
};

/// L2 / H1 norms of a coefficient vector through the assembled Grams.
inline double l2_norm(const AssembledSystem& sys, const Eigen::VectorXd& c) {
    return std::sqrt(std::max(0.0, c.dot(sys.M * c)));
}
inline double h1_norm(const AssembledSystem& sys, const Eigen::VectorXd& c) {
    return std::sqrt(std::max(0.0, c.dot(sys.H1 * c)));
}

/// L2 norms of the (unscaled) strain components E11, E12, E22 of the field.
inline std::array<double, 3> inplane_strain_norms(const QuadTables& t, int ns,
                                                  const Eigen::VectorXd& c) {
    const Eigen::VectorXd c1 = c.segment(0, ns), c2 = c.segment(ns, ns);
    const Eigen::VectorXd e11 = t.D1 * c1;
    const Eigen::VectorXd e22 = t.D2 * c2;
    const Eigen::VectorXd e12 = 0.5 * (t.D2 * c1 + t.D1 * c2);
    auto wnorm = [&](const Eigen::VectorXd& v) {
        return std::sqrt((t.w.array() * v.array().square()).sum());
    };
    return {wnorm(e11), wnorm(e12), wnorm(e22)};
}

/// Real-problem energy Pi^r by direct quadrature on Omega_r, and its relative
/// discrepancy against eps_r^2 * Pi^{eps_r} of the scaled counterpart.
struct RealEnergyCheck {
    double pi_real = 0;
    double pi_scaled = 0;  // Pi^{eps_r}(u^{eps_r})
    double discrepancy_rel = 0;
};

inline RealEnergyCheck real_problem_energy(const SmoothField3& u_scaled,
                                           const CrossSection& cs, double L,
                                           const MaterialModuli& m, double eps_r,
                                           const LoadSpec& scaled_loads, int degree) {
    // Real-domain counterparts: section shrunk by eps_r, field and loads
    // mapped back through R^{eps_r}.
    CrossSection cs_real = cs.scaled(eps_r);
    RescaledField3 u_real(u_scaled, 1.0 / eps_r);  // u_bar(x^r) = R^{1/eps_r} u(R^{1/eps_r} x^r)
    // Invert the load scaling: real loads from scaled ones.
    LoadSpec real_loads = scale_real_loads(scaled_loads, 1.0 / eps_r);
    RealEnergyCheck out;
    out.pi_real = energy_W_field(u_real, cs_real, L, m, degree) -
                  load_potential_3d(u_real, real_loads, cs_real, L, degree);
    out.pi_scaled = energy_W_eps_field(u_scaled, cs, L, eps_r, eps_r, m, degree) -
                    load_potential_3d(u_scaled, scaled_loads, cs, L, degree);
    const double ref = std::max(std::abs(out.pi_real), eps_r * eps_r * std::abs(out.pi_scaled));
    out.discrepancy_rel =
        ref > 0 ? std::abs(out.pi_real - eps_r * eps_r * out.pi_scaled) / ref : 0.0;
    return out;
}

/// Exact coefficients of a Timoshenko field in the 3D basis (the class TD is a
/// subspace of the tensor basis once the in-plane degrees reach 1).
inline Eigen::VectorXd embed_timoshenko(const RitzBasis3D& basis, const TimoshenkoField& f) {
    if (f.u1.basis().size() != basis.p3())
        throw std::invalid_argument("embed_timoshenko: axial degree mismatch");
    const int ns = basis.scalar_size();
    const int m = basis.axial().size();
    // Axial coefficients of each 1D profile in the 3D axial basis.  In the
    // single-element case this is the identity; the layered basis contains all
    // clamped polynomials of degree <= p3, so the collocation fit is exact.
    auto axial_coeffs = [&](const Profile1D& p) -> Eigen::VectorXd {
        if (!basis.axial().layered()) return p.coeffs();
        return basis.axial().fit([&](double x) { return p(x); });
    };
    const Eigen::VectorXd a1 = axial_coeffs(f.u1), a2 = axial_coeffs(f.u2),
                          a3 = axial_coeffs(f.u3), b1 = axial_coeffs(f.psi1),
                          b2 = axial_coeffs(f.psi2);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(3 * ns);
    for (int k = 1; k <= m; ++k) {
        c(0 * ns + basis.index(0, 0, k)) = a1(k - 1);
        c(1 * ns + basis.index(0, 0, k)) = a2(k - 1);
        // u3^0 + x2 psi1 - x1 psi2 with x1 = c1 + h1 xi1, x2 = c2 + h2 xi2
        c(2 * ns + basis.index(0, 0, k)) =
            a3(k - 1) + basis.center2() * b1(k - 1) - basis.center1() * b2(k - 1);
        c(2 * ns + basis.index(0, 1, k)) = basis.half2() * b1(k - 1);
        c(2 * ns + basis.index(1, 0, k)) = -basis.half1() * b2(k - 1);
    }
    return c;
}

}  // namespace timolab
