#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "timolab/kinematics.hpp"
#include "timolab/poly.hpp"
#include "timolab/quadrature.hpp"
#include "timolab/section.hpp"

namespace timolab {

/// Polynomial loads on the scaled domain: body force on Omega, lateral
/// traction on the mantle, end traction on omega x {L}.
struct LoadSpec {
    std::array<Poly3, 3> body;
    std::array<Poly3, 3> lateral;
    std::array<Poly3, 3> end;

    int max_degree() const {
        int d = 0;
        for (int i = 0; i < 3; ++i) {
            d = std::max(d, body[i].max_degree());
            d = std::max(d, lateral[i].max_degree());
            d = std::max(d, end[i].max_degree());
        }
        return d;
    }
};

/// Coefficients of a 1D polynomial in x3 (index = power).
using Poly1 = std::vector<double>;

inline double poly1_eval(const Poly1& p, double x) {
    double s = 0;
    for (std::size_t k = p.size(); k-- > 0;) s = s * x + p[k];
    return s;
}

/// Line densities and end resultants of the reduced Timoshenko loading.
struct ReducedLoads {
    Poly1 f1, f2, f3;  // line forces
    Poly1 m1, m2;      // line couples (m2 carries the sign convention's minus)
    double F1 = 0, F2 = 0, F3 = 0;
    double M1 = 0, M2 = 0;
};

/// b^r(x) = (R^eps_r)^{-1} b_real(R^eps_r x), with the extra 1/eps_r on the
/// lateral traction.
inline LoadSpec scale_real_loads(const LoadSpec& real, double eps_r) {
    auto map = [&](const Poly3& p, int component, bool lateral) {
        std::vector<Monomial> out;
        for (Monomial t : p.terms()) {
            t.c *= std::pow(eps_r, t.p1 + t.p2);
            if (component < 2) t.c /= eps_r;
            if (lateral) t.c /= eps_r;
            out.push_back(t);
        }
        return Poly3(std::move(out));
    };
    LoadSpec s;
    for (int i = 0; i < 3; ++i) {
        s.body[i] = map(real.body[i], i, false);
        s.lateral[i] = map(real.lateral[i], i, true);
        s.end[i] = map(real.end[i], i, false);
    }
    return s;
}

/// Load potential: volume + lateral + end-face work, Dirichlet face excluded.
inline double load_potential_3d(const SmoothField3& u, const LoadSpec& loads,
                                const CrossSection& cs, double L, int quad_degree) {
    double s = 0;
    SectionQuadrature sq = cs.quadrature(quad_degree);
    GaussRule ax = gauss_on_interval(0.0, L, quad_degree);
    for (std::size_t q = 0; q < sq.nodes.size(); ++q)
        for (std::size_t t = 0; t < ax.nodes.size(); ++t) {
            const Eigen::Vector3d x(sq.nodes[q].x1, sq.nodes[q].x2, ax.nodes[t]);
            const Eigen::Vector3d v = u.value(x);
            const double w = sq.weights[q] * ax.weights[t];
            for (int i = 0; i < 3; ++i) s += w * loads.body[i](x) * v(i);
        }
    BoundaryQuadrature bq = cs.boundary_quadrature(quad_degree);
    for (std::size_t q = 0; q < bq.nodes.size(); ++q)
        for (std::size_t t = 0; t < ax.nodes.size(); ++t) {
            const Eigen::Vector3d x(bq.nodes[q].x1, bq.nodes[q].x2, ax.nodes[t]);
            const Eigen::Vector3d v = u.value(x);
            const double w = bq.weights[q] * ax.weights[t];
            for (int i = 0; i < 3; ++i) s += w * loads.lateral[i](x) * v(i);
        }
    for (std::size_t q = 0; q < sq.nodes.size(); ++q) {
        const Eigen::Vector3d x(sq.nodes[q].x1, sq.nodes[q].x2, L);
        const Eigen::Vector3d v = u.value(x);
        for (int i = 0; i < 3; ++i) s += sq.weights[q] * loads.end[i](x) * v(i);
    }
    return s;
}

/// Section/boundary reduction of the loads to line densities and end
/// resultants.  Requires a centred principal-frame section.
inline ReducedLoads reduce_loads(const LoadSpec& loads, const CrossSection& cs, double L) {
    const int deg = loads.max_degree() + 2;
    ReducedLoads rl;
    auto accumulate = [&](Poly1& dst, const Poly3& p, int xw1, int xw2, double sign,
                          bool boundary) {
        for (const Monomial& t : p.terms()) {
            const double mom = boundary ? cs.boundary_moment(t.p1 + xw1, t.p2 + xw2)
                                        : cs.moment(t.p1 + xw1, t.p2 + xw2);
            if (dst.size() < static_cast<std::size_t>(t.p3) + 1) dst.resize(t.p3 + 1, 0.0);
            dst[t.p3] += sign * t.c * mom;
        }
    };
    Poly1* fs[3] = {&rl.f1, &rl.f2, &rl.f3};
    for (int i = 0; i < 3; ++i) {
        accumulate(*fs[i], loads.body[i], 0, 0, 1.0, false);
        accumulate(*fs[i], loads.lateral[i], 0, 0, 1.0, true);
    }
    accumulate(rl.m1, loads.body[2], 0, 1, 1.0, false);
    accumulate(rl.m1, loads.lateral[2], 0, 1, 1.0, true);
    accumulate(rl.m2, loads.body[2], 1, 0, -1.0, false);
    accumulate(rl.m2, loads.lateral[2], 1, 0, -1.0, true);

    SectionQuadrature sq = cs.quadrature(deg);
    double* Fs[3] = {&rl.F1, &rl.F2, &rl.F3};
    for (std::size_t q = 0; q < sq.nodes.size(); ++q) {
        const Eigen::Vector3d x(sq.nodes[q].x1, sq.nodes[q].x2, L);
        for (int i = 0; i < 3; ++i) *Fs[i] += sq.weights[q] * loads.end[i](x);
        rl.M1 += sq.weights[q] * x(1) * loads.end[2](x);
        rl.M2 -= sq.weights[q] * x(0) * loads.end[2](x);
    }
    return rl;
}

/// One-dimensional load functional: line integrals plus end terms.
inline double load_potential_1d(const TimoshenkoField& f, const ReducedLoads& rl) {
    const ClampedBasis& basis = f.u1.basis();
    const double L = basis.length();
    int pdeg = 0;
    for (const Poly1* p : {&rl.f1, &rl.f2, &rl.f3, &rl.m1, &rl.m2})
        pdeg = std::max<int>(pdeg, static_cast<int>(p->size()));
    GaussRule g = gauss_on_interval(0.0, L, basis.degree() + pdeg + 1);
    double s = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double x = g.nodes[i], w = g.weights[i];
        s += w * (poly1_eval(rl.f1, x) * f.u1(x) + poly1_eval(rl.f2, x) * f.u2(x) +
                  poly1_eval(rl.f3, x) * f.u3(x) + poly1_eval(rl.m1, x) * f.psi1(x) +
                  poly1_eval(rl.m2, x) * f.psi2(x));
    }
    s += rl.F1 * f.u1(L) + rl.F2 * f.u2(L) + rl.F3 * f.u3(L) + rl.M1 * f.psi1(L) +
         rl.M2 * f.psi2(L);
    return s;
}

}  // namespace timolab
