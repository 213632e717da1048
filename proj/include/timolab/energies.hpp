#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "timolab/kinematics.hpp"
#include "timolab/loads.hpp"
#include "timolab/material.hpp"
#include "timolab/quadrature.hpp"
#include "timolab/section.hpp"

namespace timolab {

/// Quadrature loop over omega x (0, L).
template <typename F>
inline double integrate_volume(const CrossSection& cs, double L, int degree, F&& density) {
    SectionQuadrature sq = cs.quadrature(degree);
    GaussRule ax = gauss_on_interval(0.0, L, degree);
    double s = 0;
    for (std::size_t q = 0; q < sq.nodes.size(); ++q)
        for (std::size_t t = 0; t < ax.nodes.size(); ++t) {
            const Eigen::Vector3d x(sq.nodes[q].x1, sq.nodes[q].x2, ax.nodes[t]);
            s += sq.weights[q] * ax.weights[t] * density(x);
        }
    return s;
}

/// Plain elastic energy, integral of W(Eu): the real-problem density.
inline double energy_W_field(const SmoothField3& u, const CrossSection& cs, double L,
                             const MaterialModuli& m, int degree) {
    return integrate_volume(cs, L, degree, [&](const Eigen::Vector3d& x) {
        return density_W(sym_strain(u.grad(x)), m);
    });
}

/// Scaled elastic energy: integral of W^eps(E^eps u) plus the second-gradient
/// penalty with coefficient tau_R ((eps - eps_r)/eps)^2.
inline double energy_W_eps_field(const SmoothField3& u, const CrossSection& cs, double L,
                                 double eps, double eps_r, const MaterialModuli& m,
                                 int degree) {
    const double pen = (eps - eps_r) / eps;
    const double pen2 = m.tau_R * pen * pen;
    return integrate_volume(cs, L, degree, [&](const Eigen::Vector3d& x) {
        const double w = density_W_eps(scaled_strain(u.grad(x), eps), eps, eps_r, m);
        double g2 = 0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double v = u.second(x, 2, a, b) + u.second(x, a, 2, b);
                g2 += v * v;
            }
        return w + 0.5 * pen2 * g2;
    });
}

/// Limit elastic energy: integral of W_tau((Eu)_i3).
inline double energy_W_tau_field(const SmoothField3& u, const CrossSection& cs, double L,
                                 double eps_r, const MaterialModuli& m, int degree) {
    return integrate_volume(cs, L, degree, [&](const Eigen::Vector3d& x) {
        const SymStrain e = sym_strain(u.grad(x));
        return density_W_tau(e.e13, e.e23, e.e33, eps_r, m);
    });
}

/// Pi^eps = W^eps - F for an arbitrary smooth field.
inline double total_potential_eps(const SmoothField3& u, const CrossSection& cs, double L,
                                  double eps, double eps_r, const MaterialModuli& m,
                                  const LoadSpec& loads, int degree) {
    return energy_W_eps_field(u, cs, L, eps, eps_r, m, degree) -
           load_potential_3d(u, loads, cs, L, degree);
}

}  // namespace timolab
