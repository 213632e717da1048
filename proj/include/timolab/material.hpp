#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace timolab {

/// Transversely isotropic moduli (axis e3) plus the second-gradient
/// coefficient tau_R.
struct MaterialModuli {
    double mu = 0.0;
    double lambda = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double gamma = 0.0;
    double tau_R = 1.0;

    /// tau2 / (2 (mu + lambda)), the in-plane contraction ratio of the
    /// relaxed minimizer and of the recovery sequence.
    double eta() const { return tau2 / (2.0 * (mu + lambda)); }

    /// tau1 - tau2^2/(lambda + mu), the axial modulus of the limit beam.
    double axial_modulus() const { return tau1 - tau2 * tau2 / (lambda + mu); }
};

struct ModuliValidation {
    bool ok = true;
    std::vector<std::string> violations;
};

inline ModuliValidation validate_moduli(const MaterialModuli& m) {
    ModuliValidation v;
    auto fail = [&](const std::string& s) {
        v.ok = false;
        v.violations.push_back(s);
    };
    if (!(m.mu > 0.0)) fail("mu <= 0");
    if (!(m.gamma > 0.0)) fail("gamma <= 0");
    if (!(m.tau1 > 0.0)) fail("tau1 <= 0");
    if (!(m.tau1 * (m.lambda + m.mu) - m.tau2 * m.tau2 > 0.0))
        fail("tau1*(lambda+mu) - tau2^2 <= 0");
    if (!(m.tau_R > 0.0)) fail("tau_R <= 0");
    return v;
}

/// Isotropic specialization: gamma = mu, tau1 = lambda + 2 mu, tau2 = lambda.
inline MaterialModuli isotropic_moduli(double lambda, double mu, double tau_R = 1.0) {
    if (!(mu > 0.0)) throw std::invalid_argument("isotropic_moduli: mu must be > 0");
    if (!(lambda + mu > 0.0))
        throw std::invalid_argument("isotropic_moduli: lambda + mu must be > 0");
    MaterialModuli m;
    m.mu = mu;
    m.lambda = lambda;
    m.gamma = mu;
    m.tau1 = lambda + 2.0 * mu;
    m.tau2 = lambda;
    m.tau_R = tau_R;
    return m;
}

/// Symmetric strain, off-diagonals stored once.
struct SymStrain {
    double e11 = 0, e22 = 0, e33 = 0, e12 = 0, e13 = 0, e23 = 0;

    double frobenius_sq() const {
        return e11 * e11 + e22 * e22 + e33 * e33 +
               2.0 * (e12 * e12 + e13 * e13 + e23 * e23);
    }
};

namespace detail {
inline double density_kernel(const SymStrain& E, const MaterialModuli& m,
                             double shear_factor_sq) {
    const double trp = E.e11 + E.e22;
    return 0.5 * (2.0 * m.mu * (E.e11 * E.e11 + E.e22 * E.e22) + m.lambda * trp * trp +
                  2.0 * m.tau2 * E.e33 * trp + 4.0 * m.mu * E.e12 * E.e12 +
                  4.0 * m.gamma * shear_factor_sq * (E.e13 * E.e13 + E.e23 * E.e23) +
                  m.tau1 * E.e33 * E.e33);
}
}  // namespace detail

/// Transversely isotropic energy density per unit volume.
inline double density_W(const SymStrain& E, const MaterialModuli& m) {
    return detail::density_kernel(E, m, 1.0);
}

/// Density with the shear modulus rescaled by (eps/eps_r)^2; equals W at
/// eps = eps_r (bitwise: the factor reduces to 1.0 exactly).
inline double density_W_eps(const SymStrain& E, double eps, double eps_r,
                            const MaterialModuli& m) {
    const double r = eps / eps_r;
    return detail::density_kernel(E, m, r * r);
}

/// Relaxed density with the in-plane strains minimized out, at eps = 1.
inline double density_W_tau(double e13, double e23, double e33, double eps_r,
                            const MaterialModuli& m) {
    return 0.5 * (4.0 * m.gamma / (eps_r * eps_r) * (e13 * e13 + e23 * e23) +
                  m.axial_modulus() * e33 * e33);
}

/// Relaxed density at parameter eps; equals density_W_tau(eps*e13, eps*e23, e33).
inline double density_W_tau_eps(double e13, double e23, double e33, double eps,
                                double eps_r, const MaterialModuli& m) {
    const double r = eps / eps_r;
    return 0.5 * (4.0 * m.gamma * r * r * (e13 * e13 + e23 * e23) +
                  m.axial_modulus() * e33 * e33);
}

struct InPlaneRelaxation {
    double g11 = 0, g12 = 0, g22 = 0;
    double value = 0;
};

/// Closed-form minimizer of W_eps over the in-plane strain components for
/// fixed (e13, e23, e33): g12 = 0, g11 = g22 = -eta * e33.
inline InPlaneRelaxation relax_over_inplane(double e13, double e23, double e33,
                                            double eps, double eps_r,
                                            const MaterialModuli& m) {
    InPlaneRelaxation r;
    r.g11 = r.g22 = -m.eta() * e33;
    r.g12 = 0.0;
    r.value = density_W_tau_eps(e13, e23, e33, eps, eps_r, m);
    return r;
}

/// Largest C with W(E) >= C |E|^2: smallest eigenvalue of the quadratic form
/// of W in the orthonormal strain coordinates
/// (e11, e22, e33, sqrt2 e12, sqrt2 e13, sqrt2 e23).
inline double coercivity_constant(const MaterialModuli& m) {
    ModuliValidation v = validate_moduli(m);
    if (!v.ok) throw std::invalid_argument("coercivity_constant: invalid moduli");
    Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
    A(0, 0) = A(1, 1) = 2.0 * m.mu + m.lambda;
    A(0, 1) = A(1, 0) = m.lambda;
    A(2, 2) = m.tau1;
    A(0, 2) = A(2, 0) = A(1, 2) = A(2, 1) = m.tau2;
    A(3, 3) = 2.0 * m.mu;
    A(4, 4) = A(5, 5) = 2.0 * m.gamma;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(A);
    return 0.5 * es.eigenvalues().minCoeff();
}

}  // namespace timolab
