#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <utility>

#include "timolab/legendre.hpp"
#include "timolab/material.hpp"
#include "timolab/poly.hpp"
#include "timolab/quadrature.hpp"
#include "timolab/section.hpp"

namespace timolab {

/// R^alpha = diag(alpha, alpha, 1).
struct ScaleMatrix {
    double alpha = 1.0;

    Eigen::Matrix3d matrix() const {
        Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
        r(0, 0) = r(1, 1) = alpha;
        return r;
    }
    Eigen::Vector3d apply(const Eigen::Vector3d& x) const {
        return {alpha * x(0), alpha * x(1), x(2)};
    }
    ScaleMatrix inverse() const { return {1.0 / alpha}; }
    ScaleMatrix compose(const ScaleMatrix& other) const { return {alpha * other.alpha}; }
};

/// A displacement field with exact first and second derivatives.
/// grad(i, j) = u_{i,j}; second(x, i, j, k) = u_{i,jk}.
class SmoothField3 {
public:
    virtual ~SmoothField3() = default;
    virtual Eigen::Vector3d value(const Eigen::Vector3d& x) const = 0;
    virtual Eigen::Matrix3d grad(const Eigen::Vector3d& x) const = 0;
    virtual double second(const Eigen::Vector3d& x, int i, int j, int k) const = 0;
};

/// v(x) = R^alpha u(R^alpha x): the displacement scaling (alpha = eps) and its
/// inverse (alpha = 1/eps).
class RescaledField3 : public SmoothField3 {
public:
    RescaledField3(const SmoothField3& base, double alpha) : base_(base), r_{alpha} {}

    Eigen::Vector3d value(const Eigen::Vector3d& x) const override {
        return r_.apply(base_.value(r_.apply(x)));
    }
    Eigen::Matrix3d grad(const Eigen::Vector3d& x) const override {
        return r_.matrix() * base_.grad(r_.apply(x)) * r_.matrix();
    }
    double second(const Eigen::Vector3d& x, int i, int j, int k) const override {
        const double d = diag(i) * diag(j) * diag(k);
        return d * base_.second(r_.apply(x), i, j, k);
    }

private:
    double diag(int i) const { return i == 2 ? 1.0 : r_.alpha; }
    const SmoothField3& base_;
    ScaleMatrix r_;
};

inline SymStrain sym_strain(const Eigen::Matrix3d& g) {
    SymStrain e;
    e.e11 = g(0, 0);
    e.e22 = g(1, 1);
    e.e33 = g(2, 2);
    e.e12 = 0.5 * (g(0, 1) + g(1, 0));
    e.e13 = 0.5 * (g(0, 2) + g(2, 0));
    e.e23 = 0.5 * (g(1, 2) + g(2, 1));
    return e;
}

/// E^eps: in-plane components divided by eps^2, mixed ones by eps.
inline SymStrain scaled_strain(const Eigen::Matrix3d& grad, double eps) {
    SymStrain e = sym_strain(grad);
    e.e11 /= eps * eps;
    e.e22 /= eps * eps;
    e.e12 /= eps * eps;
    e.e13 /= eps;
    e.e23 /= eps;
    return e;
}

/// Coefficients of (u1^0, u2^0, u3^0, psi1, psi2) over a clamped 1D basis.
struct TimoshenkoField {
    Profile1D u1, u2, u3, psi1, psi2;

    static TimoshenkoField zero(const ClampedBasis& basis) {
        TimoshenkoField f;
        f.u1 = Profile1D::zero(basis);
        f.u2 = Profile1D::zero(basis);
        f.u3 = Profile1D::zero(basis);
        f.psi1 = Profile1D::zero(basis);
        f.psi2 = Profile1D::zero(basis);
        return f;
    }

    Eigen::Vector3d evaluate(const Eigen::Vector3d& x) const {
        const double x3 = x(2);
        return {u1(x3), u2(x3), u3(x3) + x(1) * psi1(x3) - x(0) * psi2(x3)};
    }

    /// Nonzero strain components (E13, E23, E33) at a point.
    std::array<double, 3> strains(const Eigen::Vector3d& x) const {
        const double x3 = x(2);
        return {0.5 * (u1(x3, 1) - psi2(x3)), 0.5 * (u2(x3, 1) + psi1(x3)),
                u3(x3, 1) + x(1) * psi1(x3, 1) - x(0) * psi2(x3, 1)};
    }
};

/// Timoshenko field viewed as a 3D displacement field.
class TdField3 : public SmoothField3 {
public:
    explicit TdField3(const TimoshenkoField& f) : f_(f) {}

    Eigen::Vector3d value(const Eigen::Vector3d& x) const override { return f_.evaluate(x); }

    Eigen::Matrix3d grad(const Eigen::Vector3d& x) const override {
        const double x3 = x(2);
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        g(0, 2) = f_.u1(x3, 1);
        g(1, 2) = f_.u2(x3, 1);
        g(2, 0) = -f_.psi2(x3);
        g(2, 1) = f_.psi1(x3);
        g(2, 2) = f_.u3(x3, 1) + x(1) * f_.psi1(x3, 1) - x(0) * f_.psi2(x3, 1);
        return g;
    }

    double second(const Eigen::Vector3d& x, int i, int j, int k) const override {
        const double x3 = x(2);
        if (j != 2 && k != 2) return 0.0;
        if (j != 2) std::swap(j, k);  // now k != 2 implies j == 2
        if (j == 2 && k == 2) {
            if (i == 0) return f_.u1(x3, 2);
            if (i == 1) return f_.u2(x3, 2);
            return f_.u3(x3, 2) + x(1) * f_.psi1(x3, 2) - x(0) * f_.psi2(x3, 2);
        }
        // mixed derivative, one axial one in-plane: only u3 contributes
        if (i != 2) return 0.0;
        return (k == 0) ? -f_.psi2(x3, 1) : f_.psi1(x3, 1);
    }

    const TimoshenkoField& field() const { return f_; }

private:
    const TimoshenkoField& f_;
};

/// Polynomial displacement field (tests and probes).
class PolyField3 : public SmoothField3 {
public:
    PolyField3(Poly3 c1, Poly3 c2, Poly3 c3) : u_{std::move(c1), std::move(c2), std::move(c3)} {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                d1_[i][j] = u_[i].derivative(j);
                for (int k = j; k < 3; ++k) d2_[i][j][k] = d1_[i][j].derivative(k);
            }
        }
    }

    Eigen::Vector3d value(const Eigen::Vector3d& x) const override {
        return {u_[0](x), u_[1](x), u_[2](x)};
    }
    Eigen::Matrix3d grad(const Eigen::Vector3d& x) const override {
        Eigen::Matrix3d g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = d1_[i][j](x);
        return g;
    }
    double second(const Eigen::Vector3d& x, int i, int j, int k) const override {
        if (j > k) std::swap(j, k);
        return d2_[i][j][k](x);
    }

private:
    std::array<Poly3, 3> u_;
    std::array<std::array<Poly3, 3>, 3> d1_;
    std::array<std::array<std::array<Poly3, 3>, 3>, 3> d2_;
};

/// u + eps^2 u_hat with the in-plane corrector driven by eta = tau2/2(mu+lambda).
/// All derivatives are exact (profiles are smooth polynomials).
class RecoveryField : public SmoothField3 {
public:
    RecoveryField(const TimoshenkoField& f, double eps, const MaterialModuli& m)
        : f_(f), td_(f), eps_(eps), eta_(m.eta()) {}

    double eps() const { return eps_; }
    double eta() const { return eta_; }

    Eigen::Vector3d value(const Eigen::Vector3d& x) const override {
        return td_.value(x) + eps_ * eps_ * hat_value(x);
    }
    Eigen::Matrix3d grad(const Eigen::Vector3d& x) const override {
        return td_.grad(x) + eps_ * eps_ * hat_grad(x);
    }
    double second(const Eigen::Vector3d& x, int i, int j, int k) const override {
        return td_.second(x, i, j, k) + eps_ * eps_ * hat_second(x, i, j, k);
    }

    Eigen::Vector3d hat_value(const Eigen::Vector3d& x) const {
        const double x1 = x(0), x2 = x(1), x3 = x(2);
        const double a = f_.u3(x3, 1), b = f_.psi1(x3, 1), c = f_.psi2(x3, 1);
        const double q = 0.5 * (x1 * x1 - x2 * x2);
        return {-eta_ * (x1 * a + x1 * x2 * b - q * c),
                -eta_ * (x2 * a - x1 * x2 * c - q * b), 0.0};
    }

    Eigen::Matrix3d hat_grad(const Eigen::Vector3d& x) const {
        const double x1 = x(0), x2 = x(1), x3 = x(2);
        const double a = f_.u3(x3, 1), b = f_.psi1(x3, 1), c = f_.psi2(x3, 1);
        const double ad = f_.u3(x3, 2), bd = f_.psi1(x3, 2), cd = f_.psi2(x3, 2);
        const double q = 0.5 * (x1 * x1 - x2 * x2);
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        g(0, 0) = -eta_ * (a + x2 * b - x1 * c);
        g(0, 1) = -eta_ * (x1 * b + x2 * c);
        g(0, 2) = -eta_ * (x1 * ad + x1 * x2 * bd - q * cd);
        g(1, 0) = -eta_ * (-x2 * c - x1 * b);
        g(1, 1) = -eta_ * (a - x1 * c + x2 * b);
        g(1, 2) = -eta_ * (x2 * ad - x1 * x2 * cd - q * bd);
        return g;
    }

    double hat_second(const Eigen::Vector3d& x, int i, int j, int k) const {
        if (i == 2) return 0.0;
        if (j > k) std::swap(j, k);
        const double x1 = x(0), x2 = x(1), x3 = x(2);
        const double ad = f_.u3(x3, 2), bd = f_.psi1(x3, 2), cd = f_.psi2(x3, 2);
        const double add = f_.u3(x3, 3), bdd = f_.psi1(x3, 3), cdd = f_.psi2(x3, 3);
        const double q = 0.5 * (x1 * x1 - x2 * x2);
        if (i == 0) {
            if (j == 0 && k == 0) return eta_ * f_.psi2(x3, 1);
            if (j == 0 && k == 1) return -eta_ * f_.psi1(x3, 1);
            if (j == 0 && k == 2) return -eta_ * (ad + x2 * bd - x1 * cd);
            if (j == 1 && k == 1) return -eta_ * f_.psi2(x3, 1);
            if (j == 1 && k == 2) return -eta_ * (x1 * bd + x2 * cd);
            return -eta_ * (x1 * add + x1 * x2 * bdd - q * cdd);  // (2,2)
        }
        // i == 1
        if (j == 0 && k == 0) return eta_ * f_.psi1(x3, 1);
        if (j == 0 && k == 1) return eta_ * f_.psi2(x3, 1);
        if (j == 0 && k == 2) return -eta_ * (-x2 * cd - x1 * bd);
        if (j == 1 && k == 1) return -eta_ * f_.psi1(x3, 1);
        if (j == 1 && k == 2) return -eta_ * (ad - x1 * cd + x2 * bd);
        return -eta_ * (x2 * add - x1 * x2 * cdd - q * bdd);  // (2,2)
    }

private:
    const TimoshenkoField& f_;
    TdField3 td_;
    double eps_;
    double eta_;
};

/// L2 norms of the Timoshenko constraint residuals over omega x (0, L):
/// r1 over u_{a,b} + u_{b,a}, r2 over u_{3,ab} + u_{a,3b}.
inline std::pair<double, double> ansatz_residual(const SmoothField3& u,
                                                 const CrossSection& cs, double L,
                                                 int quad_degree = 12) {
    SectionQuadrature sq = cs.quadrature(quad_degree);
    GaussRule ax = gauss_on_interval(0.0, L, quad_degree);
    double s1 = 0, s2 = 0;
    for (std::size_t q = 0; q < sq.nodes.size(); ++q) {
        for (std::size_t t = 0; t < ax.nodes.size(); ++t) {
            const Eigen::Vector3d x(sq.nodes[q].x1, sq.nodes[q].x2, ax.nodes[t]);
            const double w = sq.weights[q] * ax.weights[t];
            const Eigen::Matrix3d g = u.grad(x);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double v1 = g(a, b) + g(b, a);
                    const double v2 = u.second(x, 2, a, b) + u.second(x, a, 2, b);
                    s1 += w * v1 * v1;
                    s2 += w * v2 * v2;
                }
        }
    }
    return {std::sqrt(s1), std::sqrt(s2)};
}

}  // namespace timolab
