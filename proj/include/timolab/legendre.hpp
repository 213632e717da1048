#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "timolab/quadrature.hpp"

namespace timolab {

/// Values of P_0..P_n and derivatives up to order `nderiv` (<= 3) at xi in [-1, 1].
/// out(k, d) = d-th derivative of P_k at xi.
inline Eigen::MatrixXd legendre_table(double xi, int n, int nderiv) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n + 1, nderiv + 1);
    out(0, 0) = 1.0;
    if (n >= 1) out(1, 0) = xi;
    for (int k = 1; k < n; ++k)
        out(k + 1, 0) = ((2.0 * k + 1.0) * xi * out(k, 0) - k * out(k - 1, 0)) / (k + 1.0);
    // Derivatives satisfy the same three-term recurrence differentiated d times:
    // (k+1) P_{k+1}^(d) = (2k+1)(xi P_k^(d) + d P_k^(d-1)) - k P_{k-1}^(d)
    for (int d = 1; d <= nderiv; ++d) {
        out(0, d) = 0.0;
        if (n >= 1) out(1, d) = (d == 1) ? 1.0 : 0.0;
        for (int k = 1; k < n; ++k)
            out(k + 1, d) = ((2.0 * k + 1.0) * (xi * out(k, d) + d * out(k, d - 1)) -
                             k * out(k - 1, d)) /
                            (k + 1.0);
    }
    return out;
}

/// Clamped spectral basis on (0, L): phi_k(x) = integral of P_{k-1} from 0 to x
/// (mapped Legendre), k = 1..p.  Every phi_k vanishes at x = 0; phi_k has
/// polynomial degree k.  Derivatives are exact.
class ClampedBasis {
public:
    ClampedBasis(int degree, double length) : p_(degree), L_(length) {
        if (degree < 1) throw std::invalid_argument("ClampedBasis: degree must be >= 1");
        if (length <= 0) throw std::invalid_argument("ClampedBasis: length must be > 0");
    }

    int size() const { return p_; }
    int degree() const { return p_; }
    double length() const { return L_; }

    /// d-th derivative of phi_k (k in 1..p) at x, d <= 3.
    double eval(int k, double x, int d = 0) const {
        const double xi = 2.0 * x / L_ - 1.0;
        Eigen::MatrixXd tab = legendre_table(xi, k, std::max(0, d - 1) + 1);
        return eval_from_table(k, xi, d, tab);
    }

    /// Row of all basis values (or d-th derivatives) at x.
    Eigen::VectorXd eval_all(double x, int d = 0) const {
        const double xi = 2.0 * x / L_ - 1.0;
        Eigen::MatrixXd tab = legendre_table(xi, p_, std::max(0, d - 1) + 1);
        Eigen::VectorXd row(p_);
        for (int k = 1; k <= p_; ++k) row(k - 1) = eval_from_table(k, xi, d, tab);
        return row;
    }

private:
    double eval_from_table(int k, double xi, int d, const Eigen::MatrixXd& tab) const {
        const double s = 2.0 / L_;  // d xi / d x
        if (d == 0) {
            if (k == 1) return 0.5 * L_ * (xi + 1.0);
            // (L/2) * (P_k - P_{k-2}) / (2k - 1); vanishes at xi = -1.
            return 0.5 * L_ * (tab(k, 0) - tab(k - 2, 0)) / (2.0 * k - 1.0);
        }
        // phi_k' = P_{k-1}(xi), chain rule for higher orders.
        return tab(k - 1, d - 1) * std::pow(s, d - 1);
    }

    int p_;
    double L_;
};

/// Axial discretization for the clamped direction: a single clamped spectral
/// element on (0, L), or, with layer > 0, two C0-coupled elements (0, layer)
/// and (layer, L).  The thin first element resolves the transition zone at the
/// clamp where cross-section correctors must drop to zero; a single polynomial
/// element cannot follow that zone once it is thinner than the resolution of
/// degree p.  All functions vanish at x = 0.
class AxialBasis {
public:
    explicit AxialBasis(int degree, double length, double layer = 0.0)
        : p_(degree), L_(length), delta_(layer) {
        if (degree < 1) throw std::invalid_argument("AxialBasis: degree must be >= 1");
        if (length <= 0) throw std::invalid_argument("AxialBasis: length must be > 0");
        if (layer < 0 || layer >= length)
            throw std::invalid_argument("AxialBasis: layer must lie in [0, length)");
        if (layered()) {
            lo_.emplace(p_, delta_);
            hi_.emplace(p_, L_ - delta_);
        } else {
            single_.emplace(p_, L_);
        }
    }

    bool layered() const { return delta_ > 0.0; }
    int degree() const { return p_; }
    double length() const { return L_; }
    double layer() const { return delta_; }
    int size() const { return layered() ? 2 * p_ : p_; }

    /// Function ordering in layered mode: 0 = hat at the breakpoint, 1 = hat at
    /// x = L, 2..p = interior modes of (layer, L), p+1..2p-1 = interior modes
    /// of (0, layer).  Interior modes are integrated Legendre polynomials that
    /// vanish at both element ends, so the basis is C0 across the breakpoint.
    Eigen::VectorXd eval_all(double x, int d = 0) const {
        if (!layered()) return single_->eval_all(x, d);
        Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * p_);
        if (x < delta_) {
            if (d == 0)
                row(0) = x / delta_;
            else if (d == 1)
                row(0) = 1.0 / delta_;
            const Eigen::VectorXd b = lo_->eval_all(x, d);
            for (int k = 2; k <= p_; ++k) row(p_ + k - 1) = b(k - 1);
        } else {
            const double h = L_ - delta_;
            if (d == 0) {
                row(0) = (L_ - x) / h;
                row(1) = (x - delta_) / h;
            } else if (d == 1) {
                row(0) = -1.0 / h;
                row(1) = 1.0 / h;
            }
            const Eigen::VectorXd b = hi_->eval_all(x - delta_, d);
            for (int k = 2; k <= p_; ++k) row(k) = b(k - 1);
        }
        return row;
    }

    std::vector<std::pair<double, double>> elements() const {
        if (!layered()) return {{0.0, L_}};
        return {{0.0, delta_}, {delta_, L_}};
    }

    /// Composite Gauss rule exact to `degree` on every element.
    GaussRule quadrature(int degree) const {
        GaussRule out;
        for (auto [a, b] : elements()) {
            GaussRule r = gauss_on_interval(a, b, degree);
            out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
            out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
        }
        return out;
    }

    /// Least-squares collocation coefficients; exact for any C0 piecewise
    /// polynomial of element degree <= p vanishing at x = 0.
    template <typename F>
    Eigen::VectorXd fit(F&& f) const {
        GaussRule pts = quadrature(2 * p_);
        const int nq = static_cast<int>(pts.nodes.size());
        Eigen::MatrixXd A(nq, size());
        Eigen::VectorXd b(nq);
        for (int i = 0; i < nq; ++i) {
            A.row(i) = eval_all(pts.nodes[i], 0).transpose();
            b(i) = f(pts.nodes[i]);
        }
        return A.colPivHouseholderQr().solve(b);
    }

private:
    int p_;
    double L_;
    double delta_;
    std::optional<ClampedBasis> single_, lo_, hi_;
};

/// Scalar field on (0, L) as coefficients in a ClampedBasis.
class Profile1D {
public:
    Profile1D() = default;
    Profile1D(ClampedBasis basis, Eigen::VectorXd coeffs)
        : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != basis_->size())
            throw std::invalid_argument("Profile1D: coefficient count mismatch");
    }

    static Profile1D zero(const ClampedBasis& basis) {
        return Profile1D(basis, Eigen::VectorXd::Zero(basis.size()));
    }

    /// Fit a smooth function vanishing at 0 by collocation at Gauss points.
    /// Exact for polynomials of degree <= basis degree with f(0) = 0.
    template <typename F>
    static Profile1D fit(const ClampedBasis& basis, F&& f) {
        const int p = basis.size();
        GaussRule pts = gauss_on_interval(0.0, basis.length(), 2 * p);
        Eigen::MatrixXd A(static_cast<int>(pts.nodes.size()), p);
        Eigen::VectorXd b(static_cast<int>(pts.nodes.size()));
        for (std::size_t i = 0; i < pts.nodes.size(); ++i) {
            A.row(static_cast<int>(i)) = basis.eval_all(pts.nodes[i], 0).transpose();
            b(static_cast<int>(i)) = f(pts.nodes[i]);
        }
        Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
        return Profile1D(basis, std::move(c));
    }

    bool empty() const { return !basis_.has_value(); }
    const ClampedBasis& basis() const { return *basis_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    Eigen::VectorXd& coeffs() { return coeffs_; }

    double operator()(double x, int d = 0) const {
        if (!basis_) return 0.0;
        return basis_->eval_all(x, d).dot(coeffs_);
    }

private:
    std::optional<ClampedBasis> basis_;
    Eigen::VectorXd coeffs_;
};

}  // namespace timolab
