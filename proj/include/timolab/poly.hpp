#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace timolab {

/// c * x1^p1 * x2^p2 * x3^p3
struct Monomial {
    double c = 0;
    int p1 = 0, p2 = 0, p3 = 0;
};

/// Sparse trivariate polynomial.
class Poly3 {
public:
    Poly3() = default;
    Poly3(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

    const std::vector<Monomial>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    double operator()(double x1, double x2, double x3) const {
        double s = 0;
        for (const Monomial& t : terms_)
            s += t.c * ipow(x1, t.p1) * ipow(x2, t.p2) * ipow(x3, t.p3);
        return s;
    }
    double operator()(const Eigen::Vector3d& x) const { return (*this)(x(0), x(1), x(2)); }

    /// Partial derivative with respect to coordinate `axis` (0, 1, or 2).
    Poly3 derivative(int axis) const {
        std::vector<Monomial> out;
        for (const Monomial& t : terms_) {
            Monomial d = t;
            int& p = (axis == 0) ? d.p1 : (axis == 1) ? d.p2 : d.p3;
            if (p == 0) continue;
            d.c *= p;
            --p;
            out.push_back(d);
        }
        return Poly3(std::move(out));
    }

    int max_degree() const {
        int d = 0;
        for (const Monomial& t : terms_) d = std::max(d, t.p1 + t.p2 + t.p3);
        return d;
    }

private:
    static double ipow(double x, int p) {
        double r = 1;
        for (int i = 0; i < p; ++i) r *= x;
        return r;
    }

    std::vector<Monomial> terms_;
};

}  // namespace timolab
