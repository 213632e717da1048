#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "timolab/quadrature.hpp"

namespace timolab {

struct Vec2 {
    double x1 = 0, x2 = 0;
};

/// Interior quadrature rule: weights sum to the section area.
struct SectionQuadrature {
    std::vector<Vec2> nodes;
    std::vector<double> weights;

    double area() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
};

/// Boundary rule on the section contour; weights carry the arc-length measure.
struct BoundaryQuadrature {
    std::vector<Vec2> nodes;
    std::vector<double> weights;
};

/// Scaled cross-section, recentred at its centroid and rotated to principal
/// axes at construction, so that the first moments and the product moment
/// vanish.
class CrossSection {
public:
    enum class Kind { rectangle, ellipse, polygon };

    static CrossSection rectangle(double w, double h) {
        if (!(w > 0) || !(h > 0))
            throw std::invalid_argument("rectangle: dimensions must be positive");
        CrossSection cs;
        cs.kind_ = Kind::rectangle;
        cs.w_ = w;
        cs.h_ = h;
        cs.area_ = w * h;
        cs.j1_ = w * h * h * h / 12.0;
        cs.j2_ = h * w * w * w / 12.0;
        cs.bbox_lo_ = {-0.5 * w, -0.5 * h};
        cs.bbox_hi_ = {0.5 * w, 0.5 * h};
        cs.diameter_ = std::hypot(w, h);
        return cs;
    }

    static CrossSection ellipse(double a, double b) {
        if (!(a > 0) || !(b > 0))
            throw std::invalid_argument("ellipse: semi-axes must be positive");
        CrossSection cs;
        cs.kind_ = Kind::ellipse;
        cs.a_ = a;
        cs.b_ = b;
        cs.area_ = M_PI * a * b;
        cs.j1_ = M_PI * a * b * b * b / 4.0;
        cs.j2_ = M_PI * a * a * a * b / 4.0;
        cs.bbox_lo_ = {-a, -b};
        cs.bbox_hi_ = {a, b};
        cs.diameter_ = 2.0 * std::max(a, b);
        return cs;
    }

    /// Convex polygon, vertices counterclockwise.  The polygon is translated
    /// to its centroid and rotated so the product moment vanishes.
    static CrossSection polygon(std::vector<Vec2> verts) {
        const std::size_t n = verts.size();
        if (n < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
        double area2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& p = verts[i];
            const Vec2& q = verts[(i + 1) % n];
            area2 += p.x1 * q.x2 - q.x1 * p.x2;
        }
        if (area2 <= 0)
            throw std::invalid_argument("polygon: vertices must be counterclockwise "
                                        "and enclose positive area");
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& a = verts[i];
            const Vec2& b = verts[(i + 1) % n];
            const Vec2& c = verts[(i + 2) % n];
            const double cr = (b.x1 - a.x1) * (c.x2 - b.x2) - (b.x2 - a.x2) * (c.x1 - b.x1);
            if (cr <= 0) throw std::invalid_argument("polygon: not strictly convex");
        }
        CrossSection cs;
        cs.kind_ = Kind::polygon;
        const double area = 0.5 * area2;
        // Centroid by shoelace moments.
        double cx = 0, cy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& p = verts[i];
            const Vec2& q = verts[(i + 1) % n];
            const double cr = p.x1 * q.x2 - q.x1 * p.x2;
            cx += (p.x1 + q.x1) * cr;
            cy += (p.x2 + q.x2) * cr;
        }
        cx /= 6.0 * area;
        cy /= 6.0 * area;
        for (auto& v : verts) {
            v.x1 -= cx;
            v.x2 -= cy;
        }
        // Second moments about the centroid.
        double ixx = 0, iyy = 0, ixy = 0;  // ∫x2², ∫x1², ∫x1x2
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& p = verts[i];
            const Vec2& q = verts[(i + 1) % n];
            const double cr = p.x1 * q.x2 - q.x1 * p.x2;
            iyy += cr * (p.x1 * p.x1 + p.x1 * q.x1 + q.x1 * q.x1);
            ixx += cr * (p.x2 * p.x2 + p.x2 * q.x2 + q.x2 * q.x2);
            ixy += cr * (p.x1 * q.x2 + 2.0 * p.x1 * p.x2 + 2.0 * q.x1 * q.x2 + q.x1 * p.x2);
        }
        ixx /= 12.0;
        iyy /= 12.0;
        ixy /= 24.0;
        // Rotate to principal axes (product moment -> 0).
        double theta = 0.0;
        if (std::abs(ixy) > 1e-300)
            theta = 0.5 * std::atan2(2.0 * ixy, iyy - ixx);
        const double ct = std::cos(theta), st = std::sin(theta);
        if (theta != 0.0) {
            for (auto& v : verts) {
                const double x = ct * v.x1 + st * v.x2;
                const double y = -st * v.x1 + ct * v.x2;
                v.x1 = x;
                v.x2 = y;
            }
            ixx = iyy = ixy = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const Vec2& p = verts[i];
                const Vec2& q = verts[(i + 1) % n];
                const double cr = p.x1 * q.x2 - q.x1 * p.x2;
                iyy += cr * (p.x1 * p.x1 + p.x1 * q.x1 + q.x1 * q.x1);
                ixx += cr * (p.x2 * p.x2 + p.x2 * q.x2 + q.x2 * q.x2);
            }
            ixx /= 12.0;
            iyy /= 12.0;
        }
        cs.verts_ = std::move(verts);
        cs.area_ = area;
        cs.j1_ = ixx;
        cs.j2_ = iyy;
        cs.shift_ = {cx, cy};
        cs.rotation_ = theta;
        cs.bbox_lo_ = {1e300, 1e300};
        cs.bbox_hi_ = {-1e300, -1e300};
        cs.diameter_ = 0;
        for (std::size_t i = 0; i < cs.verts_.size(); ++i) {
            const Vec2& v = cs.verts_[i];
            cs.bbox_lo_.x1 = std::min(cs.bbox_lo_.x1, v.x1);
            cs.bbox_lo_.x2 = std::min(cs.bbox_lo_.x2, v.x2);
            cs.bbox_hi_.x1 = std::max(cs.bbox_hi_.x1, v.x1);
            cs.bbox_hi_.x2 = std::max(cs.bbox_hi_.x2, v.x2);
            for (std::size_t j = i + 1; j < cs.verts_.size(); ++j)
                cs.diameter_ = std::max(
                    cs.diameter_, std::hypot(v.x1 - cs.verts_[j].x1, v.x2 - cs.verts_[j].x2));
        }
        return cs;
    }

    Kind kind() const { return kind_; }
    double area() const { return area_; }
    double j1() const { return j1_; }  // ∫ x2² da
    double j2() const { return j2_; }  // ∫ x1² da
    double diameter() const { return diameter_; }
    Vec2 bbox_lo() const { return bbox_lo_; }
    Vec2 bbox_hi() const { return bbox_hi_; }
    Vec2 applied_shift() const { return shift_; }
    double applied_rotation() const { return rotation_; }
    const std::vector<Vec2>& vertices() const { return verts_; }

    /// Interior rule exact for bivariate polynomials up to `degree`.
    SectionQuadrature quadrature(int degree) const {
        if (degree < 1) throw std::invalid_argument("section_quadrature: degree >= 1");
        if (degree > 50) throw std::invalid_argument("section_quadrature: degree > 50 unsupported");
        SectionQuadrature q;
        switch (kind_) {
            case Kind::rectangle: {
                GaussRule gx = gauss_on_interval(-0.5 * w_, 0.5 * w_, degree);
                GaussRule gy = gauss_on_interval(-0.5 * h_, 0.5 * h_, degree);
                for (std::size_t i = 0; i < gx.nodes.size(); ++i)
                    for (std::size_t j = 0; j < gy.nodes.size(); ++j) {
                        q.nodes.push_back({gx.nodes[i], gy.nodes[j]});
                        q.weights.push_back(gx.weights[i] * gy.weights[j]);
                    }
                break;
            }
            case Kind::ellipse: {
                // Polar map (r, t) -> (a r cos t, b r sin t), jacobian a b r.
                GaussRule gr = gauss_on_interval(0.0, 1.0, degree + 1);
                const int nt = degree + 2;
                for (std::size_t i = 0; i < gr.nodes.size(); ++i)
                    for (int j = 0; j < nt; ++j) {
                        const double t = 2.0 * M_PI * (j + 0.5) / nt;
                        const double r = gr.nodes[i];
                        q.nodes.push_back({a_ * r * std::cos(t), b_ * r * std::sin(t)});
                        q.weights.push_back(a_ * b_ * r * gr.weights[i] * 2.0 * M_PI / nt);
                    }
                break;
            }
            case Kind::polygon: {
                // Fan triangulation about the centroid (origin), Duffy-mapped
                // Gauss per triangle: x = u P1 + v P2 with v = (1-u) s.
                GaussRule gu = gauss_on_interval(0.0, 1.0, degree + 1);
                GaussRule gs = gauss_on_interval(0.0, 1.0, degree);
                const std::size_t n = verts_.size();
                for (std::size_t e = 0; e < n; ++e) {
                    const Vec2& p1 = verts_[e];
                    const Vec2& p2 = verts_[(e + 1) % n];
                    const double jac = p1.x1 * p2.x2 - p2.x1 * p1.x2;  // 2*area
                    for (std::size_t i = 0; i < gu.nodes.size(); ++i)
                        for (std::size_t j = 0; j < gs.nodes.size(); ++j) {
                            const double u = gu.nodes[i];
                            const double v = (1.0 - u) * gs.nodes[j];
                            q.nodes.push_back({u * p1.x1 + v * p2.x1, u * p1.x2 + v * p2.x2});
                            q.weights.push_back(jac * (1.0 - u) * gu.weights[i] * gs.weights[j]);
                        }
                }
                break;
            }
        }
        return q;
    }

    /// Contour rule.  Exact for polynomial traces on straight edges; the
    /// ellipse uses a dense uniform rule (spectrally accurate).
    BoundaryQuadrature boundary_quadrature(int degree) const {
        BoundaryQuadrature q;
        auto add_edges = [&](const std::vector<Vec2>& poly) {
            const std::size_t n = poly.size();
            GaussRule g = gauss_on_interval(0.0, 1.0, degree);
            for (std::size_t e = 0; e < n; ++e) {
                const Vec2& p = poly[e];
                const Vec2& r = poly[(e + 1) % n];
                const double len = std::hypot(r.x1 - p.x1, r.x2 - p.x2);
                for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                    const double t = g.nodes[i];
                    q.nodes.push_back({p.x1 + t * (r.x1 - p.x1), p.x2 + t * (r.x2 - p.x2)});
                    q.weights.push_back(len * g.weights[i]);
                }
            }
        };
        switch (kind_) {
            case Kind::rectangle:
                add_edges({{-0.5 * w_, -0.5 * h_},
                           {0.5 * w_, -0.5 * h_},
                           {0.5 * w_, 0.5 * h_},
                           {-0.5 * w_, 0.5 * h_}});
                break;
            case Kind::polygon:
                add_edges(verts_);
                break;
            case Kind::ellipse: {
                const int nt = std::max(4 * (degree + 1), 256);
                for (int j = 0; j < nt; ++j) {
                    const double t = 2.0 * M_PI * (j + 0.5) / nt;
                    q.nodes.push_back({a_ * std::cos(t), b_ * std::sin(t)});
                    const double ds =
                        std::hypot(a_ * std::sin(t), b_ * std::cos(t)) * 2.0 * M_PI / nt;
                    q.weights.push_back(ds);
                }
                break;
            }
        }
        return q;
    }

    /// Homothetically rescaled copy (factor s > 0).
    CrossSection scaled(double s) const {
        switch (kind_) {
            case Kind::rectangle:
                return rectangle(s * w_, s * h_);
            case Kind::ellipse:
                return ellipse(s * a_, s * b_);
            case Kind::polygon: {
                std::vector<Vec2> v = verts_;
                for (auto& p : v) {
                    p.x1 *= s;
                    p.x2 *= s;
                }
                return polygon(std::move(v));
            }
        }
        throw std::logic_error("unreachable");
    }

    /// ∫ x1^p x2^q da, by quadrature.
    double moment(int p, int q) const {
        SectionQuadrature rule = quadrature(std::max(1, p + q));
        double s = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * std::pow(rule.nodes[i].x1, p) * std::pow(rule.nodes[i].x2, q);
        return s;
    }

    /// ∫ x1^p x2^q ds over the contour.
    double boundary_moment(int p, int q) const {
        BoundaryQuadrature rule = boundary_quadrature(std::max(1, p + q));
        double s = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * std::pow(rule.nodes[i].x1, p) * std::pow(rule.nodes[i].x2, q);
        return s;
    }

private:
    Kind kind_ = Kind::rectangle;
    double w_ = 0, h_ = 0;  // rectangle
    double a_ = 0, b_ = 0;  // ellipse semi-axes
    std::vector<Vec2> verts_;
    double area_ = 0, j1_ = 0, j2_ = 0, diameter_ = 0;
    Vec2 bbox_lo_, bbox_hi_, shift_;
    double rotation_ = 0;
};

}  // namespace timolab
