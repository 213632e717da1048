#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "timolab/section.hpp"

using namespace timolab;

TEST_CASE("rectangle moments in closed form") {
    CrossSection cs = CrossSection::rectangle(2.0, 3.0);
    CHECK(cs.area() == doctest::Approx(6.0));
    CHECK(cs.j1() == doctest::Approx(2.0 * 27.0 / 12.0));  // ∫x2^2
    CHECK(cs.j2() == doctest::Approx(3.0 * 8.0 / 12.0));   // ∫x1^2
    CHECK(cs.moment(0, 0) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(cs.moment(1, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(cs.moment(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(cs.moment(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(cs.moment(2, 0) == doctest::Approx(cs.j2()).epsilon(1e-13));
    CHECK(cs.moment(0, 2) == doctest::Approx(cs.j1()).epsilon(1e-13));
    // ∫ x1^4 x2^2 over [-1,1]x[-1.5,1.5]
    CHECK(cs.moment(4, 2) == doctest::Approx((2.0 / 5.0) * (2.0 * std::pow(1.5, 3) / 3.0))
                                 .epsilon(1e-13));
}

TEST_CASE("ellipse moments in closed form") {
    CrossSection cs = CrossSection::ellipse(1.5, 0.5);
    CHECK(cs.area() == doctest::Approx(M_PI * 0.75).epsilon(1e-13));
    CHECK(cs.j1() == doctest::Approx(M_PI * 1.5 * std::pow(0.5, 3) / 4.0).epsilon(1e-12));
    CHECK(cs.j2() == doctest::Approx(M_PI * std::pow(1.5, 3) * 0.5 / 4.0).epsilon(1e-12));
    CHECK(cs.moment(2, 0) == doctest::Approx(cs.j2()).epsilon(1e-12));
    CHECK(cs.moment(0, 2) == doctest::Approx(cs.j1()).epsilon(1e-12));
    CHECK(cs.moment(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // ∫ x1^2 x2^2 = pi a^3 b^3 / 24
    CHECK(cs.moment(2, 2) ==
          doctest::Approx(M_PI * std::pow(1.5, 3) * std::pow(0.5, 3) / 24.0).epsilon(1e-12));
    // boundary perimeter against a dense arc-length sum
    double per = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        per += std::hypot(1.5 * std::sin(t), 0.5 * std::cos(t)) * 2.0 * M_PI / n;
    }
    CHECK(cs.boundary_moment(0, 0) == doctest::Approx(per).epsilon(1e-8));
}

TEST_CASE("triangle polygon against shoelace closed forms") {
    // right triangle (0,0), (3,0), (0,3): area 4.5, centroid (1,1)
    CrossSection cs = CrossSection::polygon({{0, 0}, {3, 0}, {0, 3}});
    CHECK(cs.area() == doctest::Approx(4.5).epsilon(1e-13));
    CHECK(cs.applied_shift().x1 == doctest::Approx(1.0));
    CHECK(cs.applied_shift().x2 == doctest::Approx(1.0));
    // centred section: first moments vanish, product moment vanishes
    CHECK(cs.moment(1, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(cs.moment(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(cs.moment(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // centroidal Ixx = Iyy = bh^3/36 = 2.25, Ixy = -b^2h^2/72 = -1.125;
    // principal moments 2.25 -+ 1.125, trace invariant
    CHECK(cs.j1() + cs.j2() == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(std::min(cs.j1(), cs.j2()) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(std::max(cs.j1(), cs.j2()) == doctest::Approx(3.375).epsilon(1e-12));
}

TEST_CASE("triangle second moments via quadrature match shoelace values") {
    CrossSection cs = CrossSection::polygon({{0, 0}, {2, 0}, {1, 2}});
    CHECK(cs.moment(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(cs.moment(2, 0) == doctest::Approx(cs.j2()).epsilon(1e-12));
    CHECK(cs.moment(0, 2) == doctest::Approx(cs.j1()).epsilon(1e-12));
    CHECK(cs.moment(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("polygon quadrature integrates high-degree monomials consistently") {
    CrossSection cs = CrossSection::polygon({{0, 0}, {2, 0}, {2.5, 1.0}, {1.0, 2.0}, {-0.5, 1.0}});
    // self-consistency across quadrature degrees (exactness plateau)
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; p + q <= 4; ++q) {
            SectionQuadrature lo = cs.quadrature(p + q + 1);
            SectionQuadrature hi = cs.quadrature(p + q + 6);
            double slo = 0, shi = 0;
            for (std::size_t i = 0; i < lo.nodes.size(); ++i)
                slo += lo.weights[i] * std::pow(lo.nodes[i].x1, p) * std::pow(lo.nodes[i].x2, q);
            for (std::size_t i = 0; i < hi.nodes.size(); ++i)
                shi += hi.weights[i] * std::pow(hi.nodes[i].x1, p) * std::pow(hi.nodes[i].x2, q);
            CHECK(slo == doctest::Approx(shi).scale(1.0).epsilon(1e-12));
        }
}

TEST_CASE("rotated rectangle polygon recovers the principal frame") {
    // square rotated by 30 degrees and shifted: construction must undo both
    const double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
    auto rot = [&](double x, double y) { return Vec2{c * x - s * y + 2.0, s * x + c * y - 1.0}; };
    CrossSection cs = CrossSection::polygon(
        {rot(-1, -0.5), rot(1, -0.5), rot(1, 0.5), rot(-1, 0.5)});
    CHECK(cs.area() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(cs.moment(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    const double j_small = 2.0 * std::pow(1.0, 3) / 12.0;  // b h^3/12 with h = 1
    const double j_big = 1.0 * std::pow(2.0, 3) / 12.0;
    CHECK(std::min(cs.j1(), cs.j2()) == doctest::Approx(j_small).epsilon(1e-12));
    CHECK(std::max(cs.j1(), cs.j2()) == doctest::Approx(j_big).epsilon(1e-12));
}

TEST_CASE("scaled section moments scale with the right powers") {
    CrossSection cs = CrossSection::polygon({{0, 0}, {2, 0}, {1, 2}});
    CrossSection half = cs.scaled(0.5);
    CHECK(half.area() == doctest::Approx(0.25 * cs.area()).epsilon(1e-13));
    CHECK(half.j1() == doctest::Approx(cs.j1() / 16.0).epsilon(1e-12));
    CHECK(half.j2() == doctest::Approx(cs.j2() / 16.0).epsilon(1e-12));
}

TEST_CASE("boundary quadrature weights sum to the perimeter") {
    CrossSection cs = CrossSection::rectangle(2.0, 1.0);
    BoundaryQuadrature q = cs.boundary_quadrature(4);
    double per = 0;
    for (double w : q.weights) per += w;
    CHECK(per == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("invalid sections are rejected") {
    CHECK_THROWS(CrossSection::rectangle(0.0, 1.0));
    CHECK_THROWS(CrossSection::ellipse(1.0, -1.0));
    CHECK_THROWS(CrossSection::polygon({{0, 0}, {1, 0}}));
    CHECK_THROWS(CrossSection::polygon({{0, 0}, {0, 1}, {1, 0}}));  // clockwise
    CrossSection cs = CrossSection::rectangle(1.0, 1.0);
    CHECK_THROWS(cs.quadrature(0));
    CHECK_THROWS(cs.quadrature(51));
}
