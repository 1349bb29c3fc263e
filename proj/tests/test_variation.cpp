#include <cmath>

#include "doctest.h"
#include "robin/variation.hpp"

using namespace robin;
using namespace robin::variation;
using geometry::cd;
using geometry::CVec;

namespace {

CVec vec2(cd a, cd b) {
    CVec v(2);
    v << a, b;
    return v;
}

VariationOptions grid(int N) {
    VariationOptions o;
    o.grid = N;
    return o;
}

// {|z|^4 + (Re z1)^4 < 1}, convex
nlohmann::json quartic_shape() {
    nlohmann::json terms = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        std::vector<int> e(6, 0);
        e[i] = 4;
        terms.push_back({{"monomial", e}, {"coeff", i == 0 ? 2.0 : 1.0}});
        for (int k = i + 1; k < 4; ++k) {
            std::vector<int> m(6, 0);
            m[i] = m[k] = 2;
            terms.push_back({{"monomial", m}, {"coeff", 2.0}});
        }
    }
    terms.push_back({{"monomial", std::vector<int>(6, 0)}, {"coeff", -1.0}});
    return {{"kind", "polynomial"},
            {"n", 2},
            {"terms", terms},
            {"box", {{"lo", {-1.05, -1.05, -1.05, -1.05}}, {"width", 2.1}}}};
}

}  // namespace

TEST_CASE("boundary quadrature recovers the area of the unit sphere") {
    auto fam = translation_family(2, 1.0, vec2(1.0, 0.0));
    auto dom = fam.grid(0.0, 20);
    double area = 0;
    for (const auto& p : boundary_pieces(*dom)) {
        area += p.area;
        CHECK(std::abs(p.point.norm() - 1.0) < 1e-6);
        CHECK(std::abs(p.normal.dot(p.point) - 1.0) < 1e-6);
    }
    CHECK(area == doctest::Approx(2 * M_PI * M_PI).epsilon(0.03));
}

TEST_CASE("lambda along the translation family") {
    auto fam = translation_family(2, 1.0, vec2(1.0, 0.0));
    // pole sits at -t a relative to the ball: lambda = -1/(1 - |t|^2)^2
    double l = lambda_of_t(fam, cd(0.3, 0.0), 20);
    CHECK(l == doctest::Approx(-1.0 / (0.91 * 0.91)).epsilon(0.03));
    CHECK_THROWS_AS(lambda_of_t(fam, cd(0.6, 0.0), 20), Error);
}

TEST_CASE("second variation of the translated ball") {
    auto r = second_variation_check(translation_family(2, 1.0, vec2(1.0, 0.0)), 0.0, grid(20));
    CHECK(r.lhs == doctest::Approx(-2.0).epsilon(0.1));
    CHECK(r.mismatch < 0.15);
    CHECK(r.min_k2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.rhs_cross == 0.0);
    CHECK(r.rhs_boundary < 0);
    CHECK(r.rhs_volume < 0);
    auto half = second_variation_check(translation_family(2, 1.0, vec2(0.5, 0.0)), 0.0, grid(20));
    CHECK(half.lhs == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("static family has no variation") {
    auto fam = static_family({{"kind", "ball"}, {"n", 2}, {"radius", 1.0}});
    auto r = second_variation_check(fam, 0.0, grid(16));
    CHECK(std::abs(r.lhs) < 1e-6);
    CHECK(std::abs(r.rhs) < 1e-6);
}

TEST_CASE("first variation of the radial family") {
    auto r = first_variation_check(radial_family(2, 1.0), 0.0, grid(20));
    CHECK(r.lhs.real() == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(r.lhs.imag()) < 0.02);
    CHECK(std::abs(r.rhs - r.lhs) < 0.1 * std::abs(r.lhs));
}

TEST_CASE("subharmonicity on a convex quartic translation family") {
    nlohmann::json j = {{"kind", "translation"}, {"n", 2}, {"a", {{1.0, 0.0}, {0.0, 0.5}}},
                        {"shape", quartic_shape()}, {"rho", 0.3}, {"pseudoconvex", true}};
    auto fam = DomainFamily::from_json(j);
    auto rep = subharmonicity_scan(fam, {cd(0.0), cd(0.1, 0.05)}, grid(16));
    CHECK(rep.ok);
    CHECK(rep.min_k2 > 0);
    for (const auto& s : rep.samples) CHECK(s.value > 0);
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(DomainFamily::from_json({{"kind", "twist"}, {"n", 2}}), Error);
    CHECK_THROWS_AS(DomainFamily::from_json({{"kind", "radial"}, {"n", 2}, {"rho", -1.0}}), Error);
    auto disk = DomainFamily::from_json({{"kind", "radial"}, {"n", 1}});
    CHECK_THROWS_AS(second_variation_check(disk, 0.0, grid(16)), Error);
    VariationOptions bad = grid(16);
    bad.stencil = 4;
    CHECK_THROWS_AS(second_variation_check(radial_family(2, 1.0), 0.0, bad), Error);
}
