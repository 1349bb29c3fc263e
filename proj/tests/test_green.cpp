#include <cmath>

#include "doctest.h"
#include "robin/green.hpp"

using namespace robin;
using namespace robin::green;
using geometry::cd;

namespace {

nlohmann::json ball(int n, double R) { return {{"kind", "ball"}, {"n", n}, {"radius", R}}; }

RVec point(std::initializer_list<double> v) {
    RVec x(static_cast<long>(v.size()));
    long i = 0;
    for (double d : v) x[i++] = d;
    return x;
}

double lambda(const nlohmann::json& dom, int N, const RVec& pole, const CSpec& c = {}) {
    return solve_green(grid_from_json(dom, N, pole), c).lambda;
}

}  // namespace

TEST_CASE("fundamental solution normalization") {
    Fundamental f2{2, 0.0};
    CHECK(f2.value(0.5) == doctest::Approx(4.0));
    CHECK(f2.dr(0.5) == doctest::Approx(-16.0));
    Fundamental f1{1, 0.0};
    CHECK(f1.value(std::exp(-1.0)) == doctest::Approx(1.0));
    // Bessel form tends to r^{-2} near the pole
    Fundamental fk{2, 1.0};
    CHECK(fk.value(1e-3) * 1e-6 == doctest::Approx(1.0).epsilon(1e-4));
    double r = 0.3, e = 1e-6;
    CHECK(fk.dr(r) == doctest::Approx((fk.value(r + e) - fk.value(r - e)) / (2 * e)).epsilon(1e-6));
}

TEST_CASE("ball Robin constant at the center") {
    CHECK(lambda(ball(2, 1.0), 16, RVec::Zero(4)) == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(lambda(ball(2, 2.0), 16, RVec::Zero(4)) == doctest::Approx(-0.25).epsilon(0.02));
}

TEST_CASE("off-center pole matches the image-charge value") {
    // lambda(y) = -1/(1 - |y|^2)^2 on the unit ball of C^2
    double l = lambda(ball(2, 1.0), 24, point({0.5, 0, 0, 0}));
    CHECK(l == doctest::Approx(-16.0 / 9.0).epsilon(0.03));
    double l2 = lambda(ball(2, 1.0), 24, point({0, 0, 0, -0.25}));
    CHECK(l2 == doctest::Approx(-1.0 / (0.9375 * 0.9375)).epsilon(0.02));
}

TEST_CASE("constant c on the ball against the Bessel solution") {
    // radial solution: lambda = -kappa^2 K1(kappa) / (2 I1(kappa)), kappa^2 = 2c
    const double c = 0.5, k = std::sqrt(2 * c);
    const double expect = -k * k * std::cyl_bessel_k(1.0, k) / (2 * std::cyl_bessel_i(1.0, k));
    auto f = solve_green(grid_from_json(ball(2, 1.0), 16, RVec::Zero(4)), CSpec::from_json(c, 2));
    CHECK(f.lambda == doctest::Approx(expect).epsilon(0.02));
    CHECK(f.min_g > -1e-6);
}

TEST_CASE("unit disk in C: lambda = log(1 - |y|^2)") {
    for (double y : {0.0, 0.3}) {
        double l = lambda(ball(1, 1.0), 161, point({y, 0}));
        CHECK(l == doctest::Approx(std::log(1 - y * y)).epsilon(0.01).scale(1.0));
    }
}

TEST_CASE("Green function is nonnegative and lambda grows with the domain") {
    auto f = solve_green(grid_from_json(ball(2, 1.0), 16, point({0.2, 0.1, 0, 0})), {});
    CHECK(f.min_g > -1e-8);
    CHECK(f.residual < 1e-8);
    RVec p = RVec::Zero(4);
    CHECK(lambda(ball(2, 0.8), 16, p) < lambda(ball(2, 1.0), 16, p));
    // polynomial domain inside the ball: {|z|^2 + x1^2 < 1}
    nlohmann::json ell = {{"kind", "polynomial"},
                          {"n", 2},
                          {"terms",
                           {{{"monomial", {2, 0, 0, 0}}, {"coeff", 2.0}},
                            {{"monomial", {0, 2, 0, 0}}, {"coeff", 1.0}},
                            {{"monomial", {0, 0, 2, 0}}, {"coeff", 1.0}},
                            {{"monomial", {0, 0, 0, 2}}, {"coeff", 1.0}},
                            {{"monomial", {0, 0, 0, 0}}, {"coeff", -1.0}}}},
                          {"box", {{"lo", {-1.05, -1.05, -1.05, -1.05}}, {"width", 2.1}}}};
    CHECK(lambda(ell, 16, p) < lambda(ball(2, 1.0), 16, p));
}

TEST_CASE("coarse and fine grids agree off center") {
    // cut-cell errors are not monotone in N, so bound both instead of comparing them
    const double exact = -16.0 / 9.0;
    RVec p = point({0.5, 0, 0, 0});
    double l14 = lambda(ball(2, 1.0), 14, p), l24 = lambda(ball(2, 1.0), 24, p);
    CHECK(std::abs(l14 - exact) < 0.005 * std::abs(exact));
    CHECK(std::abs(l24 - exact) < 0.005 * std::abs(exact));
    CHECK(std::abs(l14 - l24) < 0.005);
}

TEST_CASE("pole and c validation") {
    try {
        grid_from_json(ball(2, 1.0), 16, point({0.95, 0, 0, 0}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == "PoleTooCloseToBoundary");
    }
    CHECK_THROWS_AS(grid_from_json(ball(2, 1.0), 16, point({1.5, 0, 0, 0})), Error);
    try {
        CSpec::from_json(-1.0, 2);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == "NegativeC");
    }
}

TEST_CASE("Robin function CSV and shared grid") {
    std::vector<RVec> poles = {RVec::Zero(4), point({0.25, 0, 0, 0})};
    auto field = robin_function(ball(2, 1.0), 16, poles, {});
    REQUIRE(field.samples.size() == 2);
    CHECK(field.samples[0].Lambda > field.samples[1].Lambda);
    std::string csv = field.to_csv();
    CHECK(csv.rfind("x1,x2,x3,x4,Lambda\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("complex Hessian of a synthetic Robin function finds the flat direction") {
    // -Lambda = 1 + |z1|^2: Hessian diag(1, 0)
    auto f = [](const RVec& x) { return 1.0 + x[0] * x[0] + x[1] * x[1]; };
    auto H = complex_hessian(f, RVec::Zero(4), 0.05);
    CHECK(std::abs(H(0, 0) - cd(1.0)) < 1e-8);
    CHECK(std::abs(H(1, 1)) < 1e-8);
    CHECK(std::abs(H(0, 1)) < 1e-8);
    auto dirs = hessian_flat_directions(H, 1e-3);
    REQUIRE(dirs.size() == 2);
    CHECK(dirs[0].flat);
    CHECK(!dirs[1].flat);
    CHECK(std::abs(std::abs(dirs[0].eigenvector[1]) - 1.0) < 1e-8);
    // mixed term: f = |z1 + i z2|^2 has H = [[1, -i], [i, 1]]
    auto g = [](const RVec& x) {
        cd w = cd(x[0], x[1]) + cd(0, 1) * cd(x[2], x[3]);
        return std::norm(w);
    };
    auto G = complex_hessian(g, RVec::Zero(4), 0.05);
    CHECK(std::abs(G(0, 1) - cd(0, -1)) < 1e-8);
    CHECK(std::abs(G(1, 0) - cd(0, 1)) < 1e-8);
}

TEST_CASE("Robin Hessian of the ball at the center") {
    auto H = robin_hessian(ball(2, 1.0), 16, RVec::Zero(4), {});
    CHECK(H(0, 0).real() == doctest::Approx(2.0).epsilon(0.2));
    CHECK(H(1, 1).real() == doctest::Approx(2.0).epsilon(0.2));
    CHECK(std::abs(H(0, 1)) < 0.2);
}
