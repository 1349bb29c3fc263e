#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "robin/geometry.hpp"

using namespace robin::geometry;

namespace {

CVec random_point(std::mt19937_64& rng, int n, double rmax) {
    std::uniform_real_distribution<double> U(-1, 1);
    CVec z(n);
    do {
        for (int k = 0; k < n; ++k) z[k] = cd(U(rng), U(rng));
    } while (z.norm() >= 1.0 || z.norm() < 0.05);
    return z * rmax;
}

double max_jet_diff(const MetricJet& a, const MetricJet& b) {
    double m = (a.g - b.g).cwiseAbs().maxCoeff();
    for (size_t c = 0; c < a.dz.size(); ++c) {
        m = std::max(m, (a.dz[c] - b.dz[c]).cwiseAbs().maxCoeff());
        m = std::max(m, (a.dzb[c] - b.dzb[c]).cwiseAbs().maxCoeff());
        for (size_t d = 0; d < a.dz.size(); ++d)
            m = std::max(m, (a.dzdzb[c][d] - b.dzdzb[c][d]).cwiseAbs().maxCoeff());
    }
    return m;
}

// boundary point of |z - t a|^2 = R^2 in direction theta
RVec translated_sphere_point(int n, double R, const CVec& a, cd t, const RVec& dir) {
    CVec c = t * a;
    return to_real(c) + R * dir.normalized();
}

}  // namespace

TEST_CASE("dimensional constants") {
    auto c2 = DimensionalConstants::of(2);
    CHECK(c2.Omega == doctest::Approx(2 * std::numbers::pi * std::numbers::pi));
    CHECK(c2.c_n == doctest::Approx(1.0 / (2 * std::numbers::pi * std::numbers::pi)));
    auto c3 = DimensionalConstants::of(3);
    CHECK(c3.Omega == doctest::Approx(std::pow(std::numbers::pi, 3)));
    CHECK(std::isinf(DimensionalConstants::of(1).c_n));
}

TEST_CASE("metrics are Hermitian positive definite and reject bad points") {
    std::mt19937_64 rng(7);
    for (auto chart : {euclidean_chart(2), ball_chart(2), hopf_chart(2), bergman_chart(2), bergman_chart(3)}) {
        for (int k = 0; k < 20; ++k) {
            CVec z = random_point(rng, chart->n(), 0.9);
            CHECK_NOTHROW(validate_metric(chart->metric(z)));
        }
    }
    CVec z0 = CVec::Zero(2);
    CHECK_THROWS_AS(hopf_chart(2)->jet(z0), robin::Error);
    CVec out(2);
    out << cd(1.0, 0), cd(0.5, 0);
    CHECK_THROWS_AS(ball_chart(2)->metric(out), robin::Error);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = cd(0, 1);
    CHECK_THROWS_AS(validate_metric(bad), robin::Error);
    CMatrix indef = CMatrix::Identity(2, 2);
    indef(1, 1) = -1;
    CHECK_THROWS_AS(validate_metric(indef), robin::Error);
}

TEST_CASE("closed-form jets agree with finite differences") {
    std::mt19937_64 rng(11);
    for (auto chart : {ball_chart(2), hopf_chart(2), bergman_chart(2), bergman_chart(3)}) {
        auto fd = finite_difference_chart(chart, 1e-3);
        for (int k = 0; k < 10; ++k) {
            CVec z = random_point(rng, chart->n(), 0.7);
            CHECK(max_jet_diff(chart->jet(z), fd->jet(z)) < 1e-6 * std::max(1.0, chart->jet(z).g.norm()) * 100);
        }
    }
}

TEST_CASE("polynomial conformal chart matches the equivalent closed form") {
    // 1 + |z|^2 as a polynomial factor vs finite differences of itself
    RealPoly P = RealPoly::constant(4, 1.0);
    for (int k = 0; k < 4; ++k) P = P + RealPoly::variable(4, k) * RealPoly::variable(4, k);
    auto chart = polynomial_conformal_chart(2, P);
    auto fd = finite_difference_chart(chart, 1e-3);
    CVec z(2);
    z << cd(0.3, -0.2), cd(0.1, 0.4);
    CHECK(max_jet_diff(chart->jet(z), fd->jet(z)) < 1e-8);
    // d/dz_c (1 + |z|^2) = zbar_c
    CHECK(std::abs(chart->jet(z).dz[0](0, 0) - std::conj(z[0])) < 1e-14);
}

TEST_CASE("Euclidean Laplacian is -1/2 of the flat one") {
    // u = |z|^2 = sum x_k^2 so the flat Laplacian is 2 * 2n
    const int n = 2;
    RVec g(4);
    RMatrix h = 2.0 * RMatrix::Identity(4, 4);
    CVec z(2);
    z << cd(0.2, 0.1), cd(-0.3, 0.5);
    g = 2.0 * to_real(z);
    ScalarJet u = complex_jet(z.squaredNorm(), g, h, n);
    CHECK(std::abs(laplacian_apply(*euclidean_chart(n), u, z) - cd(-4.0, 0)) < 1e-14);
}

TEST_CASE("Laplacian annihilates constants and is real on real functions") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    for (auto chart : {ball_chart(2), bergman_chart(2), hopf_chart(2)}) {
        CVec z = random_point(rng, 2, 0.8);
        ScalarJet c = complex_jet(3.0, RVec::Zero(4), RMatrix::Zero(4, 4), 2);
        CHECK(std::abs(laplacian_apply(*chart, c, z)) < 1e-14);
        RVec g(4);
        RMatrix h(4, 4);
        for (int i = 0; i < 4; ++i) g[i] = U(rng);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = U(rng);
        ScalarJet u = complex_jet(0.0, g, h, 2);
        CHECK(std::abs(laplacian_apply(*chart, u, z).imag()) < 1e-12);
    }
}

TEST_CASE("Hodge residual") {
    std::mt19937_64 rng(5);
    // Kahler implies Hodge
    for (int k = 0; k < 20; ++k) {
        CVec z = random_point(rng, 2, 0.8);
        CHECK(kahler_residual(*bergman_chart(2), z) < 1e-12);
        CHECK(hodge_condition_residual(*bergman_chart(2), z).norm() < 1e-10);
        CHECK(hodge_condition_residual(*euclidean_chart(2), z).norm() == 0.0);
    }
    CVec z(2);
    z << cd(0.3, 0.1), cd(0.2, -0.2);
    CHECK(kahler_residual(*ball_chart(2), z) > 1e-3);
    CHECK(hodge_condition_residual(*ball_chart(2), z).norm() > 1e-3);
    CVec p(2);
    p << cd(1, 0), cd(0, 0);
    CVec r = hodge_condition_residual(*hopf_chart(2), p);
    CHECK(std::abs(r[0] - cd(-1, 0)) < 1e-14);
    CHECK(std::abs(r[1]) < 1e-14);
}

TEST_CASE("scalar curvature closed forms") {
    CVec z0 = CVec::Zero(2);
    CHECK(scalar_W(*ball_chart(2), z0) == doctest::Approx(4.0));
    CHECK(scalar_W(*euclidean_chart(2), z0) == doctest::Approx(0.0));
    CVec p(2);
    p << cd(1, 0), cd(0, 0);
    CHECK(scalar_W(*hopf_chart(2), p) == doctest::Approx(-1.0));
    for (int n = 2; n <= 4; ++n) {
        CVec q = CVec::Zero(n);
        q[0] = cd(0.3, 0.4);
        q[n - 1] += cd(0.0, 1.1);
        CHECK(scalar_W(*hopf_chart(n), q) == doctest::Approx(-(n - 1.0) * (n - 1.0)).epsilon(1e-10));
    }
}

TEST_CASE("the two curvature routes agree on random points") {
    std::mt19937_64 rng(13);
    int checked = 0;
    for (auto chart : {ball_chart(2), hopf_chart(2), bergman_chart(2), ball_chart(3), bergman_chart(3)}) {
        for (int k = 0; k < 20; ++k) {
            CVec z = random_point(rng, chart->n(), 0.85);
            double a = scalar_W(*chart, z);  // throws on mismatch
            double b = scalar_W_direct(*chart, z);
            CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)));
            ++checked;
        }
    }
    CHECK(checked == 100);
}

TEST_CASE("curvature from finite-difference jets") {
    CVec z(2);
    z << cd(0.2, 0.1), cd(-0.1, 0.3);
    auto fd = finite_difference_chart(bergman_chart(2), 1e-3);
    CHECK(scalar_W_direct(*fd, z) == doctest::Approx(scalar_W_direct(*bergman_chart(2), z)).epsilon(1e-5));
}

TEST_CASE("Christoffel torsion vanishes for Kahler metrics") {
    CVec z(2);
    z << cd(0.2, 0.1), cd(-0.1, 0.3);
    auto c = christoffel(*bergman_chart(2), z);
    CHECK(c.T.norm() < 1e-12);
    auto d = christoffel(*ball_chart(2), z);
    CHECK(d.T.norm() > 1e-3);
}

TEST_CASE("Levi curvature of the translated ball family") {
    CVec a(2);
    a << cd(1, 0), cd(0, 0);
    auto psi = polynomial_family(2, translation_polynomial(2, 1.0, a));
    auto chart = euclidean_chart(2);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> N;
    for (int k = 0; k < 20; ++k) {
        RVec dir(4);
        for (int i = 0; i < 4; ++i) dir[i] = N(rng);
        cd t(0.1 * N(rng), 0.1 * N(rng));
        RVec x = translated_sphere_point(2, 1.0, a, t, dir);
        double k2 = levi_k2(*chart, *psi, t, x);
        CHECK(k2 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(levi_K2(*chart, *psi, t, x) == doctest::Approx(k2).epsilon(1e-10));
        // invariance under psi -> e^{w.x} psi
        RVec w(4);
        for (int i = 0; i < 4; ++i) w[i] = 0.5 * N(rng);
        auto psi2 = exp_weighted(psi, w);
        CHECK(std::abs(levi_k2(*chart, *psi2, t, x) - k2) < 1e-8);
        CHECK(std::abs(std::abs(levi_k1(*chart, *psi2, t, x)) - std::abs(levi_k1(*chart, *psi, t, x))) < 1e-8);
    }
}

TEST_CASE("Levi curvature is nonnegative on convex families") {
    auto psi = polynomial_family(2, radial_polynomial(2, 1.0));
    std::mt19937_64 rng(19);
    std::normal_distribution<double> N;
    for (int k = 0; k < 20; ++k) {
        RVec dir(4);
        for (int i = 0; i < 4; ++i) dir[i] = N(rng);
        cd t(0.2 * N(rng), 0.2 * N(rng));
        RVec x = (1.0 + t.real()) * dir.normalized();
        CHECK(levi_k2(*euclidean_chart(2), *psi, t, x) >= -1e-12);
    }
}

TEST_CASE("Levi validation errors") {
    auto psi = polynomial_family(2, ball_polynomial(2, 1.0, RVec::Zero(4)));
    RVec inside = RVec::Zero(4);
    CHECK_THROWS_AS(levi_k2(*euclidean_chart(2), *psi, 0.0, inside), robin::Error);
    try {
        levi_k2(*euclidean_chart(2), *psi, 0.0, inside);
    } catch (const robin::Error& e) {
        CHECK(e.kind() == "NotOnBoundary");
    }
}

TEST_CASE("finite-difference family matches the polynomial one") {
    CVec a(2);
    a << cd(0.5, 0.5), cd(0, 1);
    RealPoly P = translation_polynomial(2, 1.0, a);
    auto exact = polynomial_family(2, P);
    auto fd = finite_difference_family(
        2,
        [P](cd t, const RVec& x) {
            double v[6] = {x[0], x[1], x[2], x[3], t.real(), t.imag()};
            return P.eval(v);
        },
        1e-3);
    cd t(0.1, -0.05);
    RVec x = translated_sphere_point(2, 1.0, a, t, RVec::Ones(4));
    CHECK(levi_k2(*euclidean_chart(2), *fd, t, x) == doctest::Approx(levi_k2(*euclidean_chart(2), *exact, t, x)).epsilon(1e-6));
}

TEST_CASE("chart and domain JSON") {
    auto c = chart_from_json(nlohmann::json{{"kind", "ball"}, {"n", 2}});
    CHECK(c->kind() == "ball");
    CHECK_THROWS_AS(chart_from_json(nlohmann::json{{"kind", "nope"}, {"n", 2}}), robin::Error);
    auto d = domain_from_json(nlohmann::json{{"kind", "ball"}, {"n", 2}, {"radius", 2.0}});
    RVec x = RVec::Zero(4);
    x[0] = 2.0;
    CHECK(d->value(0.0, x) == doctest::Approx(0.0));
}
