#include <random>

#include "doctest.h"
#include "robin/torus.hpp"
#include "support.hpp"

using namespace robin;
using namespace robin::torus;

namespace {
QRat xi() { return QRat::var(); }
QRat c(long v) { return QRat(Q(v)); }
const SixTuple kSample{1, 1, 0, 1, 1, 1};
}  // namespace

TEST_CASE("direction of the sample tuple") {
    auto d = direction_from_tuple(kSample);
    CHECK(d.a == (xi() + c(1)) / (xi() * xi() + c(1)));
    CHECK(d.b == (c(1) - xi()) / (xi() * xi() + c(1)));
}

TEST_CASE("direction agrees with a pointwise rational evaluation") {
    // Evaluate the defining quotients at rational xi directly and compare.
    std::mt19937 rng(7);
    for (int k = 0; k < 50; ++k) {
        SixTuple t = testing::random_tuple(rng, 9);
        auto d = direction_from_tuple(t);
        for (Q x0 : {Q(1, 3), Q(-5, 2), Q(7)}) {
            Q p1 = (Q(t.mp) + Q(t.np) * x0) * t.p, p2 = Q(t.np * t.p), q1 = Q(t.m * t.q), q2 = Q(t.n * t.q);
            Q den = p1 * p1 + q1 * q1;
            CHECK(d.a.eval(x0) == (p1 * p2 + q1 * q2) / den);
            CHECK(d.b.eval(x0) == (p2 * q1 - p1 * q2) / den);
        }
    }
}

TEST_CASE("foliation data of the sample tuple") {
    auto fd = foliation_data(kSample);
    CHECK(fd.A == (c(1) + xi()) / (c(1) - xi()));
    CHECK(fd.B == -(xi() * xi() + c(1)) / (c(1) - xi()));
    CHECK(fd.C == c(2) / (c(1) - xi()));
    CHECK(-(fd.A * fd.A) - fd.B * fd.C == c(1));
    CHECK(fd.eta == c(2) / (c(1) - xi()));
    CHECK(fd.eta.degree() > 0);
    CHECK(fd.d == QRat(Q(1)));
    auto [x3, x4] = F_apply(fd, c(1), c(1));
    CHECK(x3 == xi());
    CHECK(x4 == c(1));
    auto z = F_apply(fd, c(0), c(0));
    CHECK(z.first.is_zero());
    CHECK(z.second.is_zero());
}

TEST_CASE("item 1.(ii) points lie on S and F inverts") {
    std::mt19937 rng(11);
    for (int k = 0; k < 100; ++k) {
        SixTuple t = testing::random_tuple(rng, 20);
        auto fd = foliation_data(t);
        QRat p = c(t.p), q = c(t.q);
        CHECK(on_S(fd, {q * c(t.m), q * c(t.n), p * fd.Mp, p * c(t.np)}));
        CHECK(on_S(fd, {p / c(t.n), c(0), q / c(t.np) + fd.eta * fd.Mp, fd.eta * c(t.np)}));
        QRat u = c(3) / c(7), v = xi() - c(2);
        auto [x3, x4] = F_apply(fd, u, v);
        auto [y1, y2] = F_inverse(fd, x3, x4);
        CHECK(y1 == u);
        CHECK(y2 == v);
        // the third generator is tangent to S
        CHECK(on_S(fd, fd.gens[2]));
        CHECK(fd.d == QRat(Q(1, t.p * t.np)));
    }
}

TEST_CASE("invalid tuples are rejected") {
    CHECK_THROWS_AS(direction_from_tuple({2, 4, 0, 1, 1, 1}), Error);
    CHECK_THROWS_AS(direction_from_tuple({1, 1, 2, 4, 1, 1}), Error);
    CHECK_THROWS_AS(direction_from_tuple({1, 1, 0, 1, 2, 4}), Error);
    CHECK_THROWS_AS(direction_from_tuple({1, 1, 0, 0, 1, 1}), Error);
    CHECK_THROWS_AS(direction_from_tuple({1, 0, 0, 1, 1, 1}), Error);
}

TEST_CASE("leaf invariant is constant along S and changes by integers on the lattice") {
    std::mt19937 rng(3);
    for (int k = 0; k < 50; ++k) {
        auto fd = foliation_data(testing::random_tuple(rng, 15));
        for (const auto& g : fd.gens) CHECK(leaf_invariant(fd, g).is_zero());
        std::array<std::array<QRat, 4>, 4> lattice = {{{c(1), c(0), c(0), c(0)},
                                                        {c(0), c(1), c(0), c(0)},
                                                        {c(0), c(0), c(1), c(0)},
                                                        {c(0), c(0), xi(), c(1)}}};
        for (const auto& e : lattice) {
            QRat v = leaf_invariant(fd, e);
            REQUIRE(v.is_constant());
            CHECK(v.constant_value().get_den() == 1);
        }
    }
}

TEST_CASE("Sigma(t) membership") {
    auto fd = foliation_data(kSample);
    CHECK(sigma_same_leaf(fd, Q(1, 3), Q(4, 3)));
    CHECK(sigma_disjoint(fd, Q(0), Q(1, 2)));
    CHECK(sigma_same_leaf(fd, Q(2, 7), Q(2, 7)));
    // pq = 1: agrees with the arithmetic rule t - t' in Z
    for (int a = -6; a <= 6; ++a)
        for (int b = 1; b <= 4; ++b) {
            Q t(a, b), tp(1, 3);
            Q d = t - tp;
            CHECK(sigma_same_leaf(fd, t, tp) == (d.get_den() == 1));
        }
    // general tuples: leaves repeat with period 1/(pq)
    auto fd2 = foliation_data({1, 2, 1, 3, 2, 3});
    CHECK(sigma_same_leaf(fd2, Q(0), Q(1, 6)));
    CHECK(sigma_disjoint(fd2, Q(0), Q(1, 12)));
}

TEST_CASE("classification of directions") {
    auto d = direction_from_tuple(kSample);
    auto r = classify_direction(d.a, d.b);
    CHECK(r.tag == CaseTag::b_nonzero);
    REQUIRE(r.tuple.has_value());
    CHECK(*r.tuple == kSample);

    auto half = classify_direction(QRat(Q(1, 2)), QRat());
    CHECK(half.tag == CaseTag::b_zero_rational);
    REQUIRE(half.slope_pq.has_value());
    CHECK(half.slope_pq->first == 2);   // p
    CHECK(half.slope_pq->second == 1);  // q

    auto x = classify_direction(xi(), QRat());
    CHECK(x.tag == CaseTag::b_zero_xi_rational);
    CHECK(x.cannot_occur);

    auto ok = classify_direction(c(1) / (xi() + QRat(Q(1, 3))), QRat());
    CHECK_FALSE(ok.cannot_occur);
    REQUIRE(ok.xi_offset.has_value());
    CHECK(*ok.xi_offset == Q(1, 3));

    auto none = classify_direction(xi() * xi(), c(1));
    CHECK_FALSE(none.tuple.has_value());
}

TEST_CASE("round trip through classification") {
    std::mt19937 rng(5);
    for (int k = 0; k < 200; ++k) {
        SixTuple t = testing::random_tuple(rng, 20);
        auto d = direction_from_tuple(t);
        auto r = classify_direction(d.a, d.b, 50);
        REQUIRE(r.tuple.has_value());
        CHECK(*r.tuple == t);
    }
    auto d = direction_from_tuple({1, 1, 0, 1, 7, 9});
    CHECK_THROWS_AS(classify_direction(d.a, d.b, 5), Error);
}

TEST_CASE("generator dispatch") {
    CHECK(classify_generator(c(0), c(0), c(1), c(0)).tag == CaseTag::alpha_zero);
    CHECK(classify_generator(c(1), c(0), c(0), c(0)).tag == CaseTag::beta_zero);
    CHECK_THROWS_AS(classify_generator(c(0), c(0), c(0), c(0)), Error);
    // beta/alpha = 1/2 with alpha = 2i, beta = i
    CHECK(classify_generator(c(0), c(2), c(0), c(1)).tag == CaseTag::b_zero_rational);
}

TEST_CASE("Aut C integral curve") {
    using C = std::complex<double>;
    auto [a, b] = autC_integral_curve(1.0, 0.0, 1.0, 1.0, 0.0);
    CHECK(std::abs(a - std::exp(1.0)) < 1e-14);
    CHECK(std::abs(b) < 1e-14);
    auto [a2, b2] = autC_integral_curve(0.0, 1.0, 2.0, 1.0, 0.0);
    CHECK(std::abs(a2 - 1.0) < 1e-14);
    CHECK(std::abs(b2 - 2.0) < 1e-14);
    auto [a3, b3] = autC_integral_curve(1.0, 1.0, C(0, M_PI), 1.0, 0.0);
    CHECK(std::abs(a3 + 1.0) < 1e-12);
    CHECK(std::abs(b3 + 2.0) < 1e-12);
    C al(0.3, -0.7), be(1.1, 0.4), a0(0.5, 0.2), b0(-1.0, 2.0);
    for (double s : {0.1, 1.0, 3.0}) {
        auto [u, v] = autC_integral_curve(al, be, C(s, 0.5 * s), a0, b0);
        CHECK(std::abs((be * u - al * v) - (be * a0 - al * b0)) < 1e-12);
    }
}
