#include "doctest.h"
#include "robin/exact.hpp"
#include "robin/rref.hpp"

using namespace robin;

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("6/4") == Q(3, 2));
    CHECK(parse_rational(" -7 ") == Q(-7));
    CHECK(to_string(parse_rational("-3/9")) == "-1/3");
    CHECK_THROWS_AS(parse_rational("1.5"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK(parse_gaussian("1/2,-3") == QI(Q(1, 2), Q(-3)));
}

TEST_CASE("polynomial division and gcd") {
    QPoly x = QPoly::x();
    QPoly a = (x - QPoly(Q(1))) * (x + QPoly(Q(2)));
    QPoly b = (x - QPoly(Q(1))) * (x * x + QPoly(Q(1)));
    CHECK(QPoly::gcd(a, b) == x - QPoly(Q(1)));
    auto [qq, r] = b.divmod(a);
    CHECK(qq * a + r == b);
    CHECK(r.degree() < a.degree());
}

TEST_CASE("rational functions reduce canonically") {
    QRat xi = QRat::var();
    QRat f = (xi * xi - QRat(1)) / (QRat(2) * xi - QRat(2));
    CHECK(f == (xi + QRat(1)) / QRat(2));
    CHECK(f.den().degree() == 0);
    CHECK(f.den().lead() == Q(1));
    CHECK((f - f).is_zero());
    CHECK(QRat(Q(3, 4)).is_constant());
    CHECK(f.degree() == 1);
    CHECK(f.eval(Q(3)) == Q(2));
}

TEST_CASE("rational function serialization round trip") {
    QRat xi = QRat::var();
    QRat f = (xi + QRat(1)) / (xi * xi + QRat(1));
    CHECK(to_string(f) == "num:[1,1];den:[1,0,1]");
    CHECK(parse_ratfunc(to_string(f)) == f);
    CHECK(parse_ratfunc("1/2") == QRat(Q(1, 2)));
    CHECK(parse_ratfunc("num:[2,2];den:[4]") == (xi + QRat(1)) / QRat(2));
}

TEST_CASE("gaussian rational arithmetic") {
    QI i(Q(0), Q(1));
    CHECK(i * i == QI(-1));
    CHECK(QI(1) / i == QI(Q(0), Q(-1)));
    CHECK_THROWS_AS(QI(1) / QI(0), Error);
}

TEST_CASE("rank and nullspace over Q") {
    ExactMatrix<Q> m = {{Q(1), Q(2), Q(3)}, {Q(2), Q(4), Q(6)}, {Q(1), Q(0), Q(1)}};
    CHECK(exact_rank(m, 3) == 2);
    auto ns = nullspace(m, 3);
    REQUIRE(ns.size() == 1);
    for (const auto& row : m) {
        Q s = 0;
        for (int k = 0; k < 3; ++k) s += row[k] * ns[0][k];
        CHECK(s == 0);
    }
}

TEST_CASE("rank over Q(i)(K) sees generic independence") {
    QIRat K = QIRat::var();
    ExactMatrix<QIRat> m = {{K * K, K}, {K, QIRat(1) + K}};
    CHECK(exact_rank(m, 2) == 2);
    ExactMatrix<QIRat> d = {{K, K * K}, {QIRat(1), K}};
    CHECK(exact_rank(d, 2) == 1);
}
