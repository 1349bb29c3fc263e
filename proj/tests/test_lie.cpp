#include <random>

#include "doctest.h"
#include "robin/lie.hpp"
#include "robin/rref.hpp"
#include "support.hpp"

using namespace robin;
using namespace robin::lie;

namespace {

QMat E(std::size_t n, std::size_t i, std::size_t j) { return QMat::unit(n, i - 1, j - 1); }

QMat random_int(std::mt19937& rng, std::size_t n, long r = 4) {
    std::uniform_int_distribution<long> d(-r, r);
    QMat m(n);
    for (auto& v : m.e) v = QI(Q(d(rng)), Q(d(rng)));
    return m;
}

QMat random_upper(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<long> d(-3, 3);
    QMat m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            long v = d(rng);
            if (i == j && v == 0) v = 2;
            m(i, j) = QI(Q(v), Q(d(rng)));
        }
    return m;
}

}  // namespace

TEST_CASE("bracket identities") {
    CHECK(bracket(E(2, 1, 2), E(2, 2, 1)) == E(2, 1, 1) - E(2, 2, 2));
    std::mt19937 rng(1);
    QMat x = random_int(rng, 3);
    CHECK(is_zero(bracket(x, x)));
    CHECK_THROWS_AS(bracket(E(2, 1, 1), E(3, 1, 1)), Error);
}

TEST_CASE("Hopf bracket keeps h0 when c2 = 0") {
    // X = c1 E11 + c2 E21, Y has zero first column and second column (y1, y2).
    for (long c2 : {0L, 3L}) {
        QMat x = E(2, 1, 1) + scaled(E(2, 2, 1), QI(c2));
        QMat y = scaled(E(2, 1, 2), QI(5)) + scaled(E(2, 2, 2), QI(7));
        QMat b = bracket(x, y);
        // first column of [X, Y] is (-y1 c2, -y2 c2)
        CHECK(b(0, 0) == QI(-5 * c2));
        CHECK(b(1, 0) == QI(-7 * c2));
    }
}

TEST_CASE("Jacobi identity") {
    std::mt19937 rng(2);
    for (std::size_t n : {2u, 3u, 4u})
        for (int k = 0; k < 20; ++k) {
            QMat x = random_int(rng, n), y = random_int(rng, n), z = random_int(rng, n);
            QMat j = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y);
            CHECK(is_zero(j));
        }
}

TEST_CASE("flag tangent") {
    QMat x(3);
    x(1, 0) = QI(2);
    x(2, 0) = QI(3);
    x(2, 1) = QI(5);
    x(0, 2) = QI(9);
    auto t = flag_tangent(x);
    REQUIRE(t.size() == 3);
    CHECK(t[0] == QI(2));
    CHECK(t[1] == QI(3));
    CHECK(t[2] == QI(5));
    std::mt19937 rng(4);
    QMat y = x + random_upper(rng, 3);
    CHECK(flag_tangent(y) == t);
    for (const auto& v : flag_tangent(random_upper(rng, 4))) CHECK(v.is_zero());
}

TEST_CASE("flag point of group elements") {
    for (const auto& v : flag_point_of_group_element(QMat::identity(3))) CHECK(v.is_zero());
    QMat a = QMat::identity(3);
    a(1, 0) = QI(Q(7, 3));
    auto t = flag_point_of_group_element(a);
    CHECK(t == std::vector<QI>{QI(Q(7, 3)), QI(0), QI(0)});
    std::mt19937 rng(8);
    for (const auto& v : flag_point_of_group_element(random_upper(rng, 4))) CHECK(v.is_zero());
    QMat s(2);
    s(0, 1) = QI(1);
    s(1, 0) = QI(1);
    CHECK_THROWS_AS(flag_point_of_group_element(s), Error);
}

TEST_CASE("conjugated tangent routes agree") {
    std::mt19937 rng(6);
    for (std::size_t n : {2u, 3u, 4u, 5u})
        for (int k = 0; k < 30; ++k) {
            QMat a = random_upper(rng, n), x = random_int(rng, n);
            CHECK(conjugated_tangent(a, x) == conjugated_tangent_adjoint(a, x));
        }
    QMat x = random_int(rng, 3);
    CHECK(conjugated_tangent(QMat::identity(3), x) == flag_tangent(x));
}

TEST_CASE("conjugated tangent matches numeric differentiation") {
    std::mt19937 rng(9);
    const double h = 1e-6;
    for (std::size_t n : {2u, 3u, 4u})
        for (int k = 0; k < 20; ++k) {
            QMat a = random_upper(rng, n), x = random_int(rng, n, 2);
            auto exact = conjugated_tangent(a, x);
            CMat an = to_numeric(a), xn = to_numeric(x);
            auto curve = [&](double s) {
                CMat sx = xn;
                for (auto& v : sx.e) v *= s;
                return flag_point_of_group_element(matmul(an, expm(sx)));
            };
            auto plus = curve(h), minus = curve(-h);
            for (std::size_t i = 0; i < exact.size(); ++i) {
                std::complex<double> fd = (plus[i] - minus[i]) / (2 * h);
                std::complex<double> ex(exact[i].re.get_d(), exact[i].im.get_d());
                CHECK(std::abs(fd - ex) < 1e-8 * std::max(1.0, std::abs(ex)));
            }
        }
}

TEST_CASE("diag conjugation scales the first block") {
    QMat a = QMat::identity(3);
    a(1, 1) = QI(5);
    auto t = conjugated_tangent(a, E(3, 2, 1));
    CHECK(t == std::vector<QI>{QI(5), QI(0), QI(0)});
}

TEST_CASE("expm reproduces a nilpotent exponential") {
    CMat x(2);
    x(0, 1) = 3.0;
    CMat e = expm(x);
    CHECK(std::abs(e(0, 1) - 3.0) < 1e-14);
    CHECK(std::abs(e(0, 0) - 1.0) < 1e-14);
    CMat d(1);
    d(0, 0) = 2.0;
    CHECK(std::abs(expm(d)(0, 0) - std::exp(2.0)) < 1e-12);
}

TEST_CASE("parabolic closure examples") {
    Base flag3{BaseKind::flag, 3};
    CHECK(parabolic_closure({}, flag3) == flag3.subspace());
    auto p = parabolic_closure({E(3, 2, 1)}, flag3);
    CHECK(p.dim() == 7);
    CHECK(extract_composition(p) == Composition{2, 1});
    CHECK(extract_composition(flag3.subspace()) == Composition{1, 1, 1});
    auto full = parabolic_closure({E(3, 3, 1)}, flag3);
    CHECK(extract_composition(full) == Composition{3});
    Base hopf2{BaseKind::hopf, 2};
    CHECK(parabolic_closure({E(2, 2, 1)}, hopf2).dim() == 4);
}

TEST_CASE("closure is idempotent") {
    std::mt19937 rng(10);
    Base flag4{BaseKind::flag, 4};
    for (int k = 0; k < 10; ++k) {
        auto p = parabolic_closure({random_int(rng, 4, 1)}, flag4);
        CHECK(parabolic_closure(p.basis(), flag4) == p);
    }
}

TEST_CASE("closure agrees with the brute-force parabolic oracle") {
    std::mt19937 rng(12);
    for (std::size_t n : {3u, 4u, 5u}) {
        Base base{BaseKind::flag, n};
        std::uniform_int_distribution<std::size_t> row(1, n - 1), cnt(1, 3);
        for (int k = 0; k < 15; ++k) {
            std::vector<QMat> gens;
            std::size_t m = cnt(rng);
            for (std::size_t g = 0; g < m; ++g) {
                std::size_t i = row(rng);
                std::uniform_int_distribution<std::size_t> col(0, i - 1);
                gens.push_back(QMat::unit(n, i, col(rng)));
            }
            auto p = parabolic_closure(gens, base);
            auto expect = testing::brute_force_parabolic(n, gens);
            CHECK(extract_composition(p) == expect);
            CHECK(p == block_upper_triangular(expect));
            // fiber dimension of the generalized flag projection
            std::size_t fib = 0;
            for (auto mj : expect) fib += mj * (mj - 1) / 2;
            CHECK(p.dim() - base.subspace().dim() == fib);
        }
    }
}

TEST_CASE("non-parabolic subspace is rejected") {
    auto s = MatrixSubspace::span(2, {E(2, 2, 1)});
    CHECK_THROWS_AS(extract_composition(s), Error);
}

TEST_CASE("Hopf report") {
    for (std::size_t n : {2u, 3u, 4u}) {
        auto rep = hopf_closure_report(n);
        CHECK(rep.x0.dim() == 1 + n * (n - 1));
        for (const auto& e : rep.escapes) CHECK(e.dim() == n * n);
        CHECK(rep.verdict.find("P^" + std::to_string(n - 1)) != std::string::npos);
        // X0 pattern: first column is (x, 0, ..., 0)
        for (const auto& b : rep.x0.basis())
            for (std::size_t i = 1; i < n; ++i) CHECK(b(i, 0).is_zero());
    }
}

TEST_CASE("Grassmann spanning ranks") {
    auto x11 = E(2, 2, 1);
    CHECK(grassmann_spanning_rank(1, 1, x11).rank == 1);
    QMat x21(3);
    x21(2, 0) = QI(1);  // a = (1, 0)
    CHECK(grassmann_spanning_rank(2, 1, x21, Q(1000)).rank == 2);
    CHECK(grassmann_spanning_rank(2, 1, x21).rank == 2);
    std::mt19937 rng(13);
    QMat x = random_int(rng, 4, 3);
    x(2, 0) = QI(2);
    CHECK(grassmann_spanning_rank(2, 2, x, Q(1000)).rank == 4);
    CHECK(grassmann_spanning_rank(2, 2, x).rank == 4);
    CHECK_THROWS_AS(grassmann_spanning_rank(2, 2, QMat::identity(4)), Error);
}

TEST_CASE("Grassmann vectors carry K^2 a11 at (j, i) only") {
    std::mt19937 rng(14);
    const std::size_t p = 3, q = 2;
    QMat x = random_int(rng, p + q, 3);
    x(p, 0) = QI(3);
    auto res = grassmann_spanning_rank(p, q, x);
    QIRat K = QIRat::var();
    std::size_t idx = 0;
    for (std::size_t i = 1; i <= p; ++i)
        for (std::size_t j = 1; j <= q; ++j, ++idx) {
            const auto& v = res.vectors[idx];
            for (std::size_t r = 0; r < q; ++r)
                for (std::size_t c = 0; c < p; ++c) {
                    const auto& e = v[r * p + c];
                    if (r == j - 1 && c == i - 1) {
                        CHECK(e == K * K * QIRat(x(p, 0)));
                    } else {
                        CHECK(e.num().degree() <= 1);
                    }
                }
        }
    CHECK(res.rank == p * q);
}

TEST_CASE("Grassmann vectors equal the block of an explicit conjugation") {
    // With K = 2, build h_ij and compare its conjugation against the vectors.
    std::mt19937 rng(15);
    const std::size_t p = 2, q = 2, N = 4;
    QMat x = random_int(rng, N, 3);
    x(p, 0) = QI(1);
    const Q K(2);
    auto res = grassmann_spanning_rank(p, q, x, K);
    std::size_t idx = 0;
    for (std::size_t i = 1; i <= p; ++i)
        for (std::size_t j = 1; j <= q; ++j, ++idx) {
            QMat h(N);
            for (std::size_t r = 0; r < N; ++r) h(r, r) = QI(1);
            for (std::size_t r = 0; r < i; ++r) h(r, r) = QI(0);
            for (std::size_t r = 0; r < j; ++r) h(p + r, p + r) = QI(0);
            for (std::size_t r = 0; r < i; ++r) h(r, i - 1 - r) = QI(1);
            h(i - 1, 0) = QI(Q(1) / K);  // m with 1/K in its last row
            for (std::size_t r = 0; r < j; ++r) h(p + r, p + j - 1 - r) = QI(1);
            h(p + j - 1, p) = QI(K);
            QMat y = h * x * inverse(h);
            for (std::size_t r = 0; r < q; ++r)
                for (std::size_t c = 0; c < p; ++c) CHECK(res.vectors[idx][r * p + c] == QIRat(y(p + r, c)));
        }
}

TEST_CASE("flag spanning fails for X21") {
    for (std::size_t n : {3u, 4u, 5u}) {
        auto r = flag_spanning_rank(n, 50, 17);
        CHECK(r.first_block_only);
        CHECK(r.rank <= n - 1);
    }
}
