#include "robin/acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "robin/geometry.hpp"
#include "robin/green.hpp"
#include "robin/lie.hpp"
#include "robin/oracles.hpp"
#include "robin/torus.hpp"
#include "robin/variation.hpp"

namespace robin::acceptance {

namespace {

using geometry::cd;
using geometry::CVec;
using geometry::RVec;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Accumulates sub-checks; the first failing one is named in the detail line.
struct Checks {
    bool ok = true;
    std::ostringstream note;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) note << "FAILED " << what << "; ";
        ok = ok && cond;
    }
};

nlohmann::json unit_ball() { return {{"kind", "ball"}, {"n", 2}, {"radius", 1.0}}; }

bool within(double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); }

void ball_constant(Checks& c) {
    for (auto [N, tol] : {std::pair{32, 0.05}, std::pair{48, 0.02}}) {
        auto dom = green::grid_from_json(unit_ball(), N, RVec::Zero(4));
        auto f = green::solve_green(dom, {});
        c.note << "lambda(N=" << N << ")=" << fmt("%.6f", f.lambda) << " ";
        c.expect(within(f.lambda, -1.0, tol), "ball lambda at N=" + std::to_string(N));
    }
}

void off_center(Checks& c) {
    // image-charge value for the unit ball: lambda(y) = -1/(1 - |y|^2)^2
    const double y = 0.5, expect = -1.0 / ((1 - y * y) * (1 - y * y));
    RVec p = RVec::Zero(4);
    p[0] = y;
    auto f = green::solve_green(green::grid_from_json(unit_ball(), 32, p), {});
    c.note << "lambda(0.5)=" << fmt("%.6f", f.lambda) << " oracle=" << fmt("%.6f", expect) << " ";
    c.expect(within(f.lambda, expect, 0.05), "off-center lambda");
    auto H = green::robin_hessian(unit_ball(), 32, RVec::Zero(4), {});
    Eigen::SelfAdjointEigenSolver<geometry::CMatrix> es(H);
    auto ev = es.eigenvalues();
    c.note << "Hessian eigenvalues " << fmt("%.4f", ev[0]) << "," << fmt("%.4f", ev[1]) << " ";
    for (int k = 0; k < ev.size(); ++k) c.expect(ev[k] >= 1.6 && ev[k] <= 2.4, "Hessian eigenvalue band");
}

void second_variation(Checks& c) {
    CVec a = CVec::Zero(2);
    a[0] = 1.0;
    auto fam = variation::translation_family(2, 1.0, a);
    for (auto [N, tol] : {std::pair{32, 0.20}, std::pair{48, 0.10}}) {
        variation::VariationOptions opt;
        opt.grid = N;
        auto r = variation::second_variation_check(fam, 0.0, opt);
        c.note << "N=" << N << " lhs=" << fmt("%.5f", r.lhs) << " rhs=" << fmt("%.5f", r.rhs)
               << " mismatch=" << fmt("%.4f", r.mismatch) << " ";
        c.expect(within(r.lhs, -2.0, 0.10), "lhs closed form at N=" + std::to_string(N));
        c.expect(std::abs(r.lhs - r.rhs) <= tol * std::abs(r.lhs), "lhs vs rhs at N=" + std::to_string(N));
        c.expect(-r.lhs > 0, "sign of d2(-lambda)");
    }
}

void first_variation(Checks& c) {
    auto fam = variation::radial_family(2, 1.0);
    variation::VariationOptions opt;
    opt.grid = 32;
    auto r = variation::first_variation_check(fam, 0.0, opt);
    c.note << "lhs=" << fmt("%.5f", r.lhs.real()) << fmt("%+.2ei", r.lhs.imag()) << " rhs=" << fmt("%.5f", r.rhs.real())
           << fmt("%+.2ei", r.rhs.imag()) << " ";
    c.expect(std::abs(r.lhs - cd(1.0)) <= 0.05, "lhs closed form");
    c.expect(std::abs(r.rhs - r.lhs) <= 0.10 * std::abs(r.lhs), "boundary integral");
}

void curvature(Checks& c) {
    using namespace geometry;
    CVec z0 = CVec::Zero(2), e1 = CVec::Zero(2);
    e1[0] = 1.0;
    double wb = scalar_W(*ball_chart(2), z0), wh = scalar_W(*hopf_chart(2), e1);
    c.note << "W(ball,0)=" << fmt("%.9f", wb) << " W(hopf)=" << fmt("%.9f", wh) << " ";
    c.expect(std::abs(wb - 4.0) < 1e-4, "ball W");
    c.expect(std::abs(wh + 1.0) < 1e-4, "Hopf W");
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    double we = 0, hk = 0;
    for (int k = 0; k < 20; ++k) {
        CVec z(2);
        z << cd(U(rng), U(rng)), cd(U(rng), U(rng));
        we = std::max(we, std::abs(scalar_W(*euclidean_chart(2), z)));
        hk = std::max(hk, hodge_condition_residual(*bergman_chart(2), z).norm());
    }
    double hh = hodge_condition_residual(*hopf_chart(2), e1).norm();
    c.note << "Hodge(kahler)=" << fmt("%.2e", hk) << " Hodge(hopf)=" << fmt("%.3f", hh) << " ";
    c.expect(we == 0.0, "Euclidean W exactly zero");
    c.expect(hk < 1e-6, "Hodge residual on the Kahler ball metric");
    c.expect(hh > 0.1, "Hodge residual on the Hopf metric");
}

void torus_identities(Checks& c) {
    using namespace torus;
    std::mt19937 rng(2024);
    int bad = 0;
    for (int k = 0; k < 1000; ++k) {
        SixTuple t = oracles::random_tuple(rng, 20);
        auto fd = foliation_data(t);
        QRat p(Q(t.p)), q(Q(t.q)), one(Q(1));
        bool ok = -(fd.A * fd.A) - fd.B * fd.C == one;
        ok = ok && fd.d == QRat(Q(1, t.p * t.np));
        ok = ok && on_S(fd, {q * QRat(Q(t.m)), q * QRat(Q(t.n)), p * fd.Mp, p * QRat(Q(t.np))});
        ok = ok && on_S(fd, {p / QRat(Q(t.n)), QRat(Q(0)), q / QRat(Q(t.np)) + fd.eta * fd.Mp, fd.eta * QRat(Q(t.np))});
        ok = ok && fd.eta.degree() > 0;
        auto img = F_apply(fd, q * QRat(Q(t.m)), q * QRat(Q(t.n)));
        ok = ok && img.first == p * fd.Mp && img.second == p * QRat(Q(t.np));
        if (!ok) ++bad;
    }
    c.note << "1000 tuples, " << bad << " failures ";
    c.expect(bad == 0, "exact torus identities");
}

void closure_oracle(Checks& c) {
    using namespace lie;
    std::mt19937 rng(77);
    int cases = 0, bad = 0;
    auto check = [&](std::size_t n, const std::vector<QMat>& gens) {
        ++cases;
        auto p = parabolic_closure(gens, Base{BaseKind::flag, n});
        auto expect = oracles::brute_force_parabolic(n, gens);
        if (extract_composition(p) != expect || !(p == block_upper_triangular(expect))) ++bad;
    };
    for (std::size_t n : {3u, 4u, 5u}) {
        for (std::size_t i = 0; i + 1 < n; ++i) check(n, {QMat::unit(n, i + 1, i)});
        std::uniform_int_distribution<std::size_t> idx(0, n - 1), count(1, 3);
        std::uniform_int_distribution<long> coef(-3, 3);
        for (int k = 0; k < 100; ++k) {
            std::vector<QMat> gens(count(rng), QMat(n));
            for (auto& g : gens) {
                // a few random entries anywhere, plus one strictly below the diagonal
                std::size_t i = 1 + idx(rng) % (n - 1);
                g(i, idx(rng) % i) = QI(Q(1 + (k % 3)), Q(k % 2));
                for (int e = 0; e < 2; ++e) g(idx(rng), idx(rng)) += QI(Q(coef(rng)));
            }
            check(n, gens);
        }
    }
    c.note << cases << " generator sets, " << bad << " mismatches ";
    c.expect(bad == 0, "closure equals the brute-force parabolic");
}

void hopf_dims(Checks& c) {
    for (std::size_t n : {2u, 3u, 4u}) {
        auto rep = lie::hopf_closure_report(n);
        c.note << "n=" << n << ": dim X0=" << rep.x0.dim() << " ";
        c.expect(rep.x0.dim() == 1 + n * (n - 1), "dim X0 for n=" + std::to_string(n));
        c.expect(rep.escapes.size() == n - 1, "one escape per c_j");
        for (const auto& e : rep.escapes) c.expect(e.dim() == n * n, "escape reaches M_n");
    }
}

void spanning(Checks& c) {
    using namespace lie;
    for (auto [p, q] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
        auto r = grassmann_spanning_rank(p, q, QMat::unit(p + q, p, 0));
        c.note << "G(" << p << "," << q << ") rank " << r.rank << " ";
        c.expect(r.rank == p * q, "Grassmann rank pq");
    }
    for (std::size_t n : {3u, 4u, 5u}) {
        auto r = flag_spanning_rank(n, 50, 17);
        c.note << "flag n=" << n << " rank " << r.rank << " ";
        c.expect(r.rank <= n - 1, "flag rank bound");
    }
}

void k2_invariance(Checks& c) {
    using namespace geometry;
    CVec a(2);
    a << cd(1, 0.5), cd(-0.5, 0.25);
    auto psi = polynomial_family(2, translation_polynomial(2, 1.0, a));
    std::mt19937_64 rng(99);
    std::normal_distribution<double> N;
    RVec w(4);
    for (int i = 0; i < 4; ++i) w[i] = 0.5 * N(rng);
    auto psi2 = exp_weighted(psi, w);
    auto chart = euclidean_chart(2);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        RVec dir(4);
        for (int i = 0; i < 4; ++i) dir[i] = N(rng);
        cd t(0.2 * N(rng), 0.2 * N(rng));
        RVec x = dir.normalized() + to_real(t * a);
        worst = std::max(worst, std::abs(levi_k2(*chart, *psi, t, x) - levi_k2(*chart, *psi2, t, x)));
    }
    c.note << "max |k2 - k2'| = " << fmt("%.2e", worst) << " ";
    c.expect(worst <= 1e-8, "k2 invariance");
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Checks&)> body;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "ball Robin constant", ball_constant},
        {2, "off-center Robin function and Hessian", off_center},
        {3, "second variation, translated ball", second_variation},
        {4, "first variation, radial family", first_variation},
        {5, "curvature closed forms", curvature},
        {6, "torus exact identities", torus_identities},
        {7, "parabolic closure oracle", closure_oracle},
        {8, "Hopf closure dimensions", hopf_dims},
        {9, "spanning ranks", spanning},
        {10, "defining-function invariance of k2", k2_invariance},
    };
    return all;
}

}  // namespace

std::vector<Outcome> run(std::ostream& out, const std::vector<int>& only) {
    std::vector<Outcome> results;
    for (const auto& cr : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), cr.id) == only.end()) continue;
        Checks c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.note << "error: " << e.what() << " ";
        }
        Outcome o;
        o.id = cr.id;
        o.title = cr.title;
        o.pass = c.ok;
        o.detail = c.note.str();
        if (!o.detail.empty() && o.detail.back() == ' ') o.detail.pop_back();
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << (o.pass ? "PASS" : "FAIL") << " [" << o.id << "] " << o.title << ": " << o.detail << " ("
            << fmt("%.1f", o.seconds) << " s)" << std::endl;
        results.push_back(std::move(o));
    }
    return results;
}

}  // namespace robin::acceptance
