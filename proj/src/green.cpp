#include "robin/green.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>

#include "robin/parallel.hpp"

namespace robin::green {

// ---- c and Q0 ------------------------------------------------------------------

double CSpec::value(const RVec& x) const {
    if (!poly) return constant;
    std::vector<double> v(x.data(), x.data() + x.size());
    v.resize(poly->nvars(), 0.0);
    return poly->eval(v.data());
}

CSpec CSpec::from_json(const nlohmann::json& j, int n) {
    CSpec c;
    if (j.is_null()) return c;
    if (j.is_number()) {
        c.constant = j.get<double>();
    } else if (j.is_object()) {
        if (j.contains("constant")) c.constant = j["constant"].get<double>();
        if (j.contains("terms")) c.poly = geometry::polynomial_from_json(j, 2 * n);
    } else {
        throw validation_error("InvalidC", "c must be a number or an object");
    }
    if (c.is_constant() && c.constant < 0) throw validation_error("NegativeC", "c must be nonnegative");
    return c;
}

double Fundamental::value(double r) const {
    if (n == 1) return kappa == 0.0 ? -std::log(r) : std::cyl_bessel_k(0.0, kappa * r);
    if (kappa == 0.0) return std::pow(r, 2.0 - 2.0 * n);
    // kappa^{n-1} / ((n-2)! 2^{n-2}) r^{1-n} K_{n-1}(kappa r)
    const double pre = std::pow(kappa, n - 1) / (std::tgamma(n - 1.0) * std::pow(2.0, n - 2));
    return pre * std::pow(r, 1.0 - n) * std::cyl_bessel_k(n - 1.0, kappa * r);
}

double Fundamental::dr(double r) const {
    if (n == 1) return kappa == 0.0 ? -1.0 / r : -kappa * std::cyl_bessel_k(1.0, kappa * r);
    if (kappa == 0.0) return (2.0 - 2.0 * n) * std::pow(r, 1.0 - 2.0 * n);
    // d/dr [r^{-m} K_m(kr)] = -k r^{-m} K_{m+1}(kr)
    const int m = n - 1;
    const double pre = std::pow(kappa, m) / (std::tgamma(n - 1.0) * std::pow(2.0, n - 2));
    return -pre * kappa * std::pow(r, -m) * std::cyl_bessel_k(m + 1.0, kappa * r);
}

// ---- grid ------------------------------------------------------------------------

long GridDomain::node_count() const {
    long c = 1;
    for (int k = 0; k < dim; ++k) c *= N;
    return c;
}

long GridDomain::node_index(const std::array<int, 4>& c) const {
    long idx = 0;
    for (int k = dim - 1; k >= 0; --k) idx = idx * N + c[k];
    return idx;
}

std::array<int, 4> GridDomain::coords(long node) const {
    std::array<int, 4> c{0, 0, 0, 0};
    for (int k = 0; k < dim; ++k) {
        c[k] = static_cast<int>(node % N);
        node /= N;
    }
    return c;
}

RVec GridDomain::position(long node) const {
    auto c = coords(node);
    RVec x(dim);
    for (int k = 0; k < dim; ++k) x[k] = lo[k] + c[k] * h;
    return x;
}

namespace {

long nearest_interior_node(const GridDomain& g, const RVec& p, bool need_unknown) {
    std::array<int, 4> base{0, 0, 0, 0};
    for (int k = 0; k < g.dim; ++k) {
        double s = (p[k] - g.lo[k]) / g.h;
        if (s < 0 || s > g.N - 1) return -1;
        base[k] = std::min(static_cast<int>(std::floor(s)), g.N - 2);
    }
    long best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int m = 0; m < (1 << g.dim); ++m) {
        auto c = base;
        for (int k = 0; k < g.dim; ++k) c[k] += (m >> k) & 1;
        long node = g.node_index(c);
        bool ok = need_unknown ? g.unknown_of_node[node] >= 0 : g.psi_node[node] < 0;
        if (!ok) continue;
        double d = (g.position(node) - p).norm();
        if (d < bd) {
            bd = d;
            best = node;
        }
    }
    return best;
}

void check_pole(GridDomain& g, const GridOptions& opt) {
    if (g.pole.size() != g.dim) throw validation_error("DimensionMismatch", "pole needs 2n coordinates");
    if (!(g.psi->value(g.t, g.pole) < 0)) throw validation_error("PoleOutsideDomain", "psi(pole) >= 0");
    if (nearest_interior_node(g, g.pole, true) < 0)
        throw validation_error("PoleOutsideDomain", "pole is not in the solved component");
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : g.crossings) d = std::min(d, (c.point - g.pole).norm());
    g.pole_distance = d;
    if (d < opt.pole_margin_cells * g.h)
        throw validation_error("PoleTooCloseToBoundary", "pole is " + std::to_string(d / g.h) +
                                                             " cells from the boundary");
}

}  // namespace

GridDomain GridDomain::build(PsiPtr psi, cd t, const RVec& lo, double width, int nodes_per_axis,
                             const RVec& pole, const GridOptions& opt) {
    GridDomain g;
    g.n = psi->n();
    g.dim = 2 * g.n;
    if (g.n < 1 || g.n > 2) throw validation_error("InvalidDimension", "the grid solver supports n = 1, 2");
    if (nodes_per_axis < 8) throw validation_error("InvalidGrid", "need at least 8 nodes per axis");
    if (!(width > 0)) throw validation_error("InvalidGrid", "box width must be positive");
    if (lo.size() != g.dim) throw validation_error("InvalidGrid", "box corner needs 2n coordinates");
    g.N = nodes_per_axis;
    g.lo = lo;
    g.h = width / (nodes_per_axis - 1);
    g.psi = psi;
    g.t = t;
    g.pole = pole;
    const long total = g.node_count();
    g.psi_node.resize(total);
    for (long i = 0; i < total; ++i) g.psi_node[i] = psi->value(t, g.position(i));

    // flood fill the component of {psi < 0} containing the pole
    g.kind.assign(total, NodeKind::exterior);
    g.unknown_of_node.assign(total, -1);
    if (pole.size() != g.dim) throw validation_error("DimensionMismatch", "pole needs 2n coordinates");
    long start = nearest_interior_node(g, pole, false);
    if (start < 0) throw validation_error("PoleOutsideDomain", "no interior node next to the pole");
    std::vector<char> seen(total, 0);
    std::deque<long> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        long v = queue.front();
        queue.pop_front();
        auto c = g.coords(v);
        for (int k = 0; k < g.dim; ++k)
            for (int s : {-1, 1}) {
                int ck = c[k] + s;
                if (ck < 0 || ck >= g.N) throw validation_error("BoxTooSmall", "domain reaches the grid box");
                auto e = c;
                e[k] = ck;
                long w = g.node_index(e);
                if (!seen[w] && g.psi_node[w] < 0) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            }
    }
    for (long i = 0; i < total; ++i)
        if (seen[i]) {
            g.unknown_of_node[i] = static_cast<int>(g.node_of_unknown.size());
            g.node_of_unknown.push_back(i);
            g.kind[i] = NodeKind::interior;
        }

    const std::size_t M = g.node_of_unknown.size();
    g.nbr.assign(M, std::vector<int>(2 * g.dim, -1));
    g.first_crossing.assign(M, 0);
    g.crossing_count.assign(M, 0);
    for (std::size_t u = 0; u < M; ++u) {
        const long node = g.node_of_unknown[u];
        auto c = g.coords(node);
        const RVec x = g.position(node);
        g.first_crossing[u] = static_cast<int>(g.crossings.size());
        for (int k = 0; k < g.dim; ++k)
            for (int si = 0; si < 2; ++si) {
                const int s = si ? 1 : -1;
                auto e = c;
                e[k] += s;
                long w = g.node_index(e);
                int uw = g.unknown_of_node[w];
                if (uw >= 0) {
                    g.nbr[u][2 * k + si] = uw;
                    continue;
                }
                auto f = [&](double a) {
                    RVec y = x;
                    y[k] += s * a;
                    return g.psi->value(t, y);
                };
                double fa = g.psi_node[node], fb = g.psi_node[w];
                double root;
                if (fb <= 0) {
                    root = g.h;  // touches psi = 0 at the far node
                } else {
                    std::uintmax_t iters = 100;
                    auto tol = [&](double a, double b) { return std::abs(b - a) <= opt.root_tol * g.h; };
                    auto r = boost::math::tools::toms748_solve(f, 0.0, g.h, fa, fb, tol, iters);
                    root = 0.5 * (r.first + r.second);
                }
                Crossing cr;
                cr.unknown = static_cast<int>(u);
                cr.axis = k;
                cr.dir = s;
                cr.theta = std::max(root / g.h, opt.theta_min);
                cr.point = x;
                cr.point[k] += s * root;
                g.crossings.push_back(std::move(cr));
                g.crossing_count[u]++;
            }
        if (g.crossing_count[u] > 0) g.kind[node] = NodeKind::near_boundary;
    }
    check_pole(g, opt);
    return g;
}

GridDomain GridDomain::with_pole(const RVec& p, const GridOptions& opt) const {
    GridDomain g = *this;
    g.pole = p;
    check_pole(g, opt);
    return g;
}

nlohmann::ordered_json GridDomain::describe() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["nodes_per_axis"] = N;
    j["h"] = h;
    j["lo"] = std::vector<double>(lo.data(), lo.data() + lo.size());
    j["unknowns"] = unknowns();
    j["crossings"] = crossings.size();
    j["pole_distance"] = pole_distance;
    return j;
}

// ---- linear solve -------------------------------------------------------------------

std::vector<double> solve_dirichlet(const GridDomain& dom, const std::vector<double>& c_unknown,
                                    const std::vector<double>& boundary_values,
                                    const std::vector<double>& source, const SolverOptions& opt,
                                    SolveStats& stats) {
    const std::size_t M = dom.unknowns();
    const int nn = 2 * dom.dim;
    const double off = 0.5 / (dom.h * dom.h);
    std::vector<double> diag(M), b(source);
    if (b.size() != M || c_unknown.size() != M || boundary_values.size() != dom.crossings.size())
        throw contract_error("SizeMismatch", "solver inputs do not match the grid");
    for (std::size_t u = 0; u < M; ++u) {
        double d = c_unknown[u];
        for (int q = 0; q < nn; ++q)
            if (dom.nbr[u][q] >= 0) d += off;
        for (int k = 0; k < dom.crossing_count[u]; ++k) {
            const auto& cr = dom.crossings[dom.first_crossing[u] + k];
            d += off / cr.theta;
            b[u] += off / cr.theta * boundary_values[dom.first_crossing[u] + k];
        }
        diag[u] = d;
    }
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t u = 0; u < M; ++u) {
            double s = diag[u] * x[u];
            const auto& nb = dom.nbr[u];
            for (int q = 0; q < nn; ++q)
                if (nb[q] >= 0) s -= off * x[nb[q]];
            y[u] = s;
        }
    };
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0;
        for (std::size_t i = 0; i < M; ++i) s += a[i] * c[i];
        return s;
    };
    std::vector<double> x(M, 0.0);
    if (opt.warm_start && opt.warm_start->size() == M) x = *opt.warm_start;
    const double bnorm = std::sqrt(dot(b, b));
    stats = {};
    if (bnorm == 0.0) return std::vector<double>(M, 0.0);
    std::vector<double> r(M), z(M), p(M), Ap(M);
    apply(x, Ap);
    for (std::size_t i = 0; i < M; ++i) r[i] = b[i] - Ap[i];
    for (std::size_t i = 0; i < M; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = dot(r, z);
    long cap = opt.max_iter > 0 ? opt.max_iter
                                : static_cast<long>(50.0 * std::sqrt(static_cast<double>(M)) * dom.N);
    double rnorm = std::sqrt(dot(r, r));
    long it = 0;
    while (rnorm > opt.rel_tol * bnorm) {
        if (it >= cap)
            throw nonconvergence_error("NonconvergentSolver", "CG hit the iteration cap at relative residual " +
                                                                  std::to_string(rnorm / bnorm));
        apply(p, Ap);
        const double alpha = rz / dot(p, Ap);
        for (std::size_t i = 0; i < M; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        for (std::size_t i = 0; i < M; ++i) z[i] = r[i] / diag[i];
        const double rz2 = dot(r, z);
        const double beta = rz2 / rz;
        rz = rz2;
        for (std::size_t i = 0; i < M; ++i) p[i] = z[i] + beta * p[i];
        rnorm = std::sqrt(dot(r, r));
        ++it;
    }
    // true residual, not the recurrence
    apply(x, Ap);
    double tr = 0;
    for (std::size_t i = 0; i < M; ++i) tr += (b[i] - Ap[i]) * (b[i] - Ap[i]);
    stats.residual = std::sqrt(tr) / bnorm;
    stats.iterations = it;
    return x;
}

// ---- interpolation ------------------------------------------------------------------

namespace {

std::optional<double> lagrange_at(const GridDomain& dom, const std::vector<double>& f, const RVec& x, int order) {
    const int m = order + 1;
    std::array<int, 4> base{0, 0, 0, 0};
    std::array<std::vector<double>, 4> w;
    for (int k = 0; k < dom.dim; ++k) {
        const double s = (x[k] - dom.lo[k]) / dom.h;
        int b = static_cast<int>(std::floor(s)) - (m / 2 - 1);
        if (b < 0 || b + m - 1 >= dom.N) return std::nullopt;
        base[k] = b;
        w[k].assign(m, 1.0);
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l)
                if (l != j) w[k][j] *= (s - (b + l)) / static_cast<double>(j - l);
    }
    long count = 1;
    for (int k = 0; k < dom.dim; ++k) count *= m;
    double acc = 0;
    for (long idx = 0; idx < count; ++idx) {
        long r = idx;
        std::array<int, 4> c{0, 0, 0, 0};
        double wt = 1.0;
        for (int k = 0; k < dom.dim; ++k) {
            int j = static_cast<int>(r % m);
            r /= m;
            c[k] = base[k] + j;
            wt *= w[k][j];
        }
        int u = dom.unknown_of_node[dom.node_index(c)];
        if (u < 0) return std::nullopt;
        acc += wt * f[u];
    }
    return acc;
}

// derivative at 0 of the Lagrange polynomial through (s_j, v_j)
double lagrange_slope_at_zero(const std::vector<double>& s, const std::vector<double>& v) {
    const std::size_t m = s.size();
    double d = 0;
    for (std::size_t j = 0; j < m; ++j) {
        double lj = 0;
        for (std::size_t a = 0; a < m; ++a) {
            if (a == j) continue;
            double term = 1.0 / (s[j] - s[a]);
            for (std::size_t l = 0; l < m; ++l)
                if (l != j && l != a) term *= (0.0 - s[l]) / (s[j] - s[l]);
            lj += term;
        }
        d += lj * v[j];
    }
    return d;
}

}  // namespace

double interpolate(const GridDomain& dom, const std::vector<double>& f, const RVec& x, int* order) {
    for (int o : {5, 3, 1}) {
        if (auto v = lagrange_at(dom, f, x, o)) {
            if (order) *order = o;
            return *v;
        }
    }
    throw validation_error("OutsideDomain", "interpolation stencil leaves the domain");
}

// ---- Green field --------------------------------------------------------------------

double GreenField::g_at_node(long unknown) const {
    const auto& dom = *domain;
    double r = (dom.position(dom.node_of_unknown[unknown]) - dom.pole).norm();
    return Q0.value(r) + u[unknown];
}

std::optional<double> GreenField::u_at(const RVec& x) const { return lagrange_at(*domain, u, x, 1); }

double GreenField::dnu_g(const RVec& p, const RVec& nu, bool* fallback) const {
    const auto& dom = *domain;
    RVec d = p - dom.pole;
    const double r = d.norm();
    double dq = Q0.dr(r) * d.dot(nu) / r;
    std::vector<double> s{0.0}, v{-Q0.value(r)};
    for (int shift = 0; shift < 4 && s.size() < 4; ++shift) {
        s.resize(1);
        v.resize(1);
        for (int k = 0; k < 3; ++k) {
            double dist = (2.2 + shift + k) * dom.h;
            if (auto val = u_at(p - dist * nu)) {
                s.push_back(-dist);
                v.push_back(*val);
            } else {
                break;
            }
        }
    }
    if (fallback) *fallback = s.size() < 4;
    if (s.size() < 2) return dq;
    return dq + lagrange_slope_at_zero(s, v);
}

nlohmann::ordered_json GreenField::to_json() const {
    nlohmann::ordered_json j;
    j["lambda"] = lambda;
    j["residual"] = residual;
    j["iterations"] = iterations;
    j["grid"] = domain->describe();
    j["pole"] = std::vector<double>(domain->pole.data(), domain->pole.data() + domain->pole.size());
    j["min_g"] = min_g;
    j["interp_order"] = interp_order;
    return j;
}

GreenField solve_green(std::shared_ptr<const GridDomain> domain, const CSpec& c, const SolverOptions& opt) {
    const auto& dom = *domain;
    GreenField gf;
    gf.domain = domain;
    gf.c = c;
    const double c0 = c.value(dom.pole);
    if (c0 < 0) throw validation_error("NegativeC", "c(pole) < 0");
    gf.Q0 = Fundamental{dom.n, std::sqrt(2.0 * c0)};
    const std::size_t M = dom.unknowns();
    gf.c_unknown.resize(M);
    std::vector<double> source(M, 0.0);
    for (std::size_t u = 0; u < M; ++u) {
        RVec x = dom.position(dom.node_of_unknown[u]);
        double cv = c.is_constant() ? c.constant : c.value(x);
        if (cv < 0) throw validation_error("NegativeC", "c < 0 inside the domain");
        gf.c_unknown[u] = cv;
        double r = (x - dom.pole).norm();
        if (cv != c0 && r > 1e-12 * dom.h) source[u] = -(cv - c0) * gf.Q0.value(r);
    }
    std::vector<double> bv(dom.crossings.size());
    for (std::size_t k = 0; k < bv.size(); ++k) bv[k] = -gf.Q0.value((dom.crossings[k].point - dom.pole).norm());
    SolveStats st;
    gf.u = solve_dirichlet(dom, gf.c_unknown, bv, source, opt, st);
    gf.residual = st.residual;
    gf.iterations = st.iterations;
    gf.lambda = interpolate(dom, gf.u, dom.pole, &gf.interp_order);
    gf.min_g = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < M; ++u) gf.min_g = std::min(gf.min_g, gf.g_at_node(static_cast<long>(u)));
    return gf;
}

// ---- JSON plumbing ------------------------------------------------------------------

BoxSpec box_for_domain(const nlohmann::json& domain, double margin) {
    const int n = domain.at("n").get<int>();
    BoxSpec b;
    if (domain.contains("box")) {
        auto lo = domain["box"].at("lo").get<std::vector<double>>();
        if (static_cast<int>(lo.size()) != 2 * n) throw validation_error("InvalidGrid", "box.lo needs 2n entries");
        b.lo = Eigen::Map<RVec>(lo.data(), 2 * n);
        b.width = domain["box"].at("width").get<double>();
        return b;
    }
    if (domain.at("kind") == "ball") {
        double R = domain.value("radius", 1.0);
        RVec c = RVec::Zero(2 * n);
        if (domain.contains("center")) {
            auto v = domain["center"].get<std::vector<double>>();
            if (static_cast<int>(v.size()) != 2 * n) throw validation_error("InvalidDomain", "center needs 2n entries");
            c = Eigen::Map<RVec>(v.data(), 2 * n);
        }
        b.lo = c - RVec::Constant(2 * n, R * (1 + margin));
        b.width = 2 * R * (1 + margin);
        return b;
    }
    throw validation_error("InvalidGrid", "polynomial domains need a box {\"lo\":[..],\"width\":w}");
}

std::shared_ptr<const GridDomain> grid_from_json(const nlohmann::json& domain, int nodes_per_axis, const RVec& pole,
                                                 const GridOptions& opt) {
    auto psi = geometry::domain_from_json(domain);
    auto box = box_for_domain(domain);
    return std::make_shared<const GridDomain>(GridDomain::build(psi, 0.0, box.lo, box.width, nodes_per_axis, pole, opt));
}

// ---- Robin function -----------------------------------------------------------------

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string RobinFunctionField::to_csv() const {
    std::ostringstream os;
    const int dim = samples.empty() ? 4 : static_cast<int>(samples[0].pole.size());
    for (int k = 0; k < dim; ++k) os << "x" << (k + 1) << ",";
    os << "Lambda\n";
    for (const auto& s : samples) {
        for (int k = 0; k < dim; ++k) os << fmt17(s.pole[k]) << ",";
        os << fmt17(s.Lambda) << "\n";
    }
    return os.str();
}

nlohmann::ordered_json RobinFunctionField::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : samples) {
        nlohmann::ordered_json j;
        j["pole"] = std::vector<double>(s.pole.data(), s.pole.data() + s.pole.size());
        j["Lambda"] = s.Lambda;
        j["residual"] = s.residual;
        arr.push_back(j);
    }
    return nlohmann::ordered_json{{"samples", arr}};
}

RobinFunctionField robin_function(const nlohmann::json& domain, int nodes_per_axis, const std::vector<RVec>& poles,
                                  const CSpec& c) {
    if (poles.empty()) return {};
    auto base = grid_from_json(domain, nodes_per_axis, poles[0]);
    auto res = parallel_map<RobinSample>(poles.size(), [&](std::size_t i) {
        auto g = std::make_shared<const GridDomain>(base->with_pole(poles[i]));
        auto gf = solve_green(g, c);
        return RobinSample{poles[i], gf.lambda, gf.residual};
    });
    return RobinFunctionField{res};
}

CMatrix complex_hessian(const std::function<double(const RVec&)>& f, const RVec& x, double h) {
    const int dim = static_cast<int>(x.size()), n = dim / 2;
    // directions: e_a, then e_a + e_b and e_a + i e_b for a < b
    std::vector<CVec> dirs;
    for (int a = 0; a < n; ++a) dirs.push_back(CVec::Unit(n, a));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            dirs.push_back(CVec::Unit(n, a) + CVec::Unit(n, b));
            dirs.push_back(CVec::Unit(n, a) + cd(0, 1) * CVec::Unit(n, b));
        }
    std::vector<RVec> pts{x};
    const double off[4] = {-2, -1, 1, 2};
    for (const auto& v : dirs)
        for (cd unit : {cd(1, 0), cd(0, 1)})
            for (double o : off) pts.push_back(x + geometry::to_real(o * h * unit * v));
    auto vals = parallel_map<double>(pts.size(), [&](std::size_t i) { return f(pts[i]); });
    const double f0 = vals[0];
    std::vector<double> L;
    std::size_t at = 1;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        double lap = 0;
        for (int u = 0; u < 2; ++u) {
            const double fm2 = vals[at], fm1 = vals[at + 1], fp1 = vals[at + 2], fp2 = vals[at + 3];
            at += 4;
            lap += (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        }
        L.push_back(0.25 * lap);
    }
    CMatrix H = CMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) H(a, a) = L[a];
    std::size_t k = n;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            const double re = 0.5 * (L[k] - L[a] - L[b]);
            const double im = 0.5 * (L[k + 1] - L[a] - L[b]);
            k += 2;
            H(a, b) = cd(re, im);
            H(b, a) = cd(re, -im);
        }
    return H;
}

CMatrix robin_hessian(const nlohmann::json& domain, int nodes_per_axis, const RVec& z, const CSpec& c, double h_t) {
    auto base = grid_from_json(domain, nodes_per_axis, z);
    if (h_t <= 0) h_t = 0.05 * base->pole_distance;
    auto center = solve_green(base, c);
    auto f = [&](const RVec& p) {
        std::shared_ptr<const GridDomain> g;
        try {
            g = std::make_shared<const GridDomain>(base->with_pole(p));
        } catch (const Error& e) {
            if (e.kind() == "PoleTooCloseToBoundary" || e.kind() == "PoleOutsideDomain")
                throw validation_error("StencilOutOfRange", e.what());
            throw;
        }
        SolverOptions so;
        so.warm_start = &center.u;
        return -solve_green(g, c, so).lambda;
    };
    return complex_hessian(f, z, h_t);
}

std::vector<FlatDirection> hessian_flat_directions(const CMatrix& H, double tol_eig) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
    std::vector<FlatDirection> out;
    for (int k = 0; k < H.rows(); ++k) {
        const double ev = es.eigenvalues()[k];
        out.push_back({ev, es.eigenvectors().col(k), ev < tol_eig});
    }
    return out;
}

}  // namespace robin::green
