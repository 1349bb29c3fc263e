#include "robin/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "robin/parallel.hpp"

namespace robin::variation {

using green::GridDomain;
using geometry::RealPoly;

RVec Frame::apply(cd t, const RVec& x) const {
    return (1.0 + scale * t.real()) * x + t.real() * shift1 + t.imag() * shift2;
}

green::BoxSpec DomainFamily::box_at(cd t) const {
    if (!frame) return box0;
    green::BoxSpec b;
    b.lo = frame->apply(t, box0.lo);
    b.width = (1.0 + frame->scale * t.real()) * box0.width;
    if (!(b.width > 0)) throw validation_error("InvalidFamily", "frame collapses the grid box");
    return b;
}

std::shared_ptr<const GridDomain> DomainFamily::grid(cd t, int nodes_per_axis) const {
    auto b = box_at(t);
    return std::make_shared<const GridDomain>(GridDomain::build(psi, t, b.lo, b.width, nodes_per_axis, pole));
}

namespace {

RVec read_vec(const nlohmann::json& j, int len, const char* what) {
    auto v = j.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != len)
        throw validation_error("InvalidFamily", std::string(what) + " needs " + std::to_string(len) + " entries");
    return Eigen::Map<RVec>(v.data(), len);
}

// complex vector as [[re, im], ...] or a flat real list of length 2n
CVec read_cvec(const nlohmann::json& j, int n) {
    CVec a(n);
    if (j.size() == static_cast<std::size_t>(n) && j[0].is_array()) {
        for (int k = 0; k < n; ++k) a[k] = cd(j[k].at(0).get<double>(), j[k].at(1).get<double>());
    } else {
        RVec x = read_vec(j, 2 * n, "a");
        a = geometry::to_complex(x);
    }
    return a;
}

RealPoly shape_polynomial(const nlohmann::json& d, int n) {
    const std::string kind = d.at("kind").get<std::string>();
    if (kind == "ball") {
        RVec c = d.contains("center") ? read_vec(d["center"], 2 * n, "center") : RVec::Zero(2 * n);
        return geometry::ball_polynomial(n, d.value("radius", 1.0), c);
    }
    if (kind == "polynomial") return geometry::polynomial_from_json(d, 2 * n + 2);
    throw validation_error("InvalidFamily", "unknown shape kind '" + kind + "'");
}

// phi(x - Re t A - Im t B) for phi over (x, t) variables that ignores t
RealPoly translate(const RealPoly& phi, int n, const RVec& A, const RVec& B) {
    const int m = 2 * n + 2;
    std::vector<RealPoly> img;
    RealPoly t1 = RealPoly::variable(m, 2 * n), t2 = RealPoly::variable(m, 2 * n + 1);
    for (int k = 0; k < 2 * n; ++k) img.push_back(RealPoly::variable(m, k) - (A[k] * t1 + B[k] * t2));
    img.push_back(t1);
    img.push_back(t2);
    return phi.substitute(img);
}

void read_common(DomainFamily& f, const nlohmann::json& j) {
    f.pole = j.contains("pole") ? read_vec(j["pole"], 2 * f.n, "pole") : RVec::Zero(2 * f.n);
    if (j.contains("t_center")) {
        RVec tc = read_vec(j["t_center"], 2, "t_center");
        f.t_center = cd(tc[0], tc[1]);
    }
    f.rho = j.value("rho", f.rho);
    if (!(f.rho > 0)) throw validation_error("InvalidFamily", "rho must be positive");
    f.c = green::CSpec::from_json(j.contains("c") ? j["c"] : nlohmann::json(), f.n);
    f.pseudoconvex = j.value("pseudoconvex", f.pseudoconvex);
}

}  // namespace

DomainFamily translation_family(int n, double radius, const CVec& a, double rho) {
    nlohmann::json j = {{"kind", "translation"}, {"n", n}, {"rho", rho}, {"pseudoconvex", true},
                        {"shape", {{"kind", "ball"}, {"n", n}, {"radius", radius}}}};
    nlohmann::json av = nlohmann::json::array();
    for (int k = 0; k < n; ++k) av.push_back({a[k].real(), a[k].imag()});
    j["a"] = av;
    return DomainFamily::from_json(j);
}

DomainFamily radial_family(int n, double radius, double rho) {
    return DomainFamily::from_json(
        {{"kind", "radial"}, {"n", n}, {"radius", radius}, {"rho", rho}, {"pseudoconvex", true}});
}

DomainFamily static_family(const nlohmann::json& domain, double rho) {
    return DomainFamily::from_json({{"kind", "static"}, {"domain", domain}, {"rho", rho}});
}

DomainFamily DomainFamily::from_json(const nlohmann::json& j) {
    DomainFamily f;
    f.kind = j.at("kind").get<std::string>();
    if (f.kind == "static") {
        const auto& d = j.at("domain");
        f.n = d.at("n").get<int>();
        f.psi = geometry::domain_from_json(d);
        f.box0 = green::box_for_domain(d);
    } else {
        f.n = j.at("n").get<int>();
        if (f.n < 1 || f.n > 2) throw validation_error("InvalidDimension", "families need n = 1 or 2");
        if (f.kind == "translation") {
            nlohmann::json shape = j.contains("shape") ? j["shape"]
                                                       : nlohmann::json{{"kind", "ball"}, {"n", f.n},
                                                                        {"radius", j.value("radius", 1.0)}};
            if (!shape.contains("n")) shape["n"] = f.n;
            CVec a = read_cvec(j.at("a"), f.n);
            RVec A = geometry::to_real(a), B = geometry::to_real(cd(0, 1) * a);
            f.psi = geometry::polynomial_family(f.n, translate(shape_polynomial(shape, f.n), f.n, A, B));
            f.box0 = green::box_for_domain(shape);
            f.frame = Frame{A, B, 0.0};
        } else if (f.kind == "radial") {
            const double R = j.value("radius", 1.0);
            f.psi = geometry::polynomial_family(f.n, geometry::radial_polynomial(f.n, R));
            f.box0 = green::box_for_domain({{"kind", "ball"}, {"n", f.n}, {"radius", R}});
            f.frame = Frame{RVec::Zero(2 * f.n), RVec::Zero(2 * f.n), 1.0};
        } else if (f.kind == "polynomial") {
            f.psi = geometry::polynomial_family(f.n, geometry::polynomial_from_json(j, 2 * f.n + 2));
            f.box0 = green::box_for_domain(j);
            if (j.contains("frame")) {
                const auto& fr = j["frame"];
                Frame fm;
                fm.shift1 = fr.contains("shift1") ? read_vec(fr["shift1"], 2 * f.n, "shift1") : RVec::Zero(2 * f.n);
                fm.shift2 = fr.contains("shift2") ? read_vec(fr["shift2"], 2 * f.n, "shift2") : RVec::Zero(2 * f.n);
                fm.scale = fr.value("scale", 0.0);
                f.frame = fm;
            }
        } else {
            throw validation_error("InvalidFamily", "unknown family kind '" + f.kind + "'");
        }
    }
    read_common(f, j);
    return f;
}

double lambda_of_t(const DomainFamily& fam, cd t, int nodes_per_axis) {
    if (std::abs(t - fam.t_center) > fam.rho) throw validation_error("OutsideDisk", "t is outside the parameter disk");
    return green::solve_green(fam.grid(t, nodes_per_axis), fam.c).lambda;
}

// ---- boundary quadrature --------------------------------------------------------------

namespace {

double simplex_measure(const std::vector<RVec>& pts) {
    const int k = static_cast<int>(pts.size()) - 1;
    if (k <= 0) return 0.0;
    Eigen::MatrixXd E(pts[0].size(), k);
    for (int i = 0; i < k; ++i) E.col(i) = pts[i + 1] - pts[0];
    const double det = (E.transpose() * E).determinant();
    return std::sqrt(std::max(det, 0.0)) / std::tgamma(k + 1.0);
}

// Staircase triangulation of the zero set inside one simplex.
void simplex_zero_set(const std::vector<RVec>& v, const std::vector<double>& f, double& area, RVec& moment) {
    std::vector<int> A, B;
    for (std::size_t i = 0; i < v.size(); ++i) (f[i] < 0 ? A : B).push_back(static_cast<int>(i));
    if (A.empty() || B.empty()) return;
    auto P = [&](int a, int b) {
        const double s = f[a] / (f[a] - f[b]);
        return RVec(v[a] + s * (v[b] - v[a]));
    };
    const int p = static_cast<int>(A.size()) - 1, q = static_cast<int>(B.size()) - 1;
    // monotone lattice paths from (0,0) to (p,q)
    const int steps = p + q;
    for (int mask = 0; mask < (1 << steps); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != p) continue;
        std::vector<RVec> pts;
        int i = 0, j = 0;
        pts.push_back(P(A[0], B[0]));
        for (int s = 0; s < steps; ++s) {
            if ((mask >> s) & 1) ++i;
            else ++j;
            pts.push_back(P(A[i], B[j]));
        }
        const double m = simplex_measure(pts);
        RVec c = RVec::Zero(v[0].size());
        for (const auto& x : pts) c += x;
        c /= static_cast<double>(pts.size());
        area += m;
        moment += m * c;
    }
}

}  // namespace

std::vector<BoundaryPiece> boundary_pieces(const GridDomain& dom) {
    const int dim = dom.dim;
    const int corners = 1 << dim;
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> simplices;  // corner masks per Kuhn simplex
    do {
        std::vector<int> s{0};
        int m = 0;
        for (int k = 0; k < dim; ++k) {
            m |= 1 << perm[k];
            s.push_back(m);
        }
        simplices.push_back(s);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<BoundaryPiece> out;
    long cells = 1;
    for (int k = 0; k < dim; ++k) cells *= dom.N - 1;
    std::vector<long> corner_off(corners);
    for (int m = 0; m < corners; ++m) {
        std::array<int, 4> c{0, 0, 0, 0};
        for (int k = 0; k < dim; ++k) c[k] = (m >> k) & 1;
        corner_off[m] = dom.node_index(c);
    }
    std::vector<double> fc(corners);
    for (long cell = 0; cell < cells; ++cell) {
        std::array<int, 4> c{0, 0, 0, 0};
        long r = cell;
        for (int k = 0; k < dim; ++k) {
            c[k] = static_cast<int>(r % (dom.N - 1));
            r /= dom.N - 1;
        }
        const long base = dom.node_index(c);
        bool neg = false, pos = false, in_component = false;
        for (int m = 0; m < corners; ++m) {
            const long node = base + corner_off[m];
            fc[m] = dom.psi_node[node];
            (fc[m] < 0 ? neg : pos) = true;
            if (dom.unknown_of_node[node] >= 0) in_component = true;
        }
        if (!(neg && pos && in_component)) continue;
        const RVec x0 = dom.position(base);
        double area = 0;
        RVec moment = RVec::Zero(dim);
        std::vector<RVec> v(dim + 1);
        std::vector<double> f(dim + 1);
        for (const auto& s : simplices) {
            for (int i = 0; i <= dim; ++i) {
                v[i] = x0;
                for (int k = 0; k < dim; ++k)
                    if ((s[i] >> k) & 1) v[i][k] += dom.h;
                f[i] = fc[s[i]];
            }
            simplex_zero_set(v, f, area, moment);
        }
        if (area <= 0) continue;
        RVec p = moment / area;
        // project the centroid onto psi = 0
        RVec grad;
        for (int it = 0; it < 4; ++it) {
            auto jet = dom.psi->real_jet(dom.t, p);
            grad = jet.grad.head(dim);
            const double g2 = grad.squaredNorm();
            if (g2 == 0) throw validation_error("ZeroGradient", "grad psi vanishes on the boundary");
            p -= jet.value / g2 * grad;
        }
        out.push_back({p, grad.normalized(), area});
    }
    return out;
}

// ---- reports ------------------------------------------------------------------------------

nlohmann::ordered_json VariationReport::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json ls = nlohmann::ordered_json::array();
    for (const auto& [t, l] : lambda_samples) ls.push_back({{"t", {t.real(), t.imag()}}, {"lambda", l}});
    j["lambda_samples"] = ls;
    j["lhs"] = lhs;
    j["rhs_boundary"] = rhs_boundary;
    j["rhs_volume"] = rhs_volume;
    j["rhs_volume_norm_form"] = rhs_volume_norm_form;
    j["rhs_cross"] = rhs_cross;
    j["rhs"] = rhs;
    j["mismatch"] = mismatch;
    j["boundary_area"] = boundary_area;
    j["min_k2"] = min_k2;
    j["normal_fit_fallbacks"] = normal_fit_fallbacks;
    j["h_t"] = h_t;
    j["grid"] = grid;
    return j;
}

nlohmann::ordered_json FirstVariation::to_json() const {
    nlohmann::ordered_json j;
    j["lhs"] = {lhs.real(), lhs.imag()};
    j["rhs"] = {rhs.real(), rhs.imag()};
    j["mismatch"] = mismatch;
    return j;
}

nlohmann::ordered_json SubharmonicityReport::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json s = nlohmann::ordered_json::array();
    for (const auto& x : samples) s.push_back({{"t", {x.t.real(), x.t.imag()}}, {"value", x.value}});
    j["samples"] = s;
    j["min_value"] = min_value;
    j["tol_sub"] = tol_sub;
    j["min_k2"] = min_k2;
    j["ok"] = ok;
    return j;
}

namespace {

struct Stencil {
    std::vector<cd> ts;
    std::vector<double> lambdas;
    double h = 0;
    int points = 3;
    // first derivative along the real direction dir (0: t1, 1: t2)
    double d1(int dir) const {
        const int b = 1 + dir * (points - 1);
        if (points == 3) return (lambdas[b + 1] - lambdas[b]) / (2 * h);
        // order: -h, +h, -2h, +2h
        return (8 * (lambdas[b + 1] - lambdas[b]) - (lambdas[b + 3] - lambdas[b + 2])) / (12 * h);
    }
    double d2(int dir) const {
        const int b = 1 + dir * (points - 1);
        const double f0 = lambdas[0];
        if (points == 3) return (lambdas[b] + lambdas[b + 1] - 2 * f0) / (h * h);
        return (16 * (lambdas[b] + lambdas[b + 1]) - (lambdas[b + 2] + lambdas[b + 3]) - 30 * f0) / (12 * h * h);
    }
};

Stencil lambda_stencil(const DomainFamily& fam, cd t0, const VariationOptions& opt) {
    if (opt.stencil != 3 && opt.stencil != 5) throw validation_error("InvalidStencil", "stencil must be 3 or 5");
    Stencil s;
    s.h = opt.h_t > 0 ? opt.h_t : 0.05 * fam.rho;
    s.points = opt.stencil;
    s.ts.push_back(t0);
    for (cd unit : {cd(1, 0), cd(0, 1)}) {
        s.ts.push_back(t0 - s.h * unit);
        s.ts.push_back(t0 + s.h * unit);
        if (s.points == 5) {
            s.ts.push_back(t0 - 2 * s.h * unit);
            s.ts.push_back(t0 + 2 * s.h * unit);
        }
    }
    for (cd t : s.ts)
        if (std::abs(t - fam.t_center) > fam.rho)
            throw validation_error("OutsideDisk", "t-stencil leaves the parameter disk");
    s.lambdas = parallel_map<double>(s.ts.size(), [&](std::size_t i) { return lambda_of_t(fam, s.ts[i], opt.grid); });
    return s;
}

struct Shape {
    std::vector<double> f[2];       // dg/dt_tau per unknown
    std::vector<double> fb[2];      // per crossing
    std::vector<char> valid;        // per unknown, difference method may drop nodes
};

Shape shape_derivative(const DomainFamily& fam, const green::GreenField& gf, cd t0, double h_t,
                       const std::string& method, long& fallbacks) {
    const auto& dom = *gf.domain;
    const std::size_t M = dom.unknowns();
    const int dim = dom.dim;
    Shape sh;
    if (method == "shape") {
        for (int tau = 0; tau < 2; ++tau) sh.fb[tau].resize(dom.crossings.size());
        for (std::size_t k = 0; k < dom.crossings.size(); ++k) {
            const RVec& q = dom.crossings[k].point;
            auto jet = dom.psi->real_jet(t0, q);
            RVec grad = jet.grad.head(dim);
            const double gn = grad.norm();
            if (gn == 0) throw validation_error("ZeroGradient", "grad psi vanishes on the boundary");
            bool fb = false;
            const double dnu = gf.dnu_g(q, grad / gn, &fb);
            fallbacks += fb;
            for (int tau = 0; tau < 2; ++tau) sh.fb[tau][k] = dnu * jet.grad[dim + tau] / gn;
        }
        std::vector<double> zero(M, 0.0);
        for (int tau = 0; tau < 2; ++tau) {
            green::SolveStats st;
            sh.f[tau] = green::solve_dirichlet(dom, gf.c_unknown, sh.fb[tau], zero, {}, st);
        }
        sh.valid.assign(M, 1);
        return sh;
    }
    if (method != "difference") throw validation_error("InvalidOption", "dgdt must be 'shape' or 'difference'");
    // field differencing on the t0 box
    const RVec lo = dom.lo;
    const double width = dom.h * (dom.N - 1);
    std::vector<green::GreenField> fields;
    for (int tau = 0; tau < 2; ++tau)
        for (int s : {-1, 1}) {
            cd t = t0 + static_cast<double>(s) * h_t * (tau == 0 ? cd(1, 0) : cd(0, 1));
            auto g = std::make_shared<const GridDomain>(GridDomain::build(dom.psi, t, lo, width, dom.N, dom.pole));
            fields.push_back(green::solve_green(g, fam.c));
        }
    sh.valid.assign(M, 1);
    for (int tau = 0; tau < 2; ++tau) {
        sh.f[tau].assign(M, 0.0);
        sh.fb[tau].assign(dom.crossings.size(), 0.0);
    }
    for (std::size_t u = 0; u < M; ++u) {
        const long node = dom.node_of_unknown[u];
        const bool near_pole = (dom.position(node) - dom.pole).norm() < 3 * dom.h;
        for (int tau = 0; tau < 2; ++tau) {
            const auto& m = fields[2 * tau];
            const auto& p = fields[2 * tau + 1];
            const int um = m.domain->unknown_of_node[node], up = p.domain->unknown_of_node[node];
            if (um < 0 || up < 0) {
                if (near_pole) throw validation_error("GridMismatch", "mask changes next to the pole; refine h_t");
                sh.valid[u] = 0;
                continue;
            }
            sh.f[tau][u] = (p.u[up] - m.u[um]) / (2 * h_t);
        }
    }
    return sh;
}

struct Volume {
    double grad_term = 0;  // int sum_a |d f_t / dzbar_a|^2 dV
    double c_term = 0;     // int c |f_t|^2 dV
};

Volume volume_integrals(const GridDomain& dom, const Shape& sh, const std::vector<double>& c_unknown,
                        bool use_boundary) {
    const std::size_t M = dom.unknowns();
    const int dim = dom.dim, n = dom.n;
    const double dV = std::pow(dom.h, dim);
    Volume v;
    for (std::size_t u = 0; u < M; ++u) {
        if (!sh.valid[u]) continue;
        // real gradients of both real shape fields
        double grad[2][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}};
        bool ok = true;
        for (int k = 0; k < dim && ok; ++k) {
            double hs[2] = {0, 0};
            double vals[2][2];
            for (int si = 0; si < 2; ++si) {
                const int nb = dom.nbr[u][2 * k + si];
                if (nb >= 0 && sh.valid[nb]) {
                    hs[si] = dom.h;
                    for (int tau = 0; tau < 2; ++tau) vals[tau][si] = sh.f[tau][nb];
                } else if (nb < 0 && use_boundary) {
                    const int dir = si ? 1 : -1;
                    for (int q = 0; q < dom.crossing_count[u]; ++q) {
                        const int ci = dom.first_crossing[u] + q;
                        const auto& cr = dom.crossings[ci];
                        if (cr.axis == k && cr.dir == dir) {
                            hs[si] = cr.theta * dom.h;
                            for (int tau = 0; tau < 2; ++tau) vals[tau][si] = sh.fb[tau][ci];
                        }
                    }
                } else {
                    ok = false;
                }
            }
            if (!ok || hs[0] == 0 || hs[1] == 0) {
                ok = false;
                break;
            }
            const double hm = hs[0], hp = hs[1];
            for (int tau = 0; tau < 2; ++tau) {
                const double f0 = sh.f[tau][u], fm = vals[tau][0], fp = vals[tau][1];
                grad[tau][k] = (hm * hm * (fp - f0) + hp * hp * (f0 - fm)) / (hm * hp * (hm + hp));
            }
        }
        if (!ok) continue;
        // f_t = (f_1 - i f_2)/2, d/dzbar_a = (d_x + i d_y)/2
        double s = 0;
        for (int a = 0; a < n; ++a) {
            const cd dx(0.5 * grad[0][2 * a], -0.5 * grad[1][2 * a]);
            const cd dy(0.5 * grad[0][2 * a + 1], -0.5 * grad[1][2 * a + 1]);
            s += std::norm(0.5 * (dx + cd(0, 1) * dy));
        }
        v.grad_term += s * dV;
        const cd ft(0.5 * sh.f[0][u], -0.5 * sh.f[1][u]);
        v.c_term += c_unknown[u] * std::norm(ft) * dV;
    }
    return v;
}

}  // namespace

VariationReport second_variation_check(const DomainFamily& fam, cd t0, const VariationOptions& opt) {
    VariationReport rep;
    rep.grid = opt.grid;
    const auto cn = geometry::DimensionalConstants::of(fam.n);
    if (fam.n < 2) throw validation_error("InvalidDimension", "the variation formulas need n >= 2");
    Stencil st = lambda_stencil(fam, t0, opt);
    rep.h_t = st.h;
    for (std::size_t i = 0; i < st.ts.size(); ++i) rep.lambda_samples.push_back({st.ts[i], st.lambdas[i]});
    rep.lhs = 0.25 * (st.d2(0) + st.d2(1));

    auto dom = fam.grid(t0, opt.grid);
    auto gf = green::solve_green(dom, fam.c);
    auto chart = geometry::euclidean_chart(fam.n);
    geometry::LeviOptions lo;
    lo.tol_bdry = 1e-6;
    double I = 0, area = 0;
    rep.min_k2 = std::numeric_limits<double>::infinity();
    for (const auto& piece : boundary_pieces(*dom)) {
        bool fb = false;
        const double dnu = gf.dnu_g(piece.point, piece.normal, &fb);
        rep.normal_fit_fallbacks += fb;
        const double k2 = geometry::levi_k2(*chart, *fam.psi, t0, piece.point, lo);
        rep.min_k2 = std::min(rep.min_k2, k2);
        // sum |g_{z_a}|^2 = |grad g|^2 / 4 and grad g is normal on the boundary
        I += piece.area * k2 * 0.25 * dnu * dnu;
        area += piece.area;
    }
    rep.boundary_area = area;
    rep.rhs_boundary = -cn.c_n * I;

    Shape sh = shape_derivative(fam, gf, t0, st.h, opt.dgdt, rep.normal_fit_fallbacks);
    Volume vol = volume_integrals(*dom, sh, gf.c_unknown, opt.dgdt == "shape");
    rep.rhs_volume = -4.0 * cn.c_n * vol.grad_term - 2.0 * cn.c_n * vol.c_term;
    // ||dbar f||^2 = 2^n int sum |f_zbar|^2 dV, ||sqrt(c) f||^2 = 2^n int c |f|^2 dV
    const double two_n = std::pow(2.0, fam.n);
    rep.rhs_volume_norm_form =
        -cn.c_n / std::pow(2.0, fam.n - 2) * (two_n * vol.grad_term + 0.5 * two_n * vol.c_term);
    rep.rhs_cross = 0.0;
    rep.rhs = rep.rhs_boundary + rep.rhs_volume + rep.rhs_cross;
    const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    rep.mismatch = scale > 0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
    return rep;
}

FirstVariation first_variation_check(const DomainFamily& fam, cd t0, const VariationOptions& opt) {
    const auto cn = geometry::DimensionalConstants::of(fam.n);
    if (fam.n < 2) throw validation_error("InvalidDimension", "the variation formulas need n >= 2");
    Stencil st = lambda_stencil(fam, t0, opt);
    FirstVariation fv;
    fv.lhs = 0.5 * cd(st.d1(0), -st.d1(1));
    auto dom = fam.grid(t0, opt.grid);
    auto gf = green::solve_green(dom, fam.c);
    auto chart = geometry::euclidean_chart(fam.n);
    geometry::LeviOptions lo;
    lo.tol_bdry = 1e-6;
    cd I = 0;
    for (const auto& piece : boundary_pieces(*dom)) {
        const double dnu = gf.dnu_g(piece.point, piece.normal);
        I += piece.area * geometry::levi_k1(*chart, *fam.psi, t0, piece.point, lo) * 0.25 * dnu * dnu;
    }
    fv.rhs = -cn.c_n * I;
    const double scale = std::max(std::abs(fv.lhs), std::abs(fv.rhs));
    fv.mismatch = scale > 0 ? std::abs(fv.lhs - fv.rhs) / scale : 0.0;
    return fv;
}

SubharmonicityReport subharmonicity_scan(const DomainFamily& fam, const std::vector<cd>& ts,
                                         const VariationOptions& opt) {
    SubharmonicityReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.min_k2 = std::numeric_limits<double>::infinity();
    auto chart = geometry::euclidean_chart(fam.n);
    geometry::LeviOptions lo;
    lo.tol_bdry = 1e-6;
    rep.ok = true;
    for (cd t : ts) {
        Stencil st = lambda_stencil(fam, t, opt);
        const double value = -0.25 * (st.d2(0) + st.d2(1));
        rep.samples.push_back({t, value});
        rep.min_value = std::min(rep.min_value, value);
        const double tol = 5e-3 * std::max(1.0, std::abs(value));
        rep.tol_sub = std::max(rep.tol_sub, tol);
        if (value < -tol) rep.ok = false;
        auto dom = fam.grid(t, opt.grid);
        for (const auto& piece : boundary_pieces(*dom))
            rep.min_k2 = std::min(rep.min_k2, geometry::levi_k2(*chart, *fam.psi, t, piece.point, lo));
    }
    if (fam.pseudoconvex && rep.min_k2 < -1e-8)
        throw validation_error("NotPseudoconvex", "sampled k2 < 0 on a family claimed pseudoconvex");
    return rep;
}

}  // namespace robin::variation
