#include "robin/api.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "robin/errors.hpp"
#include "robin/lie.hpp"
#include "robin/torus.hpp"

namespace robin::api {

using geometry::cd;
using geometry::CVec;
using geometry::RVec;

namespace {

void write_value(std::ostringstream& os, const ordered_json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << ordered_json(it.key()).dump() << ": ";
                write_value(os, it.value(), depth + 1);
            }
            os << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // short numeric rows stay on one line
            bool flat = j.size() <= 8 && std::all_of(j.begin(), j.end(), [](const ordered_json& e) {
                            return e.is_primitive();
                        });
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    write_value(os, j[i], depth + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_value(os, j[i], depth + 1);
            }
            os << "\n" << close << "]";
            return;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                os << "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf;
            return;
        }
        default:
            os << j.dump();
    }
}

RVec to_rvec(const std::vector<double>& v) { return Eigen::Map<const RVec>(v.data(), static_cast<long>(v.size())); }

ordered_json cjson(cd z) { return ordered_json::array({z.real(), z.imag()}); }

int domain_dim(const json& domain) {
    if (!domain.is_object() || !domain.contains("n")) throw validation_error("InvalidDomain", "domain needs n");
    return domain.at("n").get<int>();
}

RVec pole_vec(const std::vector<double>& pole, int n) {
    if (pole.empty()) return RVec::Zero(2 * n);
    if (static_cast<int>(pole.size()) != 2 * n) throw validation_error("DimensionMismatch", "pole needs 2n coordinates");
    return to_rvec(pole);
}

void check_grid(int grid) {
    if (grid < 4) throw validation_error("InvalidGrid", "grid needs at least 4 nodes per axis");
}

// ---- lie matrices ------------------------------------------------------------

QI parse_entry(const json& e) {
    if (e.is_number_integer()) return QI(Q(e.get<long>()));
    if (e.is_string()) return parse_gaussian(e.get<std::string>());
    throw validation_error("ParseError", "matrix entries are integers or \"re\" / \"re,im\" strings");
}

// Nested arrays of entries, or the shorthand "E21" for the unit matrix E_{2,1}.
lie::QMat parse_matrix(const json& j, std::size_t n) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s.size() == 3 && s[0] == 'E' && std::isdigit(s[1]) && std::isdigit(s[2])) {
            std::size_t i = s[1] - '0', k = s[2] - '0';
            if (i < 1 || k < 1 || i > n || k > n) throw validation_error("DimensionMismatch", s + " outside M_n");
            return lie::QMat::unit(n, i - 1, k - 1);
        }
        throw validation_error("ParseError", "unknown matrix shorthand '" + s + "'");
    }
    if (!j.is_array() || j.size() != n) throw validation_error("DimensionMismatch", "matrix must have n rows");
    lie::QMat m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) throw validation_error("DimensionMismatch", "matrix must be n x n");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = parse_entry(j[i][k]);
    }
    return m;
}

std::vector<lie::QMat> parse_matrices(const json& j, std::size_t n) {
    const json& list = j.is_object() ? j.at("gens") : j;
    if (list.is_string()) return {parse_matrix(list, n)};
    // a single nested matrix is also accepted
    if (list.is_array() && !list.empty() && list[0].is_array() && !list[0].empty() && !list[0][0].is_array() &&
        list.size() == n)
        return {parse_matrix(list, n)};
    std::vector<lie::QMat> out;
    for (const auto& m : list) out.push_back(parse_matrix(m, n));
    return out;
}

ordered_json qi_list(const std::vector<QI>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

ordered_json subspace_json(const lie::MatrixSubspace& s) {
    ordered_json j;
    j["dim"] = s.dim();
    try {
        j["composition"] = lie::extract_composition(s);
    } catch (const Error&) {
        j["composition"] = nullptr;
    }
    return j;
}

// ---- torus -------------------------------------------------------------------

torus::SixTuple tuple_from(const std::vector<long>& v) {
    if (v.size() != 6) throw validation_error("ParseError", "expected six integers m n m' n' p q");
    torus::SixTuple t{v[0], v[1], v[2], v[3], v[4], v[5]};
    t.validate();
    return t;
}

ordered_json tuple_json(const torus::SixTuple& t) { return ordered_json::array({t.m, t.n, t.mp, t.np, t.p, t.q}); }

ordered_json direction_json(const torus::TorusDirection& d) {
    ordered_json j;
    j["a"] = to_string(d.a);
    j["b"] = to_string(d.b);
    j["case"] = torus::to_string(d.tag);
    j["cannot_occur"] = d.cannot_occur;
    j["slope_pq"] = d.slope_pq ? ordered_json::array({d.slope_pq->first, d.slope_pq->second}) : ordered_json(nullptr);
    j["xi_offset"] = d.xi_offset ? ordered_json(to_string(*d.xi_offset)) : ordered_json(nullptr);
    j["tuple"] = d.tuple ? tuple_json(*d.tuple) : ordered_json(nullptr);
    j["verdict"] = d.verdict;
    return j;
}

ordered_json foliation_json(const torus::FoliationData& fd) {
    ordered_json j;
    j["tuple"] = tuple_json(fd.tuple);
    j["a"] = to_string(fd.a);
    j["b"] = to_string(fd.b);
    j["A"] = to_string(fd.A);
    j["B"] = to_string(fd.B);
    j["C"] = to_string(fd.C);
    QRat jac = -(fd.A * fd.A) - fd.B * fd.C;
    if (!(jac == QRat(Q(1))))
        throw contract_error("JacobianIdentity", "-A^2 - BC = " + to_string(jac) + ", expected 1");
    j["jacobian"] = to_string(jac);
    j["M_prime"] = to_string(fd.Mp);
    j["L1_dir"] = ordered_json::array({fd.L1_dir.first, fd.L1_dir.second});
    j["L2_dir"] = ordered_json::array({to_string(fd.L2_dir.first), fd.L2_dir.second});
    ordered_json gens = ordered_json::array();
    for (const auto& g : fd.gens) {
        ordered_json v = ordered_json::array();
        for (const auto& c : g) v.push_back(to_string(c));
        gens.push_back(v);
    }
    j["generators"] = gens;
    j["d"] = to_string(fd.d);
    j["eta"] = to_string(fd.eta);
    return j;
}

}  // namespace

std::string write_json(const ordered_json& j) {
    std::ostringstream os;
    write_value(os, j, 0);
    os << "\n";
    return os.str();
}

ordered_json green_solve(const json& domain, int grid, const std::vector<double>& pole, const json& c) {
    check_grid(grid);
    const int n = domain_dim(domain);
    auto cs = green::CSpec::from_json(c, n);
    return green::solve_green(green::grid_from_json(domain, grid, pole_vec(pole, n)), cs).to_json();
}

green::RobinFunctionField robin_function(const json& domain, int grid, const std::vector<std::vector<double>>& poles,
                                         const json& c) {
    check_grid(grid);
    const int n = domain_dim(domain);
    std::vector<RVec> ps;
    for (const auto& p : poles) ps.push_back(pole_vec(p, n));
    return green::robin_function(domain, grid, ps, green::CSpec::from_json(c, n));
}

ordered_json robin_hessian(const json& domain, int grid, const std::vector<double>& pole, const json& c,
                           double h_t, double tol_eig) {
    check_grid(grid);
    const int n = domain_dim(domain);
    auto H = green::robin_hessian(domain, grid, pole_vec(pole, n), green::CSpec::from_json(c, n), h_t);
    ordered_json j;
    ordered_json hj = ordered_json::array();
    for (int r = 0; r < H.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < H.cols(); ++k) row.push_back(cjson(H(r, k)));
        hj.push_back(row);
    }
    j["hessian"] = hj;
    ordered_json dirs = ordered_json::array();
    for (const auto& d : green::hessian_flat_directions(H, tol_eig)) {
        ordered_json v = ordered_json::array();
        for (int k = 0; k < d.eigenvector.size(); ++k) v.push_back(cjson(d.eigenvector[k]));
        dirs.push_back({{"eigenvalue", d.eigenvalue}, {"eigenvector", v}, {"flat", d.flat}});
    }
    j["eigen"] = dirs;
    return j;
}

ordered_json variation(const json& family, cd t0, const std::string& check, const variation::VariationOptions& opt,
                       int lattice) {
    auto fam = variation::DomainFamily::from_json(family);
    if (opt.stencil != 3 && opt.stencil != 5) throw validation_error("InvalidStencil", "stencil is 3 or 5");
    if (opt.dgdt != "shape" && opt.dgdt != "difference")
        throw validation_error("InvalidOption", "dgdt is shape or difference");
    if (check == "second") return variation::second_variation_check(fam, t0, opt).to_json();
    if (check == "first") return variation::first_variation_check(fam, t0, opt).to_json();
    if (check == "subharmonic") {
        if (lattice < 1) throw validation_error("InvalidOption", "lattice needs at least one point per side");
        // square inscribed in the half-radius disk
        std::vector<cd> ts;
        const double half = 0.5 * fam.rho / std::sqrt(2.0);
        for (int i = 0; i < lattice; ++i)
            for (int k = 0; k < lattice; ++k) {
                double u = lattice == 1 ? 0.0 : -half + 2 * half * i / (lattice - 1);
                double v = lattice == 1 ? 0.0 : -half + 2 * half * k / (lattice - 1);
                ts.push_back(fam.t_center + cd(u, v));
            }
        return variation::subharmonicity_scan(fam, ts, opt).to_json();
    }
    throw validation_error("InvalidOption", "check is second, first or subharmonic");
}

ordered_json levi(const json& chart_j, const json& family, cd t, const std::vector<double>& xs) {
    auto fam = variation::DomainFamily::from_json(family);
    auto chart = chart_j.is_null() ? geometry::euclidean_chart(fam.n) : geometry::chart_from_json(chart_j);
    if (chart->n() != fam.n) throw validation_error("DimensionMismatch", "chart and family dimensions differ");
    if (static_cast<int>(xs.size()) != 2 * fam.n) throw validation_error("DimensionMismatch", "x needs 2n coordinates");
    RVec x = to_rvec(xs);
    CVec z = geometry::to_complex(x);
    ordered_json j;
    j["psi"] = fam.psi->value(t, x);
    j["k1"] = cjson(geometry::levi_k1(*chart, *fam.psi, t, x));
    j["k2"] = geometry::levi_k2(*chart, *fam.psi, t, x);
    j["K2"] = geometry::levi_K2(*chart, *fam.psi, t, x);
    j["hodge_residual"] = geometry::hodge_condition_residual(*chart, z).norm();
    j["kahler_residual"] = geometry::kahler_residual(*chart, z);
    j["W"] = geometry::scalar_W(*chart, z);
    return j;
}

ordered_json torus_from_tuple(const std::vector<long>& tuple) {
    auto t = tuple_from(tuple);
    auto d = torus::direction_from_tuple(t);
    ordered_json j;
    j["tuple"] = tuple_json(t);
    j["a"] = to_string(d.a);
    j["b"] = to_string(d.b);
    return j;
}

ordered_json torus_foliation(const std::vector<long>& tuple, const std::optional<std::string>& sigma) {
    auto fd = torus::foliation_data(tuple_from(tuple));
    ordered_json j = foliation_json(fd);
    if (sigma) {
        auto comma = sigma->find(',');
        if (comma == std::string::npos) throw validation_error("ParseError", "sigma expects t,t'");
        Q t = parse_rational(sigma->substr(0, comma)), tp = parse_rational(sigma->substr(comma + 1));
        j["sigma_same_leaf"] = torus::sigma_same_leaf(fd, t, tp);
    }
    return j;
}

ordered_json torus_classify(const std::string& a, const std::string& b, long height) {
    return direction_json(torus::classify_direction(parse_ratfunc(a), parse_ratfunc(b), height));
}

ordered_json torus_classify_generator(const std::string& are, const std::string& aim, const std::string& bre,
                                      const std::string& bim, long height) {
    auto p = [](const std::string& s) { return s.empty() ? QRat(Q(0)) : parse_ratfunc(s); };
    return direction_json(torus::classify_generator(p(are), p(aim), p(bre), p(bim), height));
}

ordered_json lie_closure(std::size_t n, const std::string& base, const json& gens) {
    if (base != "flag" && base != "hopf") throw validation_error("ParseError", "base is flag or hopf");
    if (n < 1) throw validation_error("DimensionMismatch", "n must be positive");
    lie::Base b{base == "flag" ? lie::BaseKind::flag : lie::BaseKind::hopf, n};
    auto p = lie::parabolic_closure(parse_matrices(gens, n), b);
    ordered_json j;
    j["composition"] = subspace_json(p)["composition"];
    j["dim"] = p.dim();
    return j;
}

ordered_json lie_tangent(std::size_t n, const json& matrix, const json& conjugate) {
    auto x = parse_matrix(matrix, n);
    ordered_json j;
    j["tangent"] = qi_list(lie::flag_tangent(x));
    if (!conjugate.is_null()) {
        auto A = parse_matrix(conjugate, n);
        auto t1 = lie::conjugated_tangent(A, x), t2 = lie::conjugated_tangent_adjoint(A, x);
        if (t1 != t2) throw contract_error("TangentMismatch", "explicit and adjoint tangents differ");
        j["conjugated_tangent"] = qi_list(t1);
    }
    return j;
}

ordered_json lie_grassmann(std::size_t p, std::size_t q, const std::optional<std::string>& K, const json& matrix) {
    if (p == 0 || q == 0) throw validation_error("DimensionMismatch", "p and q must be positive");
    lie::QMat x = matrix.is_null() ? lie::QMat::unit(p + q, p, 0) : parse_matrix(matrix, p + q);
    std::optional<Q> k;
    if (K) k = parse_rational(*K);
    auto r = lie::grassmann_spanning_rank(p, q, x, k);
    ordered_json j;
    j["p"] = p;
    j["q"] = q;
    j["K"] = K ? ordered_json(*K) : ordered_json("formal");
    j["rank"] = r.rank;
    j["full"] = r.rank == p * q;
    j["pivot"] = ordered_json::array({r.pivot_row + 1, r.pivot_col + 1});
    return j;
}

ordered_json lie_flag(std::size_t n, std::size_t samples, unsigned seed) {
    if (n < 2) throw validation_error("DimensionMismatch", "flag spanning needs n >= 2");
    auto r = lie::flag_spanning_rank(n, samples, seed);
    ordered_json j;
    j["n"] = n;
    j["rank"] = r.rank;
    j["flag_dim"] = n * (n - 1) / 2;
    j["first_block_only"] = r.first_block_only;
    j["samples"] = r.samples;
    return j;
}

ordered_json lie_hopf(std::size_t n) {
    if (n < 2) throw validation_error("DimensionMismatch", "Hopf report needs n >= 2");
    auto rep = lie::hopf_closure_report(n);
    ordered_json j;
    j["n"] = rep.n;
    j["x0_dim"] = rep.x0.dim();
    ordered_json esc = ordered_json::array();
    for (const auto& e : rep.escapes) esc.push_back(e.dim());
    j["escape_dims"] = esc;
    j["verdict"] = rep.verdict;
    return j;
}

}  // namespace robin::api
