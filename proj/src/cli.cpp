#include "robin/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "robin/acceptance.hpp"
#include "robin/api.hpp"
#include "robin/errors.hpp"

namespace robin::cli {

using nlohmann::json;
using nlohmann::ordered_json;
using geometry::cd;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("InputNotFound", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw validation_error("ParseError", path + ": " + e.what());
    }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> v;
    if (s.empty()) return v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw validation_error("ParseError", "bad number '" + item + "' in " + what);
        }
    }
    return v;
}

cd parse_complex(const std::string& s, const std::string& what) {
    auto v = parse_list(s, what);
    if (v.empty() || v.size() > 2) throw validation_error("ParseError", what + " expects re[,im]");
    return {v[0], v.size() == 2 ? v[1] : 0.0};
}

// --c takes a number or a JSON file describing c
json read_c(const std::string& s) {
    if (s.empty()) return nullptr;
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    return read_json_file(s);
}

json optional_file(const std::string& path) { return path.empty() ? json(nullptr) : read_json_file(path); }

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw validation_error("OutputError", "cannot write '" + path + "'");
    f << text;
}

struct GreenArgs {
    std::string domain, pole, c, poles, format = "json";
    int grid = 32;
    bool hessian = false;
    double tol_eig = 1e-2, h_t = 0.0;
};

std::string run_green(const GreenArgs& a) {
    json dom = read_json_file(a.domain);
    json c = read_c(a.c);
    if (a.format != "json" && a.format != "csv") throw validation_error("ParseError", "format is json or csv");
    if (!a.poles.empty()) {
        auto poles = read_json_file(a.poles).get<std::vector<std::vector<double>>>();
        auto field = api::robin_function(dom, a.grid, poles, c);
        return a.format == "csv" ? field.to_csv() : api::write_json(field.to_json());
    }
    auto pole = parse_list(a.pole, "--pole");
    if (a.format == "csv") return api::robin_function(dom, a.grid, {pole}, c).to_csv();
    ordered_json j = api::green_solve(dom, a.grid, pole, c);
    if (a.hessian) {
        auto h = api::robin_hessian(dom, a.grid, pole, c, a.h_t, a.tol_eig);
        j["hessian"] = h["hessian"];
        j["eigen"] = h["eigen"];
    }
    return api::write_json(j);
}

}  // namespace

std::string write_json(const ordered_json& j) { return api::write_json(j); }

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robin constants, Levi curvature and exact Lie/torus tools", "robin"};
    app.require_subcommand(1);
    std::string out_path;

    GreenArgs ga;
    auto* green_cmd = app.add_subcommand("green", "c-Green function and Robin constant on a gridded domain");
    green_cmd->add_option("--domain", ga.domain, "domain JSON")->required();
    green_cmd->add_option("--grid", ga.grid, "nodes per axis");
    green_cmd->add_option("--pole", ga.pole, "pole as x1,...,x2n");
    green_cmd->add_option("--c", ga.c, "constant c or a JSON file");
    green_cmd->add_option("--poles", ga.poles, "JSON list of poles: Robin function");
    green_cmd->add_option("--format", ga.format, "json or csv");
    green_cmd->add_flag("--hessian", ga.hessian, "complex Hessian of -Lambda at the pole");
    green_cmd->add_option("--tol-eig", ga.tol_eig, "flat-direction threshold");
    green_cmd->add_option("--ht", ga.h_t, "Hessian step (0: automatic)");

    std::string family, t0 = "0", check = "second";
    variation::VariationOptions vopt;
    int lattice = 3;
    auto* var_cmd = app.add_subcommand("variation", "first and second variation of the Robin constant");
    var_cmd->add_option("--family", family, "family JSON")->required();
    var_cmd->add_option("--t0", t0, "base parameter re[,im]");
    var_cmd->add_option("--ht", vopt.h_t, "parameter step (0: 0.05 rho)");
    var_cmd->add_option("--grid", vopt.grid, "nodes per axis");
    var_cmd->add_option("--check", check, "second, first or subharmonic");
    var_cmd->add_option("--stencil", vopt.stencil, "3 or 5 points per direction");
    var_cmd->add_option("--dgdt", vopt.dgdt, "shape or difference");
    var_cmd->add_option("--lattice", lattice, "points per side for the subharmonic scan");

    std::string chart, levi_t = "0", levi_x;
    auto* levi_cmd = app.add_subcommand("levi", "Levi curvatures and metric invariants at a boundary point");
    levi_cmd->add_option("--chart", chart, "metric chart JSON (default Euclidean)");
    levi_cmd->add_option("--family", family, "family JSON")->required();
    levi_cmd->add_option("--t", levi_t, "parameter re[,im]");
    levi_cmd->add_option("--x", levi_x, "boundary point x1,...,x2n")->required();

    auto* torus_cmd = app.add_subcommand("torus", "exact Grauert torus computations");
    torus_cmd->require_subcommand(1);
    std::vector<long> tuple;
    auto* from_tuple = torus_cmd->add_subcommand("from-tuple", "direction (a, b) of a six-tuple");
    from_tuple->add_option("tuple", tuple, "m n m' n' p q")->expected(6)->required();
    auto* foliation = torus_cmd->add_subcommand("foliation", "plane S, generators, d and eta");
    foliation->add_option("tuple", tuple, "m n m' n' p q")->expected(6)->required();
    std::string sigma;
    foliation->add_option("--sigma", sigma, "t,t' rationals: same leaf of Sigma?");
    std::string ca, cb, are, aim, bre, bim;
    long height = 50;
    auto* classify = torus_cmd->add_subcommand("classify", "classify a direction (--a --b) or a generator");
    classify->add_option("--a", ca, "Re(beta/alpha) in Q(xi)");
    classify->add_option("--b", cb, "Im(beta/alpha) in Q(xi)");
    classify->add_option("--alpha-re", are);
    classify->add_option("--alpha-im", aim);
    classify->add_option("--beta-re", bre);
    classify->add_option("--beta-im", bim);
    classify->add_option("--height", height, "tuple search height");

    auto* lie_cmd = app.add_subcommand("lie", "exact matrix Lie algebra tools");
    lie_cmd->require_subcommand(1);
    std::size_t ln = 3;
    std::string base = "flag", gens_path, matrix_path, conj_path;
    auto* closure = lie_cmd->add_subcommand("closure", "minimal subalgebra containing base and generators");
    closure->add_option("--n", ln)->required();
    closure->add_option("--base", base, "flag or hopf");
    closure->add_option("--gens", gens_path, "generators JSON")->required();
    auto* tangent = lie_cmd->add_subcommand("tangent", "flag-manifold tangent of a matrix");
    tangent->add_option("--n", ln)->required();
    tangent->add_option("--matrix", matrix_path, "matrix JSON")->required();
    tangent->add_option("--conjugate", conj_path, "upper-triangular A: tangent of A exp(tX)(O)");
    std::vector<std::size_t> grass;
    std::size_t flag_n = 0, samples = 50;
    unsigned seed = 17;
    std::string K;
    auto* spanning = lie_cmd->add_subcommand("spanning", "spanning ranks");
    auto* g_opt = spanning->add_option("--grassmann", grass, "p q")->expected(2);
    auto* f_opt = spanning->add_option("--flag", flag_n, "n");
    g_opt->excludes(f_opt);
    spanning->add_option("--K", K, "numeric scale (default formal)");
    spanning->add_option("--matrix", matrix_path, "X (default E_{p+1,1})");
    spanning->add_option("--samples", samples);
    spanning->add_option("--seed", seed);
    auto* hopf = lie_cmd->add_subcommand("hopf", "Hopf subalgebra report");
    hopf->add_option("--n", ln)->required();

    for (auto* s : {green_cmd, var_cmd, levi_cmd, from_tuple, foliation, classify, closure, tangent, spanning, hopf})
        s->add_option("--out", out_path, "output file");

    std::vector<int> only;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--only", only, "criterion numbers")->delimiter(',');

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        ordered_json j;
        std::string text;
        if (*green_cmd) {
            text = run_green(ga);
        } else if (*var_cmd) {
            j = api::variation(read_json_file(family), parse_complex(t0, "--t0"), check, vopt, lattice);
        } else if (*levi_cmd) {
            j = api::levi(optional_file(chart), read_json_file(family), parse_complex(levi_t, "--t"),
                          parse_list(levi_x, "--x"));
        } else if (*from_tuple) {
            j = api::torus_from_tuple(tuple);
        } else if (*foliation) {
            j = api::torus_foliation(tuple, sigma.empty() ? std::nullopt : std::optional<std::string>(sigma));
        } else if (*classify) {
            if (!ca.empty() || !cb.empty()) {
                if (ca.empty() || cb.empty()) throw validation_error("ParseError", "--a and --b go together");
                j = api::torus_classify(ca, cb, height);
            } else {
                j = api::torus_classify_generator(are, aim, bre, bim, height);
            }
        } else if (*closure) {
            j = api::lie_closure(ln, base, read_json_file(gens_path));
        } else if (*tangent) {
            j = api::lie_tangent(ln, read_json_file(matrix_path), optional_file(conj_path));
        } else if (*spanning) {
            if (!grass.empty())
                j = api::lie_grassmann(grass[0], grass[1], K.empty() ? std::nullopt : std::optional<std::string>(K),
                                       optional_file(matrix_path));
            else if (flag_n > 0)
                j = api::lie_flag(flag_n, samples, seed);
            else
                throw validation_error("ParseError", "spanning needs --grassmann p q or --flag n");
        } else if (*hopf) {
            j = api::lie_hopf(ln);
        } else if (*selftest) {
            auto res = acceptance::run(out, only);
            auto passed = std::count_if(res.begin(), res.end(), [](const auto& o) { return o.pass; });
            out << passed << "/" << res.size() << " criteria passed\n";
            return passed == static_cast<long>(res.size()) ? 0 : 1;
        }
        emit(text.empty() ? api::write_json(j) : text, out_path, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.error_class()) {
            case ErrorClass::Validation: return 2;
            case ErrorClass::Nonconvergence: return 3;
            case ErrorClass::Contract: return 4;
        }
        return 4;
    } catch (const json::exception& e) {
        err << "error: invalid input: " << e.what() << "\n";
        return 2;
    }
}

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, out, err);
}

}  // namespace robin::cli
