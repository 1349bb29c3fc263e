// Thin bindings: JSON strings in and out, the Python package decodes them.
#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include <sstream>

#include "robin/acceptance.hpp"
#include "robin/api.hpp"
#include "robin/cli.hpp"
#include "robin/errors.hpp"

namespace py = pybind11;
using nlohmann::json;
using robin::api::ordered_json;

namespace {

json parse(const std::string& s) { return s.empty() ? json(nullptr) : json::parse(s); }
std::string dump(const ordered_json& j) { return j.dump(); }

template <class F>
std::string call(F&& f) {
    py::gil_scoped_release release;
    return dump(f());
}

}  // namespace

PYBIND11_MODULE(_robin, m) {
    m.doc() = "Robin constants, Levi curvature and exact Lie/torus computations";

    // args are (kind, message)
    static py::handle error_type = py::exception<robin::Error>(m, "RobinError").release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const robin::Error& e) {
            PyErr_SetObject(error_type.ptr(), py::make_tuple(e.kind(), std::string(e.what())).ptr());
        }
    });

    m.def("green_solve", [](const std::string& domain, int grid, const std::vector<double>& pole, const std::string& c) {
        return call([&] { return robin::api::green_solve(parse(domain), grid, pole, parse(c)); });
    });
    m.def("robin_function", [](const std::string& domain, int grid, const std::vector<std::vector<double>>& poles,
                               const std::string& c, bool csv) {
        py::gil_scoped_release release;
        auto f = robin::api::robin_function(parse(domain), grid, poles, parse(c));
        return csv ? f.to_csv() : dump(f.to_json());
    });
    m.def("robin_hessian", [](const std::string& domain, int grid, const std::vector<double>& pole, const std::string& c,
                              double h_t, double tol_eig) {
        return call([&] { return robin::api::robin_hessian(parse(domain), grid, pole, parse(c), h_t, tol_eig); });
    });
    m.def("variation", [](const std::string& family, std::complex<double> t0, const std::string& check, int grid,
                          double h_t, int stencil, const std::string& dgdt, int lattice) {
        robin::variation::VariationOptions opt;
        opt.grid = grid;
        opt.h_t = h_t;
        opt.stencil = stencil;
        opt.dgdt = dgdt;
        return call([&] { return robin::api::variation(parse(family), t0, check, opt, lattice); });
    });
    m.def("levi", [](const std::string& chart, const std::string& family, std::complex<double> t,
                     const std::vector<double>& x) {
        return call([&] { return robin::api::levi(parse(chart), parse(family), t, x); });
    });
    m.def("torus_from_tuple", [](const std::vector<long>& t) { return dump(robin::api::torus_from_tuple(t)); });
    m.def("torus_foliation", [](const std::vector<long>& t, std::optional<std::string> sigma) {
        return dump(robin::api::torus_foliation(t, sigma));
    });
    m.def("torus_classify", [](const std::string& a, const std::string& b, long height) {
        return dump(robin::api::torus_classify(a, b, height));
    });
    m.def("lie_closure", [](std::size_t n, const std::string& base, const std::string& gens) {
        return call([&] { return robin::api::lie_closure(n, base, parse(gens)); });
    });
    m.def("lie_tangent", [](std::size_t n, const std::string& matrix, const std::string& conj) {
        return dump(robin::api::lie_tangent(n, parse(matrix), parse(conj)));
    });
    m.def("lie_grassmann", [](std::size_t p, std::size_t q, std::optional<std::string> K, const std::string& matrix) {
        return call([&] { return robin::api::lie_grassmann(p, q, K, parse(matrix)); });
    });
    m.def("lie_flag", [](std::size_t n, std::size_t samples, unsigned seed) {
        return call([&] { return robin::api::lie_flag(n, samples, seed); });
    });
    m.def("lie_hopf", [](std::size_t n) { return call([&] { return robin::api::lie_hopf(n); }); });
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = robin::cli::dispatch(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    });
}
