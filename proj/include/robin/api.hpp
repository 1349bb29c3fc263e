#pragma once
// JSON-in, JSON-out operations behind the CLI and the Python module.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "robin/geometry.hpp"
#include "robin/green.hpp"
#include "robin/variation.hpp"

namespace robin::api {

using nlohmann::json;
using nlohmann::ordered_json;

// Fixed key order, two-space indent, floats at 17 significant digits.
std::string write_json(const ordered_json& j);

// c given as null, a number, or a CSpec object.
ordered_json green_solve(const json& domain, int grid, const std::vector<double>& pole, const json& c);
green::RobinFunctionField robin_function(const json& domain, int grid, const std::vector<std::vector<double>>& poles,
                                         const json& c);
// Hessian of -Lambda at the pole with its eigenpairs.
ordered_json robin_hessian(const json& domain, int grid, const std::vector<double>& pole, const json& c,
                           double h_t, double tol_eig);

// check: "second", "first" or "subharmonic" (k x k lattice inside |t - t_center| <= rho / 2).
ordered_json variation(const json& family, geometry::cd t0, const std::string& check,
                       const variation::VariationOptions& opt, int lattice = 3);

// chart null means Euclidean.
ordered_json levi(const json& chart, const json& family, geometry::cd t, const std::vector<double>& x);

ordered_json torus_from_tuple(const std::vector<long>& tuple);
ordered_json torus_foliation(const std::vector<long>& tuple, const std::optional<std::string>& sigma = {});
ordered_json torus_classify(const std::string& a, const std::string& b, long height = 50);
ordered_json torus_classify_generator(const std::string& alpha_re, const std::string& alpha_im,
                                      const std::string& beta_re, const std::string& beta_im, long height = 50);

// Matrices: nested arrays of integers or "re" / "re,im" rational strings, or "E21" shorthand.
ordered_json lie_closure(std::size_t n, const std::string& base, const json& gens);
ordered_json lie_tangent(std::size_t n, const json& matrix, const json& conjugate = nullptr);
ordered_json lie_grassmann(std::size_t p, std::size_t q, const std::optional<std::string>& K = {},
                           const json& matrix = nullptr);
ordered_json lie_flag(std::size_t n, std::size_t samples = 50, unsigned seed = 17);
ordered_json lie_hopf(std::size_t n);

}  // namespace robin::api
