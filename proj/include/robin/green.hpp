#pragma once
// c-Green functions and Robin constants on gridded domains in C^n (n = 1, 2)
// with the Euclidean background metric.
//
// The operator is the complex Laplacian plus c, i.e. -1/2 Delta_R + c, which is
// symmetric positive definite on the interior unknowns. We solve for the
// regular part u = g - Q0 and read the Robin constant off as u at the pole.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "robin/geometry.hpp"

namespace robin::green {

using geometry::cd;
using geometry::CMatrix;
using geometry::CVec;
using geometry::PsiPtr;
using geometry::RealPoly;
using geometry::RMatrix;
using geometry::RVec;

// c >= 0 given as a constant or a polynomial in x.
struct CSpec {
    double constant = 0.0;
    std::optional<RealPoly> poly;
    double value(const RVec& x) const;
    bool is_constant() const { return !poly.has_value(); }
    static CSpec from_json(const nlohmann::json& j, int n);
};

// Fundamental solution with lim Q0 r^{2n-2} = 1 (n >= 2), Q0 ~ -log r (n = 1).
struct Fundamental {
    int n = 2;
    double kappa = 0.0;  // sqrt(2 c0)
    double value(double r) const;
    double dr(double r) const;
};

struct GridOptions {
    double pole_margin_cells = 3.0;
    double root_tol = 1e-10;  // relative to h
    double theta_min = 1e-3;
};

enum class NodeKind : std::uint8_t { exterior, interior, near_boundary };

// Axis edge from an interior node to a node outside D, cut by psi = 0.
struct Crossing {
    int unknown;
    int axis;
    int dir;        // +1 or -1
    double theta;   // fraction of h, clamped below
    RVec point;
};

class GridDomain {
public:
    // Cube [lo, lo + width]^{2n} with N nodes per axis, slice psi(t, .).
    static GridDomain build(PsiPtr psi, cd t, const RVec& lo, double width, int nodes_per_axis,
                            const RVec& pole, const GridOptions& opt = {});

    int n = 0, dim = 0, N = 0;
    RVec lo;
    double h = 0;
    PsiPtr psi;
    cd t;
    RVec pole;
    std::vector<NodeKind> kind;            // per node
    std::vector<int> unknown_of_node;      // -1 outside
    std::vector<long> node_of_unknown;
    std::vector<std::vector<int>> nbr;     // per unknown, 2*dim entries, -1 if cut
    std::vector<int> first_crossing;       // per unknown, index into crossings (+ count below)
    std::vector<std::uint8_t> crossing_count;
    std::vector<Crossing> crossings;
    std::vector<double> psi_node;          // psi at every node
    double pole_distance = 0;              // estimated distance from pole to boundary

    long node_count() const;
    long node_index(const std::array<int, 4>& c) const;
    std::array<int, 4> coords(long node) const;
    RVec position(long node) const;
    std::size_t unknowns() const { return node_of_unknown.size(); }
    nlohmann::ordered_json describe() const;
    // Same grid and mask with a different pole; rechecks the margin.
    GridDomain with_pole(const RVec& pole, const GridOptions& opt = {}) const;
};

struct SolverOptions {
    double rel_tol = 1e-9;
    long max_iter = 0;  // 0: 50 sqrt(unknowns) N
    const std::vector<double>* warm_start = nullptr;
};

struct SolveStats {
    double residual = 0;  // relative
    long iterations = 0;
};

// A v = source + boundary terms, where A = -1/2 Delta_h + c and boundary
// values are given per crossing. Returns the per-unknown solution.
std::vector<double> solve_dirichlet(const GridDomain& dom, const std::vector<double>& c_unknown,
                                    const std::vector<double>& boundary_values,
                                    const std::vector<double>& source, const SolverOptions& opt,
                                    SolveStats& stats);

struct GreenField {
    std::shared_ptr<const GridDomain> domain;
    Fundamental Q0;
    CSpec c;
    std::vector<double> c_unknown;
    std::vector<double> u;  // per unknown
    double lambda = 0;
    double residual = 0;
    long iterations = 0;
    double min_g = 0;       // min of Q0 + u over interior nodes
    int interp_order = 0;   // order used for u at the pole

    double g_at_node(long unknown) const;
    // u at x by multilinear interpolation; empty if a corner is outside D.
    std::optional<double> u_at(const RVec& x) const;
    // Outward normal derivative of g at a boundary point p with unit normal nu.
    double dnu_g(const RVec& p, const RVec& nu, bool* fallback = nullptr) const;
    nlohmann::ordered_json to_json() const;
};

GreenField solve_green(std::shared_ptr<const GridDomain> domain, const CSpec& c,
                       const SolverOptions& opt = {});

// Tensor Lagrange interpolation of a per-unknown field at x (orders 5, 3, 1 tried).
double interpolate(const GridDomain& dom, const std::vector<double>& f, const RVec& x, int* order = nullptr);

// Domain and grid from JSON: {"kind":"ball"...} or {"kind":"polynomial", ..., "box":{"lo":[..],"width":w}}.
struct BoxSpec {
    RVec lo;
    double width = 0;
};
BoxSpec box_for_domain(const nlohmann::json& domain, double margin = 0.05);

std::shared_ptr<const GridDomain> grid_from_json(const nlohmann::json& domain, int nodes_per_axis,
                                                 const RVec& pole, const GridOptions& opt = {});

// ---- Robin function ----------------------------------------------------------

struct RobinSample {
    RVec pole;
    double Lambda = 0;
    double residual = 0;
};

struct RobinFunctionField {
    std::vector<RobinSample> samples;
    std::string to_csv() const;
    nlohmann::ordered_json to_json() const;
};

// Lambda at each pole on the fixed grid of the domain; poles run concurrently.
RobinFunctionField robin_function(const nlohmann::json& domain, int nodes_per_axis,
                                  const std::vector<RVec>& poles, const CSpec& c);

// Complex Hessian H_ab = d^2 f / dz_a dzbar_b from 5-point stencils along
// e_a, e_a + e_b and e_a + i e_b, each using d^2/dt dtbar = (D_t1^2 + D_t2^2)/4.
CMatrix complex_hessian(const std::function<double(const RVec&)>& f, const RVec& x, double h);

// Hessian of -Lambda at z, Lambda from repeated solves on one fixed grid.
// h_t defaults to 0.05 times the pole distance to the boundary.
CMatrix robin_hessian(const nlohmann::json& domain, int nodes_per_axis, const RVec& z, const CSpec& c,
                      double h_t = 0.0);

struct FlatDirection {
    double eigenvalue;
    CVec eigenvector;
    bool flat;
};
// Eigenpairs of a Hermitian Hessian; flat when the eigenvalue is below tol_eig.
std::vector<FlatDirection> hessian_flat_directions(const CMatrix& H, double tol_eig);

}  // namespace robin::green
