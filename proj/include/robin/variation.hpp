#pragma once
// First and second variation of the Robin constant lambda(t) along a family
// of domains D(t) = {psi(t, .) < 0} in C^n, Euclidean metric.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "robin/green.hpp"

namespace robin::variation {

using geometry::cd;
using geometry::CVec;
using geometry::PsiPtr;
using geometry::RVec;

// Affine motion x -> (1 + scale Re t) x + Re t shift1 + Im t shift2 that carries
// the grid of D(0) along with the family.
struct Frame {
    RVec shift1, shift2;
    double scale = 0.0;
    RVec apply(cd t, const RVec& x) const;
};

struct DomainFamily {
    std::string kind;
    int n = 2;
    PsiPtr psi;
    RVec pole;
    cd t_center = 0.0;
    double rho = 1.0;
    green::CSpec c;
    green::BoxSpec box0;          // grid box at t = 0
    std::optional<Frame> frame;   // empty: the box stays fixed
    bool pseudoconvex = false;    // caller's claim, checked by sampling k2

    static DomainFamily from_json(const nlohmann::json& j);
    green::BoxSpec box_at(cd t) const;
    std::shared_ptr<const green::GridDomain> grid(cd t, int nodes_per_axis) const;
};

// Builders used by tests and the acceptance harness.
DomainFamily translation_family(int n, double radius, const CVec& a, double rho = 0.5);
DomainFamily radial_family(int n, double radius, double rho = 0.5);
DomainFamily static_family(const nlohmann::json& domain, double rho = 0.5);

double lambda_of_t(const DomainFamily& fam, cd t, int nodes_per_axis);

struct VariationOptions {
    int grid = 32;
    double h_t = 0.0;            // 0: 0.05 rho
    int stencil = 3;             // 3 or 5 points per real direction
    std::string dgdt = "shape";  // "shape" or "difference"
};

// Boundary quadrature over {psi(t0, .) = 0}: area pieces from a marching-simplex
// split of every cut cell, evaluated at the projected area centroid.
struct BoundaryPiece {
    RVec point;
    RVec normal;
    double area;
};
std::vector<BoundaryPiece> boundary_pieces(const green::GridDomain& dom);

struct VariationReport {
    std::vector<std::pair<cd, double>> lambda_samples;
    double lhs = 0;              // d^2 lambda / dt dtbar
    double rhs_boundary = 0;     // -c_n I
    double rhs_volume = 0;       // -4 c_n int sum |d^2 g/dt dzbar_a|^2 - 2 c_n int c |dg/dt|^2
    double rhs_volume_norm_form = 0;  // same term through the 2^n dV norms
    double rhs_cross = 0;        // d*omega terms, zero for the Euclidean metric
    double rhs = 0;
    double mismatch = 0;         // |lhs - rhs| / max(|lhs|, |rhs|)
    double boundary_area = 0;
    double min_k2 = 0;
    long normal_fit_fallbacks = 0;
    double h_t = 0;
    int grid = 0;
    nlohmann::ordered_json to_json() const;
};

VariationReport second_variation_check(const DomainFamily& fam, cd t0, const VariationOptions& opt = {});

struct FirstVariation {
    cd lhs, rhs;
    double mismatch = 0;
    nlohmann::ordered_json to_json() const;
};
FirstVariation first_variation_check(const DomainFamily& fam, cd t0, const VariationOptions& opt = {});

struct SubharmonicitySample {
    cd t;
    double value;  // d^2(-lambda)/dt dtbar
};
struct SubharmonicityReport {
    std::vector<SubharmonicitySample> samples;
    double min_value = 0;
    double tol_sub = 0;
    double min_k2 = 0;
    bool ok = false;
    nlohmann::ordered_json to_json() const;
};
SubharmonicityReport subharmonicity_scan(const DomainFamily& fam, const std::vector<cd>& ts,
                                         const VariationOptions& opt = {});

}  // namespace robin::variation
