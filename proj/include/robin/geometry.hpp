#pragma once
// Pointwise Hermitian geometry on charts of C^n: Laplacian, Hodge residual,
// Levi curvatures and the scalar curvature W.
//
// Conventions: z_k = x_{2k-1} + i x_{2k}; g[a][b] = g_{a bbar}; H = g^{-1} so
// that g^{abar b} = H[a][b]; the Laplacian is -2[Pu + Ru], equal to
// -1/2 of the R^{2n} Laplacian on the Euclidean chart.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "robin/errors.hpp"

namespace robin::geometry {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

struct DimensionalConstants {
    int n;
    double Omega;  // area of the unit sphere S^{2n-1} in R^{2n}
    double c_n;    // 1/((n-1) Omega); infinite for n = 1
    static DimensionalConstants of(int n);
};

// Real multivariate polynomial with double coefficients.
class RealPoly {
public:
    explicit RealPoly(int nvars = 0) : nvars_(nvars) {}
    static RealPoly constant(int nvars, double c);
    static RealPoly variable(int nvars, int k);
    int nvars() const { return nvars_; }
    void add_term(const std::vector<int>& exps, double coeff);
    double eval(const double* x) const;
    RealPoly derivative(int k) const;
    const std::map<std::vector<int>, double>& terms() const { return terms_; }

    friend RealPoly operator+(const RealPoly& a, const RealPoly& b);
    friend RealPoly operator-(const RealPoly& a, const RealPoly& b);
    friend RealPoly operator*(const RealPoly& a, const RealPoly& b);
    friend RealPoly operator*(double s, const RealPoly& a);
    // p(images[0], ..., images[nvars-1]); all images share one variable count.
    RealPoly substitute(const std::vector<RealPoly>& images) const;

private:
    int nvars_;
    std::map<std::vector<int>, double> terms_;
};

// ---- metrics -----------------------------------------------------------------

// g and its derivatives at a point: dz[c] = dg/dz_c, dzb[d] = dg/dzbar_d,
// dzdzb[c][d] = d^2 g / dz_c dzbar_d.
struct MetricJet {
    CMatrix g;
    std::vector<CMatrix> dz, dzb;
    std::vector<std::vector<CMatrix>> dzdzb;
};

class MetricChart {
public:
    virtual ~MetricChart() = default;
    virtual int n() const = 0;
    virtual std::string kind() const = 0;
    virtual CMatrix metric(const CVec& z) const = 0;
    virtual MetricJet jet(const CVec& z) const = 0;
};

using ChartPtr = std::shared_ptr<const MetricChart>;

// g = F(|z|^2) I with F, F', F'' supplied.
ChartPtr euclidean_chart(int n);
ChartPtr ball_chart(int n);     // |dz|^2 / (1 - |z|^2)^2, conformal, not Kahler for n >= 2
ChartPtr hopf_chart(int n);     // |dz|^2 / |z|^2
ChartPtr bergman_chart(int n);  // ddbar(-log(1 - |z|^2)), Kahler
ChartPtr polynomial_conformal_chart(int n, RealPoly factor);  // g = P(x) I
// Wraps any chart, replacing its derivatives by 4th-order central differences.
ChartPtr finite_difference_chart(ChartPtr base, double h = 1e-4);

ChartPtr chart_from_json(const nlohmann::json& j);

// Checks Hermiticity and positive definiteness; throws SingularMetric.
void validate_metric(const CMatrix& g);

// ---- scalar fields -----------------------------------------------------------

// u and its complex derivatives: du[a] = u_{z_a}, dub[a] = u_{zbar_a},
// ddu[a][b] = u_{z_a zbar_b}.
struct ScalarJet {
    cd value;
    CVec du, dub;
    CMatrix ddu;
};

// Converts a real gradient / Hessian in x (size 2n) to complex derivatives.
ScalarJet complex_jet(double value, const RVec& grad, const RMatrix& hess, int n);

// ---- defining functions ------------------------------------------------------

// Real value, gradient and Hessian in the variables (x_1..x_{2n}, t_1, t_2).
struct RealJet {
    double value = 0;
    RVec grad;
    RMatrix hess;
};

// psi and the complex derivatives used by the Levi curvatures.
struct PsiJet {
    double value = 0;
    CVec dz;       // psi_{z_a}
    CMatrix dzdzb; // psi_{z_a zbar_b}
    cd dt = 0;     // psi_t
    CVec dz_dtb;   // psi_{z_a tbar}
    double dtdtb = 0;
    RVec grad_x;   // real gradient in x
};

PsiJet psi_jet_from_real(const RealJet& rj, int n);

class DefiningFunction {
public:
    virtual ~DefiningFunction() = default;
    virtual int n() const = 0;
    virtual double value(cd t, const RVec& x) const = 0;
    virtual RealJet real_jet(cd t, const RVec& x) const = 0;
    PsiJet jet(cd t, const RVec& x) const { return psi_jet_from_real(real_jet(t, x), n()); }
};

using PsiPtr = std::shared_ptr<const DefiningFunction>;

// Polynomial in (x_1..x_{2n}, t_1, t_2); static polynomials simply omit t.
PsiPtr polynomial_family(int n, RealPoly p);
// phi * psi for phi(x) = exp(sum w_k x_k).
PsiPtr exp_weighted(PsiPtr psi, RVec w);
// Any callable psi(t, x), derivatives by 4th-order central differences.
PsiPtr finite_difference_family(int n, std::function<double(cd, const RVec&)> f, double h = 1e-4);

RealPoly polynomial_from_json(const nlohmann::json& j, int nvars);
// Static domain from {"kind":"ball"|"polynomial", ...}.
PsiPtr domain_from_json(const nlohmann::json& j);

// Builders for the standard families.
RealPoly ball_polynomial(int n, double radius, const RVec& center);
// |z - t a|^2 - R^2 with a in C^n.
RealPoly translation_polynomial(int n, double radius, const CVec& a);
// |z|^2 - (R (1 + Re t))^2
RealPoly radial_polynomial(int n, double radius);

// ---- operations --------------------------------------------------------------

// Paper's Laplacian -2[Pu + Ru] of u at z.
cd laplacian_apply(const MetricChart& chart, const ScalarJet& u, const CVec& z);

// I_a = sum_b d(G g^{abar b})/dz_b.
CVec hodge_condition_residual(const MetricChart& chart, const CVec& z);

// max |d_c g_{a bbar} - d_a g_{c bbar}|, zero iff the metric is Kahler at z.
double kahler_residual(const MetricChart& chart, const CVec& z);

struct LeviOptions {
    double tol_bdry = 1e-8;
    double tol_grad = 1e-10;
};

cd levi_k1(const MetricChart& chart, const DefiningFunction& df, cd t, const RVec& x,
           const LeviOptions& opt = {});
double levi_k2(const MetricChart& chart, const DefiningFunction& df, cd t, const RVec& x,
               const LeviOptions& opt = {});
// Reduced form valid when the Hodge residual vanishes.
double levi_K2(const MetricChart& chart, const DefiningFunction& df, cd t, const RVec& x,
               const LeviOptions& opt = {});

struct Christoffel {
    // gamma[alpha][lambda][beta] = Gamma^alpha_{lambda beta}
    std::vector<std::vector<std::vector<cd>>> gamma;
    std::vector<std::vector<std::vector<cd>>> torsion;  // T^gamma_{lambda beta}
    CVec T;                                             // T_alpha = sum_lambda T^lambda_{alpha lambda}
};
Christoffel christoffel(const MetricChart& chart, const CVec& z);

double scalar_W(const MetricChart& chart, const CVec& z);         // torsion route
double scalar_W_direct(const MetricChart& chart, const CVec& z);  // G g^{ab} route

CVec to_complex(const RVec& x);
RVec to_real(const CVec& z);

}  // namespace robin::geometry
