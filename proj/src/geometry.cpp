#include "robin/geometry.hpp"

#include <cmath>
#include <numbers>

namespace robin::geometry {

namespace {

constexpr cd I_(0.0, 1.0);

// Real-derivative data of a matrix field: d[k] = dM/dx_k, dd[k][l] = d^2M/dx_k dx_l.
struct RealMatrixJet {
    CMatrix value;
    std::vector<CMatrix> d;
    std::vector<std::vector<CMatrix>> dd;
};

MetricJet complexify(const RealMatrixJet& r, int n) {
    MetricJet j;
    j.g = r.value;
    j.dz.resize(n);
    j.dzb.resize(n);
    j.dzdzb.assign(n, std::vector<CMatrix>(n));
    for (int c = 0; c < n; ++c) {
        const auto& dx = r.d[2 * c];
        const auto& dy = r.d[2 * c + 1];
        j.dz[c] = 0.5 * (dx - I_ * dy);
        j.dzb[c] = 0.5 * (dx + I_ * dy);
    }
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
            const auto& xx = r.dd[2 * c][2 * d];
            const auto& yy = r.dd[2 * c + 1][2 * d + 1];
            const auto& xy = r.dd[2 * c][2 * d + 1];
            const auto& yx = r.dd[2 * c + 1][2 * d];
            j.dzdzb[c][d] = 0.25 * ((xx + yy) + I_ * (xy - yx));
        }
    return j;
}

double sq_norm(const CVec& z) { return z.squaredNorm(); }

class ConformalChart : public MetricChart {
public:
    using Profile = std::function<void(double s, double& F, double& F1, double& F2)>;
    ConformalChart(int n, std::string kind, Profile f) : n_(n), kind_(std::move(kind)), f_(std::move(f)) {}
    int n() const override { return n_; }
    std::string kind() const override { return kind_; }
    CMatrix metric(const CVec& z) const override {
        double F, F1, F2;
        f_(sq_norm(z), F, F1, F2);
        return F * CMatrix::Identity(n_, n_);
    }
    MetricJet jet(const CVec& z) const override {
        double F, F1, F2;
        f_(sq_norm(z), F, F1, F2);
        MetricJet j;
        const CMatrix I = CMatrix::Identity(n_, n_);
        j.g = F * I;
        for (int c = 0; c < n_; ++c) {
            j.dz.push_back(F1 * std::conj(z[c]) * I);
            j.dzb.push_back(F1 * z[c] * I);
        }
        j.dzdzb.assign(n_, std::vector<CMatrix>(n_));
        for (int c = 0; c < n_; ++c)
            for (int d = 0; d < n_; ++d)
                j.dzdzb[c][d] = (F2 * std::conj(z[c]) * z[d] + (c == d ? F1 : 0.0)) * I;
        return j;
    }

private:
    int n_;
    std::string kind_;
    Profile f_;
};

class BergmanChart : public MetricChart {
public:
    explicit BergmanChart(int n) : n_(n) {}
    int n() const override { return n_; }
    std::string kind() const override { return "bergman"; }
    CMatrix metric(const CVec& z) const override { return jet(z).g; }
    MetricJet jet(const CVec& z) const override {
        const double s = sq_norm(z);
        if (s >= 1.0) throw validation_error("OutsideChart", "bergman chart needs |z| < 1");
        const double w = 1.0 / (1.0 - s);
        const int n = n_;
        auto zb = [&](int k) { return std::conj(z[k]); };
        auto dl = [](int a, int b) { return a == b ? 1.0 : 0.0; };
        MetricJet j;
        j.g = CMatrix(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) j.g(a, b) = dl(a, b) * w + zb(a) * z[b] * w * w;
        j.dz.assign(n, CMatrix(n, n));
        j.dzb.assign(n, CMatrix(n, n));
        j.dzdzb.assign(n, std::vector<CMatrix>(n, CMatrix(n, n)));
        const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                for (int c = 0; c < n; ++c) {
                    j.dz[c](a, b) = dl(a, b) * w2 * zb(c) + dl(b, c) * zb(a) * w2 + 2.0 * zb(a) * z[b] * zb(c) * w3;
                    j.dzb[c](a, b) = dl(a, b) * w2 * z[c] + dl(a, c) * z[b] * w2 + 2.0 * zb(a) * z[b] * z[c] * w3;
                }
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        cd v = dl(a, b) * (2.0 * w3 * z[d] * zb(c) + w2 * dl(c, d));
                        v += dl(b, c) * (dl(a, d) * w2 + 2.0 * zb(a) * z[d] * w3);
                        v += 2.0 * (dl(a, d) * z[b] * zb(c) * w3 + dl(c, d) * zb(a) * z[b] * w3 +
                                    3.0 * zb(a) * z[b] * zb(c) * z[d] * w4);
                        j.dzdzb[c][d](a, b) = v;
                    }
            }
        return j;
    }

private:
    int n_;
};

class PolyConformalChart : public MetricChart {
public:
    PolyConformalChart(int n, RealPoly p) : n_(n), p_(std::move(p)) {
        if (p_.nvars() != 2 * n) throw validation_error("InvalidChart", "conformal factor needs 2n variables");
        for (int k = 0; k < 2 * n; ++k) {
            d_.push_back(p_.derivative(k));
        }
        for (int k = 0; k < 2 * n; ++k) {
            dd_.emplace_back();
            for (int l = 0; l < 2 * n; ++l) dd_[k].push_back(d_[k].derivative(l));
        }
    }
    int n() const override { return n_; }
    std::string kind() const override { return "polynomial"; }
    CMatrix metric(const CVec& z) const override {
        RVec x = to_real(z);
        return p_.eval(x.data()) * CMatrix::Identity(n_, n_);
    }
    MetricJet jet(const CVec& z) const override {
        RVec x = to_real(z);
        const int m = 2 * n_;
        const CMatrix I = CMatrix::Identity(n_, n_);
        RealMatrixJet r;
        r.value = p_.eval(x.data()) * I;
        r.d.resize(m);
        r.dd.assign(m, std::vector<CMatrix>(m));
        for (int k = 0; k < m; ++k) {
            r.d[k] = d_[k].eval(x.data()) * I;
            for (int l = 0; l < m; ++l) r.dd[k][l] = dd_[k][l].eval(x.data()) * I;
        }
        return complexify(r, n_);
    }

private:
    int n_;
    RealPoly p_;
    std::vector<RealPoly> d_;
    std::vector<std::vector<RealPoly>> dd_;
};

constexpr double kW1[4] = {1.0, -8.0, 8.0, -1.0};  // weights at offsets -2,-1,1,2 (over 12h)
constexpr int kOff[4] = {-2, -1, 1, 2};

class FiniteDifferenceChart : public MetricChart {
public:
    FiniteDifferenceChart(ChartPtr base, double h) : base_(std::move(base)), h_(h) {}
    int n() const override { return base_->n(); }
    std::string kind() const override { return base_->kind() + "+fd"; }
    CMatrix metric(const CVec& z) const override { return base_->metric(z); }
    MetricJet jet(const CVec& z) const override {
        const int n = base_->n(), m = 2 * n;
        RVec x = to_real(z);
        const double h = h_ * std::max(1.0, x.norm());
        auto g = [&](const RVec& y) { return base_->metric(to_complex(y)); };
        RealMatrixJet r;
        r.value = g(x);
        r.d.assign(m, CMatrix::Zero(n, n));
        r.dd.assign(m, std::vector<CMatrix>(m, CMatrix::Zero(n, n)));
        for (int k = 0; k < m; ++k) {
            std::vector<CMatrix> f(4);
            for (int s = 0; s < 4; ++s) {
                RVec y = x;
                y[k] += kOff[s] * h;
                f[s] = g(y);
            }
            r.d[k] = (kW1[0] * f[0] + kW1[1] * f[1] + kW1[2] * f[2] + kW1[3] * f[3]) / (12.0 * h);
            r.dd[k][k] = (-f[0] + 16.0 * f[1] - 30.0 * r.value + 16.0 * f[2] - f[3]) / (12.0 * h * h);
        }
        for (int k = 0; k < m; ++k)
            for (int l = k + 1; l < m; ++l) {
                CMatrix acc = CMatrix::Zero(n, n);
                for (int s = 0; s < 4; ++s)
                    for (int u = 0; u < 4; ++u) {
                        RVec y = x;
                        y[k] += kOff[s] * h;
                        y[l] += kOff[u] * h;
                        acc += kW1[s] * kW1[u] * g(y);
                    }
                r.dd[k][l] = r.dd[l][k] = acc / (144.0 * h * h);
            }
        return complexify(r, n);
    }

private:
    ChartPtr base_;
    double h_;
};

// Geometric data derived from a metric jet.
struct Derived {
    int n;
    MetricJet j;
    CMatrix H;
    double G;
    std::vector<cd> dG, dGb;           // dG/dz_c, dG/dzbar_c
    std::vector<CMatrix> dH, dHb;      // dH/dz_c, dH/dzbar_c
    std::vector<CMatrix> dM, dMb;      // M = G H
};

Derived derive(const MetricChart& chart, const CVec& z) {
    Derived d;
    d.n = chart.n();
    if (z.size() != d.n) throw validation_error("DimensionMismatch", "point dimension differs from chart");
    d.j = chart.jet(z);
    validate_metric(d.j.g);
    d.H = d.j.g.inverse();
    d.G = d.j.g.determinant().real();
    for (int c = 0; c < d.n; ++c) {
        d.dG.push_back(d.G * (d.H * d.j.dz[c]).trace());
        d.dGb.push_back(d.G * (d.H * d.j.dzb[c]).trace());
        d.dH.push_back(-d.H * d.j.dz[c] * d.H);
        d.dHb.push_back(-d.H * d.j.dzb[c] * d.H);
        d.dM.push_back(d.dG[c] * d.H + d.G * d.dH[c]);
        d.dMb.push_back(d.dGb[c] * d.H + d.G * d.dHb[c]);
    }
    return d;
}

// I_a = sum_b d(M[a][b])/dz_b
CVec hodge_from(const Derived& d) {
    CVec I = CVec::Zero(d.n);
    for (int a = 0; a < d.n; ++a)
        for (int b = 0; b < d.n; ++b) I[a] += d.dM[b](a, b);
    return I;
}

void check_boundary_point(const PsiJet& pj, const LeviOptions& opt) {
    if (std::abs(pj.value) > opt.tol_bdry)
        throw validation_error("NotOnBoundary", "|psi| = " + std::to_string(std::abs(pj.value)));
    if (pj.dz.norm() <= opt.tol_grad) throw validation_error("ZeroGradient", "grad_z psi vanishes");
}

// sum g^{abar b} psi_{zbar_a} psi_{z_b} = v^H H v with v = psi_z
double grad_norm2(const CMatrix& H, const CVec& dz) {
    return (dz.adjoint() * H * dz)(0, 0).real();
}

cd mixed_t_term(const CMatrix& H, const PsiJet& pj) {
    // sum g^{abar b} psi_{zbar_a} psi_{z_b tbar}
    cd s = 0;
    for (int a = 0; a < H.rows(); ++a)
        for (int b = 0; b < H.cols(); ++b) s += H(a, b) * std::conj(pj.dz[a]) * pj.dz_dtb[b];
    return s;
}

class PolynomialFamily : public DefiningFunction {
public:
    PolynomialFamily(int n, RealPoly p) : n_(n), p_(std::move(p)) {
        const int m = p_.nvars();
        if (m != 2 * n && m != 2 * n + 2)
            throw validation_error("InvalidDomain", "polynomial needs 2n or 2n+2 variables");
        for (int k = 0; k < m; ++k) d_.push_back(p_.derivative(k));
        for (int k = 0; k < m; ++k) {
            dd_.emplace_back();
            for (int l = 0; l < m; ++l) dd_[k].push_back(d_[k].derivative(l));
        }
    }
    int n() const override { return n_; }
    double value(cd t, const RVec& x) const override {
        auto v = vars(t, x);
        return p_.eval(v.data());
    }
    RealJet real_jet(cd t, const RVec& x) const override {
        auto v = vars(t, x);
        const int m = 2 * n_ + 2, mp = p_.nvars();
        RealJet r;
        r.value = p_.eval(v.data());
        r.grad = RVec::Zero(m);
        r.hess = RMatrix::Zero(m, m);
        for (int k = 0; k < mp; ++k) {
            r.grad[k] = d_[k].eval(v.data());
            for (int l = 0; l < mp; ++l) r.hess(k, l) = dd_[k][l].eval(v.data());
        }
        return r;
    }

private:
    std::vector<double> vars(cd t, const RVec& x) const {
        if (x.size() != 2 * n_) throw validation_error("DimensionMismatch", "point dimension differs from domain");
        std::vector<double> v(x.data(), x.data() + x.size());
        v.push_back(t.real());
        v.push_back(t.imag());
        return v;
    }
    int n_;
    RealPoly p_;
    std::vector<RealPoly> d_;
    std::vector<std::vector<RealPoly>> dd_;
};

class ExpWeighted : public DefiningFunction {
public:
    ExpWeighted(PsiPtr psi, RVec w) : psi_(std::move(psi)), w_(std::move(w)) {}
    int n() const override { return psi_->n(); }
    double value(cd t, const RVec& x) const override { return std::exp(w_.dot(x)) * psi_->value(t, x); }
    RealJet real_jet(cd t, const RVec& x) const override {
        RealJet p = psi_->real_jet(t, x);
        const int m = static_cast<int>(p.grad.size());
        RVec wf = RVec::Zero(m);
        wf.head(w_.size()) = w_;
        const double phi = std::exp(w_.dot(x));
        RVec gphi = phi * wf;
        RMatrix hphi = phi * wf * wf.transpose();
        RealJet r;
        r.value = phi * p.value;
        r.grad = phi * p.grad + p.value * gphi;
        r.hess = phi * p.hess + p.value * hphi + gphi * p.grad.transpose() + p.grad * gphi.transpose();
        return r;
    }

private:
    PsiPtr psi_;
    RVec w_;
};

class FdFamily : public DefiningFunction {
public:
    FdFamily(int n, std::function<double(cd, const RVec&)> f, double h) : n_(n), f_(std::move(f)), h_(h) {}
    int n() const override { return n_; }
    double value(cd t, const RVec& x) const override { return f_(t, x); }
    RealJet real_jet(cd t, const RVec& x) const override {
        const int m = 2 * n_ + 2;
        RVec v(m);
        v.head(2 * n_) = x;
        v[2 * n_] = t.real();
        v[2 * n_ + 1] = t.imag();
        auto f = [&](const RVec& y) { return f_(cd(y[2 * n_], y[2 * n_ + 1]), y.head(2 * n_)); };
        const double h = h_ * std::max(1.0, v.norm());
        RealJet r;
        r.value = f(v);
        r.grad = RVec::Zero(m);
        r.hess = RMatrix::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            double fs[4];
            for (int s = 0; s < 4; ++s) {
                RVec y = v;
                y[k] += kOff[s] * h;
                fs[s] = f(y);
            }
            r.grad[k] = (kW1[0] * fs[0] + kW1[1] * fs[1] + kW1[2] * fs[2] + kW1[3] * fs[3]) / (12.0 * h);
            r.hess(k, k) = (-fs[0] + 16.0 * fs[1] - 30.0 * r.value + 16.0 * fs[2] - fs[3]) / (12.0 * h * h);
        }
        for (int k = 0; k < m; ++k)
            for (int l = k + 1; l < m; ++l) {
                double acc = 0;
                for (int s = 0; s < 4; ++s)
                    for (int u = 0; u < 4; ++u) {
                        RVec y = v;
                        y[k] += kOff[s] * h;
                        y[l] += kOff[u] * h;
                        acc += kW1[s] * kW1[u] * f(y);
                    }
                r.hess(k, l) = r.hess(l, k) = acc / (144.0 * h * h);
            }
        return r;
    }

private:
    int n_;
    std::function<double(cd, const RVec&)> f_;
    double h_;
};

}  // namespace

// ---- constants -----------------------------------------------------------------

DimensionalConstants DimensionalConstants::of(int n) {
    if (n < 1) throw validation_error("InvalidDimension", "n must be >= 1");
    DimensionalConstants c;
    c.n = n;
    c.Omega = 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(static_cast<double>(n));
    c.c_n = n >= 2 ? 1.0 / ((n - 1) * c.Omega) : std::numeric_limits<double>::infinity();
    return c;
}

// ---- polynomials ---------------------------------------------------------------

RealPoly RealPoly::constant(int nvars, double c) {
    RealPoly p(nvars);
    p.add_term(std::vector<int>(nvars, 0), c);
    return p;
}

RealPoly RealPoly::variable(int nvars, int k) {
    RealPoly p(nvars);
    std::vector<int> e(nvars, 0);
    e[k] = 1;
    p.add_term(e, 1.0);
    return p;
}

void RealPoly::add_term(const std::vector<int>& exps, double coeff) {
    if (static_cast<int>(exps.size()) != nvars_) throw validation_error("InvalidPolynomial", "monomial length mismatch");
    for (int e : exps)
        if (e < 0) throw validation_error("InvalidPolynomial", "negative exponent");
    double& c = terms_[exps];
    c += coeff;
    if (c == 0.0) terms_.erase(exps);
}

double RealPoly::eval(const double* x) const {
    double s = 0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (int k = 0; k < nvars_; ++k)
            for (int p = 0; p < e[k]; ++p) m *= x[k];
        s += m;
    }
    return s;
}

RealPoly RealPoly::derivative(int k) const {
    RealPoly d(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[k] == 0) continue;
        auto f = e;
        f[k] -= 1;
        d.add_term(f, c * e[k]);
    }
    return d;
}

RealPoly operator+(const RealPoly& a, const RealPoly& b) {
    RealPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

RealPoly operator-(const RealPoly& a, const RealPoly& b) { return a + (-1.0) * b; }

RealPoly operator*(double s, const RealPoly& a) {
    RealPoly r(a.nvars_);
    if (s == 0.0) return r;
    for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
    return r;
}

RealPoly operator*(const RealPoly& a, const RealPoly& b) {
    if (a.nvars_ != b.nvars_) throw validation_error("InvalidPolynomial", "variable count mismatch");
    RealPoly r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            auto e = ea;
            for (int k = 0; k < a.nvars_; ++k) e[k] += eb[k];
            r.add_term(e, ca * cb);
        }
    return r;
}

RealPoly RealPoly::substitute(const std::vector<RealPoly>& images) const {
    if (static_cast<int>(images.size()) != nvars_) throw validation_error("InvalidPolynomial", "need one image per variable");
    const int m = images.empty() ? 0 : images[0].nvars();
    RealPoly r(m);
    for (const auto& [e, c] : terms_) {
        RealPoly term = RealPoly::constant(m, c);
        for (int k = 0; k < nvars_; ++k)
            for (int p = 0; p < e[k]; ++p) term = term * images[k];
        r = r + term;
    }
    return r;
}

// ---- charts --------------------------------------------------------------------

ChartPtr euclidean_chart(int n) {
    return std::make_shared<ConformalChart>(n, "euclidean", [](double, double& F, double& F1, double& F2) {
        F = 1.0;
        F1 = F2 = 0.0;
    });
}

ChartPtr ball_chart(int n) {
    return std::make_shared<ConformalChart>(n, "ball", [](double s, double& F, double& F1, double& F2) {
        if (s >= 1.0) throw validation_error("OutsideChart", "ball chart needs |z| < 1");
        const double u = 1.0 / (1.0 - s);
        F = u * u;
        F1 = 2.0 * u * u * u;
        F2 = 6.0 * u * u * u * u;
    });
}

ChartPtr hopf_chart(int n) {
    return std::make_shared<ConformalChart>(n, "hopf", [](double s, double& F, double& F1, double& F2) {
        if (s <= 0.0) throw validation_error("SingularMetric", "hopf chart undefined at 0");
        F = 1.0 / s;
        F1 = -1.0 / (s * s);
        F2 = 2.0 / (s * s * s);
    });
}

ChartPtr bergman_chart(int n) { return std::make_shared<BergmanChart>(n); }

ChartPtr polynomial_conformal_chart(int n, RealPoly factor) {
    return std::make_shared<PolyConformalChart>(n, std::move(factor));
}

ChartPtr finite_difference_chart(ChartPtr base, double h) {
    return std::make_shared<FiniteDifferenceChart>(std::move(base), h);
}

RealPoly polynomial_from_json(const nlohmann::json& j, int nvars) {
    RealPoly p(nvars);
    if (!j.contains("terms") || !j["terms"].is_array())
        throw validation_error("InvalidPolynomial", "missing terms array");
    for (const auto& t : j["terms"]) {
        std::vector<int> e = t.at("monomial").get<std::vector<int>>();
        if (static_cast<int>(e.size()) != nvars) {
            // static polynomials may be given over x only
            if (static_cast<int>(e.size()) + 2 == nvars) {
                e.push_back(0);
                e.push_back(0);
            } else {
                throw validation_error("InvalidPolynomial", "monomial length must be " + std::to_string(nvars));
            }
        }
        p.add_term(e, t.at("coeff").get<double>());
    }
    return p;
}

ChartPtr chart_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    if (n < 1) throw validation_error("InvalidDimension", "n must be >= 1");
    ChartPtr c;
    if (kind == "euclidean") c = euclidean_chart(n);
    else if (kind == "ball") c = ball_chart(n);
    else if (kind == "hopf") c = hopf_chart(n);
    else if (kind == "bergman") c = bergman_chart(n);
    else if (kind == "polynomial") c = polynomial_conformal_chart(n, polynomial_from_json(j, 2 * n));
    else throw validation_error("InvalidChart", "unknown chart kind '" + kind + "'");
    if (j.value("deriv_mode", std::string("closed-form")) == "finite-difference")
        c = finite_difference_chart(c, j.value("h_z", 1e-4));
    return c;
}

void validate_metric(const CMatrix& g) {
    const double herm = (g - g.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (!(herm <= 1e-10 * scale)) throw validation_error("SingularMetric", "metric is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (g + g.adjoint()), Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 0.0)) throw validation_error("SingularMetric", "metric is not positive definite");
}

// ---- scalar jets -----------------------------------------------------------------

ScalarJet complex_jet(double value, const RVec& grad, const RMatrix& hess, int n) {
    ScalarJet s;
    s.value = value;
    s.du = CVec(n);
    s.dub = CVec(n);
    s.ddu = CMatrix(n, n);
    for (int a = 0; a < n; ++a) {
        s.du[a] = 0.5 * cd(grad[2 * a], -grad[2 * a + 1]);
        s.dub[a] = std::conj(s.du[a]);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            s.ddu(a, b) = 0.25 * cd(hess(2 * a, 2 * b) + hess(2 * a + 1, 2 * b + 1),
                                    hess(2 * a, 2 * b + 1) - hess(2 * a + 1, 2 * b));
    return s;
}

PsiJet psi_jet_from_real(const RealJet& r, int n) {
    PsiJet p;
    p.value = r.value;
    ScalarJet s = complex_jet(r.value, r.grad, r.hess, n);
    p.dz = s.du;
    p.dzdzb = s.ddu;
    p.grad_x = r.grad.head(2 * n);
    const int t1 = 2 * n, t2 = 2 * n + 1;
    p.dt = 0.5 * cd(r.grad[t1], -r.grad[t2]);
    p.dtdtb = 0.25 * (r.hess(t1, t1) + r.hess(t2, t2));
    p.dz_dtb = CVec(n);
    for (int a = 0; a < n; ++a) {
        // (1/4)(d_xa - i d_ya)(d_t1 + i d_t2)
        const double xx = r.hess(2 * a, t1), xy = r.hess(2 * a, t2);
        const double yx = r.hess(2 * a + 1, t1), yy = r.hess(2 * a + 1, t2);
        p.dz_dtb[a] = 0.25 * cd(xx + yy, xy - yx);
    }
    return p;
}

// ---- defining functions ---------------------------------------------------------

PsiPtr polynomial_family(int n, RealPoly p) { return std::make_shared<PolynomialFamily>(n, std::move(p)); }

PsiPtr exp_weighted(PsiPtr psi, RVec w) { return std::make_shared<ExpWeighted>(std::move(psi), std::move(w)); }

PsiPtr finite_difference_family(int n, std::function<double(cd, const RVec&)> f, double h) {
    return std::make_shared<FdFamily>(n, std::move(f), h);
}

RealPoly ball_polynomial(int n, double radius, const RVec& center) {
    const int m = 2 * n + 2;
    RealPoly p = RealPoly::constant(m, -radius * radius);
    for (int k = 0; k < 2 * n; ++k) {
        RealPoly d = RealPoly::variable(m, k) - RealPoly::constant(m, center[k]);
        p = p + d * d;
    }
    return p;
}

RealPoly translation_polynomial(int n, double radius, const CVec& a) {
    const int m = 2 * n + 2;
    RealPoly t1 = RealPoly::variable(m, 2 * n), t2 = RealPoly::variable(m, 2 * n + 1);
    RealPoly p = RealPoly::constant(m, -radius * radius);
    for (int k = 0; k < n; ++k) {
        // z_k - t a_k, t a_k = (t1 ar - t2 ai) + i (t1 ai + t2 ar)
        const double ar = a[k].real(), ai = a[k].imag();
        RealPoly re = RealPoly::variable(m, 2 * k) - (ar * t1 - ai * t2);
        RealPoly im = RealPoly::variable(m, 2 * k + 1) - (ai * t1 + ar * t2);
        p = p + re * re + im * im;
    }
    return p;
}

RealPoly radial_polynomial(int n, double radius) {
    const int m = 2 * n + 2;
    RealPoly r = radius * (RealPoly::constant(m, 1.0) + RealPoly::variable(m, 2 * n));
    RealPoly p = (-1.0) * (r * r);
    for (int k = 0; k < 2 * n; ++k) p = p + RealPoly::variable(m, k) * RealPoly::variable(m, k);
    return p;
}

PsiPtr domain_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    if (n < 1) throw validation_error("InvalidDimension", "n must be >= 1");
    if (kind == "ball") {
        RVec c = RVec::Zero(2 * n);
        if (j.contains("center")) {
            auto v = j["center"].get<std::vector<double>>();
            if (static_cast<int>(v.size()) != 2 * n) throw validation_error("InvalidDomain", "center needs 2n entries");
            for (int k = 0; k < 2 * n; ++k) c[k] = v[k];
        }
        double r = j.value("radius", 1.0);
        if (!(r > 0)) throw validation_error("InvalidDomain", "radius must be positive");
        return polynomial_family(n, ball_polynomial(n, r, c));
    }
    if (kind == "polynomial") return polynomial_family(n, polynomial_from_json(j, 2 * n + 2));
    throw validation_error("InvalidDomain", "unknown domain kind '" + kind + "'");
}

// ---- operations -----------------------------------------------------------------

cd laplacian_apply(const MetricChart& chart, const ScalarJet& u, const CVec& z) {
    Derived d = derive(chart, z);
    cd P = 0, R = 0;
    for (int a = 0; a < d.n; ++a)
        for (int b = 0; b < d.n; ++b) {
            P += d.H(b, a) * u.ddu(a, b);
            R += d.dM[a](b, a) * u.dub[b] + d.dMb[a](a, b) * u.du[b];
        }
    R *= 0.5 / d.G;
    return -2.0 * (P + R);
}

CVec hodge_condition_residual(const MetricChart& chart, const CVec& z) { return hodge_from(derive(chart, z)); }

double kahler_residual(const MetricChart& chart, const CVec& z) {
    MetricJet j = chart.jet(z);
    const int n = chart.n();
    double r = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) r = std::max(r, std::abs(j.dz[c](a, b) - j.dz[a](c, b)));
    return r;
}

cd levi_k1(const MetricChart& chart, const DefiningFunction& df, cd t, const RVec& x, const LeviOptions& opt) {
    PsiJet pj = df.jet(t, x);
    check_boundary_point(pj, opt);
    CMatrix g = chart.metric(to_complex(x));
    validate_metric(g);
    return pj.dt / std::sqrt(grad_norm2(g.inverse(), pj.dz));
}

double levi_k2(const MetricChart& chart, const DefiningFunction& df, cd t, const RVec& x, const LeviOptions& opt) {
    PsiJet pj = df.jet(t, x);
    check_boundary_point(pj, opt);
    CVec z = to_complex(x);
    CMatrix H = chart.metric(z).inverse();
    const double N = grad_norm2(H, pj.dz);
    ScalarJet u;
    u.value = pj.value;
    u.du = pj.dz;
    u.dub = pj.dz.conjugate();
    u.ddu = pj.dzdzb;
    const double lap = laplacian_apply(chart, u, z).real();
    const double num = pj.dtdtb * N - 2.0 * (pj.dt * mixed_t_term(H, pj)).real() - 0.5 * std::norm(pj.dt) * lap;
    return num / std::pow(N, 1.5);
}

double levi_K2(const MetricChart& chart, const DefiningFunction& df, cd t, const RVec& x, const LeviOptions& opt) {
    PsiJet pj = df.jet(t, x);
    check_boundary_point(pj, opt);
    CMatrix g = chart.metric(to_complex(x));
    validate_metric(g);
    CMatrix H = g.inverse();
    const double N = grad_norm2(H, pj.dz);
    cd P = 0;  // sum g^{abar b} psi_{zbar_a z_b}
    for (int a = 0; a < H.rows(); ++a)
        for (int b = 0; b < H.cols(); ++b) P += H(a, b) * pj.dzdzb(b, a);
    const double num = pj.dtdtb * N - 2.0 * (pj.dt * mixed_t_term(H, pj)).real() + std::norm(pj.dt) * P.real();
    return num / std::pow(N, 1.5);
}

Christoffel christoffel(const MetricChart& chart, const CVec& z) {
    Derived d = derive(chart, z);
    const int n = d.n;
    Christoffel c;
    using V3 = std::vector<std::vector<std::vector<cd>>>;
    c.gamma = V3(n, std::vector<std::vector<cd>>(n, std::vector<cd>(n, 0.0)));
    c.torsion = c.gamma;
    for (int al = 0; al < n; ++al)
        for (int la = 0; la < n; ++la)
            for (int be = 0; be < n; ++be) {
                cd s = 0;
                for (int ga = 0; ga < n; ++ga) s += d.H(ga, al) * d.j.dz[la](be, ga);
                c.gamma[al][la][be] = s;
            }
    for (int ga = 0; ga < n; ++ga)
        for (int la = 0; la < n; ++la)
            for (int be = 0; be < n; ++be) c.torsion[ga][la][be] = c.gamma[ga][la][be] - c.gamma[ga][be][la];
    c.T = CVec::Zero(n);
    for (int al = 0; al < n; ++al)
        for (int la = 0; la < n; ++la) c.T[al] += c.torsion[la][al][la];
    return c;
}

namespace {
cd torsion_W(const MetricChart& chart, const CVec& z) {
    Derived d = derive(chart, z);
    const int n = d.n;
    // dGamma^al_{la be}/dzbar_mu = sum_ga dH(ga,al)/dzbar_mu dg(be,ga)/dz_la + H(ga,al) d2g(be,ga)/dz_la dzbar_mu
    auto dgamma = [&](int al, int la, int be, int mu) {
        cd s = 0;
        for (int ga = 0; ga < n; ++ga)
            s += d.dHb[mu](ga, al) * d.j.dz[la](be, ga) + d.H(ga, al) * d.j.dzdzb[la][mu](be, ga);
        return s;
    };
    cd W = 0;
    for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) {
            // dT_al/dzbar_be, with T_al contracted on the second lower index so
            // that the conformal ball and Hopf closed forms come out with their stated signs
            cd dT = 0;
            for (int la = 0; la < n; ++la) dT += dgamma(la, al, la, be) - dgamma(la, la, al, be);
            W += d.H(be, al) * dT;
        }
    return W;
}
}  // namespace

double scalar_W(const MetricChart& chart, const CVec& z) {
    const cd W = torsion_W(chart, z);
    const double Wd = scalar_W_direct(chart, z);
    if (std::abs(W.imag()) > 1e-6 * std::max(1.0, std::abs(W)) ||
        std::abs(W.real() - Wd) > 1e-6 * std::max(1.0, std::abs(Wd)))
        throw contract_error("CurvatureMismatch", "torsion and direct W routes disagree: " + std::to_string(W.real()) + " vs " + std::to_string(Wd));
    return W.real();
}

double scalar_W_direct(const MetricChart& chart, const CVec& z) {
    Derived d = derive(chart, z);
    const int n = d.n;
    // d^2 M / dzbar_a dz_b with M = G H, from the jets.
    auto ddG = [&](int c, int e) {  // d^2 G / dz_c dzbar_e
        cd t1 = (d.H * d.j.dz[c]).trace();
        cd t2 = (d.dHb[e] * d.j.dz[c] + d.H * d.j.dzdzb[c][e]).trace();
        return d.dGb[e] * t1 + d.G * t2;
    };
    auto ddH = [&](int c, int e) {  // d^2 H / dz_c dzbar_e
        return CMatrix(-d.dHb[e] * d.j.dz[c] * d.H - d.H * d.j.dzdzb[c][e] * d.H - d.H * d.j.dz[c] * d.dHb[e]);
    };
    CVec I = hodge_from(d);
    cd W = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // c = b (z derivative), e = a (zbar derivative)
            CMatrix dd = ddG(b, a) * d.H + d.dG[b] * d.dHb[a] + d.dGb[a] * d.dH[b] + d.G * ddH(b, a);
            W += dd(a, b) - d.j.g(a, b) / d.G * std::conj(I[a]) * I[b];
        }
    return (W / d.G).real();
}

CVec to_complex(const RVec& x) {
    const int n = static_cast<int>(x.size()) / 2;
    CVec z(n);
    for (int k = 0; k < n; ++k) z[k] = cd(x[2 * k], x[2 * k + 1]);
    return z;
}

RVec to_real(const CVec& z) {
    RVec x(2 * z.size());
    for (int k = 0; k < z.size(); ++k) {
        x[2 * k] = z[k].real();
        x[2 * k + 1] = z[k].imag();
    }
    return x;
}

}  // namespace robin::geometry
