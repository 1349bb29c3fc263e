#pragma once
// Exact scalars: rationals, Gaussian rationals, and univariate polynomials
// and rational functions over either.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "robin/errors.hpp"

namespace robin {

using Q = mpq_class;

Q parse_rational(const std::string& s);
std::string to_string(const Q& q);

// Gaussian rational re + i im.
struct QI {
    Q re, im;
    QI() : re(0), im(0) {}
    QI(const Q& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    QI(long r) : re(r), im(0) {}      // NOLINT(google-explicit-constructor)
    QI(const Q& r, const Q& i) : re(r), im(i) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    QI conj() const { return {re, -im}; }
    Q norm2() const { return re * re + im * im; }

    friend QI operator+(const QI& a, const QI& b) { return {a.re + b.re, a.im + b.im}; }
    friend QI operator-(const QI& a, const QI& b) { return {a.re - b.re, a.im - b.im}; }
    friend QI operator-(const QI& a) { return {-a.re, -a.im}; }
    friend QI operator*(const QI& a, const QI& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend QI operator/(const QI& a, const QI& b) {
        Q d = b.norm2();
        if (sgn(d) == 0) throw contract_error("DivisionByZero", "Gaussian rational division by zero");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    QI& operator+=(const QI& o) { return *this = *this + o; }
    QI& operator-=(const QI& o) { return *this = *this - o; }
    QI& operator*=(const QI& o) { return *this = *this * o; }
    friend bool operator==(const QI& a, const QI& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const QI& a, const QI& b) { return !(a == b); }
};

// "re/im" form, e.g. "1/2/-3" is ambiguous, so we use "re" or "re,im" with
// each part a rational "p" or "p/q".
QI parse_gaussian(const std::string& s);
std::string to_string(const QI& z);

inline bool is_zero(const Q& q) { return sgn(q) == 0; }
inline bool is_zero(const QI& z) { return z.is_zero(); }

// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
template <class F>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<F> c) : c_(std::move(c)) { trim(); }
    Poly(const F& constant) {  // NOLINT(google-explicit-constructor)
        if (!is_zero(constant)) c_.push_back(constant);
    }
    static Poly x() { return Poly(std::vector<F>{F(0), F(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero_poly() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F(0); }
    F lead() const { return c_.empty() ? F(0) : c_.back(); }

    template <class X>
    X eval(const X& x) const {
        X acc(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + X(c_[k]);
        return acc;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0));
        for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] = r[k] + a.c_[k];
        for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] = r[k] + b.c_[k];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a) {
        std::vector<F> r = a.c_;
        for (auto& v : r) v = F(0) - v;
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c_.empty() || b.c_.empty()) return Poly();
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly scaled(const F& s) const {
        std::vector<F> r = c_;
        for (auto& v : r) v = v * s;
        return Poly(std::move(r));
    }
    Poly monic() const { return c_.empty() ? *this : scaled(F(1) / lead()); }

    // Euclidean division: *this = q*d + r with deg r < deg d.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero_poly()) throw contract_error("DivisionByZero", "polynomial division by zero");
        std::vector<F> r = c_;
        std::vector<F> q(c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 0, F(0));
        const F inv = F(1) / d.lead();
        for (std::size_t k = q.size(); k-- > 0;) {
            F f = r[k + d.c_.size() - 1] * inv;
            q[k] = f;
            if (is_zero(f)) continue;
            for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] = r[k + j] - f * d.c_[j];
        }
        return {Poly(std::move(q)), Poly(std::move(r))};
    }

    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero_poly()) {
            Poly r = a.divmod(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

private:
    void trim() {
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    }
    std::vector<F> c_;
};

// Reduced quotient num/den with gcd(num, den) = 1 and monic den.
template <class F>
class RatFunc {
public:
    using P = Poly<F>;
    RatFunc() : num_(), den_(F(1)) {}
    RatFunc(const F& c) : num_(c), den_(F(1)) {}  // NOLINT(google-explicit-constructor)
    RatFunc(long c) : RatFunc(F(c)) {}            // NOLINT(google-explicit-constructor)
    RatFunc(P num, P den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    explicit RatFunc(P num) : num_(std::move(num)), den_(F(1)) {}
    static RatFunc var() { return RatFunc(P::x()); }

    const P& num() const { return num_; }
    const P& den() const { return den_; }
    bool is_zero() const { return num_.is_zero_poly(); }
    // Constant element of the base field (variable-free after reduction).
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    F constant_value() const { return num_.coeff(0); }
    // max(deg num, deg den); positive iff the element genuinely depends on the variable.
    int degree() const { return std::max(num_.degree(), den_.degree()); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a) {
        RatFunc r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw contract_error("DivisionByZero", "rational function division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    // Value at a point of the base field; throws if the denominator vanishes.
    F eval(const F& x) const {
        F d = den_.template eval<F>(x);
        if (robin::is_zero(d)) throw contract_error("DivisionByZero", "pole of rational function");
        return num_.template eval<F>(x) / d;
    }

private:
    void normalize() {
        if (den_.is_zero_poly()) throw contract_error("DivisionByZero", "zero denominator");
        if (num_.is_zero_poly()) {
            den_ = P(F(1));
            return;
        }
        P g = P::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.divmod(g).first;
            den_ = den_.divmod(g).first;
        }
        F l = den_.lead();
        num_ = num_.scaled(F(1) / l);
        den_ = den_.scaled(F(1) / l);
    }
    P num_, den_;
};

using QPoly = Poly<Q>;
using QRat = RatFunc<Q>;      // elements of Q(xi)
using QIRat = RatFunc<QI>;    // elements of Q(i)(K)

inline bool is_zero(const QRat& r) { return r.is_zero(); }
inline bool is_zero(const QIRat& r) { return r.is_zero(); }

// "num:[c0,c1,...];den:[d0,...]" with coefficients low degree first.
std::string to_string(const QRat& r);
QRat parse_ratfunc(const std::string& s);

}  // namespace robin
