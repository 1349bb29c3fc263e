#pragma once
// Grauert torus T = C^2 / [(1,0),(0,1),(i,0),(i xi,i)] with xi a formal
// irrational. Real coordinates z = x1 + i x3, w = x2 + i x4.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "robin/exact.hpp"

namespace robin::torus {

struct SixTuple {
    long m = 0, n = 0, mp = 0, np = 0, p = 0, q = 0;  // (m, n, m', n', p, q)

    // Throws GcdViolation / validation errors.
    void validate() const;
    long height() const;
    friend bool operator==(const SixTuple&, const SixTuple&) = default;
};

// a + ib = beta/alpha for the invariant direction X = alpha d/dz + beta d/dw.
struct Direction {
    QRat a, b;
};

Direction direction_from_tuple(const SixTuple& t);

// Real vector field sum_k c[k] d/dx_{k+1}.
using VectorField = std::array<QRat, 4>;

struct FoliationData {
    SixTuple tuple;
    QRat a, b;
    QRat A, B, C;            // S: (x3, x4) = (A x1 + B x2, C x1 - A x2)
    QRat Mp;                 // M' = m' + n' xi
    std::pair<long, long> L1_dir;  // (m, n)
    std::pair<QRat, long> L2_dir;  // (M', n')
    std::array<VectorField, 3> gens;
    QRat d;    // 1/(p n')
    QRat eta;  // (p/(n n')) (p2^2 + q2^2)/(p2 q1 - p1 q2)
};

FoliationData foliation_data(const SixTuple& t);

std::pair<QRat, QRat> F_apply(const FoliationData& fd, const QRat& x1, const QRat& x2);
std::pair<QRat, QRat> F_inverse(const FoliationData& fd, const QRat& x3, const QRat& x4);

// True when (x1,x2,x3,x4) lies on the plane S.
bool on_S(const FoliationData& fd, const std::array<QRat, 4>& x);

// Leaf invariant q(n x1 - m x2) - p(n' x3 - M' x4); constant (mod 1) on each Sigma(t)
// and equal to p q t there.
QRat leaf_invariant(const FoliationData& fd, const std::array<QRat, 4>& x);

// Representative point (p t / n, 0, 0, 0) of Sigma(t).
std::array<QRat, 4> sigma_representative(const FoliationData& fd, const Q& t);

// Membership by evaluating the leaf invariant on representatives.
bool sigma_same_leaf(const FoliationData& fd, const Q& t, const Q& tp);
inline bool sigma_disjoint(const FoliationData& fd, const Q& t, const Q& tp) {
    return !sigma_same_leaf(fd, t, tp);
}

enum class CaseTag { alpha_zero, beta_zero, b_zero_rational, b_zero_xi_rational, b_nonzero };
std::string to_string(CaseTag c);

struct TorusDirection {
    QRat a, b;
    CaseTag tag = CaseTag::b_nonzero;
    bool cannot_occur = false;            // b = 0, a and 1/a - xi both irrational
    std::optional<std::pair<long, long>> slope_pq;  // case (i'): a = q/p
    std::optional<Q> xi_offset;           // case 1/a - xi = r rational
    std::optional<SixTuple> tuple;        // b != 0 and representable
    std::string verdict;
};

TorusDirection classify_direction(const QRat& a, const QRat& b, long height = 50);

// Dispatch on the generator X = alpha d/dz + beta d/dw (complex coefficients
// over Q(xi) given as real/imaginary parts).
TorusDirection classify_generator(const QRat& alpha_re, const QRat& alpha_im, const QRat& beta_re,
                                  const QRat& beta_im, long height = 50);

// exp(tX) applied to (a0, b0) for the affine field X on C: (e^{alpha t} a0, ...).
std::pair<std::complex<double>, std::complex<double>> autC_integral_curve(
    std::complex<double> alpha, std::complex<double> beta, std::complex<double> t,
    std::complex<double> a0, std::complex<double> b0);

}  // namespace robin::torus
