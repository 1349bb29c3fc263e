#include "robin/torus.hpp"

#include <cstdlib>
#include <numeric>

#include "robin/rref.hpp"

namespace robin::torus {

namespace {

QRat xi() { return QRat::var(); }
QRat qr(long v) { return QRat(Q(v)); }
QRat qr(const Q& v) { return QRat(v); }

// p1 = M'p, p2 = n'p, q1 = mq, q2 = nq
struct Pq {
    QRat p1, p2, q1, q2;
};

Pq pq_of(const SixTuple& t) {
    QRat Mp = qr(t.mp) + qr(t.np) * xi();
    return {Mp * qr(t.p), qr(t.np * t.p), qr(t.m * t.q), qr(t.n * t.q)};
}

bool is_integer(const QRat& r) {
    return r.is_constant() && r.constant_value().get_den() == 1;
}

}  // namespace

void SixTuple::validate() const {
    if (np <= 0 || p <= 0 || q <= 0)
        throw validation_error("InvalidTuple", "require n' > 0, p > 0, q > 0");
    if (n == 0) throw validation_error("InvalidTuple", "require n != 0");
    if (std::gcd(m, n) != 1) throw validation_error("GcdViolation", "gcd(m, n) != 1");
    if (std::gcd(mp, np) != 1) throw validation_error("GcdViolation", "gcd(m', n') != 1");
    if (std::gcd(p, q) != 1) throw validation_error("GcdViolation", "gcd(p, q) != 1");
}

long SixTuple::height() const {
    long h = 0;
    for (long v : {m, n, mp, np, p, q}) h = std::max(h, std::labs(v));
    return h;
}

Direction direction_from_tuple(const SixTuple& t) {
    t.validate();
    auto [p1, p2, q1, q2] = pq_of(t);
    QRat den = p1 * p1 + q1 * q1;
    return {(p1 * p2 + q1 * q2) / den, (p2 * q1 - p1 * q2) / den};
}

FoliationData foliation_data(const SixTuple& t) {
    FoliationData fd;
    fd.tuple = t;
    auto dir = direction_from_tuple(t);
    fd.a = dir.a;
    fd.b = dir.b;
    fd.A = fd.a / fd.b;
    fd.B = -(qr(1) / fd.b);
    fd.C = (fd.a * fd.a + fd.b * fd.b) / fd.b;
    if (-(fd.A * fd.A) - fd.B * fd.C != qr(1))
        throw contract_error("JacobianIdentity", "-A^2 - BC != 1");
    fd.Mp = qr(t.mp) + qr(t.np) * xi();
    fd.L1_dir = {t.m, t.n};
    fd.L2_dir = {fd.Mp, t.np};
    auto [p1, p2, q1, q2] = pq_of(t);
    fd.gens[0] = {q1, q2, qr(0), qr(0)};
    fd.gens[1] = {qr(0), qr(0), p1, p2};
    fd.gens[2] = {p2 * q1 - p1 * q2, qr(0), p1 * p2 + q1 * q2, p2 * p2 + q2 * q2};
    fd.d = QRat(Q(1, 1) / Q(t.p * t.np));
    fd.eta = qr(Q(t.p) / Q(t.n * t.np)) * (p2 * p2 + q2 * q2) / (p2 * q1 - p1 * q2);
    return fd;
}

std::pair<QRat, QRat> F_apply(const FoliationData& fd, const QRat& x1, const QRat& x2) {
    return {fd.A * x1 + fd.B * x2, fd.C * x1 - fd.A * x2};
}

std::pair<QRat, QRat> F_inverse(const FoliationData& fd, const QRat& x3, const QRat& x4) {
    return {-(fd.A * x3) - fd.B * x4, -(fd.C * x3) + fd.A * x4};
}

bool on_S(const FoliationData& fd, const std::array<QRat, 4>& x) {
    auto [y3, y4] = F_apply(fd, x[0], x[1]);
    return y3 == x[2] && y4 == x[3];
}

QRat leaf_invariant(const FoliationData& fd, const std::array<QRat, 4>& x) {
    const auto& t = fd.tuple;
    QRat i1 = qr(t.n) * x[0] - qr(t.m) * x[1];
    QRat i2 = qr(t.np) * x[2] - fd.Mp * x[3];
    return qr(t.q) * i1 - qr(t.p) * i2;
}

std::array<QRat, 4> sigma_representative(const FoliationData& fd, const Q& t) {
    return {qr(Q(fd.tuple.p) * t / Q(fd.tuple.n)), qr(0), qr(0), qr(0)};
}

bool sigma_same_leaf(const FoliationData& fd, const Q& t, const Q& tp) {
    // Sigma(t) = {x : leaf_invariant(x) = p q t mod 1}; test the representative of Sigma(t').
    QRat diff = leaf_invariant(fd, sigma_representative(fd, tp)) - qr(Q(fd.tuple.p * fd.tuple.q) * t);
    if (!diff.is_constant()) throw contract_error("LeafInvariant", "leaf invariant depends on xi");
    return is_integer(diff);
}

std::string to_string(CaseTag c) {
    switch (c) {
        case CaseTag::alpha_zero: return "alpha_zero";
        case CaseTag::beta_zero: return "beta_zero";
        case CaseTag::b_zero_rational: return "b_zero_rational";
        case CaseTag::b_zero_xi_rational: return "b_zero_xi_rational";
        case CaseTag::b_nonzero: return "b_nonzero";
    }
    return "unknown";
}

namespace {

// Coefficient rows over Q of sum_k coeff[k] x_k = 0 as a polynomial identity in xi.
void append_identity(ExactMatrix<Q>& rows, const std::vector<QRat>& coeff) {
    QPoly L(Q(1));
    for (const auto& c : coeff) L = L * c.den();
    std::vector<QPoly> polys;
    int deg = 0;
    for (const auto& c : coeff) {
        polys.push_back(c.num() * L.divmod(c.den()).first);
        deg = std::max(deg, polys.back().degree());
    }
    for (int k = 0; k <= deg; ++k) {
        std::vector<Q> row;
        for (const auto& p : polys) row.push_back(p.coeff(static_cast<std::size_t>(k)));
        rows.push_back(std::move(row));
    }
}

Q lcm_den(const Q& a, const Q& b) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    return Q(l);
}

std::optional<SixTuple> recover_tuple(const QRat& a, const QRat& b, long height, std::string& why) {
    // (a + ib)(p1 - i q1) = p2 - i q2, divided by p, with unknowns
    // (m', n', u = m q/p, v = n q/p).
    ExactMatrix<Q> rows;
    append_identity(rows, {a, a * xi() - qr(1), b, qr(0)});
    append_identity(rows, {b, b * xi(), -a, qr(1)});
    auto ns = nullspace(rows, 4);
    if (ns.size() != 1) {
        why = "solution space has dimension " + std::to_string(ns.size());
        return std::nullopt;
    }
    auto x = ns[0];
    // Scale so (m', n') is a primitive integer vector with n' > 0.
    if (sgn(x[1]) == 0) {
        why = "n' = 0";
        return std::nullopt;
    }
    Q scale = lcm_den(x[0], x[1]);
    mpz_class g;
    mpz_class a0 = Q(x[0] * scale).get_num(), a1 = Q(x[1] * scale).get_num();
    mpz_gcd(g.get_mpz_t(), a0.get_mpz_t(), a1.get_mpz_t());
    scale /= Q(g);
    if (sgn(x[1]) < 0) scale = -scale;
    for (auto& v : x) v *= scale;
    // (u, v) = (q/p)(m, n) with gcd(m, n) = 1, q/p > 0.
    if (sgn(x[3]) == 0) {
        why = "n = 0";
        return std::nullopt;
    }
    Q l = lcm_den(x[2], x[3]);
    mpz_class u = Q(x[2] * l).get_num(), w = Q(x[3] * l).get_num(), g2;
    mpz_gcd(g2.get_mpz_t(), u.get_mpz_t(), w.get_mpz_t());
    Q r = Q(g2) / l;  // q/p up to the sign carried by (m, n)
    mpz_class m = u / g2, n = w / g2;
    Q pq(r);
    pq.canonicalize();
    SixTuple t;
    auto big = [&](const mpz_class& z) { return abs(z) > mpz_class(height); };
    if (big(m) || big(n) || big(pq.get_num()) || big(pq.get_den()) ||
        abs(x[0]) > Q(height) || abs(x[1]) > Q(height)) {
        throw validation_error("SearchExhausted", "recovered tuple exceeds height " + std::to_string(height));
    }
    t.m = m.get_si();
    t.n = n.get_si();
    t.mp = x[0].get_num().get_si();
    t.np = x[1].get_num().get_si();
    t.p = pq.get_den().get_si();
    t.q = pq.get_num().get_si();
    try {
        auto d = direction_from_tuple(t);
        if (d.a != a || d.b != b) {
            why = "candidate tuple does not reproduce (a, b)";
            return std::nullopt;
        }
    } catch (const Error& e) {
        why = e.what();
        return std::nullopt;
    }
    return t;
}

}  // namespace

TorusDirection classify_direction(const QRat& a, const QRat& b, long height) {
    TorusDirection d;
    d.a = a;
    d.b = b;
    if (b.is_zero()) {
        if (a.is_constant()) {
            d.tag = CaseTag::b_zero_rational;
            Q av = a.constant_value();
            // a = q/p in lowest terms, p > 0
            d.slope_pq = std::make_pair(av.get_den().get_si(), av.get_num().get_si());
            d.verdict = "closed curve in T1 times dense curve in T2";
            return d;
        }
        QRat off = qr(1) / a - xi();
        d.tag = CaseTag::b_zero_xi_rational;
        if (off.is_constant()) {
            d.xi_offset = off.constant_value();
            d.verdict = "T1 times closed curve in T2";
        } else {
            d.cannot_occur = true;
            d.verdict = "CannotOccur";
        }
        return d;
    }
    d.tag = CaseTag::b_nonzero;
    std::string why;
    d.tuple = recover_tuple(a, b, height, why);
    d.verdict = d.tuple ? "six-tuple recovered" : "NotRepresentable: " + why;
    return d;
}

TorusDirection classify_generator(const QRat& alpha_re, const QRat& alpha_im, const QRat& beta_re,
                                  const QRat& beta_im, long height) {
    bool az = alpha_re.is_zero() && alpha_im.is_zero();
    bool bz = beta_re.is_zero() && beta_im.is_zero();
    if (az && bz) throw validation_error("DegenerateDirection", "alpha = beta = 0");
    TorusDirection d;
    if (az || bz) {
        d.tag = az ? CaseTag::alpha_zero : CaseTag::beta_zero;
        d.verdict = az ? "closure S^1 x T2 (Grauert example)" : "closed subgroup T1 x {0}";
        return d;
    }
    // beta / alpha = a + ib
    QRat n2 = alpha_re * alpha_re + alpha_im * alpha_im;
    QRat a = (beta_re * alpha_re + beta_im * alpha_im) / n2;
    QRat b = (beta_im * alpha_re - beta_re * alpha_im) / n2;
    return classify_direction(a, b, height);
}

std::pair<std::complex<double>, std::complex<double>> autC_integral_curve(
    std::complex<double> alpha, std::complex<double> beta, std::complex<double> t,
    std::complex<double> a0, std::complex<double> b0) {
    std::complex<double> e = std::exp(alpha * t);
    // (e^{alpha t} - 1)/alpha, continuous at alpha = 0
    std::complex<double> phi;
    std::complex<double> z = alpha * t;
    if (std::abs(z) < 1e-8) {
        phi = t * (1.0 + z / 2.0 + z * z / 6.0);
    } else {
        phi = (e - 1.0) / alpha;
    }
    return {a0 * e, a0 * beta * phi + b0};
}

}  // namespace robin::torus
