#include "robin/lie.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "robin/rref.hpp"

namespace robin::lie {

namespace {

void check_same(const QMat& a, const QMat& b) {
    if (a.n != b.n) throw validation_error("DimensionMismatch", "matrix sizes differ");
}

std::vector<QI> flatten(const QMat& m) { return m.e; }

QMat unflatten(std::size_t n, const std::vector<QI>& v) {
    QMat m(n);
    m.e = v;
    return m;
}

// Leading principal k x k block and the block of rows k..n-1, columns 0..k-1.
template <class T>
std::vector<T> leading_block(const Mat<T>& a, std::size_t k) {
    std::vector<T> b(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) b[i * k + j] = a(i, j);
    return b;
}

// Solve B y = e_{k-1} (k-th column of B^{-1}) by Gauss-Jordan with pivoting.
std::vector<QI> last_inverse_column(std::vector<QI> b, std::size_t k) {
    std::vector<QI> rhs(k, QI(0));
    rhs[k - 1] = QI(1);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        while (p < k && b[p * k + c].is_zero()) ++p;
        if (p == k) throw validation_error("SingularLeadingMinor", "leading minor of order " + std::to_string(k));
        if (p != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(b[p * k + j], b[c * k + j]);
            std::swap(rhs[p], rhs[c]);
        }
        QI inv = QI(1) / b[c * k + c];
        for (std::size_t j = 0; j < k; ++j) b[c * k + j] *= inv;
        rhs[c] *= inv;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c || b[r * k + c].is_zero()) continue;
            QI f = b[r * k + c];
            for (std::size_t j = 0; j < k; ++j) b[r * k + j] -= f * b[c * k + j];
            rhs[r] -= f * rhs[c];
        }
    }
    return rhs;
}

std::vector<std::complex<double>> last_inverse_column(std::vector<std::complex<double>> b, std::size_t k) {
    std::vector<std::complex<double>> rhs(k, 0.0);
    rhs[k - 1] = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(b[r * k + c]) > std::abs(b[p * k + c])) p = r;
        if (std::abs(b[p * k + c]) < 1e-300)
            throw validation_error("SingularLeadingMinor", "leading minor of order " + std::to_string(k));
        if (p != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(b[p * k + j], b[c * k + j]);
            std::swap(rhs[p], rhs[c]);
        }
        auto inv = 1.0 / b[c * k + c];
        for (std::size_t j = 0; j < k; ++j) b[c * k + j] *= inv;
        rhs[c] *= inv;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            auto f = b[r * k + c];
            for (std::size_t j = 0; j < k; ++j) b[r * k + j] -= f * b[c * k + j];
            rhs[r] -= f * rhs[c];
        }
    }
    return rhs;
}

template <class T>
std::vector<T> flag_point_impl(const Mat<T>& a) {
    std::vector<T> out;
    const std::size_t n = a.n;
    for (std::size_t k = 1; k < n; ++k) {
        auto col = last_inverse_column(leading_block(a, k), k);
        for (std::size_t i = k; i < n; ++i) {
            T s(0);
            for (std::size_t j = 0; j < k; ++j) s = s + a(i, j) * col[j];
            out.push_back(s);
        }
    }
    return out;
}

QMat reversal_block(std::size_t n, std::size_t offset, std::size_t len) {
    // Identity except the len x len block at offset, which is the antidiagonal.
    QMat h = QMat::identity(n);
    for (std::size_t r = 0; r < len; ++r) {
        h(offset + r, offset + r) = QI(0);
    }
    for (std::size_t r = 0; r < len; ++r) h(offset + r, offset + len - 1 - r) = QI(1);
    return h;
}

}  // namespace

QMat operator+(const QMat& a, const QMat& b) {
    check_same(a, b);
    QMat r(a.n);
    for (std::size_t k = 0; k < a.e.size(); ++k) r.e[k] = a.e[k] + b.e[k];
    return r;
}

QMat operator-(const QMat& a, const QMat& b) {
    check_same(a, b);
    QMat r(a.n);
    for (std::size_t k = 0; k < a.e.size(); ++k) r.e[k] = a.e[k] - b.e[k];
    return r;
}

QMat operator*(const QMat& a, const QMat& b) {
    check_same(a, b);
    const std::size_t n = a.n;
    QMat r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

QMat scaled(const QMat& a, const QI& s) {
    QMat r = a;
    for (auto& v : r.e) v *= s;
    return r;
}

QMat inverse(const QMat& a) {
    const std::size_t n = a.n;
    ExactMatrix<QI> aug(n, std::vector<QI>(2 * n, QI(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = a(i, j);
        aug[i][n + i] = QI(1);
    }
    auto piv = rref(aug, 2 * n);
    if (piv.size() < n || piv[n - 1] != n - 1) throw validation_error("SingularMatrix", "matrix not invertible");
    QMat r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = aug[i][n + j];
    return r;
}

bool is_upper_triangular(const QMat& a) {
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

bool is_zero(const QMat& a) {
    return std::all_of(a.e.begin(), a.e.end(), [](const QI& v) { return v.is_zero(); });
}

QMat bracket(const QMat& x, const QMat& y) {
    check_same(x, y);
    return x * y - y * x;
}

CMat to_numeric(const QMat& a) {
    CMat r(a.n);
    for (std::size_t k = 0; k < a.e.size(); ++k) r.e[k] = {a.e[k].re.get_d(), a.e[k].im.get_d()};
    return r;
}

CMat matmul(const CMat& a, const CMat& b) {
    const std::size_t n = a.n;
    CMat r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) r(i, j) += a(i, k) * b(k, j);
    return r;
}

CMat expm(const CMat& a) {
    double norm = 0;
    for (const auto& v : a.e) norm = std::max(norm, std::abs(v));
    int squarings = 0;
    while (norm * std::pow(0.5, squarings) > 0.25) ++squarings;
    CMat s = a;
    const double f = std::pow(0.5, squarings);
    for (auto& v : s.e) v *= f;
    CMat result = CMat::identity(a.n), term = CMat::identity(a.n);
    for (int k = 1; k <= 18; ++k) {
        term = matmul(term, s);
        for (auto& v : term.e) v /= static_cast<double>(k);
        for (std::size_t i = 0; i < result.e.size(); ++i) result.e[i] += term.e[i];
    }
    for (int i = 0; i < squarings; ++i) result = matmul(result, result);
    return result;
}

std::vector<QI> flag_tangent(const QMat& x) {
    std::vector<QI> t;
    for (std::size_t k = 0; k + 1 < x.n; ++k)
        for (std::size_t i = k + 1; i < x.n; ++i) t.push_back(x(i, k));
    return t;
}

std::vector<QI> flag_point_of_group_element(const QMat& a) { return flag_point_impl(a); }

std::vector<std::complex<double>> flag_point_of_group_element(const CMat& a) { return flag_point_impl(a); }

std::vector<QI> conjugated_tangent(const QMat& a, const QMat& x) {
    check_same(a, x);
    if (!is_upper_triangular(a)) throw validation_error("NotInBase", "A must be upper triangular");
    const std::size_t n = a.n;
    std::vector<QI> v;
    for (std::size_t k = 1; k < n; ++k) {
        auto d = last_inverse_column(leading_block(a, k), k);
        for (std::size_t r = k; r < n; ++r) {
            QI s(0);
            for (std::size_t j = 0; j < k; ++j) {
                QI row(0);  // sum_{i >= r} a_{r i} lambda_{i j}
                for (std::size_t i = r; i < n; ++i) row += a(r, i) * x(i, j);
                s += row * d[j];
            }
            v.push_back(s);
        }
    }
    return v;
}

std::vector<QI> conjugated_tangent_adjoint(const QMat& a, const QMat& x) {
    if (!is_upper_triangular(a)) throw validation_error("NotInBase", "A must be upper triangular");
    return flag_tangent(a * x * inverse(a));
}

// ---- subspaces ------------------------------------------------------------

MatrixSubspace MatrixSubspace::span(std::size_t n, const std::vector<QMat>& mats) {
    MatrixSubspace s(n);
    for (const auto& m : mats) s.add(m);
    return s;
}

std::vector<QI> MatrixSubspace::reduce(std::vector<QI> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const QI f = v[pivots_[r]];
        if (f.is_zero()) continue;
        for (std::size_t c = pivots_[r]; c < v.size(); ++c)
            if (!rows_[r][c].is_zero()) v[c] -= f * rows_[r][c];
    }
    return v;
}

bool MatrixSubspace::contains(const QMat& m) const {
    if (m.n != n_) throw validation_error("DimensionMismatch", "matrix size differs from subspace");
    auto r = reduce(flatten(m));
    return std::all_of(r.begin(), r.end(), [](const QI& v) { return v.is_zero(); });
}

bool MatrixSubspace::add(const QMat& m) {
    if (m.n != n_) throw validation_error("DimensionMismatch", "matrix size differs from subspace");
    auto r = reduce(flatten(m));
    auto it = std::find_if(r.begin(), r.end(), [](const QI& v) { return !v.is_zero(); });
    if (it == r.end()) return false;
    rows_.push_back(std::move(r));
    rref(rows_, n_ * n_);
    pivots_.clear();
    for (const auto& row : rows_) {
        std::size_t c = 0;
        while (row[c].is_zero()) ++c;
        pivots_.push_back(c);
    }
    return true;
}

std::vector<QMat> MatrixSubspace::basis() const {
    std::vector<QMat> b;
    for (const auto& r : rows_) b.push_back(unflatten(n_, r));
    return b;
}

MatrixSubspace Base::subspace() const {
    MatrixSubspace s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (allowed(i, j)) s.add(QMat::unit(n, i, j));
    return s;
}

std::vector<QMat> Base::group_generators() const {
    std::vector<QMat> g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (allowed(i, j))
                for (long s : {1L, 2L}) {
                    QMat a = QMat::identity(n);
                    a(i, j) += QI(s);
                    g.push_back(a);
                }
    return g;
}

MatrixSubspace parabolic_closure(const std::vector<QMat>& generators, const Base& base) {
    MatrixSubspace s = base.subspace();
    std::vector<QMat> pending;
    for (const auto& g : generators) {
        if (g.n != base.n) throw validation_error("DimensionMismatch", "generator size differs from base");
        if (s.add(g)) pending.push_back(g);
    }
    std::vector<std::pair<QMat, QMat>> ad;  // (A, A^{-1})
    for (const auto& a : base.group_generators()) ad.emplace_back(a, inverse(a));

    // Worklist: every newly added element is bracketed against the current
    // basis and conjugated by the elementary group generators.
    while (!pending.empty()) {
        QMat x = pending.back();
        pending.pop_back();
        for (const auto& [a, ainv] : ad) {
            QMat y = a * x * ainv;
            if (s.add(y)) pending.push_back(y);
        }
        for (const auto& b : s.basis()) {
            QMat y = bracket(x, b);
            if (s.add(y)) pending.push_back(y);
        }
    }
    return s;
}

MatrixSubspace block_upper_triangular(const Composition& comp) {
    std::size_t n = 0;
    std::vector<std::size_t> block;
    for (std::size_t b = 0; b < comp.size(); ++b) {
        if (comp[b] == 0) throw validation_error("InvalidComposition", "zero part");
        for (std::size_t k = 0; k < comp[b]; ++k) block.push_back(b);
        n += comp[b];
    }
    MatrixSubspace s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (block[i] <= block[j]) s.add(QMat::unit(n, i, j));
    return s;
}

Composition extract_composition(const MatrixSubspace& p) {
    const std::size_t n = p.n();
    Composition comp;
    std::size_t run = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (p.contains(QMat::unit(n, i + 1, i))) {
            ++run;
        } else {
            comp.push_back(run);
            run = 1;
        }
    }
    comp.push_back(run);
    if (!(block_upper_triangular(comp) == p))
        throw contract_error("NotParabolic", "subspace is not block upper triangular");
    return comp;
}

HopfReport hopf_closure_report(std::size_t n) {
    if (n < 2) throw validation_error("InvalidDimension", "Hopf report needs n >= 2");
    Base base{BaseKind::hopf, n};
    HopfReport rep{n, parabolic_closure({QMat::unit(n, 0, 0)}, base), {}, {}};
    for (std::size_t j = 1; j < n; ++j) rep.escapes.push_back(parabolic_closure({QMat::unit(n, j, 0)}, base));
    const std::size_t expect = 1 + n * (n - 1);
    bool escapes_full = std::all_of(rep.escapes.begin(), rep.escapes.end(),
                                    [&](const MatrixSubspace& s) { return s.dim() == n * n; });
    rep.verdict = "X0 = {first column (x,0,...,0)} + h0, dim " + std::to_string(rep.x0.dim()) +
                  (rep.x0.dim() == expect ? " = 1+n(n-1)" : " != 1+n(n-1)") +
                  "; H_n fibers over P^" + std::to_string(n - 1) +
                  (escapes_full ? "; c_j != 0 generators escape to M_n" : "; escape check failed");
    return rep;
}

SpanningResult grassmann_spanning_rank(std::size_t p, std::size_t q, const QMat& x, const std::optional<Q>& K) {
    const std::size_t N = p + q;
    if (p == 0 || q == 0 || x.n != N) throw validation_error("DimensionMismatch", "X must be (p+q) x (p+q)");
    if (K && *K <= 1) throw validation_error("InvalidScale", "K must exceed 1");
    SpanningResult res;
    // Lower-left q x p block a.
    bool found = false;
    for (std::size_t r = 0; r < q && !found; ++r)
        for (std::size_t c = 0; c < p && !found; ++c)
            if (!x(p + r, c).is_zero()) {
                res.pivot_row = r;
                res.pivot_col = c;
                found = true;
            }
    if (!found) throw validation_error("StarViolation", "lower-left block of X is zero");
    QMat h = reversal_block(N, 0, res.pivot_col + 1) * reversal_block(N, p, res.pivot_row + 1);
    QMat xp = h * x * inverse(h);  // reversals are involutions; a'_11 = a_{lambda nu}

    // Work over Q(i)(K): lower-left block of h_ij X' h_ij^{-1} is n_j a m_i^{-1}, where
    // n_j, m_i^{-1} reverse the leading j rows / i columns and scale the moved
    // first row / column by K.
    using R = QIRat;
    const R Kv = K ? R(QI(*K)) : R::var();
    std::vector<std::vector<R>> a(q, std::vector<R>(p));
    for (std::size_t r = 0; r < q; ++r)
        for (std::size_t c = 0; c < p; ++c) a[r][c] = R(xp(p + r, c));
    for (std::size_t i = 1; i <= p; ++i) {
        for (std::size_t j = 1; j <= q; ++j) {
            std::vector<R> v;
            for (std::size_t r = 0; r < q; ++r) {
                std::size_t src_r = r < j ? j - 1 - r : r;
                R row_scale = (r == j - 1) ? Kv : R(1);
                for (std::size_t c = 0; c < p; ++c) {
                    std::size_t src_c = c < i ? i - 1 - c : c;
                    R col_scale = (c == i - 1) ? Kv : R(1);
                    v.push_back(a[src_r][src_c] * row_scale * col_scale);
                }
            }
            res.vectors.push_back(std::move(v));
        }
    }
    res.rank = exact_rank(res.vectors, p * q);
    return res;
}

FlagSpanningResult flag_spanning_rank(std::size_t n, std::size_t samples, unsigned seed) {
    if (n < 2) throw validation_error("InvalidDimension", "flag spanning needs n >= 2");
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> dist(-5, 5);
    QMat x = QMat::unit(n, 1, 0);
    FlagSpanningResult res;
    res.samples = samples;
    ExactMatrix<QI> vecs;
    for (std::size_t s = 0; s < samples; ++s) {
        QMat a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                long v = dist(rng);
                if (i == j && v == 0) v = 1;
                a(i, j) = QI(Q(v), Q(dist(rng)));
            }
        auto t = conjugated_tangent(a, x);
        for (std::size_t k = n - 1; k < t.size(); ++k)
            if (!t[k].is_zero()) res.first_block_only = false;
        vecs.push_back(std::move(t));
    }
    res.rank = exact_rank(vecs, n * (n - 1) / 2);
    return res;
}

}  // namespace robin::lie
