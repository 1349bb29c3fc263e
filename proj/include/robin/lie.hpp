#pragma once
// Exact matrix Lie algebra engine over Q(i): brackets, flag coordinates,
// parabolic closures, Hopf subalgebras and spanning ranks.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robin/exact.hpp"

namespace robin::lie {

template <class T>
struct Mat {
    std::size_t n = 0;
    std::vector<T> e;  // row-major

    Mat() = default;
    explicit Mat(std::size_t n_) : n(n_), e(n_ * n_, T(0)) {}
    static Mat identity(std::size_t n_) {
        Mat m(n_);
        for (std::size_t i = 0; i < n_; ++i) m(i, i) = T(1);
        return m;
    }
    static Mat unit(std::size_t n_, std::size_t i, std::size_t j) {  // E_{i+1, j+1}
        Mat m(n_);
        m(i, j) = T(1);
        return m;
    }
    T& operator()(std::size_t i, std::size_t j) { return e[i * n + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return e[i * n + j]; }
    friend bool operator==(const Mat& a, const Mat& b) { return a.n == b.n && a.e == b.e; }
};

using QMat = Mat<QI>;
using CMat = Mat<std::complex<double>>;

QMat operator+(const QMat& a, const QMat& b);
QMat operator-(const QMat& a, const QMat& b);
QMat operator*(const QMat& a, const QMat& b);
QMat scaled(const QMat& a, const QI& s);
QMat inverse(const QMat& a);  // throws SingularMatrix
bool is_upper_triangular(const QMat& a);
bool is_zero(const QMat& a);

QMat bracket(const QMat& x, const QMat& y);  // throws DimensionMismatch

CMat to_numeric(const QMat& a);
CMat matmul(const CMat& a, const CMat& b);
CMat expm(const CMat& a);  // scaling and squaring with a Taylor kernel

// Standard local coordinates (t21..tn1; t32..tn2; ...; t_{n,n-1}) of the flag manifold.
std::vector<QI> flag_tangent(const QMat& x);
std::vector<QI> flag_point_of_group_element(const QMat& a);                      // exact
std::vector<std::complex<double>> flag_point_of_group_element(const CMat& a);   // numeric

// Tangent at O of t -> A exp(tX)(O) for upper-triangular A, via the explicit
// contraction (A X)[k+1..n, 1..k] times the k-th column of A_k^{-1}.
std::vector<QI> conjugated_tangent(const QMat& a, const QMat& x);
// Same tangent as flag_tangent(A X A^{-1}).
std::vector<QI> conjugated_tangent_adjoint(const QMat& a, const QMat& x);

// Complex subspace of M_n in canonical reduced echelon form (row-major flattening).
class MatrixSubspace {
public:
    explicit MatrixSubspace(std::size_t n) : n_(n) {}
    static MatrixSubspace span(std::size_t n, const std::vector<QMat>& mats);

    std::size_t n() const { return n_; }
    std::size_t dim() const { return rows_.size(); }
    bool contains(const QMat& m) const;
    bool add(const QMat& m);  // true if the dimension grew
    std::vector<QMat> basis() const;
    const std::vector<std::vector<QI>>& rows() const { return rows_; }
    friend bool operator==(const MatrixSubspace& a, const MatrixSubspace& b) {
        return a.n_ == b.n_ && a.rows_ == b.rows_;
    }

private:
    std::vector<QI> reduce(std::vector<QI> v) const;
    std::size_t n_;
    std::vector<std::vector<QI>> rows_;
    std::vector<std::size_t> pivots_;
};

enum class BaseKind { flag, hopf };

// Base subalgebra given by a pattern of allowed entries: flag = upper
// triangular H0, hopf = matrices with zero first column.
struct Base {
    BaseKind kind;
    std::size_t n;
    bool allowed(std::size_t i, std::size_t j) const {
        return kind == BaseKind::flag ? i <= j : j >= 1;
    }
    MatrixSubspace subspace() const;
    std::vector<QMat> group_generators() const;  // I + s E_ij, s in {1, 2}
};

MatrixSubspace parabolic_closure(const std::vector<QMat>& generators, const Base& base);

using Composition = std::vector<std::size_t>;
MatrixSubspace block_upper_triangular(const Composition& comp);
Composition extract_composition(const MatrixSubspace& p);  // throws NotParabolic

struct HopfReport {
    std::size_t n;
    MatrixSubspace x0;                  // closure(h0 + E11)
    std::vector<MatrixSubspace> escapes;  // closure(h0 + E_{j1}), j = 2..n
    std::string verdict;
};
HopfReport hopf_closure_report(std::size_t n);

// Rank of the p*q tangent vectors v_ij in C^{pq}. K empty: formal variable, rank over Q(i)(K).
struct SpanningResult {
    std::size_t rank = 0;
    std::size_t pivot_row = 0, pivot_col = 0;  // (lambda, nu), 0-based within the block
    std::vector<std::vector<QIRat>> vectors;   // v_ij, row-major over (j, i) entries
};
SpanningResult grassmann_spanning_rank(std::size_t p, std::size_t q, const QMat& x,
                                       const std::optional<Q>& K = std::nullopt);

struct FlagSpanningResult {
    std::size_t rank = 0;
    bool first_block_only = true;
    std::size_t samples = 0;
};
// Tangents of A exp(t X21)(O) for sampled upper-triangular A.
FlagSpanningResult flag_spanning_rank(std::size_t n, std::size_t samples, unsigned seed);

}  // namespace robin::lie
