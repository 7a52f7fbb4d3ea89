// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file matrix.hpp
 * @brief Dense matrices over an exact scalar domain (a Field or the Rationals).
 *
 * Storage is row-major; flatten() exposes exactly that order, which is the
 * coordinate order used for spans of matrices.
 */

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wordlen/error.hpp"
#include "wordlen/extension.hpp"
#include "wordlen/field.hpp"

namespace wordlen {

template <class D>
class Matrix {
  public:
    using Domain = D;
    using Elem = typename D::Elem;
    using Vec = std::vector<Elem>;

    Matrix() = default;
    Matrix(D dom, std::size_t rows, std::size_t cols)
        : dom_(std::move(dom)), rows_(rows), cols_(cols), a_(rows * cols, dom_.zero()) {}
    Matrix(D dom, std::size_t rows, std::size_t cols, Vec data)
        : dom_(std::move(dom)), rows_(rows), cols_(cols), a_(std::move(data)) {
        if (a_.size() != rows * cols) throw DomainError("matrix data size mismatch");
    }

    static Matrix zero(const D& dom, std::size_t n) { return Matrix(dom, n, n); }
    static Matrix identity(const D& dom, std::size_t n) {
        Matrix m(dom, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = dom.one();
        return m;
    }
    /// Matrix unit E_ij (0-based).
    static Matrix unit(const D& dom, std::size_t n, std::size_t i, std::size_t j) {
        Matrix m(dom, n, n);
        m(i, j) = dom.one();
        return m;
    }
    /// Build from integer rows, reducing into the domain.
    static Matrix from_ints(const D& dom, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
        std::vector<std::vector<std::int64_t>> v;
        for (auto r : rows) v.emplace_back(r);
        return from_ints(dom, v);
    }
    static Matrix from_ints(const D& dom, const std::vector<std::vector<std::int64_t>>& rows) {
        const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        Matrix m(dom, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw DomainError("ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = dom.from_int(rows[i][j]);
        }
        return m;
    }
    /// Matrix whose columns are the given vectors.
    static Matrix from_columns(const D& dom, std::size_t n, const std::vector<Vec>& cols) {
        Matrix m(dom, n, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
        return m;
    }

    const D& domain() const { return dom_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Elem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Elem& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    /// Row-major flattening.
    const Vec& flatten() const { return a_; }

    Vec row(std::size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
    Vec column(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!dom_.is_zero(x)) return false;
        return true;
    }

    /// True iff the matrix is c*I for some scalar c (including 0).
    bool is_scalar() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if (i == j) {
                    if ((*this)(i, i) != (*this)(0, 0)) return false;
                } else if (!dom_.is_zero((*this)(i, j))) {
                    return false;
                }
            }
        return true;
    }

    Matrix transpose() const {
        Matrix t(dom_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) const {
        Matrix b(dom_, h, w);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    Matrix scaled(const Elem& s) const {
        Matrix m = *this;
        for (auto& x : m.a_) x = dom_.mul(x, s);
        return m;
    }

    Vec apply(const Vec& v) const {
        Vec out(rows_, dom_.zero());
        for (std::size_t i = 0; i < rows_; ++i) {
            Elem acc = dom_.zero();
            for (std::size_t j = 0; j < cols_; ++j) acc = dom_.add(acc, dom_.mul((*this)(i, j), v[j]));
            out[i] = acc;
        }
        return out;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix m = a;
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.dom_.add(a.a_[i], b.a_[i]);
        return m;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix m = a;
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.dom_.sub(a.a_[i], b.a_[i]);
        return m;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix product shape mismatch");
        const D& d = a.dom_;
        Matrix m(d, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Elem& x = a(i, k);
                if (d.is_zero(x)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) = d.add(m(i, j), d.mul(x, b(k, j)));
            }
        return m;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ",[" : "[";
            for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + dom_.to_string((*this)(i, j));
            s += "]";
        }
        return s + "]";
    }

  private:
    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix shape mismatch");
    }

    D dom_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec a_;
};

using Mat = Matrix<Field>;
using Vec = std::vector<Field::Elem>;

/// Reduced row echelon form and pivot columns.
template <class D>
std::pair<Matrix<D>, std::vector<std::size_t>> rref(Matrix<D> m) {
    const D& d = m.domain();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && d.is_zero(m(piv, c))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        const auto inv = d.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = d.mul(m(r, j), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || d.is_zero(m(i, c))) continue;
            const auto f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = d.sub(m(i, j), d.mul(f, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

template <class D>
std::size_t rank(const Matrix<D>& m) {
    return rref(m).second.size();
}

/// Basis of the right null space {v : M v = 0}, one vector per free column.
template <class D>
std::vector<typename Matrix<D>::Vec> kernel(const Matrix<D>& m) {
    const D& d = m.domain();
    auto [r, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<typename Matrix<D>::Vec> out;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        typename Matrix<D>::Vec v(m.cols(), d.zero());
        v[free] = d.one();
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = d.neg(r(i, free));
        out.push_back(std::move(v));
    }
    return out;
}

template <class D>
std::optional<Matrix<D>> try_inverse(const Matrix<D>& m) {
    if (!m.is_square()) return std::nullopt;
    const std::size_t n = m.rows();
    const D& d = m.domain();
    Matrix<D> aug(d, n, 2 * n);
    aug.set_block(0, 0, m);
    aug.set_block(0, n, Matrix<D>::identity(d, n));
    auto [r, pivots] = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    return r.block(0, n, n, n);
}

template <class D>
Matrix<D> inverse(const Matrix<D>& m) {
    auto inv = try_inverse(m);
    if (!inv) throw DomainError("matrix is singular");
    return *inv;
}

/// T^{-1} A T.
template <class D>
Matrix<D> conjugate(const Matrix<D>& a, const Matrix<D>& t) {
    return inverse(t) * a * t;
}

template <class D>
Matrix<D> power(Matrix<D> a, std::uint64_t k) {
    Matrix<D> r = Matrix<D>::identity(a.domain(), a.rows());
    while (k) {
        if (k & 1) r = r * a;
        a = a * a;
        k >>= 1;
    }
    return r;
}

/// Solve M x = b; absent if inconsistent.
template <class D>
std::optional<typename Matrix<D>::Vec> solve(const Matrix<D>& m, const typename Matrix<D>::Vec& b) {
    const D& d = m.domain();
    Matrix<D> aug(d, m.rows(), m.cols() + 1);
    aug.set_block(0, 0, m);
    for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
    auto [r, pivots] = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    typename Matrix<D>::Vec x(m.cols(), d.zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r(i, m.cols());
    return x;
}

/// Entry-wise image under a field embedding.
inline Mat embed(const Mat& m, const FieldEmbedding& e) {
    if (!(m.domain() == e.source())) throw DomainError("embed: matrix is not over the embedding's source field");
    Vec v;
    v.reserve(m.flatten().size());
    for (auto x : m.flatten()) v.push_back(e(x));
    return Mat(e.target(), m.rows(), m.cols(), std::move(v));
}

inline std::vector<Mat> embed(const std::vector<Mat>& s, const FieldEmbedding& e) {
    std::vector<Mat> out;
    out.reserve(s.size());
    for (const auto& m : s) out.push_back(embed(m, e));
    return out;
}

} // namespace wordlen
