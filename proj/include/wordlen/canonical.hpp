// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file canonical.hpp
 * @brief Minimal and characteristic polynomials, rational normal form, and the
 *        structural constructions on top of it (unit submatrix, eigenvalue
 *        choice for rank minimization, adapted basis of a square-zero matrix).
 */

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "wordlen/error.hpp"
#include "wordlen/extension.hpp"
#include "wordlen/matrix.hpp"
#include "wordlen/poly.hpp"
#include "wordlen/span_basis.hpp"

namespace wordlen {

/// f(A) by Horner's rule.
inline Mat evaluate(const Poly& f, const Mat& a) {
    const Field& F = a.domain();
    Mat r = Mat::zero(F, a.rows());
    for (std::size_t i = f.coeffs().size(); i-- > 0;) {
        r = r * a;
        for (std::size_t k = 0; k < a.rows(); ++k) r(k, k) = F.add(r(k, k), f.coeffs()[i]);
    }
    return r;
}

/// Monic generator of {g : g(A) v = 0}.
inline Poly vector_minimal_polynomial(const Mat& a, const Vec& v) {
    const Field& F = a.domain();
    const std::size_t n = a.rows();
    std::vector<Vec> krylov{v};
    for (;;) {
        Vec next = a.apply(krylov.back());
        const Mat k = Mat::from_columns(F, n, krylov);
        if (auto x = solve(k, next)) {
            // next = sum x_i A^i v  =>  t^d - sum x_i t^i
            std::vector<Field::Elem> c(krylov.size() + 1);
            for (std::size_t i = 0; i < krylov.size(); ++i) c[i] = F.neg((*x)[i]);
            c.back() = 1;
            return Poly(F, std::move(c));
        }
        krylov.push_back(std::move(next));
    }
}

/// Least common multiple of the Krylov minimal polynomials of the standard basis.
inline Poly minimal_polynomial(const Mat& a) {
    if (!a.is_square() || a.rows() == 0) throw DomainError("minimal polynomial needs a non-empty square matrix");
    const Field& F = a.domain();
    Poly m = Poly::constant(F, 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Vec e(a.rows(), 0);
        e[i] = 1;
        m = lcm(m, vector_minimal_polynomial(a, e));
        if (m.degree() == static_cast<int>(a.rows())) break;
    }
    return m;
}

/// det(tI - A) via similarity reduction to upper Hessenberg form.
inline Poly characteristic_polynomial(const Mat& a) {
    if (!a.is_square()) throw DomainError("characteristic polynomial needs a square matrix");
    const Field& F = a.domain();
    const std::size_t n = a.rows();
    Mat h = a;
    for (std::size_t c = 0; c + 2 <= n; ++c) {
        std::size_t piv = c + 1;
        while (piv < n && h(piv, c) == 0) ++piv;
        if (piv == n) continue;
        if (piv != c + 1) {
            for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(c + 1, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, c + 1));
        }
        const auto inv = F.inv(h(c + 1, c));
        for (std::size_t i = c + 2; i < n; ++i) {
            const auto f = F.mul(h(i, c), inv);
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) h(i, j) = F.sub(h(i, j), F.mul(f, h(c + 1, j)));
            for (std::size_t r = 0; r < n; ++r) h(r, c + 1) = F.add(h(r, c + 1), F.mul(f, h(r, i)));
        }
    }
    std::vector<Poly> p{Poly::constant(F, 1)};
    for (std::size_t m = 1; m <= n; ++m) {
        Poly pm = Poly::linear(F, h(m - 1, m - 1)) * p[m - 1];
        Field::Elem prod = 1;
        for (std::size_t i = m - 1; i-- > 0;) {
            prod = F.mul(prod, h(i + 1, i));
            pm = pm - (p[i] * Poly::constant(F, F.mul(h(i, m - 1), prod)));
        }
        p.push_back(std::move(pm));
    }
    return p[n];
}

/// Companion matrix: ones on the subdiagonal, last column -c_0, ..., -c_{m-1}.
inline Mat companion(const Poly& f) {
    if (f.degree() < 1 || !f.is_monic()) throw DomainError("companion matrix needs a monic polynomial of degree >= 1");
    const Field& F = f.field();
    const std::size_t m = static_cast<std::size_t>(f.degree());
    Mat c = Mat::zero(F, m);
    for (std::size_t i = 0; i + 1 < m; ++i) c(i + 1, i) = 1;
    for (std::size_t i = 0; i < m; ++i) c(i, m - 1) = F.neg(f[i]);
    return c;
}

inline Mat block_diagonal(const Field& F, const std::vector<Mat>& blocks) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.rows();
    Mat m = Mat::zero(F, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        m.set_block(off, off, b);
        off += b.rows();
    }
    return m;
}

/// Invariant factors f_1 | f_2 | ... | f_k (all monic, nonconstant); f_k is the minimal polynomial.
struct InvariantFactors {
    std::vector<Poly> factors;

    std::size_t count() const { return factors.size(); }
    std::vector<std::size_t> block_sizes() const {
        std::vector<std::size_t> s;
        for (const auto& f : factors) s.push_back(static_cast<std::size_t>(f.degree()));
        return s;
    }
    const Poly& minimal() const { return factors.back(); }
};

struct RationalNormalForm {
    Mat transform; ///< T with T^{-1} A T = diag(C_{f_1}, ..., C_{f_k})
    InvariantFactors invariants;

    Mat normal_form() const {
        std::vector<Mat> blocks;
        for (const auto& f : invariants.factors) blocks.push_back(companion(f));
        return block_diagonal(transform.domain(), blocks);
    }
};

namespace detail {

inline Vec add_vec(const Field& F, Vec a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = F.add(a[i], b[i]);
    return a;
}

} // namespace detail

/**
 * Rational normal form by primary decomposition.
 *
 * For each irreducible p | minpoly, cyclic generators of the p-primary part are
 * chosen level by level in ker p(A)^j modulo ker p(A)^{j-1} + p(A) ker p(A)^{j+1};
 * generators of equal rank across different p are then summed (Chinese
 * remainder) into cyclic vectors for the invariant factors.
 */
inline RationalNormalForm rational_normal_form(const Mat& a) {
    if (!a.is_square() || a.rows() == 0) throw DomainError("rational normal form needs a non-empty square matrix");
    const Field& F = a.domain();
    const std::size_t n = a.rows();
    const Poly phi = minimal_polynomial(a);

    auto krylov_basis = [&](const Vec& v, std::size_t d) {
        std::vector<Vec> cols{v};
        while (cols.size() < d) cols.push_back(a.apply(cols.back()));
        return cols;
    };

    if (phi.degree() == static_cast<int>(n)) {
        Vec e1(n, 0);
        e1[0] = 1;
        if (vector_minimal_polynomial(a, e1).degree() == static_cast<int>(n))
            return {Mat::from_columns(F, n, krylov_basis(e1, n)), {{phi}}};
    }

    struct Gen {
        Vec v;
        unsigned exponent;
    };
    struct Primary {
        Poly p;
        std::vector<Gen> gens; // descending exponent
    };
    std::vector<Primary> primaries;
    std::size_t k = 0;
    for (const auto& pf : factor(phi)) {
        const Mat N = evaluate(pf.factor, a);
        const unsigned m = pf.multiplicity;
        std::vector<std::vector<Vec>> ker(m + 2);
        Mat Nj = Mat::identity(F, n);
        for (unsigned j = 1; j <= m; ++j) {
            Nj = Nj * N;
            ker[j] = kernel(Nj);
        }
        ker[m + 1] = ker[m];
        Primary pr{pf.factor, {}};
        const std::size_t dp = static_cast<std::size_t>(pf.factor.degree());
        for (unsigned j = m; j >= 1; --j) {
            SpanBasis<Field> cur(F, n);
            for (const auto& x : ker[j - 1]) cur.insert(x);
            for (const auto& x : ker[j + 1]) cur.insert(N.apply(x));
            for (const auto& x : ker[j]) {
                if (cur.includes(x)) continue;
                pr.gens.push_back({x, j});
                Vec y = x;
                for (std::size_t i = 0; i < dp; ++i) {
                    cur.insert(y);
                    y = a.apply(y);
                }
            }
        }
        k = std::max(k, pr.gens.size());
        primaries.push_back(std::move(pr));
    }

    // Largest invariant factor first.
    std::vector<Poly> facs;
    std::vector<Vec> cyc;
    for (std::size_t i = 0; i < k; ++i) {
        Poly f = Poly::constant(F, 1);
        Vec v(n, 0);
        for (const auto& pr : primaries) {
            if (i >= pr.gens.size()) continue;
            for (unsigned e = 0; e < pr.gens[i].exponent; ++e) f = f * pr.p;
            v = detail::add_vec(F, v, pr.gens[i].v);
        }
        facs.push_back(f);
        cyc.push_back(v);
    }
    std::reverse(facs.begin(), facs.end());
    std::reverse(cyc.begin(), cyc.end());
    std::vector<Vec> cols;
    for (std::size_t i = 0; i < k; ++i)
        for (auto& c : krylov_basis(cyc[i], static_cast<std::size_t>(facs[i].degree()))) cols.push_back(std::move(c));
    if (cols.size() != n) throw std::logic_error("rational normal form: cyclic decomposition has wrong dimension");
    return {Mat::from_columns(F, n, cols), {std::move(facs)}};
}

inline InvariantFactors invariant_factors(const Mat& a) { return rational_normal_form(a).invariants; }

/// Rows I and columns J (0-based, ascending) of a unit square submatrix A[I|J] with I and J disjoint.
struct UnitSubmatrix {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

/**
 * In each companion block of size m, take floor(m/2) pairwise non-adjacent
 * subdiagonal ones at local positions (1,0), (3,2), (5,4), ...; their union is
 * the diagonal of an identity submatrix with |I| >= (n - k)/2.
 */
inline UnitSubmatrix claim2_submatrix(const Mat& a_rnf, const InvariantFactors& inv) {
    std::vector<Mat> blocks;
    for (const auto& f : inv.factors) blocks.push_back(companion(f));
    if (blocks.empty() || !(block_diagonal(a_rnf.domain(), blocks) == a_rnf))
        throw DomainError("claim2_submatrix: matrix is not the rational normal form of the given invariant factors");
    UnitSubmatrix out;
    std::size_t off = 0;
    for (auto m : inv.block_sizes()) {
        for (std::size_t i = 0; i < m / 2; ++i) {
            out.rows.push_back(off + 2 * i + 1);
            out.cols.push_back(off + 2 * i);
        }
        off += m;
    }
    return out;
}

/// Selector matrix picking the given rows (|rows| x n).
inline Mat row_selector(const Field& F, std::size_t n, const std::vector<std::size_t>& rows) {
    Mat p(F, rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i) p(i, rows[i]) = 1;
    return p;
}

/// Selector matrix picking the given columns (n x |cols|).
inline Mat column_selector(const Field& F, std::size_t n, const std::vector<std::size_t>& cols) {
    return row_selector(F, n, cols).transpose();
}

struct MuChoice {
    FieldEmbedding embedding; ///< base field -> field containing mu
    Field::Elem mu = 0;
    std::size_t rank = 0;     ///< rank(A - mu I) = n - (number of invariant factors)
};

/**
 * The eigenvalue mu minimizing rank(A - mu I), searched over the roots of the
 * characteristic polynomial in its splitting field; ties go to the smallest
 * element in encoding order.
 */
inline MuChoice choose_mu(const Mat& a, const ExtensionCap& cap = {}) {
    const auto sf = splitting_field(characteristic_polynomial(a), cap);
    const Mat ak = embed(a, sf.embedding);
    const Field& K = sf.field;
    MuChoice best{sf.embedding, 0, a.rows() + 1};
    std::optional<Field::Elem> last;
    for (auto r : sf.roots) {
        if (last && *last == r) continue;
        last = r;
        Mat m = ak;
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) = K.sub(m(i, i), r);
        const std::size_t rk = rank(m);
        if (rk < best.rank) {
            best.mu = r;
            best.rank = rk;
        }
    }
    return best;
}

/// Basis in which a square-zero H reads [[0,0,I_rho],[0,0,0],[0,0,0]] with block sizes (rho, n-2rho, rho).
struct AdaptedBasis {
    Mat transform;
    std::size_t rho = 0;
    std::size_t n = 0;

    std::size_t middle() const { return n - 2 * rho; }
    /// rho x rho block in the last rows and first columns of T^{-1} X T.
    Mat bottom_left(const Mat& x_adapted) const { return x_adapted.block(n - rho, 0, rho, rho); }
    Mat canonical_form() const {
        Mat h = Mat::zero(transform.domain(), n);
        for (std::size_t i = 0; i < rho; ++i) h(i, n - rho + i) = 1;
        return h;
    }
};

/**
 * Columns of T: a basis c_i = H e_{j_i} of Im H (pivot columns of H), then an
 * extension of it to a basis of Ker H, then the preimages e_{j_i}.
 */
inline AdaptedBasis adapt_square_zero_basis(const Mat& h) {
    if (!h.is_square()) throw DomainError("adapted basis needs a square matrix");
    if (h.is_zero()) throw DomainError("adapted basis needs a non-zero matrix");
    if (!(h * h).is_zero()) throw DomainError("adapted basis needs a square-zero matrix");
    const Field& F = h.domain();
    const std::size_t n = h.rows();
    const auto pivots = rref(h).second;
    std::vector<Vec> cols;
    SpanBasis<Field> span(F, n);
    for (auto j : pivots) {
        cols.push_back(h.column(j));
        span.insert(cols.back());
    }
    for (auto& v : kernel(h))
        if (span.insert(v)) cols.push_back(std::move(v));
    for (auto j : pivots) {
        Vec e(n, 0);
        e[j] = 1;
        cols.push_back(std::move(e));
    }
    return {Mat::from_columns(F, n, cols), pivots.size(), n};
}

} // namespace wordlen
