// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file spans.hpp
 * @brief Word-span filtrations of a generating set S of n x n matrices.
 *
 * W_t = span of all words of length <= t (the empty word is I), computed
 * incrementally: only the matrices that enlarged W_t are multiplied by S to
 * form W_{t+1}. Homogeneous spans U_t = span(S^t) are tracked separately.
 */

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordlen/canonical.hpp"
#include "wordlen/error.hpp"
#include "wordlen/matrix.hpp"
#include "wordlen/span_basis.hpp"

namespace wordlen {

template <class D>
using MatrixSet = std::vector<Matrix<D>>;

namespace detail {

template <class D>
std::size_t check_set(const MatrixSet<D>& s) {
    if (s.empty()) throw DomainError("generating set must be non-empty");
    const std::size_t n = s[0].rows();
    if (n == 0) throw DomainError("matrices must be non-empty");
    for (const auto& m : s)
        if (m.rows() != n || m.cols() != n) throw DomainError("generating set must consist of square matrices of equal size");
    return n;
}

} // namespace detail

/// Nested spans W_0 < W_1 < ... < W_l; level t adds frontier[t].
template <class D>
struct FiltrationChain {
    std::vector<MatrixSet<D>> frontier; ///< frontier[0] = {I}
    SpanBasis<D> algebra;               ///< W_l

    /// W_t rebuilt from the frontiers (W_t = W_l for t >= l).
    SpanBasis<D> level(std::size_t t) const {
        SpanBasis<D> w(algebra.domain(), algebra.ambient());
        for (std::size_t i = 0; i <= t && i < frontier.size(); ++i)
            for (const auto& m : frontier[i]) w.insert(m.flatten());
        return w;
    }
};

struct LengthReport {
    std::size_t n = 0;
    std::uint64_t p = 0;
    unsigned e = 1;
    std::size_t k_set = 0;
    std::vector<std::size_t> dims; ///< dim W_0, ..., dim W_l
    std::size_t length = 0;
    std::size_t algebra_dim = 0;
    bool irreducible = false;
    double millis = 0;
};

template <class D>
struct Filtration {
    LengthReport report;
    FiltrationChain<D> chain;
};

/**
 * The length filtration of S. Throws CapExceeded if W_{cap+1} != W_cap
 * (impossible for cap >= n^2 - 1). A cap of 0 means n^2.
 */
template <class D>
Filtration<D> span_filtration(const MatrixSet<D>& s, std::size_t cap = 0) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = detail::check_set(s);
    const D& dom = s[0].domain();
    if (cap == 0) cap = n * n;
    Filtration<D> out;
    auto& chain = out.chain;
    chain.algebra = SpanBasis<D>(dom, n * n);
    const auto id = Matrix<D>::identity(dom, n);
    chain.algebra.insert(id.flatten());
    chain.frontier.push_back({id});
    out.report.dims.push_back(1);
    for (std::size_t t = 0;; ++t) {
        MatrixSet<D> next;
        for (const auto& m : chain.frontier[t])
            for (const auto& a : s) {
                auto prod = m * a;
                if (chain.algebra.insert(prod.flatten())) next.push_back(std::move(prod));
            }
        if (next.empty()) {
            out.report.length = t;
            break;
        }
        if (t + 1 > cap) throw CapExceeded("span filtration did not stabilize within cap " + std::to_string(cap));
        chain.frontier.push_back(std::move(next));
        out.report.dims.push_back(chain.algebra.dim());
    }
    out.report.n = n;
    out.report.p = dom.characteristic();
    out.report.e = dom.degree();
    out.report.k_set = s.size();
    out.report.algebra_dim = chain.algebra.dim();
    out.report.irreducible = out.report.algebra_dim == n * n;
    out.report.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

template <class D>
std::size_t length(const MatrixSet<D>& s) {
    return span_filtration(s).report.length;
}

/// Generates Mat_n as an algebra, i.e. the generated algebra has dimension n^2.
template <class D>
bool is_irreducible(const MatrixSet<D>& s) {
    return span_filtration(s).report.irreducible;
}

/// U_{t+1} = span(U_t * S).
template <class D>
SpanBasis<D> next_homogeneous(const SpanBasis<D>& u, const MatrixSet<D>& s) {
    const std::size_t n = s[0].rows();
    const D& dom = s[0].domain();
    SpanBasis<D> out(dom, n * n);
    for (const auto& row : u.rows()) {
        const Matrix<D> b(dom, n, n, row);
        for (const auto& a : s) {
            out.insert((b * a).flatten());
            if (out.full()) return out;
        }
    }
    return out;
}

/// U_0 = span{I}, ..., U_upto with U_t = span(S^t).
template <class D>
std::vector<SpanBasis<D>> homogeneous_spans(const MatrixSet<D>& s, std::size_t upto) {
    const std::size_t n = detail::check_set(s);
    const D& dom = s[0].domain();
    std::vector<SpanBasis<D>> u;
    u.emplace_back(dom, n * n);
    u[0].insert(Matrix<D>::identity(dom, n).flatten());
    for (std::size_t t = 1; t <= upto; ++t) u.push_back(next_homogeneous(u.back(), s));
    return u;
}

struct PrimitivityResult {
    std::optional<std::size_t> index;  ///< smallest tau with span(S^tau) = Mat_n
    std::size_t examined = 0;          ///< largest exponent whose span was computed
    bool certified_absent = false;     ///< the sequence of spans entered a cycle of non-full spaces
    std::vector<std::size_t> dims;     ///< dim U_1, dim U_2, ...
};

/**
 * Smallest tau >= 1 with span(S^tau) = Mat_n. The sequence U_t is
 * deterministic (U_{t+1} depends only on U_t), so Brent's cycle detection
 * certifies absence as soon as it revisits a non-full space; otherwise the
 * search stops at cap (default n^4).
 */
template <class D>
PrimitivityResult homogeneous_index(const MatrixSet<D>& s, std::size_t cap = 0) {
    const std::size_t n = detail::check_set(s);
    const D& dom = s[0].domain();
    if (cap == 0) cap = n * n * n * n;
    PrimitivityResult out;
    SpanBasis<D> u(dom, n * n);
    for (const auto& a : s) u.insert(a.flatten());
    SpanBasis<D> tortoise = u;
    std::size_t power = 1, lam = 1;
    for (std::size_t t = 1;; ++t) {
        out.examined = t;
        out.dims.push_back(u.dim());
        if (u.full()) {
            out.index = t;
            return out;
        }
        if (u.dim() == 0 || (t > 1 && u == tortoise)) {
            out.certified_absent = true;
            return out;
        }
        if (t >= cap) return out;
        if (power == lam) {
            tortoise = u;
            power *= 2;
            lam = 0;
        }
        u = next_homogeneous(u, s);
        ++lam;
    }
}

/**
 * Span of the rho x rho bottom-left blocks, in the adapted basis, of all
 * words of length exactly t.
 */
inline SpanBasis<Field> block_projected_span(const MatrixSet<Field>& s, std::size_t t, const AdaptedBasis& basis) {
    const std::size_t n = detail::check_set(s);
    if (basis.n != n) throw DomainError("adapted basis has the wrong size");
    const Field& F = s[0].domain();
    const Mat tinv = inverse(basis.transform);
    MatrixSet<Field> adapted;
    for (const auto& a : s) adapted.push_back(tinv * a * basis.transform);
    const auto u = homogeneous_spans(adapted, t);
    SpanBasis<Field> out(F, basis.rho * basis.rho);
    for (const auto& row : u[t].rows()) out.insert(basis.bottom_left(Mat(F, n, n, row)).flatten());
    return out;
}

/// Every element of the span (of flattened r x r matrices) is a scalar matrix.
template <class D>
bool spans_only_scalars(const SpanBasis<D>& span, std::size_t r) {
    for (const auto& row : span.rows())
        if (!Matrix<D>(span.domain(), r, r, row).is_scalar()) return false;
    return true;
}

/// V_0 = span(start), V_{t+1} = V_t + sum_{A in S} A V_t; frontier[t] holds the vectors added at level t.
struct VectorFiltration {
    std::vector<std::vector<Vec>> frontier;
    SpanBasis<Field> span;
    std::vector<std::size_t> dims;
};

inline VectorFiltration vector_filtration(const MatrixSet<Field>& s, const std::vector<Vec>& start, std::size_t cap = 0) {
    const std::size_t n = detail::check_set(s);
    if (cap == 0) cap = n;
    VectorFiltration out;
    out.span = SpanBasis<Field>(s[0].domain(), n);
    out.frontier.emplace_back();
    for (const auto& v : start)
        if (out.span.insert(v)) out.frontier[0].push_back(v);
    out.dims.push_back(out.span.dim());
    for (std::size_t t = 0; t < cap && !out.frontier.back().empty(); ++t) {
        std::vector<Vec> next;
        for (const auto& v : out.frontier.back())
            for (const auto& a : s) {
                Vec w = a.apply(v);
                if (out.span.insert(w)) next.push_back(std::move(w));
            }
        if (next.empty()) break;
        out.frontier.push_back(std::move(next));
        out.dims.push_back(out.span.dim());
    }
    return out;
}

} // namespace wordlen
