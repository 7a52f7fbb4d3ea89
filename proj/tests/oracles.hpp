// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference computations that share no code with the library: plain integer
// matrices, brute-force word enumeration, textbook elimination.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "wordlen/matrix.hpp"

namespace oracle {

// ---- GF(2), n <= 3, matrices packed into 9-bit masks (bit 3i+j = entry (i,j)).

inline std::uint32_t mul2(std::uint32_t a, std::uint32_t b, int n) {
    std::uint32_t c = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int bit = 0;
            for (int k = 0; k < n; ++k) bit ^= ((a >> (i * n + k)) & 1) & ((b >> (k * n + j)) & 1);
            c |= static_cast<std::uint32_t>(bit) << (i * n + j);
        }
    return c;
}

inline std::uint32_t identity2(int n) {
    std::uint32_t m = 0;
    for (int i = 0; i < n; ++i) m |= 1u << (i * n + i);
    return m;
}

/// XOR basis insertion; true if v was independent.
inline bool xor_insert(std::vector<std::uint32_t>& basis, std::uint32_t v) {
    for (auto b : basis) v = std::min(v, v ^ b);
    if (!v) return false;
    basis.push_back(v);
    std::sort(basis.rbegin(), basis.rend());
    return true;
}

/**
 * Length by enumerating every word up to length max_len (words of equal value
 * at the same length are enumerated once). The result is the least k with
 * dim span(words <= k) = dim span(words <= max_len).
 */
inline std::size_t brute_length_gf2(const std::vector<std::uint32_t>& s, int n, int max_len = 9) {
    std::vector<std::uint32_t> basis;
    std::vector<std::size_t> dims;
    std::set<std::uint32_t> level{identity2(n)};
    for (int t = 0; t <= max_len; ++t) {
        for (auto m : level) xor_insert(basis, m);
        dims.push_back(basis.size());
        std::set<std::uint32_t> next;
        for (auto m : level)
            for (auto a : s) next.insert(mul2(m, a, n));
        level = std::move(next);
    }
    std::size_t k = 0;
    while (dims[k] != dims.back()) ++k;
    return k;
}

// ---- prime fields, plain int64 matrices.

using IMat = std::vector<std::vector<std::int64_t>>;

inline IMat imul(const IMat& a, const IMat& b, std::int64_t p) {
    const std::size_t n = a.size();
    IMat c(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < n; ++j) c[i][j] = (c[i][j] + a[i][k] * b[k][j]) % p;
    return c;
}

inline std::int64_t ipow(std::int64_t a, std::int64_t e, std::int64_t p) {
    std::int64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

/// Rank of a list of vectors mod p by Gaussian elimination.
inline std::size_t irank(std::vector<std::vector<std::int64_t>> rows, std::int64_t p) {
    std::size_t r = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        const std::int64_t inv = ipow(rows[r][c], p - 2, p);
        for (auto& x : rows[r]) x = x * inv % p;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i][c] % p) {
                const std::int64_t f = rows[i][c];
                for (std::size_t j = 0; j < cols; ++j) rows[i][j] = ((rows[i][j] - f * rows[r][j]) % p + p) % p;
            }
        ++r;
    }
    return r;
}

inline std::vector<std::int64_t> flat(const IMat& m) {
    std::vector<std::int64_t> v;
    for (const auto& r : m) v.insert(v.end(), r.begin(), r.end());
    return v;
}

inline IMat from_lib(const wordlen::Mat& m) {
    IMat a(m.rows(), std::vector<std::int64_t>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = static_cast<std::int64_t>(m(i, j));
    return a;
}

/// Values of all words of length <= len (prime field only).
inline std::vector<IMat> words_upto(const std::vector<IMat>& s, std::size_t len, std::int64_t p) {
    const std::size_t n = s[0].size();
    IMat id(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    std::set<IMat> all{id}, level{id};
    for (std::size_t t = 0; t < len; ++t) {
        std::set<IMat> next;
        for (const auto& m : level)
            for (const auto& a : s) next.insert(imul(m, a, p));
        all.insert(next.begin(), next.end());
        level = std::move(next);
    }
    return {all.begin(), all.end()};
}

/// h lies in the span of all words of length <= len.
inline bool in_word_span(const std::vector<IMat>& s, const IMat& h, std::size_t len, std::int64_t p) {
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& w : words_upto(s, len, p)) rows.push_back(flat(w));
    const std::size_t r = irank(rows, p);
    rows.push_back(flat(h));
    return irank(rows, p) == r;
}

/// Length over a prime field by brute force (small instances only).
inline std::size_t brute_length(const std::vector<IMat>& s, std::int64_t p, std::size_t max_len) {
    std::vector<std::size_t> dims;
    for (std::size_t t = 0; t <= max_len; ++t) {
        std::vector<std::vector<std::int64_t>> rows;
        for (const auto& w : words_upto(s, t, p)) rows.push_back(flat(w));
        dims.push_back(irank(rows, p));
    }
    std::size_t k = 0;
    while (dims[k] != dims.back()) ++k;
    return k;
}

} // namespace oracle
