// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "wordlen/canonical.hpp"
#include "wordlen/error.hpp"
#include "wordlen/extension.hpp"
#include "wordlen/matrix.hpp"

namespace wordlen {

/// A word: generator indices a_1 ... a_k, read as the product S[a_1] ... S[a_k]. Empty = identity.
using Word = std::vector<std::uint32_t>;

/**
 * Formal linear combination of words in a generating set. Like terms are
 * merged and zero terms dropped, so max_length() is the exact word-length
 * budget the expression certifies.
 */
class WordExpr {
  public:
    using Elem = Field::Elem;

    /// Expressions larger than this are refused rather than expanded.
    static constexpr std::size_t max_terms = 1u << 21;

    WordExpr() = default;
    explicit WordExpr(Field f) : f_(std::move(f)) {}

    static WordExpr word(const Field& f, Word w, Elem coef = 1) {
        WordExpr e(f);
        e.add_term(std::move(w), coef);
        return e;
    }
    static WordExpr identity(const Field& f) { return word(f, {}); }

    const Field& field() const { return f_; }
    const std::map<Word, Elem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::size_t max_length() const {
        std::size_t l = 0;
        for (const auto& [w, c] : terms_) l = std::max(l, w.size());
        return l;
    }

    void add_term(Word w, Elem c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(std::move(w), c);
        if (!fresh) {
            it->second = f_.add(it->second, c);
            if (it->second == 0) terms_.erase(it);
        }
        if (terms_.size() > max_terms) throw CapExceeded("word expression exceeds term cap");
    }

    WordExpr scaled(Elem s) const {
        WordExpr out(f_);
        if (s == 0) return out;
        for (const auto& [w, c] : terms_) out.terms_.emplace(w, f_.mul(c, s));
        return out;
    }

    friend WordExpr operator+(const WordExpr& a, const WordExpr& b) {
        WordExpr out = a;
        for (const auto& [w, c] : b.terms_) out.add_term(w, c);
        return out;
    }
    friend WordExpr operator-(const WordExpr& a, const WordExpr& b) { return a + b.scaled(a.f_.neg(1)); }
    friend WordExpr operator*(const WordExpr& a, const WordExpr& b) {
        WordExpr out(a.f_);
        for (const auto& [wa, ca] : a.terms_)
            for (const auto& [wb, cb] : b.terms_) {
                Word w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                out.add_term(std::move(w), a.f_.mul(ca, cb));
            }
        return out;
    }

    /// Polynomial in an expression: sum_i psi_i X^i.
    static WordExpr poly_of(const Poly& psi, const WordExpr& x) {
        WordExpr out(x.f_);
        WordExpr pw = identity(x.f_);
        for (std::size_t i = 0; i < psi.coeffs().size(); ++i) {
            out = out + pw.scaled(psi.coeffs()[i]);
            if (i + 1 < psi.coeffs().size()) pw = pw * x;
        }
        return out;
    }

    WordExpr embedded(const FieldEmbedding& e) const {
        if (!(e.source() == f_)) throw DomainError("word expression: embedding source mismatch");
        WordExpr out(e.target());
        for (const auto& [w, c] : terms_) out.terms_.emplace(w, e(c));
        return out;
    }

    /**
     * Value over the generating set. Terms are visited in lexicographic word
     * order, so consecutive words share prefixes and each prefix product is
     * formed once.
     */
    Mat evaluate(const std::vector<Mat>& s) const {
        if (s.empty()) throw DomainError("word expression: empty generating set");
        const std::size_t n = s[0].rows();
        Mat acc = Mat::zero(f_, n);
        std::vector<Mat> prefix{Mat::identity(f_, n)};
        Word cur;
        for (const auto& [w, c] : terms_) {
            std::size_t common = 0;
            while (common < cur.size() && common < w.size() && cur[common] == w[common]) ++common;
            cur.resize(common);
            prefix.resize(common + 1);
            for (std::size_t i = common; i < w.size(); ++i) {
                if (w[i] >= s.size()) throw DomainError("word expression refers to a missing generator");
                prefix.push_back(prefix.back() * s[w[i]]);
                cur.push_back(w[i]);
            }
            acc = acc + prefix.back().scaled(c);
        }
        return acc;
    }

  private:
    Field f_;
    std::map<Word, Elem> terms_;
};

} // namespace wordlen
