// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wordlen/error.hpp"

namespace wordlen {

/**
 * Incrementally grown subspace of D^N kept in fully reduced row echelon form,
 * rows sorted by pivot. The stored rows are therefore the canonical basis of
 * the subspace: two SpanBases over the same ambient space are equal as
 * subspaces iff their rows are equal.
 */
template <class D>
class SpanBasis {
  public:
    using Elem = typename D::Elem;
    using Vec = std::vector<Elem>;

    SpanBasis() = default;
    SpanBasis(D dom, std::size_t ambient) : dom_(std::move(dom)), ambient_(ambient) {}

    const D& domain() const { return dom_; }
    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return rows_.size(); }
    bool full() const { return rows_.size() == ambient_; }
    const std::vector<Vec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return piv_; }

    /// Adds v; returns false if v was already in the span.
    bool insert(Vec v) {
        check(v);
        if (reduce(v)) return false;
        std::size_t p = 0;
        while (dom_.is_zero(v[p])) ++p;
        const Elem inv = dom_.inv(v[p]);
        for (std::size_t j = p; j < ambient_; ++j) v[j] = dom_.mul(v[j], inv);
        for (auto& r : rows_) {
            if (dom_.is_zero(r[p])) continue;
            const Elem c = r[p];
            for (std::size_t j = p; j < ambient_; ++j) r[j] = dom_.sub(r[j], dom_.mul(c, v[j]));
        }
        const auto pos = static_cast<std::size_t>(std::lower_bound(piv_.begin(), piv_.end(), p) - piv_.begin());
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
        piv_.insert(piv_.begin() + static_cast<std::ptrdiff_t>(pos), p);
        return true;
    }

    /// Coordinates of v over rows() if v is in the span.
    std::optional<Vec> contains(const Vec& v) const {
        check(v);
        Vec c(rows_.size(), dom_.zero());
        for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = v[piv_[i]];
        Vec rem = v;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (dom_.is_zero(c[i])) continue;
            for (std::size_t j = piv_[i]; j < ambient_; ++j) rem[j] = dom_.sub(rem[j], dom_.mul(c[i], rows_[i][j]));
        }
        for (const auto& x : rem)
            if (!dom_.is_zero(x)) return std::nullopt;
        return c;
    }

    bool includes(const Vec& v) const { return contains(v).has_value(); }

    friend bool operator==(const SpanBasis& a, const SpanBasis& b) {
        return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
    }

  private:
    void check(const Vec& v) const {
        if (v.size() != ambient_) throw DomainError("span: vector has wrong ambient dimension");
    }

    // Reduces v against all rows; true iff the result is zero.
    bool reduce(Vec& v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Elem c = v[piv_[i]];
            if (dom_.is_zero(c)) continue;
            for (std::size_t j = piv_[i]; j < ambient_; ++j) v[j] = dom_.sub(v[j], dom_.mul(c, rows_[i][j]));
        }
        for (const auto& x : v)
            if (!dom_.is_zero(x)) return false;
        return true;
    }

    D dom_{};
    std::size_t ambient_ = 0;
    std::vector<Vec> rows_;
    std::vector<std::size_t> piv_;
};

} // namespace wordlen
