// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file poly.hpp
 * @brief Univariate polynomials over a finite field, with gcd and factorization.
 *
 * Factorization is the textbook pipeline: square-free decomposition,
 * distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting.
 * Randomness enters only through an explicit seed, and factor lists are
 * returned in a canonical order, so results are reproducible.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wordlen/error.hpp"
#include "wordlen/field.hpp"

namespace wordlen {

class Poly {
  public:
    using Elem = Field::Elem;

    Poly() = default;
    explicit Poly(Field f) : f_(std::move(f)) {}
    Poly(Field f, std::vector<Elem> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const Field& f, Elem c) { return Poly(f, {c}); }
    static Poly x(const Field& f) { return Poly(f, {0, 1}); }
    /// t - a
    static Poly linear(const Field& f, Elem a) { return Poly(f, {f.neg(a), 1}); }
    static Poly monomial(const Field& f, Elem c, std::size_t k) {
        std::vector<Elem> v(k + 1, 0);
        v[k] = c;
        return Poly(f, std::move(v));
    }

    const Field& field() const { return f_; }
    const std::vector<Elem>& coeffs() const { return c_; }
    /// Degree, with -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    Elem leading() const { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    Elem operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

    Poly monic() const {
        if (is_zero()) return *this;
        const Elem li = f_.inv(leading());
        std::vector<Elem> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_.mul(c_[i], li);
        return Poly(f_, std::move(v));
    }

    Elem eval(Elem a) const {
        Elem r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = f_.add(f_.mul(r, a), *it);
        return r;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly(f_);
        std::vector<Elem> v(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = f_.mul(f_.from_int(static_cast<std::int64_t>(i % f_.characteristic())), c_[i]);
        return Poly(f_, std::move(v));
    }

    Poly scaled(Elem s) const {
        std::vector<Elem> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_.mul(c_[i], s);
        return Poly(f_, std::move(v));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        const auto& f = a.f_;
        std::vector<Elem> v(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.add(a[i], b[i]);
        return Poly(f, std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        const auto& f = a.f_;
        std::vector<Elem> v(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.sub(a[i], b[i]);
        return Poly(f, std::move(v));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        const auto& f = a.f_;
        if (a.is_zero() || b.is_zero()) return Poly(f);
        std::vector<Elem> v(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (!a.c_[i]) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = f.add(v[i + j], f.mul(a.c_[i], b.c_[j]));
        }
        return Poly(f, std::move(v));
    }

    /// Quotient and remainder of Euclidean division.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw DomainError("polynomial division by zero");
        const auto& f = a.f_;
        if (a.degree() < b.degree()) return {Poly(f), a};
        std::vector<Elem> r = a.c_;
        std::vector<Elem> q(a.c_.size() - b.c_.size() + 1, 0);
        const Elem li = f.inv(b.leading());
        const std::size_t db = b.c_.size() - 1;
        for (std::size_t k = r.size(); k-- > db;) {
            const Elem c = f.mul(r[k], li);
            if (!c) continue;
            q[k - db] = c;
            for (std::size_t j = 0; j <= db; ++j) r[k - db + j] = f.sub(r[k - db + j], f.mul(c, b.c_[j]));
        }
        r.resize(db);
        return {Poly(f, std::move(q)), Poly(f, std::move(r))};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    /// Canonical order: by degree, then coefficients from the top.
    friend bool operator<(const Poly& a, const Poly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return std::lexicographical_compare(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(), b.c_.rend());
    }

    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (!c_[i]) continue;
            if (!s.empty()) s += " + ";
            const bool unit = c_[i] == 1 && i > 0;
            if (!unit) s += f_.to_string(c_[i]);
            if (i > 0) s += (unit ? "" : "*") + var + (i > 1 ? "^" + std::to_string(i) : "");
        }
        return s;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    Field f_;
    std::vector<Elem> c_;
};

/// Monic gcd (zero iff both inputs are zero).
inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field());
    return (a * b / gcd(a, b)).monic();
}

inline Poly powmod(Poly base, std::uint64_t k, const Poly& m) {
    Poly r = Poly::constant(m.field(), 1) % m;
    base = base % m;
    while (k) {
        if (k & 1) r = r * base % m;
        base = base * base % m;
        k >>= 1;
    }
    return r;
}

/// Polynomial composition a(b(t)).
inline Poly compose(const Poly& a, const Poly& b) {
    Poly r(a.field());
    for (std::size_t i = a.coeffs().size(); i-- > 0;) r = r * b + Poly::constant(a.field(), a.coeffs()[i]);
    return r;
}

/// Product of (t - r) over the given roots.
inline Poly from_roots(const Field& f, const std::vector<Field::Elem>& roots) {
    Poly r = Poly::constant(f, 1);
    for (auto a : roots) r = r * Poly::linear(f, a);
    return r;
}

struct PolyFactor {
    Poly factor;
    unsigned multiplicity = 1;
};

namespace detail {

// p-th root of a polynomial whose derivative vanishes: sum a_{ip} t^{ip} -> sum a_{ip}^{1/p} t^i.
inline Poly poly_pth_root(const Poly& f) {
    const Field& F = f.field();
    const std::uint64_t p = F.characteristic();
    const std::uint64_t root_exp = F.order() / p; // a^(q/p) is the p-th root in GF(q)
    std::vector<Field::Elem> v(f.coeffs().size() / p + 1, 0);
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) v[i / p] = F.pow(f.coeffs()[i], root_exp);
    return Poly(F, std::move(v));
}

inline void squarefree_rec(const Poly& f, unsigned mult, std::vector<PolyFactor>& out) {
    if (f.degree() <= 0) return;
    const Poly d = f.derivative();
    if (d.is_zero()) {
        squarefree_rec(poly_pth_root(f), mult * static_cast<unsigned>(f.field().characteristic()), out);
        return;
    }
    Poly c = gcd(f, d);
    Poly w = f / c;
    unsigned i = 1;
    while (w.degree() > 0) {
        Poly y = gcd(w, c);
        Poly z = w / y;
        if (z.degree() > 0) out.push_back({z.monic(), i * mult});
        ++i;
        w = y;
        c = c / y;
    }
    if (c.degree() > 0)
        squarefree_rec(poly_pth_root(c), mult * static_cast<unsigned>(f.field().characteristic()), out);
}

// Equal-degree splitting of a squarefree monic g whose irreducible factors all have degree d.
template <class Rng>
void equal_degree_split(const Poly& g, unsigned d, Rng& rng, std::vector<Poly>& out) {
    if (g.degree() <= static_cast<int>(d)) {
        out.push_back(g);
        return;
    }
    const Field& F = g.field();
    const std::uint64_t q = F.order();
    for (;;) {
        std::vector<Field::Elem> a(g.degree());
        for (auto& x : a) x = F.random(rng);
        Poly r(F, a);
        if (r.degree() <= 0) continue;
        Poly b(F);
        if (q % 2 == 1) {
            // r^((q^d - 1)/2) = (prod_{i<d} r^(q^i))^((q-1)/2)
            Poly norm = Poly::constant(F, 1), cur = r;
            for (unsigned i = 0; i < d; ++i) {
                norm = norm * cur % g;
                cur = powmod(cur, q, g);
            }
            b = powmod(norm, (q - 1) / 2, g) - Poly::constant(F, 1);
        } else {
            // absolute trace to GF(2): sum of r^(2^i), i < e*d
            Poly cur = r % g;
            b = Poly(F);
            for (unsigned i = 0; i < F.degree() * d; ++i) {
                b = b + cur;
                cur = cur * cur % g;
            }
        }
        Poly h = gcd(g, b);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            equal_degree_split(h, d, rng, out);
            equal_degree_split(g / h, d, rng, out);
            return;
        }
    }
}

} // namespace detail

/// Square-free decomposition f = lc * prod g_i^{m_i} with g_i squarefree, monic, pairwise coprime.
inline std::vector<PolyFactor> squarefree_factor(const Poly& f) {
    if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
    std::vector<PolyFactor> out;
    detail::squarefree_rec(f.monic(), 1, out);
    return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs (product of degree-d factors, d).
inline std::vector<std::pair<Poly, unsigned>> distinct_degree_factor(Poly f) {
    const Field& F = f.field();
    std::vector<std::pair<Poly, unsigned>> out;
    const Poly x = Poly::x(F);
    Poly h = x % f;
    for (unsigned i = 1; f.degree() >= 2 * static_cast<int>(i); ++i) {
        h = powmod(h, F.order(), f);
        Poly g = gcd(f, h - x);
        if (g.degree() > 0) {
            out.emplace_back(g, i);
            f = f / g;
            h = h % f;
        }
    }
    if (f.degree() > 0) out.emplace_back(f.monic(), static_cast<unsigned>(f.degree()));
    return out;
}

/// Irreducibility test over the coefficient field.
inline bool is_irreducible(const Poly& f) {
    if (f.degree() <= 0) return false;
    if (f.degree() == 1) return true;
    const Poly m = f.monic();
    const Poly x = Poly::x(f.field());
    Poly h = x;
    for (int i = 1; 2 * i <= m.degree(); ++i) {
        h = powmod(h, f.field().order(), m);
        if (gcd(m, h - x).degree() > 0) return false;
    }
    return true;
}

/**
 * Full factorization into monic irreducibles with multiplicities, in canonical
 * order. The product of factor^multiplicity equals f up to its leading coefficient.
 */
inline std::vector<PolyFactor> factor(const Poly& f, std::uint64_t seed = 0x5eedf00d) {
    std::mt19937_64 rng(seed);
    std::map<std::vector<Field::Elem>, PolyFactor> acc;
    for (const auto& [sqf, mult] : squarefree_factor(f)) {
        for (const auto& [g, d] : distinct_degree_factor(sqf)) {
            std::vector<Poly> parts;
            detail::equal_degree_split(g, d, rng, parts);
            for (auto& pf : parts) {
                auto key = pf.monic().coeffs();
                auto it = acc.find(key);
                if (it == acc.end())
                    acc.emplace(key, PolyFactor{pf.monic(), mult});
                else
                    it->second.multiplicity += mult;
            }
        }
    }
    std::vector<PolyFactor> out;
    for (auto& [k, v] : acc) out.push_back(std::move(v));
    std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) { return a.factor < b.factor; });
    return out;
}

/// Roots in the coefficient field, each repeated by multiplicity, ascending in element order.
inline std::vector<Field::Elem> roots(const Poly& f) {
    std::vector<Field::Elem> out;
    for (const auto& pf : factor(f))
        if (pf.factor.degree() == 1)
            for (unsigned i = 0; i < pf.multiplicity; ++i) out.push_back(f.field().neg(pf.factor[0]));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace wordlen
