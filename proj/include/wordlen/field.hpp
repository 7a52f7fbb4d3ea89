// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file field.hpp
 * @brief Exact scalar domains: finite fields GF(p^e) chosen at runtime, and the rationals.
 *
 * Elements of GF(p^e) are encoded as integers: the residue class of
 * c_0 + c_1 x + ... + c_{e-1} x^{e-1} modulo the defining polynomial is stored
 * as c_0 + c_1 p + ... + c_{e-1} p^{e-1}. Prime-subfield elements therefore
 * have the same encoding in every extension, and the natural integer order
 * is the fixed element ordering used for deterministic tie-breaking.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "wordlen/error.hpp"

namespace wordlen {

namespace detail {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace detail

/**
 * A finite field GF(p^e) represented as GF(p)[x]/(m(x)).
 *
 * A Field is a cheap, immutable handle; copies share the same tables.
 * Two handles compare equal iff they have the same characteristic and the
 * same defining polynomial, i.e. iff their element encodings agree.
 *
 * The defining polynomial must be monic and irreducible over GF(p). This
 * constructor does not check irreducibility; use make_field() or
 * field_from_modulus() from extension.hpp for validated construction.
 */
class Field {
  public:
    using Elem = std::uint64_t;

    /// Largest supported characteristic (products of two residues fit in 64 bits).
    static constexpr std::uint64_t max_characteristic = (1ull << 31);
    /// Fields up to this order get exp/log tables.
    static constexpr std::uint64_t table_order_limit = (1ull << 16);

    Field() : Field(2) {}

    explicit Field(std::uint64_t p) : Field(p, std::vector<std::uint64_t>{0, 1}) {}

    Field(std::uint64_t p, std::vector<std::uint64_t> modulus) {
        if (!detail::is_prime(p) || p >= max_characteristic)
            throw DomainError("characteristic must be a prime below 2^31, got " + std::to_string(p));
        if (modulus.size() < 2 || modulus.back() != 1)
            throw DomainError("defining polynomial must be monic of degree >= 1");
        for (auto c : modulus)
            if (c >= p) throw DomainError("defining polynomial coefficient out of range");
        auto d = std::make_shared<Data>();
        d->p = p;
        d->e = static_cast<unsigned>(modulus.size() - 1);
        if (d->e == 1) modulus = {0, 1};
        d->modulus = std::move(modulus);
        boost::multiprecision::cpp_int q = 1;
        for (unsigned i = 0; i < d->e; ++i) {
            d->pw.push_back(static_cast<std::uint64_t>(q));
            q *= p;
        }
        if (q > (boost::multiprecision::cpp_int(1) << 62))
            throw CapExceeded("field order p^e exceeds 2^62");
        d->q = static_cast<std::uint64_t>(q);
        if (d->e > 1 && d->q <= table_order_limit) build_tables(*d);
        d_ = std::move(d);
    }

    std::uint64_t characteristic() const { return d_->p; }
    unsigned degree() const { return d_->e; }
    std::uint64_t order() const { return d_->q; }
    bool is_prime_field() const { return d_->e == 1; }
    /// Defining polynomial over GF(p), low-to-high coefficients (x for prime fields).
    const std::vector<std::uint64_t>& modulus() const { return d_->modulus; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }

    /// The class of x in GF(p)[x]/(m); for prime fields this is the element 0.
    Elem generator() const { return d_->e == 1 ? 0 : d_->p; }

    Elem from_int(std::int64_t v) const {
        const auto p = static_cast<std::int64_t>(d_->p);
        std::int64_t r = v % p;
        if (r < 0) r += p;
        return static_cast<Elem>(r);
    }

    Elem add(Elem a, Elem b) const {
        const auto& d = *d_;
        if (d.e == 1) {
            Elem s = a + b;
            return s >= d.p ? s - d.p : s;
        }
        if (d.p == 2) return a ^ b;
        Elem out = 0;
        for (unsigned i = 0; i < d.e; ++i) {
            Elem s = a % d.p + b % d.p;
            if (s >= d.p) s -= d.p;
            out += s * d.pw[i];
            a /= d.p;
            b /= d.p;
        }
        return out;
    }

    Elem neg(Elem a) const {
        const auto& d = *d_;
        if (d.e == 1) return a == 0 ? 0 : d.p - a;
        if (d.p == 2) return a;
        Elem out = 0;
        for (unsigned i = 0; i < d.e; ++i) {
            Elem c = a % d.p;
            out += (c == 0 ? 0 : d.p - c) * d.pw[i];
            a /= d.p;
        }
        return out;
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        const auto& d = *d_;
        if (d.e == 1) return (a * b) % d.p;
        if (a == 0 || b == 0) return 0;
        if (!d.exp.empty()) return d.exp[d.log[a] + d.log[b]];
        return poly_mul(d, a, b);
    }

    Elem pow(Elem a, std::uint64_t k) const {
        Elem r = 1;
        while (k) {
            if (k & 1) r = mul(r, a);
            a = mul(a, a);
            k >>= 1;
        }
        return r;
    }

    Elem inv(Elem a) const {
        if (a == 0) throw DomainError("division by zero in GF(" + std::to_string(d_->q) + ")");
        const auto& d = *d_;
        if (!d.exp.empty()) return d.exp[(d.q - 1 - d.log[a]) % (d.q - 1)];
        return pow(a, d.q - 2);
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    /// Coefficients (c_0, ..., c_{e-1}) over GF(p) of an element.
    std::vector<std::uint64_t> coeffs(Elem a) const {
        std::vector<std::uint64_t> c(d_->e);
        for (auto& x : c) {
            x = a % d_->p;
            a /= d_->p;
        }
        return c;
    }

    Elem from_coeffs(const std::vector<std::uint64_t>& c) const {
        if (c.size() > d_->e) throw DomainError("too many coefficients for field element");
        Elem out = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] >= d_->p) throw DomainError("field element coefficient out of range");
            out += c[i] * d_->pw[i];
        }
        return out;
    }

    bool contains(Elem a) const { return a < d_->q; }

    template <class Rng>
    Elem random(Rng& rng) const {
        return std::uniform_int_distribution<Elem>(0, d_->q - 1)(rng);
    }

    std::string to_string(Elem a) const {
        if (d_->e == 1) return std::to_string(a);
        std::string s = "[";
        auto c = coeffs(a);
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
        return s + "]";
    }

    std::string name() const {
        return d_->e == 1 ? "GF(" + std::to_string(d_->p) + ")"
                          : "GF(" + std::to_string(d_->p) + "^" + std::to_string(d_->e) + ")";
    }

    friend bool operator==(const Field& a, const Field& b) {
        return a.d_ == b.d_ || (a.d_->p == b.d_->p && a.d_->modulus == b.d_->modulus);
    }

  private:
    struct Data {
        std::uint64_t p = 2;
        unsigned e = 1;
        std::uint64_t q = 2;
        std::vector<std::uint64_t> modulus;
        std::vector<std::uint64_t> pw;
        // exp has length 2(q-1) so that exp[log a + log b] needs no reduction.
        std::vector<std::uint32_t> exp;
        std::vector<std::uint32_t> log;
    };

    static Elem poly_mul(const Data& d, Elem a, Elem b) {
        const std::uint64_t p = d.p;
        const unsigned e = d.e;
        std::vector<std::uint64_t> x(e), y(e), z(2 * e - 1, 0);
        for (unsigned i = 0; i < e; ++i) {
            x[i] = a % p;
            a /= p;
            y[i] = b % p;
            b /= p;
        }
        for (unsigned i = 0; i < e; ++i) {
            if (!x[i]) continue;
            for (unsigned j = 0; j < e; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
        }
        for (unsigned k = 2 * e - 2; k >= e; --k) {
            std::uint64_t c = z[k];
            if (!c) continue;
            z[k] = 0;
            for (unsigned i = 0; i < e; ++i) z[k - e + i] = (z[k - e + i] + (p - c) * d.modulus[i]) % p;
        }
        Elem out = 0;
        for (unsigned i = 0; i < e; ++i) out += z[i] * d.pw[i];
        return out;
    }

    static void build_tables(Data& d) {
        const std::uint64_t n = d.q - 1;
        const auto divisors = detail::prime_divisors(n);
        Elem g = 2;
        auto slow_pow = [&](Elem a, std::uint64_t k) {
            Elem r = 1;
            while (k) {
                if (k & 1) r = poly_mul(d, r, a);
                a = poly_mul(d, a, a);
                k >>= 1;
            }
            return r;
        };
        for (;; ++g) {
            bool primitive = true;
            for (auto r : divisors)
                if (slow_pow(g, n / r) == 1) {
                    primitive = false;
                    break;
                }
            if (primitive) break;
        }
        d.exp.assign(2 * n, 0);
        d.log.assign(d.q, 0);
        Elem cur = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
            d.exp[i] = d.exp[i + n] = static_cast<std::uint32_t>(cur);
            d.log[cur] = static_cast<std::uint32_t>(i);
            cur = poly_mul(d, cur, g);
        }
    }

    std::shared_ptr<const Data> d_;
};

/// The rational numbers with arbitrary-precision entries; used for length computation.
class Rationals {
  public:
    using Elem = boost::multiprecision::cpp_rational;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem from_int(std::int64_t v) const { return Elem(v); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw DomainError("division by zero in Q");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    std::string to_string(const Elem& a) const { return a.str(); }
    std::string name() const { return "Q"; }
    std::uint64_t characteristic() const { return 0; }
    unsigned degree() const { return 1; }

    friend bool operator==(const Rationals&, const Rationals&) { return true; }
};

} // namespace wordlen
