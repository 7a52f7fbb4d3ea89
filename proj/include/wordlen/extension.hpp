// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file extension.hpp
 * @brief Construction of GF(p^e), embeddings between fields, and splitting fields.
 *
 * Every field is defined directly over its prime field, so an "extension"
 * of GF(p^a) is some GF(p^b) with a | b together with an explicit embedding
 * that sends the generator of GF(p^a) to a root of its defining polynomial.
 */

#include <cstdint>
#include <random>
#include <vector>

#include "wordlen/error.hpp"
#include "wordlen/field.hpp"
#include "wordlen/poly.hpp"

namespace wordlen {

/// Limits on on-demand field extensions.
struct ExtensionCap {
    unsigned max_degree = 12;
    std::uint64_t max_order = (1ull << 48);
};

/**
 * GF(p^e) with a defining polynomial found by seeded random search.
 * The same (p, e, seed) always yields the same representation.
 */
inline Field make_field(std::uint64_t p, unsigned e = 1, std::uint64_t seed = 0) {
    if (e == 0) throw DomainError("extension degree must be >= 1");
    const Field prime(p);
    if (e == 1) return prime;
    std::mt19937_64 rng(seed ^ (p * 0x9e3779b97f4a7c15ull) ^ (std::uint64_t{e} << 32));
    for (;;) {
        std::vector<Field::Elem> c(e + 1);
        for (unsigned i = 0; i < e; ++i) c[i] = prime.random(rng);
        c[e] = 1;
        if (c[0] == 0) continue;
        if (is_irreducible(Poly(prime, c))) return Field(p, std::vector<std::uint64_t>(c.begin(), c.end()));
    }
}

/// Validated construction from an explicit defining polynomial.
inline Field field_from_modulus(std::uint64_t p, const std::vector<std::uint64_t>& modulus) {
    const Field prime(p);
    if (modulus.size() == 2 && modulus[1] == 1) return prime;
    if (!is_irreducible(Poly(prime, std::vector<Field::Elem>(modulus.begin(), modulus.end()))))
        throw DomainError("defining polynomial is not irreducible over GF(" + std::to_string(p) + ")");
    return Field(p, modulus);
}

/// Field homomorphism GF(p^a) -> GF(p^b), determined by the image of the generator.
class FieldEmbedding {
  public:
    using Elem = Field::Elem;

    FieldEmbedding() = default;
    /// Identity embedding.
    explicit FieldEmbedding(const Field& f) : from_(f), to_(f), gen_image_(f.generator()) {}
    FieldEmbedding(Field from, Field to, Elem gen_image)
        : from_(std::move(from)), to_(std::move(to)), gen_image_(gen_image) {}

    const Field& source() const { return from_; }
    const Field& target() const { return to_; }
    bool is_identity() const { return from_ == to_ && gen_image_ == from_.generator(); }

    Elem operator()(Elem a) const {
        if (from_.is_prime_field() || is_identity()) return a;
        const auto c = from_.coeffs(a);
        Elem r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = to_.add(to_.mul(r, gen_image_), c[i]);
        return r;
    }

    Poly operator()(const Poly& f) const {
        std::vector<Elem> v;
        v.reserve(f.coeffs().size());
        for (auto c : f.coeffs()) v.push_back((*this)(c));
        return Poly(to_, std::move(v));
    }

    /// this followed by next.
    FieldEmbedding then(const FieldEmbedding& next) const {
        if (!(next.from_ == to_)) throw DomainError("embedding composition: field mismatch");
        return FieldEmbedding(from_, next.to_, next(gen_image_));
    }

  private:
    Field from_;
    Field to_;
    Elem gen_image_ = 0;
};

/// Embedding of `from` into `to`; requires equal characteristic and degree divisibility.
inline FieldEmbedding embed_into(const Field& from, const Field& to) {
    if (from == to) return FieldEmbedding(from);
    if (from.characteristic() != to.characteristic() || to.degree() % from.degree() != 0)
        throw DomainError("cannot embed " + from.name() + " into " + to.name());
    if (from.is_prime_field()) return FieldEmbedding(from, to, 0);
    const auto& m = from.modulus();
    Poly mod_in_to(to, std::vector<Field::Elem>(m.begin(), m.end()));
    const auto r = roots(mod_in_to);
    if (r.empty()) throw DomainError("defining polynomial has no root in target field");
    return FieldEmbedding(from, to, r.front());
}

struct SplittingField {
    Field field;
    FieldEmbedding embedding;        ///< base field -> splitting field
    std::vector<Field::Elem> roots;  ///< with multiplicity, ascending
};

/**
 * Smallest extension of f's coefficient field in which f splits into linear
 * factors, with f's roots there. Throws CapExceeded rather than building an
 * oversized field.
 */
inline SplittingField splitting_field(const Poly& f, const ExtensionCap& cap = {}) {
    if (f.is_zero()) throw DomainError("splitting field of the zero polynomial");
    const Field& F = f.field();
    unsigned l = 1;
    for (const auto& pf : factor(f)) l = std::lcm(l, static_cast<unsigned>(pf.factor.degree()));
    const unsigned total = F.degree() * l;
    if (total > cap.max_degree)
        throw CapExceeded("splitting field needs degree " + std::to_string(total) + " > cap " +
                          std::to_string(cap.max_degree));
    boost::multiprecision::cpp_int order = boost::multiprecision::pow(boost::multiprecision::cpp_int(F.characteristic()), total);
    if (order > cap.max_order)
        throw CapExceeded("splitting field order exceeds cap (degree " + std::to_string(total) + ")");
    SplittingField out;
    out.field = l == 1 ? F : make_field(F.characteristic(), total);
    out.embedding = embed_into(F, out.field);
    out.roots = roots(out.embedding(f));
    return out;
}

} // namespace wordlen
