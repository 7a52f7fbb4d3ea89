// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file constructive.hpp
 * @brief Witness-producing constructions that drive a square-zero matrix in
 *        the word-span filtration down to rank one.
 *
 * Every witness carries an explicit linear combination of words; the
 * recorded length budget lambda is the longest word actually present after
 * merging like terms, and bounds are asserted against that exact value.
 * Constructions that need eigenvalues move to a finite extension of the
 * current field and report the embedding they used.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wordlen/canonical.hpp"
#include "wordlen/error.hpp"
#include "wordlen/extension.hpp"
#include "wordlen/matrix.hpp"
#include "wordlen/poly.hpp"
#include "wordlen/spans.hpp"
#include "wordlen/words.hpp"

namespace wordlen {

// ---------------------------------------------------------------------------
// Integer bounds (no floating point)

/// floor(log2(x)) for x >= 1.
inline std::size_t floor_log2(const boost::multiprecision::cpp_int& x) {
    if (x < 1) throw DomainError("floor_log2 of a non-positive number");
    return static_cast<std::size_t>(boost::multiprecision::msb(x));
}

/// floor(2n log2 n + 4n - 4).
inline std::size_t theorem_bound(std::size_t n) {
    if (n == 0) throw DomainError("theorem_bound needs n >= 1");
    using boost::multiprecision::cpp_int;
    return floor_log2(boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(2 * n))) + 4 * n - 4;
}

/// lambda <= 2n + 2n log2(rho0), decided exactly as 2^(lambda - 2n) <= rho0^(2n).
inline bool within_log_bound(std::size_t lambda, std::size_t n, std::size_t rho0) {
    if (rho0 == 0) throw DomainError("within_log_bound needs rho0 >= 1");
    if (lambda <= 2 * n) return true;
    using boost::multiprecision::cpp_int;
    return (cpp_int(1) << (lambda - 2 * n)) <= boost::multiprecision::pow(cpp_int(rho0), static_cast<unsigned>(2 * n));
}

/// lambda1 <= lambda rho / rho1 + 4n (rho - rho1) / (rho rho1), cleared of denominators.
inline bool within_step_bound(std::size_t lambda1, std::size_t rho1, std::size_t lambda, std::size_t rho, std::size_t n) {
    if (rho1 == 0 || rho1 > rho) return false;
    using boost::multiprecision::cpp_int;
    return cpp_int(lambda1) * rho * rho1 <= cpp_int(lambda) * rho * rho + cpp_int(4) * n * (rho - rho1);
}

// ---------------------------------------------------------------------------
// Witnesses

struct SquareZeroWitness {
    Mat h;
    std::size_t rho = 0;
    std::size_t lambda = 0;
    WordExpr expr;

    const Field& field() const { return h.domain(); }
};

/**
 * Empty on success, otherwise the first failed property. `s` must be over the
 * witness field. Span membership is checked against W_lambda rebuilt by a
 * fresh filtration.
 */
inline std::optional<std::string> check_witness(const std::vector<Mat>& s, const SquareZeroWitness& w) {
    if (!(s.at(0).domain() == w.field())) return "generating set and witness are over different fields";
    if (w.h.is_zero()) return "witness matrix is zero";
    if (!(w.h * w.h).is_zero()) return "witness matrix is not square-zero";
    if (rank(w.h) != w.rho) return "recorded rank does not match";
    if (w.expr.max_length() > w.lambda) return "expression uses words longer than lambda";
    if (!(w.expr.evaluate(s) == w.h)) return "expression does not evaluate to the witness matrix";
    const auto chain = span_filtration(s).chain;
    if (!chain.level(w.lambda).includes(w.h.flatten())) return "witness is not in the span of words of length <= lambda";
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Projector / square-zero element among polynomials in one matrix

enum class ReduceKind { projector, square_zero };

inline const char* to_string(ReduceKind k) { return k == ReduceKind::projector ? "projector" : "square-zero"; }

struct Claim1Result {
    ReduceKind kind = ReduceKind::square_zero;
    Mat m;                   ///< normalized psi(A), over the target of `embedding`
    Poly psi;                ///< degree delta - 1, divides the minimal polynomial
    Field::Elem mu = 0;      ///< psi = minpoly / (t - mu)
    Field::Elem scale = 0;   ///< psi(A)^2 = scale * psi(A); zero iff square-zero
    std::size_t delta = 0;   ///< degree of the minimal polynomial
    InvariantFactors invariants;
    FieldEmbedding embedding;
};

namespace detail {

// Least root of h over its coefficient field if any; otherwise the least root
// in the smallest extension splitting an irreducible factor of least degree.
inline std::pair<FieldEmbedding, Field::Elem> least_root(const Poly& h, const ExtensionCap& cap) {
    const Field& F = h.field();
    const auto here = roots(h);
    if (!here.empty()) return {FieldEmbedding(F), here.front()};
    const auto facs = factor(h);
    const Poly* best = &facs.front().factor;
    for (const auto& pf : facs)
        if (pf.factor.degree() < best->degree()) best = &pf.factor;
    const auto sf = splitting_field(*best, cap);
    return {sf.embedding, sf.roots.front()};
}

} // namespace detail

/**
 * psi = phi / (t - mu) where phi is the minimal polynomial and mu is the least
 * root of phi / g, g being the largest invariant factor different from phi
 * (g = 1 if there is none). Then psi(A) is non-zero of rank equal to the
 * number of invariant factors equal to phi, and psi(A)^2 = psi(mu) psi(A).
 */
inline Claim1Result claim1_reduce(const Mat& a, const ExtensionCap& cap = {}) {
    if (!a.is_square()) throw DomainError("claim1_reduce needs a square matrix");
    Claim1Result out;
    out.invariants = invariant_factors(a);
    const Poly& phi = out.invariants.minimal();
    out.delta = static_cast<std::size_t>(phi.degree());
    if (out.delta < 2) throw DomainError("claim1_reduce needs a non-scalar matrix");
    Poly g = Poly::constant(a.domain(), 1);
    for (std::size_t i = out.invariants.count() - 1; i-- > 0;)
        if (!(out.invariants.factors[i] == phi)) {
            g = out.invariants.factors[i];
            break;
        }
    auto [emb, mu] = detail::least_root(phi / g, cap);
    const Field& K = emb.target();
    out.embedding = emb;
    out.mu = mu;
    out.psi = emb(phi) / Poly::linear(K, mu);
    const Mat psi_a = evaluate(out.psi, embed(a, emb));
    out.scale = out.psi.eval(mu);
    if (out.scale != 0) {
        out.kind = ReduceKind::projector;
        out.m = psi_a.scaled(K.inv(out.scale));
        if (!(out.m * out.m == out.m)) throw std::logic_error("claim1_reduce: normalized element is not idempotent");
    } else {
        out.kind = ReduceKind::square_zero;
        out.m = psi_a;
        if (!(out.m * out.m).is_zero()) throw std::logic_error("claim1_reduce: element is not square-zero");
    }
    if (out.m.is_zero()) throw std::logic_error("claim1_reduce: element vanished");
    return out;
}

// ---------------------------------------------------------------------------
// Seed

struct SeedResult {
    SquareZeroWitness witness;
    FieldEmbedding embedding; ///< base field -> witness field
    std::size_t generator = 0;
    std::size_t delta = 0;
    ReduceKind kind = ReduceKind::square_zero;
};

/**
 * A square-zero witness with lambda * rho <= 2n: reduce a non-scalar generator
 * A to psi(A); if that is a projector P, use (I - P) B P for a generator B not
 * leaving Im P invariant. Among all generators and choices of B the witness
 * with the smallest lambda * rho is returned (first one on ties).
 */
inline SeedResult claim3_seed(const std::vector<Mat>& s, const ExtensionCap& cap = {}) {
    const std::size_t n = detail::check_set(s);
    if (n < 2) throw DomainError("square-zero witnesses need n >= 2");
    if (!is_irreducible(s)) throw ReducibleInput("claim3_seed: generating set is reducible");
    std::optional<SeedResult> best;
    auto consider = [&](SeedResult cand) {
        const auto score = cand.witness.lambda * cand.witness.rho;
        if (!best || score < best->witness.lambda * best->witness.rho) best = std::move(cand);
    };
    for (std::size_t g = 0; g < s.size(); ++g) {
        if (s[g].is_scalar()) continue;
        const auto r = claim1_reduce(s[g], cap);
        const Field& K = r.embedding.target();
        const auto sk = embed(s, r.embedding);
        const WordExpr psi_expr = WordExpr::poly_of(r.psi, WordExpr::word(K, {static_cast<std::uint32_t>(g)}));
        if (r.kind == ReduceKind::square_zero) {
            SquareZeroWitness w{r.m, rank(r.m), psi_expr.max_length(), psi_expr};
            consider({std::move(w), r.embedding, g, r.delta, r.kind});
            continue;
        }
        const WordExpr p_expr = psi_expr.scaled(K.inv(r.scale));
        const Mat id = Mat::identity(K, n);
        for (std::size_t b = 0; b < s.size(); ++b) {
            const Mat hb = (id - r.m) * sk[b] * r.m;
            if (hb.is_zero()) continue;
            const WordExpr bw = WordExpr::word(K, {static_cast<std::uint32_t>(b)});
            WordExpr e = bw * p_expr - p_expr * bw * p_expr;
            SquareZeroWitness w{hb, rank(hb), e.max_length(), std::move(e)};
            consider({std::move(w), r.embedding, g, r.delta, r.kind});
        }
    }
    if (!best) throw ReducibleInput("claim3_seed: no square-zero witness found (generating set is reducible)");
    return *best;
}

// ---------------------------------------------------------------------------
// Rank-halving step

struct MinKWord {
    std::size_t k = 0;
    Word word;
    Mat bottom_left; ///< rho x rho block of the word in the adapted basis (non-scalar)
};

/**
 * Smallest k such that some word of length k has a non-scalar bottom-left
 * block in the adapted basis, and such a word. The minimal k is certified on
 * homogeneous spans; the word is then extracted greedily, keeping a prefix
 * only if some completion of the remaining length still has a non-scalar
 * block (a basis element of the homogeneous span of that length witnesses it).
 */
inline MinKWord find_min_k_word(const std::vector<Mat>& s, const AdaptedBasis& basis, std::size_t cap = 0) {
    const std::size_t n = detail::check_set(s);
    if (basis.n != n) throw DomainError("adapted basis has the wrong size");
    if (cap == 0) cap = n * n;
    const Field& F = s[0].domain();
    const std::size_t rho = basis.rho;
    const Mat tinv = inverse(basis.transform);
    std::vector<Mat> adapted;
    for (const auto& a : s) adapted.push_back(tinv * a * basis.transform);

    auto bl_of = [&](const Mat& x) { return basis.bottom_left(x); };
    std::vector<SpanBasis<Field>> u = homogeneous_spans(adapted, 0);
    std::size_t k = 0;
    for (std::size_t t = 1;; ++t) {
        if (t > cap) throw CapExceeded("find_min_k_word: no non-scalar block within cap (reducible input?)");
        u.push_back(next_homogeneous(u.back(), adapted));
        bool escapes = false;
        for (const auto& row : u[t].rows())
            if (!bl_of(Mat(F, n, n, row)).is_scalar()) {
                escapes = true;
                break;
            }
        if (escapes) {
            k = t;
            break;
        }
        if (u[t].dim() == 0) throw CapExceeded("find_min_k_word: words vanish (reducible input)");
    }

    MinKWord out;
    out.k = k;
    Mat prefix = Mat::identity(F, n);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& rest = u[k - j - 1];
        bool extended = false;
        for (std::uint32_t a = 0; a < adapted.size() && !extended; ++a) {
            const Mat cand = prefix * adapted[a];
            const Mat bottom = cand.block(n - rho, 0, rho, n);
            for (const auto& row : rest.rows()) {
                if (!(bottom * Mat(F, n, n, row)).block(0, 0, rho, rho).is_scalar()) {
                    prefix = cand;
                    out.word.push_back(a);
                    extended = true;
                    break;
                }
            }
        }
        if (!extended) throw std::logic_error("find_min_k_word: greedy extraction lost viability");
    }
    out.bottom_left = bl_of(prefix);
    return out;
}

enum class CaseStrategy {
    adaptive,         ///< valid candidate with the smaller lambda_1; ties follow the k <= 4n/rho threshold
    paper_threshold,  ///< case 1 iff k <= 4n/rho
    force_case1,
    force_case2,
};

struct Claim5Candidate {
    SquareZeroWitness witness;
    FieldEmbedding embedding; ///< input field -> candidate field
    bool valid = false;       ///< rank halved and length inequality holds
    std::string reason;
};

struct Claim5Result {
    SquareZeroWitness witness;
    FieldEmbedding embedding; ///< input field -> output field
    std::string case_label;   ///< "claim1-case" or "claim2-case"
    std::size_t k = 0;
    Word word;
    std::size_t delta = 0;    ///< degree of the minimal polynomial of the bottom-left block
    std::optional<Field::Elem> mu;
    std::size_t case2_rank = 0; ///< rank(HAH - mu H), reported whichever case is chosen
};

inline Claim5Result claim5_step(const std::vector<Mat>& s, const SquareZeroWitness& w,
                                CaseStrategy strategy = CaseStrategy::adaptive, const ExtensionCap& cap = {}) {
    const std::size_t n = detail::check_set(s);
    if (w.rho < 2) throw DomainError("claim5_step needs a witness of rank >= 2");
    if (!(s[0].domain() == w.field())) throw DomainError("claim5_step: generating set and witness fields differ");
    if (!(w.h * w.h).is_zero() || rank(w.h) != w.rho) throw DomainError("claim5_step: invalid witness");
    const auto basis = adapt_square_zero_basis(w.h);
    const auto mk = find_min_k_word(s, basis);
    const Field& F = w.field();
    Mat a = Mat::identity(F, n);
    for (auto i : mk.word) a = a * s[i];
    const WordExpr a_expr = WordExpr::word(F, mk.word);

    auto finish = [&](Claim5Candidate& c) {
        auto& x = c.witness;
        x.rho = rank(x.h);
        x.lambda = x.expr.max_length();
        if (x.h.is_zero() || !(x.h * x.h).is_zero()) {
            c.reason = "not a non-zero square-zero matrix";
        } else if (2 * x.rho > w.rho) {
            c.reason = "rank not halved";
        } else if (!within_step_bound(x.lambda, x.rho, w.lambda, w.rho, n)) {
            c.reason = "length inequality fails";
        } else {
            c.valid = true;
        }
    };

    Claim5Result out;
    out.k = mk.k;
    out.word = mk.word;

    // Case 1: psi(HA) H with psi from the bottom-left block.
    std::optional<Claim5Candidate> c1;
    std::size_t delta = 0;
    try {
        const auto r = claim1_reduce(mk.bottom_left, cap);
        delta = r.delta;
        const auto& e = r.embedding;
        const WordExpr hx = w.expr.embedded(e);
        const Mat hk = embed(w.h, e), ak = embed(a, e);
        Claim5Candidate c;
        c.embedding = e;
        c.witness.h = evaluate(r.psi, hk * ak) * hk;
        c.witness.expr = WordExpr::poly_of(r.psi, hx * a_expr.embedded(e)) * hx;
        finish(c);
        c1 = std::move(c);
    } catch (const CapExceeded&) {
    }

    // Case 2: HAH - mu H with mu minimizing rank(A' - mu I).
    std::optional<Claim5Candidate> c2;
    std::optional<Field::Elem> mu2;
    try {
        const auto mc = choose_mu(mk.bottom_left, cap);
        const auto& e = mc.embedding;
        const WordExpr hx = w.expr.embedded(e);
        const Mat hk = embed(w.h, e), ak = embed(a, e);
        Claim5Candidate c;
        c.embedding = e;
        c.witness.h = hk * ak * hk - hk.scaled(mc.mu);
        c.witness.expr = hx * a_expr.embedded(e) * hx - hx.scaled(mc.mu);
        finish(c);
        out.case2_rank = c.witness.rho;
        mu2 = mc.mu;
        c2 = std::move(c);
    } catch (const CapExceeded&) {
    }

    const bool threshold_case1 = mk.k * w.rho <= 4 * n;
    bool pick1 = false;
    switch (strategy) {
    case CaseStrategy::force_case1: pick1 = true; break;
    case CaseStrategy::force_case2: pick1 = false; break;
    case CaseStrategy::paper_threshold: pick1 = threshold_case1; break;
    case CaseStrategy::adaptive: {
        const bool v1 = c1 && c1->valid, v2 = c2 && c2->valid;
        if (v1 && v2)
            pick1 = c1->witness.lambda != c2->witness.lambda ? c1->witness.lambda < c2->witness.lambda : threshold_case1;
        else
            pick1 = v1 || (!v2 && threshold_case1);
        break;
    }
    }
    auto& chosen = pick1 ? c1 : c2;
    if (!chosen) throw CapExceeded("claim5_step: chosen case needs a field extension beyond the cap");
    const bool forced = strategy == CaseStrategy::force_case1 || strategy == CaseStrategy::force_case2;
    if (!chosen->valid && forced)
        throw DomainError(std::string("claim5_step: forced ") + (pick1 ? "case 1" : "case 2") +
                          " does not apply here: " + chosen->reason);
    if (!chosen->valid)
        throw std::logic_error(std::string("claim5_step: ") + (pick1 ? "case 1" : "case 2") + " candidate invalid: " +
                               chosen->reason);
    out.witness = std::move(chosen->witness);
    out.embedding = chosen->embedding;
    out.case_label = pick1 ? "claim1-case" : "claim2-case";
    out.delta = delta;
    if (!pick1) out.mu = mu2;
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineStep {
    std::size_t lambda = 0;
    std::size_t rho = 0;
    std::string case_label; ///< "seed", "claim1-case", "claim2-case"
    std::optional<std::size_t> k;
    std::size_t delta = 0;
    std::optional<std::string> mu; ///< rendered in the field of that step
};

struct PipelineTrace {
    std::size_t n = 0;
    std::vector<PipelineStep> steps;

    std::size_t tau() const { return steps.empty() ? 0 : steps.size() - 1; }
    std::size_t rho0() const { return steps.front().rho; }
    /// Consecutive rank ratios alpha_t = rho_t / rho_{t-1} as (numerator, denominator).
    std::vector<std::pair<std::size_t, std::size_t>> ratios() const {
        std::vector<std::pair<std::size_t, std::size_t>> r;
        for (std::size_t t = 1; t < steps.size(); ++t) r.emplace_back(steps[t].rho, steps[t - 1].rho);
        return r;
    }
};

/// Violations of the trace invariants (empty if none).
inline std::vector<std::string> check_trace(const PipelineTrace& tr) {
    std::vector<std::string> v;
    if (tr.steps.empty()) return {"empty trace"};
    const std::size_t n = tr.n;
    const auto& s0 = tr.steps.front();
    if (s0.lambda * s0.rho > 2 * n) v.push_back("seed: lambda*rho > 2n");
    for (std::size_t t = 1; t < tr.steps.size(); ++t) {
        const auto &a = tr.steps[t - 1], &b = tr.steps[t];
        if (b.rho > a.rho / 2 || b.rho < 1) v.push_back("step " + std::to_string(t) + ": rank not halved");
        if (!within_step_bound(b.lambda, b.rho, a.lambda, a.rho, n))
            v.push_back("step " + std::to_string(t) + ": length inequality fails");
    }
    const auto& last = tr.steps.back();
    if (last.rho != 1) v.push_back("final rank is not 1");
    if (!within_log_bound(last.lambda, n, s0.rho)) v.push_back("final lambda exceeds 2n + 2n log2 rho0");
    if ((std::size_t{1} << tr.tau()) > s0.rho) v.push_back("more steps than log2 rho0");
    return v;
}

struct PipelineOptions {
    CaseStrategy strategy = CaseStrategy::adaptive;
    ExtensionCap cap{};
    bool verify_each_step = true;
};

struct PipelineResult {
    SquareZeroWitness witness;     ///< rank one
    PipelineTrace trace;
    FieldEmbedding embedding;      ///< base field -> witness field
    std::vector<Mat> generators;   ///< the input set over the witness field
};

/**
 * Seed a square-zero witness, then halve its rank until it is one. With
 * verify_each_step, every witness is re-checked (including span membership)
 * before the next step and a failure throws std::logic_error.
 */
inline PipelineResult rank_one_pipeline(const std::vector<Mat>& s, const PipelineOptions& opt = {}) {
    const std::size_t n = detail::check_set(s);
    auto seed = claim3_seed(s, opt.cap);
    PipelineResult out;
    out.trace.n = n;
    out.embedding = seed.embedding;
    out.generators = embed(s, seed.embedding);
    out.witness = std::move(seed.witness);
    auto verify = [&] {
        if (!opt.verify_each_step) return;
        if (auto err = check_witness(out.generators, out.witness))
            throw std::logic_error("pipeline witness check failed: " + *err);
    };
    verify();
    out.trace.steps.push_back({out.witness.lambda, out.witness.rho, "seed", std::nullopt, seed.delta, std::nullopt});
    while (out.witness.rho > 1) {
        auto step = claim5_step(out.generators, out.witness, opt.strategy, opt.cap);
        out.embedding = out.embedding.then(step.embedding);
        out.generators = embed(out.generators, step.embedding);
        out.witness = std::move(step.witness);
        verify();
        PipelineStep ps{out.witness.lambda, out.witness.rho, step.case_label, step.k, step.delta, std::nullopt};
        if (step.mu) ps.mu = step.embedding.target().to_string(*step.mu);
        out.trace.steps.push_back(std::move(ps));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Non-derogatory element and rank-one elements in powers

struct GenericElement {
    Mat element;                          ///< over the target of `embedding`
    std::vector<Field::Elem> coefficients; ///< element = sum coefficients[i] * S[i]
    FieldEmbedding embedding;
    std::size_t attempts = 0;
    Mat hessenberg_basis;                 ///< columns v, v_1, ..., v_{n-1} over the base field
};

/**
 * For irreducible S and v with span(S^{<= n-2}) v != F^n: a linear combination
 * of S whose minimal polynomial has degree n. In the basis v, v_1, ..., v_{n-1}
 * (one new vector per filtration level) every generator is upper Hessenberg,
 * so a combination with all subdiagonal entries non-zero is non-derogatory.
 * The first attempt uses all-one coefficients, later ones are random; the
 * field is enlarged when it is too small for random search to be effective.
 */
inline GenericElement lemill_generic_element(const std::vector<Mat>& s, const Vec& v, std::uint64_t seed = 1,
                                             std::size_t retries = 64, const ExtensionCap& cap = {}) {
    const std::size_t n = detail::check_set(s);
    if (n < 2) throw DomainError("lemill_generic_element needs n >= 2");
    if (v.size() != n) throw DomainError("vector has the wrong size");
    bool nonzero = false;
    for (auto x : v) nonzero = nonzero || x != 0;
    if (!nonzero) throw DomainError("vector must be non-zero");
    if (!is_irreducible(s)) throw ReducibleInput("lemill_generic_element: generating set is reducible");
    const auto vf = vector_filtration(s, {v}, n);
    const std::size_t at = std::min(n - 2, vf.dims.size() - 1);
    if (vf.dims[at] == n) throw HypothesisFailed("span of words of length <= n-2 applied to v is already everything");
    std::vector<Vec> cols;
    for (const auto& level : vf.frontier) {
        if (level.size() != 1) throw std::logic_error("lemill: filtration did not grow one dimension per step");
        cols.push_back(level[0]);
    }
    GenericElement out;
    out.hessenberg_basis = Mat::from_columns(s[0].domain(), n, cols);

    std::mt19937_64 rng(seed);
    FieldEmbedding emb(s[0].domain());
    std::vector<Mat> sk = s;
    for (std::size_t attempt = 0; attempt < retries; ++attempt) {
        const Field& K = emb.target();
        if (attempt > 0 && attempt % 8 == 0 && K.order() < 4 * n && 2 * K.degree() <= cap.max_degree) {
            const auto e2 = embed_into(K, make_field(K.characteristic(), 2 * K.degree()));
            emb = emb.then(e2);
            sk = embed(sk, e2);
        }
        const Field& L = emb.target();
        std::vector<Field::Elem> c(s.size(), 1);
        if (attempt > 0)
            for (auto& x : c) x = L.random(rng);
        Mat x = Mat::zero(L, n);
        for (std::size_t i = 0; i < s.size(); ++i) x = x + sk[i].scaled(c[i]);
        if (minimal_polynomial(x).degree() == static_cast<int>(n)) {
            out.element = std::move(x);
            out.coefficients = std::move(c);
            out.embedding = emb;
            out.attempts = attempt + 1;
            return out;
        }
    }
    throw CapExceeded("lemill_generic_element: retry budget exhausted");
}

struct RankOneElement {
    Mat m;
    Poly psi; ///< product of delta - 1 linear factors; m = psi(A)
    FieldEmbedding embedding;
};

/**
 * Search span{I, A, ..., A^{delta-1}} for a rank-one matrix among psi(A),
 * psi ranging over products of delta - 1 linear factors drawn from the
 * eigenvalue multiset (lexicographic order in the splitting field).
 */
inline std::optional<RankOneElement> rank_one_in_powers(const Mat& a, const ExtensionCap& cap = {}) {
    const Poly phi = minimal_polynomial(a);
    const std::size_t delta = static_cast<std::size_t>(phi.degree());
    if (delta < 2) throw DomainError("rank_one_in_powers needs a non-scalar matrix");
    const auto sf = splitting_field(characteristic_polynomial(a), cap);
    const Field& K = sf.field;
    const Mat ak = embed(a, sf.embedding);
    std::vector<Field::Elem> vals;
    std::vector<std::size_t> mult;
    for (auto r : sf.roots) {
        if (!vals.empty() && vals.back() == r)
            ++mult.back();
        else {
            vals.push_back(r);
            mult.push_back(1);
        }
    }
    std::vector<std::size_t> pick(vals.size(), 0);
    std::optional<RankOneElement> found;
    auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
        if (found) return;
        if (i == vals.size()) {
            if (left) return;
            std::vector<Field::Elem> rs;
            for (std::size_t j = 0; j < vals.size(); ++j) rs.insert(rs.end(), pick[j], vals[j]);
            Poly psi = from_roots(K, rs);
            Mat m = evaluate(psi, ak);
            if (rank(m) == 1) found = RankOneElement{std::move(m), std::move(psi), sf.embedding};
            return;
        }
        for (std::size_t c = std::min(left, mult[i]) + 1; c-- > 0;) {
            pick[i] = c;
            self(self, i + 1, left - c);
        }
        pick[i] = 0;
    };
    rec(rec, 0, delta - 1);
    return found;
}

} // namespace wordlen
