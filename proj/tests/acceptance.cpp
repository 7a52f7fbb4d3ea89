// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "oracles.hpp"
#include "wordlen/wordlen.hpp"

using namespace wordlen;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        o.ok = false;
        o.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) + " s budget)";
    }
    failures += !o.ok;
    std::printf("%s criterion %2d  %-34s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Witness re-verification without the library's span machinery: the words of
// the expression are multiplied out in plain integer arithmetic; every word has
// length <= lambda, so agreement with H certifies membership in the span.
bool witness_by_oracle(const std::vector<Mat>& s, const SquareZeroWitness& w) {
    const Field& F = w.field();
    if (F.degree() != 1) return !check_witness(s, w).has_value();
    const auto p = static_cast<std::int64_t>(F.characteristic());
    const std::size_t n = w.h.rows();
    std::vector<oracle::IMat> si;
    for (const auto& a : s) si.push_back(oracle::from_lib(a));
    oracle::IMat acc(n, std::vector<std::int64_t>(n, 0));
    for (const auto& [word, c] : w.expr.terms()) {
        if (word.size() > w.lambda) return false;
        oracle::IMat m(n, std::vector<std::int64_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
        for (auto g : word) m = oracle::imul(m, si.at(g), p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) acc[i][j] = (acc[i][j] + static_cast<std::int64_t>(c) * m[i][j]) % p;
    }
    if (acc != oracle::from_lib(w.h)) return false;
    const auto sq = oracle::imul(acc, acc, p);
    for (const auto& r : sq)
        for (auto x : r)
            if (x) return false;
    std::vector<std::vector<std::int64_t>> rows(acc.begin(), acc.end());
    return oracle::irank(rows, p) == w.rho;
}

// Step inequality and final bound, in exact rationals / integers.
std::vector<std::string> trace_violations(const Json& steps, std::size_t n) {
    std::vector<std::string> v;
    const std::size_t rho0 = steps[0]["rho"].get<std::size_t>();
    for (std::size_t t = 1; t < steps.size(); ++t) {
        const std::size_t l0 = steps[t - 1]["lambda"], r0 = steps[t - 1]["rho"];
        const std::size_t l1 = steps[t]["lambda"], r1 = steps[t]["rho"];
        if (r1 < 1 || r1 > r0 / 2) v.push_back(fmt("rank %zu -> %zu", r0, r1));
        const cpp_rational rhs = cpp_rational(l0 * r0, r1) + cpp_rational(4 * n * (r0 - r1), r0 * r1);
        if (r1 >= 1 && cpp_rational(l1) > rhs) v.push_back(fmt("lambda %zu -> %zu at rho %zu -> %zu", l0, l1, r0, r1));
    }
    const std::size_t lf = steps.back()["lambda"];
    if (steps.back()["rho"].get<std::size_t>() != 1) v.push_back("final rank is not one");
    // lambda <= 2n + 2n log2(rho0)  <=>  2^lambda <= 2^(2n) rho0^(2n).
    if ((cpp_int(1) << lf) > (cpp_int(1) << (2 * n)) * boost::multiprecision::pow(cpp_int(rho0), static_cast<unsigned>(2 * n)))
        v.push_back(fmt("final lambda %zu over the log bound", lf));
    return v;
}

std::vector<std::uint32_t> masks_of(const std::vector<Mat>& s) {
    std::vector<std::uint32_t> out;
    const std::size_t n = s[0].rows();
    for (const auto& a : s) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (a(i, j)) m |= 1u << (i * n + j);
        out.push_back(m);
    }
    return out;
}

} // namespace

int main() {
    SuiteOptions base;
    base.jobs = std::max(1u, std::thread::hardware_concurrency());

    criterion(1, "oracle equivalence over GF(2)", 30, [] {
        const Field F(2);
        std::mt19937_64 rng(20240601);
        std::size_t mismatches = 0;
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 1 + rng() % 3, k = 1 + rng() % 2;
            std::vector<Mat> s;
            for (std::size_t a = 0; a < k; ++a) s.push_back(random_matrix(F, n, n, rng, t % 2 ? 0.4 : 1.0));
            mismatches += length(s) != oracle::brute_length_gf2(masks_of(s), static_cast<int>(n), 9);
        }
        return Outcome{mismatches == 0, fmt("200 sets, %zu mismatches", mismatches)};
    });

    SuiteOptions o2 = base;
    ExperimentReport theorem;
    criterion(2, "length bound, 500 instances", 120, [&] {
        theorem = suite_theorem(o2);
        std::size_t viol = 0;
        for (const auto& r : theorem.records) {
            if (!r.error.empty()) ++viol;
            else viol += r.length.length > theorem_bound(r.length.n);
        }
        return Outcome{theorem.records.size() == 500 && viol == 0,
                       fmt("%zu instances, %zu violations", theorem.records.size(), viol)};
    });

    criterion(3, "5x5 sets reach length <= 8", 60, [&] {
        const auto rep = suite_thr5(base);
        std::size_t viol = 0, maxl = 0;
        for (const auto& r : rep.records) {
            viol += !r.error.empty() || r.length.length > 8;
            maxl = std::max(maxl, r.length.length);
        }
        return Outcome{rep.records.size() == 300 && viol == 0,
                       fmt("%zu instances, max length %zu, %zu violations", rep.records.size(), maxl, viol)};
    });

    criterion(4, "2n-2 for n <= 5, with sharp sets", 120, [&] {
        const auto rep = suite_paz(base);
        std::size_t checked = 0, viol = 0;
        auto scan = [&](const ExperimentReport& r) {
            for (const auto& x : r.records) {
                if (!x.error.empty() || x.length.n > 5) continue;
                ++checked;
                viol += x.length.length > 2 * x.length.n - 2;
            }
        };
        scan(rep);
        scan(theorem);
        std::string sharp;
        bool all_found = true;
        for (const auto& h : rep.extras["sharpness"]) {
            const bool hit = h["found"].get<bool>() && h["length"] == h["target"];
            all_found = all_found && hit;
            sharp += fmt(" n=%zu:%s", h["n"].get<std::size_t>(), hit ? "sharp" : "missing");
        }
        return Outcome{viol == 0 && all_found && rep.extra_fatal == 0,
                       fmt("%zu instances, %zu violations;", checked, viol) + sharp};
    });

    criterion(5, "seed witness contract", 0, [&] {
        std::size_t irreducible = 0, viol = 0;
        for (const auto& r : theorem.records) {
            if (!r.error.empty() || !r.length.irreducible || r.length.n < 2) continue;
            ++irreducible;
            const auto inst = gen_instances(r.spec);
            const auto seed = claim3_seed(inst.s);
            const auto sk = embed(inst.s, seed.embedding);
            const std::size_t n = inst.n();
            const bool ok = seed.witness.lambda * seed.witness.rho <= 2 * n && witness_by_oracle(sk, seed.witness) &&
                            !check_witness(sk, seed.witness).has_value();
            viol += !ok;
        }
        return Outcome{irreducible > 0 && viol == 0, fmt("%zu irreducible instances, %zu violations", irreducible, viol)};
    });

    criterion(6, "rank-halving contract", 0, [&] {
        SuiteOptions od = base;
        const auto dero = suite_derogatory(od);
        std::size_t pipelines = 0, steps = 0, viol = 0;
        std::string first;
        for (const ExperimentReport* rep : std::vector<const ExperimentReport*>{&theorem, &dero}) {
            for (const auto& r : rep->records) {
                if (!r.error.empty()) continue;
                for (const auto& c : r.checks)
                    if (c.name.rfind("pipeline", 0) == 0 && c.status == Status::fail) {
                        ++viol;
                        if (first.empty()) first = c.detail;
                    }
                if (!r.pipeline.contains("steps")) continue;
                ++pipelines;
                steps += r.pipeline["steps"].size() - 1;
                for (const auto& m : trace_violations(r.pipeline["steps"], r.length.n)) {
                    ++viol;
                    if (first.empty()) first = m;
                }
            }
        }
        return Outcome{pipelines > 0 && steps > 0 && viol == 0,
                       fmt("%zu pipelines, %zu halving steps, %zu violations", pipelines, steps, viol) +
                           (first.empty() ? "" : " (" + first + ")")};
    });

    Json claims;
    criterion(7, "selector products, 1000 trials", 60, [&] {
        SuiteOptions oc = base;
        oc.trials = 1000;
        const auto rep = suite_claims(oc);
        claims = rep.extras;
        const auto& c4 = claims["selector_rank"];
        return Outcome{c4["violations"] == 0 && c4["evaluated"].get<std::size_t>() > 0,
                       fmt("%zu evaluated, %zu words, %zu violations", c4["evaluated"].get<std::size_t>(),
                           c4["words_checked"].get<std::size_t>(), c4["violations"].get<std::size_t>())};
    });

    criterion(8, "unit submatrix, 200 trials", 0, [&] {
        const auto& c2 = claims["unit_submatrix"];
        const auto& c1 = claims["projector_reduction"];
        return Outcome{c2["trials"] == 200 && c2["violations"] == 0 && c1["violations"] == 0,
                       fmt("%zu trials, %zu violations; reduction %zu violations", c2["trials"].get<std::size_t>(),
                           c2["violations"].get<std::size_t>(), c1["violations"].get<std::size_t>())};
    });

    criterion(9, "anticommuting involutions", 30, [&] {
        const auto rep = suite_cldeg2(base);
        std::string lens;
        bool ok = rep.records.size() == 3 && rep.fatal() == 0;
        for (const auto& r : rep.records) {
            const std::size_t m = r.spec.params["m"];
            ok = ok && r.error.empty() && r.length.length <= 2 * m;
            lens += fmt(" m=%zu:l=%zu", m, r.length.length);
        }
        return Outcome{ok, "GF(5)" + lens};
    });

    criterion(10, "block-triangular inequality", 0, [&] {
        const auto rep = suite_ov(base);
        std::size_t checked = 0, viol = 0;
        for (const auto& r : rep.records) {
            if (!r.error.empty()) {
                ++viol;
                continue;
            }
            const auto inst = gen_instances(r.spec);
            const auto v = verify_lemma_ov(inst.s1, inst.s2, inst.glue);
            ++checked;
            viol += !v.holds() || v.ell != r.length.length;
        }
        return Outcome{checked == 50 && viol == 0, fmt("%zu instances, %zu violations", checked, viol)};
    });

    criterion(11, "invariance", 0, [] {
        std::size_t c = 0, r = 0, x = 0;
        const std::uint64_t ps[] = {2, 3, 5};
        for (std::uint64_t i = 0; i < 20; ++i) {
            InstanceSpec sp;
            sp.p = ps[i % 3];
            sp.n = 2 + i % 5;
            sp.set_size = 2 + i % 2;
            sp.seed = 500 + i;
            if (i % 2) sp.params["density"] = 0.4;
            const auto v = check_invariance(gen_instances(sp).s, i);
            c += v.conjugation;
            r += v.recombination;
            x += v.extension;
        }
        return Outcome{c == 20 && r == 20 && x == 20, fmt("conjugation %zu/20, recombination %zu/20, extension %zu/20", c, r, x)};
    });

    criterion(12, "primitivity exploration", 0, [] {
        std::size_t present = 0, absent = 0, capped = 0, bad = 0, max_tau = 0;
        const std::uint64_t ps[] = {2, 3, 5};
        for (std::uint64_t i = 0; i < 100; ++i) {
            InstanceSpec sp;
            sp.p = ps[i % 3];
            sp.n = 2 + i % 4;
            sp.set_size = 1 + i % 3;
            sp.seed = 900 + i;
            sp.params["density"] = i % 2 ? 0.3 : 1.0;
            const auto s = gen_instances(sp).s;
            const auto res = homogeneous_index(s);
            if (res.index) {
                ++present;
                max_tau = std::max(max_tau, *res.index);
                const auto u = homogeneous_spans(s, *res.index + s[0].rows() * s[0].rows());
                for (std::size_t t = *res.index; t < u.size(); ++t) bad += !u[t].full();
                if (*res.index > 1) bad += u[*res.index - 1].full();
            } else if (res.certified_absent) {
                ++absent;
            } else {
                ++capped;
            }
        }
        return Outcome{present + absent + capped == 100 && bad == 0,
                       fmt("index found %zu (max %zu), certified absent %zu, cap reached %zu", present, max_tau, absent, capped)};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
