// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "wordlen/harness.hpp"

using namespace wordlen;

namespace {

Mat E(const Field& F, std::size_t n, std::size_t i, std::size_t j) { return Mat::unit(F, n, i, j); }

InstanceSpec spec(std::string family, std::uint64_t p, std::size_t n, std::size_t k, std::uint64_t seed) {
    InstanceSpec s;
    s.family = std::move(family);
    s.p = p;
    s.n = n;
    s.set_size = k;
    s.seed = seed;
    return s;
}

} // namespace

TEST(Claim4, CompanionExample) {
    const Field F(2);
    const std::vector<Mat> s{companion(Poly::monomial(F, 1, 4))};
    Mat q(F, 4, 1), p(F, 1, 4);
    q(0, 0) = 1;
    p(0, 3) = 1;
    const auto v = verify_claim4(s, p, q);
    EXPECT_EQ(v.k, 3u);
    EXPECT_EQ(v.max_rank, 1u);
    EXPECT_EQ(v.bound, 1u);
    EXPECT_EQ(v.violations, 0u);
    EXPECT_TRUE(v.exhaustive);
    EXPECT_EQ(v.checked, 1u);
}

TEST(Claim4, NoConnectingWordIsReported) {
    const Field F(3);
    const std::vector<Mat> s{Mat::identity(F, 3)};
    Mat q(F, 3, 1), p(F, 1, 3);
    q(0, 0) = 1;
    p(0, 2) = 1;
    EXPECT_THROW(verify_claim4(s, p, q), CapExceeded);
}

TEST(Claim4, RandomSelectorsRespectBound) {
    Rng rng(17);
    for (std::uint64_t pr : {2, 3, 5}) {
        const Field F(pr);
        for (int t = 0; t < 20; ++t) {
            const std::size_t n = 3 + rng() % 4;
            std::vector<Mat> s{random_matrix(F, n, n, rng, 0.3), random_matrix(F, n, n, rng, 0.3)};
            const std::size_t r = 1 + rng() % (n / 2);
            Mat q(F, n, r), p(F, r, n);
            for (std::size_t i = 0; i < r; ++i) {
                q(i, i) = 1;
                p(i, n - r + i) = 1;
            }
            try {
                const auto v = verify_claim4(s, p, q, t);
                EXPECT_EQ(v.violations, 0u);
                EXPECT_LE(v.max_rank, v.bound);
            } catch (const CapExceeded&) {
            }
        }
    }
}

TEST(VerifyBounds, UnitPair) {
    const Field F(2);
    const auto v = verify_bounds({E(F, 2, 0, 1), E(F, 2, 1, 0)});
    EXPECT_EQ(v.length.length, 2u);
    EXPECT_EQ(v.fatal(), 0u);
    ASSERT_NE(v.find("paz"), nullptr);
    EXPECT_EQ(v.find("paz")->status, Status::pass);
    ASSERT_TRUE(v.pipeline.has_value());
    EXPECT_EQ(v.pipeline->witness.rho, 1u);
    ASSERT_NE(v.find("pipeline-witnesses"), nullptr);
    EXPECT_EQ(v.find("pipeline-witnesses")->status, Status::pass);
}

TEST(VerifyBounds, ReducibleSkipsPipeline) {
    const Field F(3);
    const auto v = verify_bounds({E(F, 3, 0, 1), E(F, 3, 0, 2)});
    EXPECT_FALSE(v.pipeline.has_value());
    EXPECT_FALSE(v.pipeline_note.empty());
    EXPECT_EQ(v.fatal(), 0u);
}

TEST(VerifyBounds, ObservedFailureIsNotFatal) {
    Check c = detail::bound_check("x", 10, 5, false);
    EXPECT_EQ(c.status, Status::observed);
    EXPECT_FALSE(c.fatal());
    Check d = detail::bound_check("x", 10, 5, true);
    EXPECT_EQ(d.status, Status::fail);
    EXPECT_TRUE(d.fatal());
}

TEST(LemmaOV, Examples) {
    const Field F(2);
    const std::vector<Mat> s1{E(F, 2, 0, 1), E(F, 2, 1, 0)};
    const std::vector<Mat> s2{Mat::from_ints(F, {{0}}), Mat::from_ints(F, {{1}})};
    const std::vector<Mat> glue{Mat::from_ints(F, {{1}, {0}}), Mat::from_ints(F, {{0}, {0}})};
    const auto v = verify_lemma_ov(s1, s2, glue);
    EXPECT_EQ(v.ell1, 2u);
    EXPECT_EQ(v.ell2, 0u);
    EXPECT_TRUE(v.holds());
    EXPECT_THROW(verify_lemma_ov(s1, {Mat::from_ints(F, {{0}})}, glue), DomainError);
}

TEST(LemmaOV, RandomBlockTriangular) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto sp = spec("block-triangular", 2 + seed % 2, 3 + seed % 3, 2, seed);
        sp.params["n1"] = 1 + seed % 2;
        const auto inst = gen_instances(sp);
        ASSERT_FALSE(inst.s1.empty());
        EXPECT_TRUE(verify_lemma_ov(inst.s1, inst.s2, inst.glue).holds());
    }
}

TEST(Instances, CliffordGenerators) {
    auto sp = spec("clifford", 5, 0, 0, 0);
    sp.params["m"] = 2;
    const auto inst = gen_instances(sp);
    ASSERT_EQ(inst.s.size(), 4u);
    const Field& F = inst.s[0].domain();
    const Mat id = Mat::identity(F, 4);
    for (std::size_t a = 0; a < 4; ++a) {
        EXPECT_EQ(inst.s[a] * inst.s[a], id);
        for (std::size_t b = a + 1; b < 4; ++b) EXPECT_TRUE((inst.s[a] * inst.s[b] + inst.s[b] * inst.s[a]).is_zero());
    }
    EXPECT_TRUE(is_irreducible(inst.s));
    EXPECT_LE(length(inst.s), 4u);
    EXPECT_THROW(clifford_generators(Field(3), 1), DomainError);
    EXPECT_THROW(clifford_generators(Field(2), 1), DomainError);
}

TEST(Instances, DeterministicInSpec) {
    for (const char* fam : {"random", "companion-plus-rank-one", "derogatory", "block-triangular"}) {
        const auto a = gen_instances(spec(fam, 3, 4, 2, 11));
        const auto b = gen_instances(spec(fam, 3, 4, 2, 11));
        const auto c = gen_instances(spec(fam, 3, 4, 2, 12));
        EXPECT_EQ(a.s, b.s) << fam;
        EXPECT_NE(a.s, c.s) << fam;
    }
    EXPECT_THROW(gen_instances(spec("nope", 3, 4, 2, 1)), DomainError);
    EXPECT_THROW(gen_instances(spec("derogatory", 3, 5, 2, 1)), DomainError);
}

TEST(Instances, SpecJsonRoundTrip) {
    auto sp = spec("derogatory", 5, 6, 3, 9);
    sp.params["poly"] = "random";
    const auto back = instance_spec_from_json(to_json(sp));
    EXPECT_EQ(to_json(back), to_json(sp));
}

TEST(Search, FindsSharpSetForSizeThree) {
    const auto hit = search_length(Field(2), 3, 4);
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(hit->length, 4u);
    EXPECT_EQ(length(hit->s), 4u);
    EXPECT_EQ(hit->s.size(), 2u);
}

TEST(Search, UnreachableTargetReturnsNothing) {
    EXPECT_FALSE(search_length(Field(2), 2, 3, 200).has_value());
}

TEST(InvariantSubspace, FoundForReducibleSets) {
    const Field F(3);
    const auto r = find_invariant_subspace({E(F, 3, 0, 1), E(F, 3, 0, 2)});
    ASSERT_TRUE(r.basis.has_value());
    const Mat& b = *r.basis;
    EXPECT_GT(b.cols(), 0u);
    EXPECT_LT(b.cols(), 3u);
    for (const auto& a : {E(F, 3, 0, 1), E(F, 3, 0, 2)}) {
        const Mat ab = a * b;
        for (std::size_t j = 0; j < ab.cols(); ++j) {
            SpanBasis<Field> sp(F, 3);
            for (std::size_t c = 0; c < b.cols(); ++c) sp.insert(b.column(c));
            EXPECT_TRUE(sp.includes(ab.column(j)));
        }
    }
    EXPECT_FALSE(find_invariant_subspace({E(F, 2, 0, 1), E(F, 2, 1, 0)}).basis.has_value());
}

TEST(Invariance, RandomIrreducibleSets) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto inst = gen_instances(spec("random", 2 + seed % 2, 3 + seed % 3, 2, seed));
        const auto v = check_invariance(inst.s, seed);
        EXPECT_TRUE(v.conjugation);
        EXPECT_TRUE(v.recombination);
        EXPECT_TRUE(v.extension);
    }
}

TEST(ParallelMap, OrderAndErrors) {
    const auto r = parallel_map<std::size_t>(50, 4, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(r[i], i * i);
    EXPECT_THROW(parallel_map<int>(10, 3,
                                   [](std::size_t i) -> int {
                                       if (i == 7) throw DomainError("seven");
                                       return 0;
                                   }),
                 DomainError);
}

TEST(Experiment, CountExpansionAndStableOutput) {
    const Json cfg = Json::parse(R"({"name": "t", "instances": [
        {"family": "random", "field": {"p": 3}, "n": 4, "set_size": 2, "seed": 42, "count": 10}]})");
    const auto a = run_experiment(cfg);
    ASSERT_EQ(a.records.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(a.records[i].spec.seed, 42 + i);
    EXPECT_EQ(a.fatal(), 0u);
    EXPECT_EQ(to_json(a).dump(), to_json(run_experiment(cfg)).dump());
    EXPECT_EQ(to_json(a).dump(), to_json(run_experiment(cfg, 3)).dump());
    const auto csv = to_csv(a);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

TEST(Experiment, ReducibleExplicitInstanceSkipsPipeline) {
    const Json cfg = Json::parse(R"({"instances": [{"family": "explicit",
        "literal": {"field": {"p": 5}, "n": 2, "matrices": [[[1, 0], [0, 1]], [[2, 0], [0, 2]]]}}]})");
    const auto rep = run_experiment(cfg);
    ASSERT_EQ(rep.records.size(), 1u);
    EXPECT_TRUE(rep.records[0].error.empty());
    EXPECT_TRUE(rep.records[0].pipeline.contains("skipped"));
    EXPECT_EQ(rep.fatal(), 0u);
}

TEST(Experiment, GenerationErrorsAreRecorded) {
    const Json cfg = Json::parse(R"([{"family": "clifford", "field": {"p": 3}, "params": {"m": 1}}])");
    const auto rep = run_experiment(cfg);
    ASSERT_EQ(rep.records.size(), 1u);
    EXPECT_FALSE(rep.records[0].error.empty());
}

TEST(Experiment, SizeFiveBatch) {
    SuiteOptions o;
    o.trials = 12;
    const auto rep = suite_thr5(o);
    EXPECT_EQ(rep.records.size(), 12u);
    EXPECT_EQ(rep.fatal(), 0u);
    for (const auto& r : rep.records) {
        EXPECT_EQ(r.length.n, 5u);
        EXPECT_LE(r.length.length, 8u);
    }
}

TEST(Suites, UnknownSuiteIsAnError) {
    EXPECT_THROW(run_suite("nope", SuiteOptions{}), DomainError);
}

TEST(Suites, CliffordSuite) {
    const auto rep = run_suite("cldeg2", SuiteOptions{});
    ASSERT_EQ(rep.records.size(), 3u);
    EXPECT_EQ(rep.fatal(), 0u);
}
