// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wordlen/spans.hpp"

using namespace wordlen;

namespace {

Mat E(const Field& F, std::size_t n, std::size_t i, std::size_t j) { return Mat::unit(F, n, i, j); }

MatrixSet<Field> random_set(const Field& F, std::size_t n, std::size_t k, std::mt19937_64& rng, int sparsity = 0) {
    MatrixSet<Field> s;
    for (std::size_t a = 0; a < k; ++a) {
        Mat m(F, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (sparsity == 0 || rng() % sparsity == 0) m(i, j) = F.random(rng);
        s.push_back(m);
    }
    return s;
}

} // namespace

TEST(SpanFiltration, UnitPair) {
    const Field F(2);
    const auto f = span_filtration(MatrixSet<Field>{E(F, 2, 0, 1), E(F, 2, 1, 0)});
    EXPECT_EQ(f.report.length, 2u);
    EXPECT_EQ(f.report.dims, (std::vector<std::size_t>{1, 3, 4}));
    EXPECT_TRUE(f.report.irreducible);
    EXPECT_EQ(f.report.k_set, 2u);
}

TEST(SpanFiltration, SingleNilpotentGenerator) {
    const Field F(3);
    const Mat a = E(F, 3, 1, 0) + E(F, 3, 2, 1);
    const auto f = span_filtration(MatrixSet<Field>{a});
    EXPECT_EQ(f.report.length, 2u);
    EXPECT_EQ(f.report.algebra_dim, 3u);
    EXPECT_FALSE(f.report.irreducible);
}

TEST(SpanFiltration, IdentityAlone) {
    const Field F(5);
    const auto f = span_filtration(MatrixSet<Field>{Mat::identity(F, 3)});
    EXPECT_EQ(f.report.length, 0u);
    EXPECT_EQ(f.report.dims, (std::vector<std::size_t>{1}));
}

TEST(SpanFiltration, Errors) {
    const Field F(2);
    EXPECT_THROW(span_filtration(MatrixSet<Field>{}), DomainError);
    EXPECT_THROW(span_filtration(MatrixSet<Field>{Mat(F, 2, 3)}), DomainError);
    EXPECT_THROW(span_filtration(MatrixSet<Field>{E(F, 2, 0, 1), E(F, 3, 0, 1)}), DomainError);
    EXPECT_THROW(span_filtration(MatrixSet<Field>{E(F, 2, 0, 1), E(F, 2, 1, 0)}, 1), CapExceeded);
    EXPECT_NO_THROW(span_filtration(MatrixSet<Field>{E(F, 2, 0, 1), E(F, 2, 1, 0)}, 2));
}

TEST(SpanFiltration, OverRationals) {
    const Rationals Q;
    using RMat = Matrix<Rationals>;
    RMat a = RMat::unit(Q, 2, 0, 1), b = RMat::unit(Q, 2, 1, 0);
    b(1, 0) = Q.div(2, 3);
    const auto f = span_filtration(MatrixSet<Rationals>{a, b});
    EXPECT_EQ(f.report.length, 2u);
    EXPECT_TRUE(f.report.irreducible);
    EXPECT_EQ(f.report.p, 0u);
}

TEST(SpanFiltration, LevelsAreNestedAndFrontierOnly) {
    std::mt19937_64 rng(5);
    const Field F(3);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2 + rng() % 4;
        const auto s = random_set(F, n, 2, rng, 3);
        const auto f = span_filtration(s);
        const auto& d = f.report.dims;
        ASSERT_EQ(d.size(), f.report.length + 1);
        for (std::size_t i = 1; i < d.size(); ++i) EXPECT_LT(d[i - 1], d[i]);
        for (std::size_t i = 0; i < d.size(); ++i) {
            EXPECT_EQ(f.chain.level(i).dim(), d[i]);
            EXPECT_EQ(f.chain.frontier[i].size(), d[i] - (i ? d[i - 1] : 0));
        }
        EXPECT_EQ(f.chain.level(d.size() + 3), f.chain.algebra);
        EXPECT_EQ(f.report.algebra_dim, d.back());
    }
}

TEST(SpanFiltration, MatchesBruteForceOverGF3) {
    std::mt19937_64 rng(7);
    const Field F(3);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 2 + rng() % 2;
        const auto s = random_set(F, n, 1 + rng() % 2, rng, 2);
        std::vector<oracle::IMat> si;
        for (const auto& a : s) si.push_back(oracle::from_lib(a));
        EXPECT_EQ(length(s), oracle::brute_length(si, 3, 2 * n + 2)) << "trial " << t;
    }
}

TEST(SpanFiltration, InvariantUnderConjugation) {
    std::mt19937_64 rng(11);
    const Field F(5);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng() % 4;
        const auto s = random_set(F, n, 2, rng, 3);
        Mat tr = random_set(F, n, 1, rng)[0];
        while (!try_inverse(tr)) tr = random_set(F, n, 1, rng)[0];
        MatrixSet<Field> c;
        for (const auto& a : s) c.push_back(conjugate(a, tr));
        EXPECT_EQ(span_filtration(s).report.dims, span_filtration(c).report.dims);
    }
}

TEST(Irreducibility, Examples) {
    const Field F(2);
    EXPECT_TRUE(is_irreducible(MatrixSet<Field>{E(F, 2, 0, 1), E(F, 2, 1, 0)}));
    EXPECT_FALSE(is_irreducible(MatrixSet<Field>{E(F, 2, 0, 1), E(F, 2, 0, 0)}));
    EXPECT_FALSE(is_irreducible(MatrixSet<Field>{Mat::identity(F, 2)}));
}

TEST(SpanBasis, ContainsGivesCoordinates) {
    const Field F(7);
    SpanBasis<Field> b(F, 3);
    EXPECT_TRUE(b.insert({1, 2, 3}));
    EXPECT_TRUE(b.insert({0, 1, 1}));
    EXPECT_FALSE(b.insert({2, 4, 6}));
    const Vec v = {3, 0, 2}; // off by one in the last entry from 3*(1,2,3) + (0,1,1)
    const auto c = b.contains({3, 0, 3});
    ASSERT_TRUE(c.has_value());
    Vec back(3, 0);
    for (std::size_t i = 0; i < b.dim(); ++i)
        for (std::size_t j = 0; j < 3; ++j) back[j] = F.add(back[j], F.mul((*c)[i], b.rows()[i][j]));
    EXPECT_EQ(back, (Vec{3, 0, 3}));
    EXPECT_FALSE(b.includes(v));
}

TEST(HomogeneousIndex, AllUnits) {
    const Field F(3);
    const auto r = homogeneous_index(MatrixSet<Field>{E(F, 2, 0, 0), E(F, 2, 0, 1), E(F, 2, 1, 0), E(F, 2, 1, 1)});
    ASSERT_TRUE(r.index.has_value());
    EXPECT_EQ(*r.index, 1u);
}

TEST(HomogeneousIndex, IndexTwo) {
    const Field F(2);
    const auto r = homogeneous_index(MatrixSet<Field>{E(F, 2, 0, 1) + E(F, 2, 1, 0), E(F, 2, 0, 0)});
    ASSERT_TRUE(r.index.has_value());
    EXPECT_EQ(*r.index, 2u);
    EXPECT_EQ(r.dims.front(), 2u);
}

TEST(HomogeneousIndex, CertifiedAbsentForAlternatingSpans) {
    const Field F(2);
    const auto r = homogeneous_index(MatrixSet<Field>{E(F, 2, 0, 1), E(F, 2, 1, 0)});
    EXPECT_FALSE(r.index.has_value());
    EXPECT_TRUE(r.certified_absent);
    EXPECT_LE(r.examined, 8u);
}

TEST(HomogeneousIndex, OnceFullStaysFull) {
    std::mt19937_64 rng(3);
    const Field F(2);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng() % 3;
        const auto s = random_set(F, n, 2, rng);
        const auto r = homogeneous_index(s);
        if (!r.index) continue;
        const auto u = homogeneous_spans(s, *r.index + 4);
        for (std::size_t i = *r.index; i < u.size(); ++i) EXPECT_TRUE(u[i].full());
        if (*r.index > 1) {
            EXPECT_FALSE(u[*r.index - 1].full());
        }
    }
}

TEST(BlockProjectedSpan, CyclicExample) {
    const Field F(2);
    const Mat p = E(F, 4, 1, 0) + E(F, 4, 2, 1) + E(F, 4, 3, 2) + E(F, 4, 0, 3);
    const Mat h = E(F, 4, 0, 2) + E(F, 4, 1, 3);
    const auto basis = adapt_square_zero_basis(h);
    ASSERT_EQ(basis.transform, Mat::identity(F, 4));
    const MatrixSet<Field> s{p};
    const auto u0 = block_projected_span(s, 0, basis);
    EXPECT_EQ(u0.dim(), 0u);
    EXPECT_TRUE(spans_only_scalars(u0, 2));
    const auto u1 = block_projected_span(s, 1, basis);
    ASSERT_EQ(u1.dim(), 1u);
    EXPECT_EQ(u1.rows()[0], (Vec{0, 1, 0, 0}));
    EXPECT_FALSE(spans_only_scalars(u1, 2));
}

TEST(VectorFiltration, CompanionFromFirstBasisVector) {
    const Field F(3);
    const Mat a = E(F, 3, 1, 0) + E(F, 3, 2, 1);
    const auto v = vector_filtration(MatrixSet<Field>{a}, {Vec{1, 0, 0}});
    EXPECT_EQ(v.dims, (std::vector<std::size_t>{1, 2, 3}));
    const auto w = vector_filtration(MatrixSet<Field>{a}, {Vec{0, 0, 1}});
    EXPECT_EQ(w.dims, (std::vector<std::size_t>{1}));
}
