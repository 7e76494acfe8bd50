#include "cyclo/zlattice.hpp"

#include <gtest/gtest.h>

#include <random>

namespace cyclo {
namespace {

IntMat rows(std::initializer_list<std::initializer_list<long>> r) {
    IntMat m;
    for (auto& row : r) {
        IntVec v;
        for (long x : row) v.emplace_back(x);
        m.push_back(std::move(v));
    }
    return m;
}

TEST(Hnf, KnownForm) {
    EXPECT_EQ(hnf(rows({{2, 0}, {1, 1}})), rows({{1, 1}, {0, 2}}));
}

TEST(Hnf, IdempotentAndEchelon) {
    IntMat a = rows({{2, 3, 6, 2}, {5, 6, 1, 6}, {8, 3, 1, 1}, {7, 0, 0, 2}});
    IntMat h = hnf(a);
    EXPECT_EQ(hnf(h), h);
    EXPECT_TRUE(lattice_equal(a, h));
    size_t last_pivot = 0;
    for (size_t i = 0; i < h.size(); ++i) {
        size_t c = 0;
        while (c < h[i].size() && h[i][c] == 0) ++c;
        ASSERT_LT(c, h[i].size());
        if (i > 0) EXPECT_GT(c, last_pivot);
        last_pivot = c;
        EXPECT_GT(h[i][c], 0);
        for (size_t j = 0; j < i; ++j) {
            EXPECT_GE(h[j][c], 0);
            EXPECT_LT(h[j][c], h[i][c]);
        }
    }
}

TEST(Hnf, TransformReconstructsRows) {
    IntMat a = rows({{6, 9}, {10, 15}, {4, 2}});
    IntMat t;
    IntMat h = hnf(a, &t);
    ASSERT_EQ(t.size(), h.size());
    for (size_t i = 0; i < h.size(); ++i) {
        IntVec acc(a[0].size(), 0);
        for (size_t j = 0; j < a.size(); ++j)
            for (size_t c = 0; c < acc.size(); ++c) acc[c] += t[i][j] * a[j][c];
        EXPECT_EQ(acc, h[i]);
    }
}

TEST(Lattice, SolveProducesCertificate) {
    IntMat a = rows({{2, -1, 0}, {0, 3, -3}, {1, 1, 1}});
    IntVec target{3, 3, -2};
    auto x = lattice_solve(a, target);
    ASSERT_TRUE(x.has_value());
    IntVec acc(3, 0);
    for (size_t j = 0; j < a.size(); ++j)
        for (size_t c = 0; c < 3; ++c) acc[c] += (*x)[j] * a[j][c];
    EXPECT_EQ(acc, target);
}

TEST(Lattice, RejectsNonMember) {
    IntMat a = rows({{2, 0}, {0, 2}});
    EXPECT_FALSE(lattice_member(a, {1, 0}));
    EXPECT_TRUE(lattice_member(a, {4, -2}));
}

TEST(Lattice, EqualityIgnoresGeneratorChoice) {
    IntMat a = rows({{1, 2}, {3, 4}});
    IntMat b = rows({{4, 6}, {1, 2}, {5, 8}});
    EXPECT_TRUE(lattice_equal(a, b));
    EXPECT_FALSE(lattice_equal(a, rows({{2, 4}, {6, 8}})));
}

TEST(Det, BareissMatchesCofactor) {
    IntMat a = rows({{3, 1, 4}, {1, 5, 9}, {2, 6, 5}});
    // cofactor expansion: 3*(25-54) - 1*(5-18) + 4*(6-10) = -87 + 13 - 16 = -90
    EXPECT_EQ(det_bareiss(a), -90);
    EXPECT_EQ(det_bareiss(rows({{2, 0}, {0, 0}})), 0);
}

TEST(Lll, FindsPlantedShortVector) {
    // Random-looking unimodular mix of a basis containing a short vector.
    std::mt19937 rng(42);
    IntMat b = rows({{1, 0, 1, 0, -1, 0}, {0, 1, 0, -1, 0, 1}});
    size_t dim = 6;
    IntMat basis(dim, IntVec(dim, 0));
    for (size_t i = 0; i < 2; ++i) basis[i] = b[i];
    for (size_t i = 2; i < dim; ++i) {
        for (size_t j = 0; j < dim; ++j) basis[i][j] = (long)(rng() % 41) - 20;
        basis[i][i] += 100;
    }
    IntMat red = lll_reduce(basis);
    Int best = -1;
    for (auto& row : red) {
        Int norm = 0;
        for (auto& x : row) norm += x * x;
        if (best < 0 || norm < best) best = norm;
    }
    EXPECT_LE(best, 3);
}

}  // namespace
}  // namespace cyclo
