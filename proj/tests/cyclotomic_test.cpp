#include "cyclo/cyclotomic.hpp"

#include <gtest/gtest.h>

#include <random>

namespace cyclo {
namespace {

TEST(CycArith, VanishingSumOfCubeRoots) {
    auto f = CycField::make(3, 0);
    CycNum z = CycNum::zeta_p_pow(f, 1);
    CycNum sum = z + z.pow(2);
    EXPECT_EQ(sum, CycNum::from_rat(f, -1));
}

TEST(CycArith, Phi5AtOne) {
    auto f = CycField::make(5, 0);
    CycNum one = CycNum::one(f);
    CycNum prod = one;
    for (long e = 1; e <= 4; ++e) prod = prod * (one - CycNum::zeta_p_pow(f, e));
    EXPECT_EQ(prod, CycNum::from_rat(f, 5));
}

TEST(CycArith, Zeta9CubeIsZeta3) {
    auto f = CycField::make(3, 1);
    // x^6 = -x^3 - 1
    CycNum z6 = CycNum::zeta_p_pow(f, 1).pow(6);
    CycNum expect = -CycNum::zeta_p_pow(f, 3) - CycNum::one(f);
    EXPECT_EQ(z6, expect);
    // relative norm of zeta_9 down to level 0 is zeta_9^{1+4+7} = zeta_3
    CycNum nm = relative_norm(CycNum::zeta_p_pow(f, 1), 0);
    auto f0 = CycField::make(3, 0);
    EXPECT_EQ(nm, CycNum::zeta_p_pow(f0, 1));
}

TEST(CycArith, ConductorMismatchThrows) {
    auto a = CycNum::one(CycField::make(3, 0));
    auto b = CycNum::one(CycField::make(5, 0));
    EXPECT_THROW(a + b, std::invalid_argument);
    EXPECT_THROW(a * b, std::invalid_argument);
}

TEST(Galois, BasicAction) {
    auto f = CycField::make(5, 0);
    CycNum x = CycNum::one(f) + CycNum::zeta_p_pow(f, 1);
    EXPECT_EQ(x.galois_p(2), CycNum::one(f) + CycNum::zeta_p_pow(f, 2));
    // conjugation is zeta -> zeta^{-1}
    EXPECT_EQ(CycNum::zeta_p_pow(f, 1).galois_p(-1), CycNum::zeta_p_pow(f, 4));
}

TEST(Galois, Composition) {
    auto f = CycField::make(3, 1);
    CycNum z = CycNum::zeta_p_pow(f, 1);
    EXPECT_EQ(z.galois_p(7).galois_p(4), CycNum::zeta_p_pow(f, 28 % 9));
    EXPECT_EQ(z.galois_p(4) * z.galois_p(7), CycNum::zeta_p_pow(f, 11));
    EXPECT_THROW(z.galois_p(3), std::invalid_argument);
}

TEST(Galois, CommutesWithArithmeticOnRandomInputs) {
    auto f = CycField::make(5, 1);
    std::mt19937 rng(7);
    auto rand_elt = [&] {
        std::vector<Rat> cs(f->dim);
        for (auto& c : cs) {
            c = Rat((long)(rng() % 19) - 9, 1 + rng() % 4);
            c.canonicalize();
        }
        return CycNum(f, cs);
    };
    for (int trial = 0; trial < 5; ++trial) {
        CycNum x = rand_elt(), y = rand_elt();
        for (long a : {2L, 7L, 24L}) {
            EXPECT_EQ((x + y).galois_p(a), x.galois_p(a) + y.galois_p(a));
            EXPECT_EQ((x * y).galois_p(a), x.galois_p(a) * y.galois_p(a));
        }
    }
    EXPECT_EQ(CycNum::from_rat(f, Rat(22, 7)).galois_p(3), CycNum::from_rat(f, Rat(22, 7)));
}

TEST(RelativeNorm, OneMinusZeta9) {
    auto f = CycField::make(3, 1);
    CycNum x = CycNum::one(f) - CycNum::zeta_p_pow(f, 1);
    CycNum nm = relative_norm(x, 0);
    auto f0 = CycField::make(3, 0);
    // independent expansion: (1 - z9)(1 - z9^4)(1 - z9^7)
    CycNum direct = (CycNum::one(f) - CycNum::zeta_p_pow(f, 1)) *
                    (CycNum::one(f) - CycNum::zeta_p_pow(f, 4)) *
                    (CycNum::one(f) - CycNum::zeta_p_pow(f, 7));
    EXPECT_EQ(nm, direct.to_p_level(0));
    EXPECT_EQ(nm, CycNum::one(f0) - CycNum::zeta_p_pow(f0, 1));
}

TEST(RelativeNorm, GaloisInvariance) {
    auto f = CycField::make(3, 1);
    CycNum x = Rat(2) * CycNum::zeta_p_pow(f, 2) - CycNum::zeta_p_pow(f, 5) + CycNum::one(f);
    // sigma_4 generates Gal(k_1/k_0); norm is invariant under it
    EXPECT_EQ(relative_norm(x.galois_p(4), 0), relative_norm(x, 0));
}

TEST(RelativeNorm, SameLevelIdentity) {
    auto f = CycField::make(5, 0);
    CycNum x = CycNum::zeta_p_pow(f, 3) + CycNum::from_rat(f, 2);
    EXPECT_EQ(relative_norm(x, 0), x);
}

TEST(Norms, AbsoluteNormMatchesResolventProduct) {
    auto f = CycField::make(5, 0);
    CycNum x = CycNum::from_rat(f, 2) + CycNum::zeta_p_pow(f, 1);
    // N(2 + zeta_5) = Phi_5(-2) = 16 - 8 + 4 - 2 + 1 = 11
    EXPECT_EQ(x.absolute_norm(), Rat(11));
    auto f3 = CycField::make(3, 0);
    CycNum y = CycNum::from_rat(f3, 3) + CycNum::zeta_p_pow(f3, 1);
    EXPECT_EQ(y.absolute_norm(), Rat(7));
}

TEST(Norms, InverseRoundTrips) {
    auto f = CycField::make(7, 0);
    CycNum x = CycNum::from_rat(f, 2) - CycNum::zeta_p_pow(f, 3) + CycNum::zeta_p_pow(f, 5);
    EXPECT_EQ(x * x.inverse(), CycNum::one(f));
    EXPECT_EQ(x.pow(-2) * x.pow(2), CycNum::one(f));
}

TEST(CompositeField, TensorBasisAndLTwo) {
    auto f = CycField::make(3, 0, 7);
    CycNum zl = CycNum::zeta_l_pow(f, 1);
    CycNum sum(f);
    for (long j = 0; j < 7; ++j) sum = sum + CycNum::zeta_l_pow(f, j);
    EXPECT_TRUE(sum.is_zero());
    EXPECT_EQ(zl.pow(7), CycNum::one(f));
    EXPECT_EQ(zl.galois_l(3), CycNum::zeta_l_pow(f, 3));

    // l = 2: zeta_2 = -1 via the vanishing-sum relation
    auto f2 = CycField::make(3, 1, 2);
    EXPECT_EQ(CycNum::zeta_l_pow(f2, 1), CycNum::from_rat(f2, -1));
}

TEST(CompositeField, DropAndLift) {
    auto f = CycField::make(3, 0, 7);
    CycNum x = CycNum::zeta_p_pow(f, 1) + CycNum::from_rat(f, 5);
    EXPECT_TRUE(x.is_l_free());
    CycNum d = x.drop_l();
    EXPECT_EQ(d.with_l(7), x);
    CycNum y = x + CycNum::zeta_l_pow(f, 2);
    EXPECT_FALSE(y.is_l_free());
    EXPECT_THROW(y.drop_l(), std::invalid_argument);
}

TEST(RootOfUnityRatio, DetectsAndRejects) {
    auto f = CycField::make(3, 1);
    CycNum x = CycNum::from_rat(f, 2) + CycNum::zeta_p_pow(f, 4);
    auto r = root_of_unity_ratio(CycNum::zeta_p_pow(f, 2) * x, x);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(*r, std::make_pair(0, 2L));
    r = root_of_unity_ratio(-x, x);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(*r, std::make_pair(1, 0L));

    // 1 + zeta_5 is a nontorsion unit: no candidate matches
    auto f5 = CycField::make(5, 0);
    CycNum y = CycNum::from_rat(f5, 1) - CycNum::zeta_p_pow(f5, 2);
    CycNum u = CycNum::one(f5) + CycNum::zeta_p_pow(f5, 1);
    EXPECT_EQ(u.absolute_norm(), Rat(1));
    EXPECT_FALSE(root_of_unity_ratio(u * y, y).has_value());
}

TEST(RootOfUnityRatio, ExactIdentityWhenFound) {
    auto f = CycField::make(5, 0);
    CycNum y = CycNum::from_rat(f, 3) + CycNum::zeta_p_pow(f, 1) - CycNum::zeta_p_pow(f, 3);
    for (int s : {0, 1})
        for (long k : {0L, 1L, 4L}) {
            CycNum x = Rat(s ? -1 : 1) * CycNum::zeta_p_pow(f, k) * y;
            auto r = root_of_unity_ratio(x, y);
            ASSERT_TRUE(r.has_value());
            CycNum back = Rat(r->first ? -1 : 1) * CycNum::zeta_p_pow(f, r->second) * y;
            EXPECT_EQ(back, x);
        }
}

}  // namespace
}  // namespace cyclo
