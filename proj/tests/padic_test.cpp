#include "cyclo/padic.hpp"

#include <gtest/gtest.h>

namespace cyclo {
namespace {

// Brute-force oracle: the (p-1)-th root of unity congruent to a mod p,
// found by scanning all residues mod p^prec.
Int teichmuller_by_search(long a, long p, int prec) {
    Int m = pow_int(Int(p), prec);
    for (Int x = 0; x < m; ++x) {
        if (mod_euclid(x, Int(p)) != mod_euclid(Int(a), Int(p))) continue;
        if (pow_mod(x, Int(p - 1), m) == 1) return x;
    }
    throw std::logic_error("no lift found");
}

TEST(Teichmuller, IdentityAndMinusOne) {
    EXPECT_EQ(teichmuller(1, 5, 3).value(), 1);
    EXPECT_EQ(teichmuller(4, 5, 3).value(), 124);  // omega(-1) = -1
}

TEST(Teichmuller, MatchesSearchOracle) {
    EXPECT_EQ(teichmuller_by_search(2, 5, 3), 57);
    EXPECT_EQ(teichmuller(2, 5, 3).value(), 57);
    Int sq = teichmuller(2, 5, 3).pow(2).value();
    EXPECT_EQ(sq, 124);  // 57^2 = -1 mod 125
    EXPECT_EQ(teichmuller(2, 5, 3).pow(4).value(), 1);

    for (long a = 1; a < 7; ++a)
        EXPECT_EQ(teichmuller(a, 7, 4).value(), teichmuller_by_search(a, 7, 4));
}

TEST(Teichmuller, RootOfUnityAcrossPrimes) {
    for (long p : {3L, 5L, 7L, 37L})
        for (int N = 1; N <= 8; ++N)
            for (long a = 1; a < p; ++a) {
                PadicInt w = teichmuller(a, p, N);
                EXPECT_EQ(w.pow(p - 1).value(), 1) << "p=" << p << " N=" << N << " a=" << a;
                EXPECT_EQ(mod_euclid(w.value(), Int(p)), a % p);
            }
}

TEST(Teichmuller, Multiplicative) {
    long p = 7;
    int N = 5;
    for (long a = 1; a < p; ++a)
        for (long b = 1; b < p; ++b) {
            PadicInt lhs = teichmuller(a, p, N) * teichmuller(b, p, N);
            PadicInt rhs = teichmuller(a * b, p, N);
            EXPECT_EQ(lhs.value(), rhs.value());
        }
}

TEST(Teichmuller, RejectsMultipleOfP) {
    EXPECT_THROW(teichmuller(10, 5, 3), std::invalid_argument);
}

TEST(Valuation, Integers) {
    EXPECT_EQ(val_p(Rat(250), 5), std::optional<long>(3));
    EXPECT_EQ(val_p(Rat(1, 3), 3), std::optional<long>(-1));
    EXPECT_EQ(val_p(Rat(0), 7), std::nullopt);
}

TEST(Valuation, Additive) {
    const Rat xs[] = {Rat(250), Rat(1, 3), Rat(-9, 10), Rat(7), Rat(45, 49)};
    for (long p : {3L, 5L, 7L})
        for (const Rat& x : xs)
            for (const Rat& y : xs) {
                auto vx = val_p(x, p), vy = val_p(y, p), vxy = val_p(Rat(x * y), p);
                ASSERT_TRUE(vx && vy && vxy);
                EXPECT_EQ(*vxy, *vx + *vy);
            }
}

TEST(PadicInt, MixedPrecisionTruncates) {
    PadicInt a(5, 3, 57), b(5, 2, 7);
    PadicInt c = a * b;
    EXPECT_EQ(c.precision(), 2);
    EXPECT_EQ(c.value(), mod_euclid(Int(57 * 7), Int(25)));
}

TEST(PadicInt, DivideByPTracksPrecision) {
    PadicInt a(5, 4, 250);
    PadicInt b = a.divide_by_p();
    EXPECT_EQ(b.precision(), 3);
    EXPECT_EQ(b.value(), 50);
    EXPECT_THROW(PadicInt(5, 3, 7).divide_by_p(), std::invalid_argument);
}

TEST(PadicInt, UnitInverse) {
    PadicInt a(7, 5, 123);
    PadicInt inv = a.inverse();
    EXPECT_EQ((a * inv).value(), 1);
    EXPECT_THROW(PadicInt(7, 5, 49).inverse(), std::invalid_argument);
}

}  // namespace
}  // namespace cyclo
