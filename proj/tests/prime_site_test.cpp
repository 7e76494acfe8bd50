#include "cyclo/prime_site.hpp"

#include <gtest/gtest.h>


namespace cyclo {
namespace {

TEST(PrimeSiteBuild, ResidueDegrees) {
    PrimeSite s1 = PrimeSite::make(7, 3, 0);
    EXPECT_EQ(s1.f, 1);
    EXPECT_EQ(s1.q, 7);
    EXPECT_EQ(s1.all_factors.size(), 2u);  // split

    PrimeSite s2 = PrimeSite::make(2, 3, 1);
    EXPECT_EQ(s2.f, 6);
    EXPECT_EQ(s2.q, 64);
    EXPECT_EQ(s2.all_factors.size(), 1u);  // inert

    PrimeSite s3 = PrimeSite::make(11, 5, 0);
    EXPECT_EQ(s3.f, 1);
    EXPECT_EQ(s3.q, 11);

    EXPECT_THROW(PrimeSite::make(3, 3, 0), std::invalid_argument);
}

TEST(PrimeSiteBuild, FactorDividesPhi) {
    for (auto [l, p, n] : {std::tuple<long, long, int>{7, 3, 0}, {2, 3, 1}, {19, 3, 1}, {11, 5, 0},
                           {2, 5, 0}, {13, 7, 0}}) {
        PrimeSite s = PrimeSite::make(l, p, n);
        PolyL phi = detail::cyclotomic_poly_mod_l(p, n, l);
        EXPECT_EQ(fl::deg(s.g_poly), s.f);
        EXPECT_EQ(s.g_poly.back(), 1);  // monic
        EXPECT_TRUE(fl::rem(phi, s.g_poly, l).empty());
        // all factors multiply back to Phi
        PolyL prod{1};
        for (const PolyL& g : s.all_factors) prod = fl::mul(prod, g, l);
        EXPECT_EQ(prod, phi);
    }
}

TEST(PrimeSiteBuild, HenselLiftDividesPhi) {
    PrimeSite s = PrimeSite::make(19, 3, 1, {.hensel_prec = 6});
    EXPECT_EQ(s.hensel_modulus, pow_int(Int(19), 6));
    // hensel_factor = g mod l
    EXPECT_EQ(flift::to_fl(s.hensel_factor, 19), s.g_poly);
    // product with the cofactor recovers Phi_9 mod 19^6
    PolyZ prod = flift::mul(s.hensel_factor, s.hensel_cofactor, s.hensel_modulus);
    PolyZ phi(7, Int(0));
    phi[0] = 1;
    phi[3] = 1;
    phi[6] = 1;
    for (size_t i = 0; i < phi.size(); ++i)
        EXPECT_EQ(prod.size() > i ? prod[i] : Int(0), phi[i]);

    s.ensure_hensel(12);
    EXPECT_EQ(s.hensel_modulus, pow_int(Int(19), 12));
    EXPECT_EQ(flift::to_fl(s.hensel_factor, 19), s.g_poly);
}

TEST(PrimeSiteBuild, DlogIsBijectionWithGeneratorAtOne) {
    PrimeSite s = PrimeSite::make(2, 3, 1);  // F_64
    std::vector<char> hit(s.q - 1, 0);
    for (long e = 1; e < s.q; ++e) {
        uint32_t d = s.dlog_at(e);
        ASSERT_LT(d, (uint32_t)(s.q - 1));
        EXPECT_FALSE(hit[d]);
        hit[d] = 1;
    }
    EXPECT_EQ(s.dlog_at(s.encode(s.fq_generator)), 1u);
    EXPECT_EQ(s.dlog_at(1), 0u);  // element 1 = encode 1
}

TEST(PrimeSiteBuild, TraceMatchesFrobeniusSum) {
    PrimeSite s = PrimeSite::make(2, 3, 1);
    for (long e : {1L, 5L, 23L, 40L, 63L}) {
        auto x = s.decode(e);
        // Tr(x) = x + x^2 + x^4 + ... + x^32 over F_64/F_2
        auto acc = x;
        auto frob = x;
        for (int i = 1; i < s.f; ++i) {
            frob = s.fq_mul(frob, frob);
            for (int k = 0; k < s.f; ++k) acc[k] = (acc[k] + frob[k]) % 2;
        }
        for (int k = 1; k < s.f; ++k) EXPECT_EQ(acc[k], 0);
        EXPECT_EQ(s.trace(x), acc[0]);
    }
}

TEST(PrimeSiteBuild, ZetaImageHasCorrectOrder) {
    for (auto [l, p, n] : {std::tuple<long, long, int>{7, 3, 0}, {2, 3, 1}, {19, 3, 1}, {11, 5, 0}}) {
        PrimeSite s = PrimeSite::make(l, p, n);
        auto z = s.zeta_image();
        auto zp = s.fq_pow(z, Int(s.pn1));
        EXPECT_EQ(s.encode(zp), 1);
        auto zq = s.fq_pow(z, Int(s.pn1 / p));
        EXPECT_NE(s.encode(zq), 1);
        // g_poly(zeta_image) = 0
        PrimeSite::FqElt acc(s.f, 0), pw(s.f, 0);
        pw[0] = 1;
        for (size_t i = 0; i < s.g_poly.size(); ++i) {
            for (int k = 0; k < s.f; ++k) acc[k] = (acc[k] + s.g_poly[i] * pw[k]) % s.l;
            pw = s.fq_mul(pw, z);
        }
        for (int k = 0; k < s.f; ++k) EXPECT_EQ(acc[k], 0);
    }
}

TEST(PrimeSiteBuild, TooLargeRejected) {
    EXPECT_THROW(PrimeSite::make(23, 3, 1, {.q_max = 1000000}), SiteTooLarge);
}

TEST(Valuations, RationalAndUnitExamples) {
    PrimeSite s = PrimeSite::make(7, 3, 0);
    auto f = CycField::make(3, 0);
    auto t7 = valuations_above_l(CycNum::from_rat(f, 7), s);
    ASSERT_EQ(t7.size(), 2u);
    for (auto& [a, v] : t7) EXPECT_EQ(v, 1);

    auto tz = valuations_above_l(CycNum::zeta_p_pow(f, 1), s);
    for (auto& [a, v] : tz) EXPECT_EQ(v, 0);

    CycNum x = CycNum::from_rat(f, 3) + CycNum::zeta_p_pow(f, 1);
    EXPECT_EQ(x.absolute_norm(), Rat(7));
    auto tx = valuations_above_l(x, s);
    long total = 0, ones = 0;
    for (auto& [a, v] : tx) {
        total += v;
        ones += v == 1;
    }
    EXPECT_EQ(total, 1);
    EXPECT_EQ(ones, 1);
}

TEST(Valuations, NormTotalInvariant) {
    // f * sum_a v_a = v_l(|N(x)|) on a spread of elements and sites
    for (auto [l, p, n] : {std::tuple<long, long, int>{7, 3, 0}, {2, 3, 1}, {19, 3, 1}, {11, 5, 0}}) {
        PrimeSite s = PrimeSite::make(l, p, n);
        auto f = CycField::make(p, n);
        std::vector<CycNum> xs = {
            CycNum::from_rat(f, l) * (CycNum::one(f) + CycNum::zeta_p_pow(f, 1)),
            CycNum::from_rat(f, 2) + CycNum::zeta_p_pow(f, 1) - CycNum::zeta_p_pow(f, 2),
            CycNum::from_rat(f, l * l),
            CycNum::from_rat(f, 5) - CycNum::zeta_p_pow(f, 1),
        };
        for (const CycNum& x : xs) {
            Rat nrm = x.absolute_norm();
            if (nrm == 0) continue;
            auto vl = val_p(nrm, l);
            auto table = valuations_above_l(x, s);
            long tot = 0;
            for (auto& [a, v] : table) tot += v;
            EXPECT_EQ(s.f * tot, *vl) << "l=" << l << " p=" << p << " x=" << x.str();
        }
    }
}

TEST(Valuations, GaloisPermutesPrimes) {
    PrimeSite s = PrimeSite::make(19, 3, 1);
    auto f = CycField::make(3, 1);
    CycNum x = CycNum::from_rat(f, 4) + CycNum::zeta_p_pow(f, 2) - CycNum::zeta_p_pow(f, 5);
    auto base = valuations_above_l(x, s);
    for (long b : {2L, 4L, 7L}) {
        auto moved = valuations_above_l(x.galois_p(b), s);
        for (auto& [a, v] : moved) {
            // find the representative of a*b's coset
            long ab = a * b % s.pn1;
            long rep = -1;
            for (long r : s.coset_reps) {
                long t = r;
                for (int i = 0; i < s.f; ++i) {
                    if (t == ab) rep = r;
                    t = t * s.l % s.pn1;
                }
            }
            ASSERT_NE(rep, -1);
            EXPECT_EQ(v, base.at(rep));
        }
    }
}

TEST(Valuations, DenominatorAtLRejected) {
    PrimeSite s = PrimeSite::make(7, 3, 0);
    auto f = CycField::make(3, 0);
    CycNum x = CycNum::from_rat(f, Rat(1, 7));
    EXPECT_THROW(valuations_above_l(x, s), std::invalid_argument);
}

TEST(Valuations, AutoRaisesPrecision) {
    PrimeSite s = PrimeSite::make(7, 3, 0, {.hensel_prec = 2});
    auto f = CycField::make(3, 0);
    CycNum x = CycNum::from_rat(f, pow_int(Int(7), 9));
    auto table = valuations_above_l(x, s);
    for (auto& [a, v] : table) EXPECT_EQ(v, 9);
    EXPECT_GT(s.hensel_prec, 9);
}

TEST(FindGenerator, SplitSitesSmall) {
    PrimeSite s = PrimeSite::make(7, 3, 0);
    CycNum alpha = find_generator(s);
    EXPECT_TRUE(alpha.absolute_norm() == Rat(7) || alpha.absolute_norm() == Rat(-7));
    auto table = valuations_above_l(alpha, s);
    EXPECT_EQ(table.at(1), 1);
    // deterministic
    EXPECT_EQ(find_generator(s), alpha);

    // 3 + zeta_3 generates the same prime: same valuation table everywhere
    auto f = CycField::make(3, 0);
    CycNum named = CycNum::from_rat(f, 3) + CycNum::zeta_p_pow(f, 1);
    auto named_table = valuations_above_l(named, s);
    EXPECT_EQ(named_table, table);

    PrimeSite s11 = PrimeSite::make(11, 5, 0);
    CycNum beta = find_generator(s11);
    EXPECT_TRUE(beta.absolute_norm() == Rat(11) || beta.absolute_norm() == Rat(-11));
    EXPECT_EQ(valuations_above_l(beta, s11).at(1), 1);
}

TEST(FindGenerator, InertReturnsL) {
    PrimeSite s = PrimeSite::make(2, 3, 1);
    CycNum alpha = find_generator(s);
    auto f = CycField::make(3, 1);
    EXPECT_EQ(alpha, CycNum::from_rat(f, 2));
}

TEST(FindGenerator, WhitelistEnforced) {
    PrimeSite s = PrimeSite::make(3, 11, 0);  // (p, n) = (11, 0) not whitelisted
    EXPECT_THROW(find_generator(s), NotWhitelisted);
}

TEST(FindGenerator, LllRouteOnLargerField) {
    // (5, 1): degree 20, split prime 101 = 1 mod 25
    PrimeSite s = PrimeSite::make(101, 5, 1);
    CycNum alpha = find_generator(s);
    Rat nrm = alpha.absolute_norm();
    EXPECT_TRUE(nrm == Rat(101) || nrm == Rat(-101));
    auto table = valuations_above_l(alpha, s);
    for (auto& [a, v] : table) EXPECT_EQ(v, a == 1 ? 1 : 0);
}

}  // namespace
}  // namespace cyclo
