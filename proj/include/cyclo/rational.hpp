#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>

namespace cyclo {

using Int = mpz_class;
using Rat = mpq_class;

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int pow_mod(const Int& base, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int mod_euclid(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::invalid_argument("inv_mod: element not invertible");
    return r;
}

/// p-adic valuation of a nonzero integer.
inline long val_p(const Int& x, long p) {
    if (x == 0) throw std::invalid_argument("val_p: zero has infinite valuation");
    Int t = x;
    long v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
        ++v;
    }
    return v;
}

/// p-adic valuation of a rational; nullopt encodes +infinity (x = 0).
inline std::optional<long> val_p(const Rat& x, long p) {
    if (x == 0) return std::nullopt;
    return val_p(Int(x.get_num()), p) - val_p(Int(x.get_den()), p);
}

inline long mul_ord(long a, long m) {
    Int x = mod_euclid(Int(a), Int(m));
    if (gcd(Int(x), Int(m)) != 1)
        throw std::invalid_argument("mul_ord: argument not a unit");
    long ord = 1;
    Int v = x;
    while (v != 1) {
        v = mod_euclid(v * x, Int(m));
        ++ord;
    }
    return ord;
}

}  // namespace cyclo
