#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cyclo/rational.hpp"

namespace cyclo {

/// Polynomials over F_l, little-endian coefficient vectors with values in [0, l).
using PolyL = std::vector<long>;

namespace fl {

inline void trim(PolyL& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const PolyL& a) { return static_cast<int>(a.size()) - 1; }

inline PolyL mul(const PolyL& a, const PolyL& b, long l) {
    if (a.empty() || b.empty()) return {};
    PolyL r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % l;
    }
    trim(r);
    return r;
}

/// Remainder of a by monic-normalizable b.
inline PolyL rem(PolyL a, const PolyL& b, long l) {
    trim(a);
    if (b.empty()) throw std::invalid_argument("fl::rem: division by zero polynomial");
    long lc_inv = mpz_get_si(inv_mod(Int(b.back()), Int(l)).get_mpz_t());
    while (deg(a) >= deg(b)) {
        long c = a.back() * lc_inv % l;
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = ((a[shift + i] - c * b[i]) % l + l) % l;
        trim(a);
    }
    return a;
}

inline PolyL divexact(PolyL a, const PolyL& b, long l) {
    trim(a);
    if (b.empty()) throw std::invalid_argument("fl::divexact: division by zero polynomial");
    long lc_inv = mpz_get_si(inv_mod(Int(b.back()), Int(l)).get_mpz_t());
    PolyL q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    while (deg(a) >= deg(b)) {
        long c = a.back() * lc_inv % l;
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = ((a[shift + i] - c * b[i]) % l + l) % l;
        trim(a);
    }
    if (!a.empty()) throw std::invalid_argument("fl::divexact: division not exact");
    trim(q);
    return q;
}

inline PolyL add(PolyL a, const PolyL& b, long l) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % l;
    trim(a);
    return a;
}

inline PolyL scale(PolyL a, long c, long l) {
    c = ((c % l) + l) % l;
    for (long& x : a) x = x * c % l;
    trim(a);
    return a;
}

inline PolyL gcd(PolyL a, PolyL b, long l) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyL r = rem(a, b, l);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        long lc_inv = mpz_get_si(inv_mod(Int(a.back()), Int(l)).get_mpz_t());
        a = scale(a, lc_inv, l);
    }
    return a;
}

/// Extended gcd: returns (g, s, t) with s a + t b = g, g monic.
inline std::tuple<PolyL, PolyL, PolyL> ext_gcd(PolyL a, PolyL b, long l) {
    trim(a);
    trim(b);
    PolyL s0{1}, s1{}, t0{}, t1{1};
    while (!b.empty()) {
        long lc_inv = mpz_get_si(inv_mod(Int(b.back()), Int(l)).get_mpz_t());
        PolyL r = a, q(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, 0);
        while (deg(r) >= deg(b)) {
            long c = r.back() * lc_inv % l;
            size_t shift = r.size() - b.size();
            q[shift] = c;
            for (size_t i = 0; i < b.size(); ++i)
                r[shift + i] = ((r[shift + i] - c * b[i]) % l + l) % l;
            trim(r);
        }
        trim(q);
        auto step = [&](PolyL& x0, PolyL& x1) {
            PolyL nx = x0;
            PolyL qx = mul(q, x1, l);
            if (nx.size() < qx.size()) nx.resize(qx.size(), 0);
            for (size_t i = 0; i < qx.size(); ++i) nx[i] = ((nx[i] - qx[i]) % l + l) % l;
            trim(nx);
            x0 = std::move(x1);
            x1 = std::move(nx);
        };
        step(s0, s1);
        step(t0, t1);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        long lc_inv = mpz_get_si(inv_mod(Int(a.back()), Int(l)).get_mpz_t());
        a = scale(a, lc_inv, l);
        s0 = scale(s0, lc_inv, l);
        t0 = scale(t0, lc_inv, l);
    }
    return {a, s0, t0};
}

inline PolyL powmod(const PolyL& base, const Int& e, const PolyL& mod, long l) {
    PolyL r{1};
    PolyL b = rem(base, mod, l);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = rem(mul(r, b, l), mod, l);
        b = rem(mul(b, b, l), mod, l);
        k >>= 1;
    }
    return r;
}

/// Deterministic irreducibility test for monic degree-f polynomials (Rabin):
/// y^{l^f} = y mod h and gcd(y^{l^{f/r}} - y, h) = 1 for every prime r | f.
inline bool is_irreducible(const PolyL& h, long l) {
    int f = deg(h);
    if (f < 1) return false;
    PolyL y{0, 1};
    PolyL yr = rem(y, h, l);
    if (powmod(y, pow_int(Int(l), f), h, l) != yr) return false;
    std::vector<int> prime_divs;
    int m = f;
    for (int r = 2; r * r <= m; ++r)
        if (m % r == 0) {
            prime_divs.push_back(r);
            while (m % r == 0) m /= r;
        }
    if (m > 1) prime_divs.push_back(m);
    for (int r : prime_divs) {
        PolyL diff = powmod(y, pow_int(Int(l), f / r), h, l);
        // diff - y
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = ((diff[1] - 1) % l + l) % l;
        trim(diff);
        PolyL g = gcd(diff, h, l);
        if (deg(g) != 0) return false;
    }
    return true;
}

}  // namespace fl

/// Polynomials with mpz coefficients reduced mod l^M (for Hensel data).
using PolyZ = std::vector<Int>;

namespace flift {

inline void trim(PolyZ& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyZ mul(const PolyZ& a, const PolyZ& b, const Int& mod) {
    if (a.empty() || b.empty()) return {};
    PolyZ r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = mod_euclid(r[i + j] + a[i] * b[j], mod);
    }
    trim(r);
    return r;
}

/// Remainder by a polynomial with unit leading coefficient mod l^M.
inline PolyZ rem(PolyZ a, const PolyZ& b, const Int& mod) {
    trim(a);
    Int lc_inv = inv_mod(b.back(), mod);
    while (static_cast<int>(a.size()) >= static_cast<int>(b.size())) {
        Int c = mod_euclid(a.back() * lc_inv, mod);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = mod_euclid(a[shift + i] - c * b[i], mod);
        trim(a);
    }
    return a;
}

inline PolyZ from_fl(const PolyL& a) {
    PolyZ r;
    r.reserve(a.size());
    for (long x : a) r.emplace_back(x);
    return r;
}

inline PolyL to_fl(const PolyZ& a, long l) {
    PolyL r;
    r.reserve(a.size());
    for (const Int& x : a) r.push_back(mpz_get_si(mod_euclid(x, Int(l)).get_mpz_t()));
    fl::trim(r);
    return r;
}

}  // namespace flift

}  // namespace cyclo
