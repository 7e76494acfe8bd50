#pragma once

#include <stdexcept>
#include <string>

#include "cyclo/rational.hpp"

namespace cyclo {

/// An element of Z/p^N viewed as a p-adic integer known to N digits.
///
/// Values are immutable once constructed and always kept as the canonical
/// residue in [0, p^N). Mixed-precision arithmetic truncates to the minimum
/// precision of the operands, so precision loss is explicit in the types
/// flowing through a computation. Dividing out a power of p is a separate
/// named operation that reduces precision; it never happens implicitly.
class PadicInt {
public:
    PadicInt(long p, int prec, const Int& value) : p_(p), prec_(prec) {
        if (p < 3 || p % 2 == 0) throw std::invalid_argument("PadicInt: p must be an odd prime");
        if (prec < 1) throw std::invalid_argument("PadicInt: precision must be >= 1");
        mod_ = pow_int(Int(p), static_cast<unsigned long>(prec));
        v_ = mod_euclid(value, mod_);
    }

    long p() const { return p_; }
    int precision() const { return prec_; }
    const Int& value() const { return v_; }
    const Int& modulus() const { return mod_; }

    bool is_zero() const { return v_ == 0; }

    /// Valuation of the residue, capped at the precision when the value is 0 mod p^N.
    long valuation() const {
        if (v_ == 0) return prec_;
        long v = val_p(v_, p_);
        return v < prec_ ? v : prec_;
    }

    PadicInt with_precision(int prec) const {
        if (prec > prec_)
            throw std::invalid_argument("PadicInt: cannot raise precision of an existing value");
        return PadicInt(p_, prec, v_);
    }

    friend PadicInt operator+(const PadicInt& a, const PadicInt& b) {
        int prec = a.common_prec(b);
        return PadicInt(a.p_, prec, a.v_ + b.v_);
    }
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b) {
        int prec = a.common_prec(b);
        return PadicInt(a.p_, prec, a.v_ - b.v_);
    }
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b) {
        int prec = a.common_prec(b);
        return PadicInt(a.p_, prec, a.v_ * b.v_);
    }
    PadicInt operator-() const { return PadicInt(p_, prec_, -v_); }

    friend bool operator==(const PadicInt& a, const PadicInt& b) {
        return a.p_ == b.p_ && a.prec_ == b.prec_ && a.v_ == b.v_;
    }

    PadicInt pow(unsigned long e) const {
        return PadicInt(p_, prec_, pow_mod(v_, Int(static_cast<long>(e)), mod_));
    }

    /// Inverse of a p-adic unit.
    PadicInt inverse() const {
        if (valuation() > 0) throw std::invalid_argument("PadicInt: inverse of a non-unit");
        return PadicInt(p_, prec_, inv_mod(v_, mod_));
    }

    /// Exact division by p^k. Costs k digits of precision.
    PadicInt divide_by_p(long k = 1) const {
        if (k < 0) throw std::invalid_argument("PadicInt: negative power");
        if (prec_ - k < 1) throw std::invalid_argument("PadicInt: precision exhausted dividing by p");
        Int pk = pow_int(Int(p_), static_cast<unsigned long>(k));
        if (!mpz_divisible_p(v_.get_mpz_t(), pk.get_mpz_t()))
            throw std::invalid_argument("PadicInt: value not divisible by p^" + std::to_string(k));
        return PadicInt(p_, prec_ - static_cast<int>(k), v_ / pk);
    }

    std::string str() const { return v_.get_str() + " + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")"; }

private:
    int common_prec(const PadicInt& o) const {
        if (p_ != o.p_) throw std::invalid_argument("PadicInt: mixed primes");
        return prec_ < o.prec_ ? prec_ : o.prec_;
    }

    long p_;
    int prec_;
    Int mod_;
    Int v_;
};

/// Teichmuller lift: the unique (p-1)-th root of unity in Z/p^N congruent
/// to a mod p. Computed by iterating x -> x^p, which contracts by a factor
/// of p per step, so N-1 steps land on the fixed point exactly.
inline PadicInt teichmuller(const Int& a, long p, int prec) {
    if (mpz_divisible_ui_p(a.get_mpz_t(), p))
        throw std::invalid_argument("teichmuller: argument divisible by p");
    PadicInt x(p, prec, a);
    Int pm = x.modulus();
    Int v = x.value();
    for (int i = 0; i < prec - 1; ++i)
        v = pow_mod(v, Int(p), pm);
    return PadicInt(p, prec, v);
}

inline PadicInt teichmuller(long a, long p, int prec) { return teichmuller(Int(a), p, prec); }

}  // namespace cyclo
