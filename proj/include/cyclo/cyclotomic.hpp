#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclo/rational.hpp"

namespace cyclo {

/// Conductor data for Q(zeta_{p^{n+1}}) (l = 0) or Q(zeta_{p^{n+1} * l}).
///
/// Elements are stored on the reduced basis
///   { zeta_p^i zeta_l^j : 0 <= i < phi(p^{n+1}), 0 <= j < l-1 },
/// i.e. the power basis of Phi_{p^{n+1}} tensored with the zeta_l basis.
/// The tables red_p / red_l expand an arbitrary exponent into that basis:
/// one step of Phi_{p^{n+1}}(zeta_p) = 0 resp. 1 + zeta_l + ... + zeta_l^{l-1} = 0.
class CycField {
public:
    long p;
    int n;
    long l;  // 0 for pure p-power conductor
    long pn1;
    int deg_p;
    int deg_l;
    int dim;
    std::vector<std::vector<std::pair<int, int>>> red_p;  // exponent in [0, pn1) -> [(index, sign)]
    std::vector<std::vector<std::pair<int, int>>> red_l;  // exponent in [0, l) -> [(index, sign)]

    static std::shared_ptr<const CycField> make(long p, int n, long l = 0) {
        if (p < 3 || p % 2 == 0) throw std::invalid_argument("CycField: p must be an odd prime");
        if (n < 0) throw std::invalid_argument("CycField: n must be >= 0");
        if (l == p) throw std::invalid_argument("CycField: l = p not allowed");
        static std::map<std::tuple<long, int, long>, std::shared_ptr<const CycField>> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(p, n, l);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto f = std::shared_ptr<const CycField>(new CycField(p, n, l));
        cache.emplace(key, f);
        return f;
    }

    bool same(const CycField& o) const { return p == o.p && n == o.n && l == o.l; }

    int index(int i, int j) const { return i * deg_l + j; }

    std::string str() const {
        std::string s = "Q(zeta_" + std::to_string(pn1);
        if (l != 0) s += "*" + std::to_string(l);
        return s + ")";
    }

private:
    CycField(long p_, int n_, long l_) : p(p_), n(n_), l(l_) {
        pn1 = 1;
        for (int i = 0; i <= n; ++i) pn1 *= p;
        long pn = pn1 / p;
        deg_p = static_cast<int>(pn1 - pn);
        deg_l = l == 0 ? 1 : static_cast<int>(l - 1);
        dim = deg_p * deg_l;

        red_p.resize(pn1);
        for (long e = 0; e < pn1; ++e) {
            if (e < deg_p) {
                red_p[e] = {{static_cast<int>(e), 1}};
            } else {
                long r = e - deg_p;  // e = (p-1)p^n + r with 0 <= r < p^n
                for (long j = 0; j + 1 < p; ++j)
                    red_p[e].push_back({static_cast<int>(r + j * pn), -1});
            }
        }
        if (l != 0) {
            red_l.resize(l);
            for (long e = 0; e < l; ++e) {
                if (e < l - 1) {
                    red_l[e] = {{static_cast<int>(e), 1}};
                } else {
                    for (long j = 0; j + 1 < l; ++j) red_l[e].push_back({static_cast<int>(j), -1});
                }
            }
        } else {
            red_l = {{{0, 1}}};
        }
    }
};

using CycFieldPtr = std::shared_ptr<const CycField>;

/// An element of a cyclotomic field with exact rational coordinates on the
/// reduced basis. The representation is canonical, so equality is
/// coordinate equality.
class CycNum {
public:
    CycNum() = default;
    explicit CycNum(CycFieldPtr f) : f_(std::move(f)), c_(f_->dim, Rat(0)) {}
    CycNum(CycFieldPtr f, std::vector<Rat> coords) : f_(std::move(f)), c_(std::move(coords)) {
        if (static_cast<int>(c_.size()) != f_->dim)
            throw std::invalid_argument("CycNum: coordinate size mismatch");
    }

    static CycNum zero(const CycFieldPtr& f) { return CycNum(f); }
    static CycNum from_rat(const CycFieldPtr& f, const Rat& q) {
        CycNum x(f);
        x.c_[0] = q;
        return x;
    }
    static CycNum one(const CycFieldPtr& f) { return from_rat(f, 1); }

    /// zeta_{p^{n+1}}^e * zeta_l^el, exponents arbitrary integers.
    static CycNum monomial(const CycFieldPtr& f, long e_p, long e_l = 0, const Rat& coeff = Rat(1)) {
        CycNum x(f);
        if (f->l == 0 && e_l != 0) throw std::invalid_argument("CycNum: no zeta_l in this field");
        long ep = mod_pos(e_p, f->pn1);
        long el = f->l == 0 ? 0 : mod_pos(e_l, f->l);
        for (auto [ip, sp] : f->red_p[ep])
            for (auto [jl, sl] : f->red_l[el]) x.c_[f->index(ip, jl)] += Rat(sp * sl) * coeff;
        return x;
    }
    static CycNum zeta_p_pow(const CycFieldPtr& f, long e) { return monomial(f, e, 0); }
    static CycNum zeta_l_pow(const CycFieldPtr& f, long e) { return monomial(f, 0, e); }

    const CycFieldPtr& field() const { return f_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const {
        for (const Rat& x : c_)
            if (x != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (int k = 1; k < f_->dim; ++k)
            if (c_[k] != 0) return false;
        return true;
    }
    Rat rational_value() const {
        if (!is_rational()) throw std::invalid_argument("CycNum: not rational: " + f_->str());
        return c_[0];
    }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        a.check_same_field(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        a.check_same_field(b);
        CycNum r = a;
        for (int k = 0; k < r.f_->dim; ++k) r.c_[k] += b.c_[k];
        return r;
    }
    friend CycNum operator-(const CycNum& a, const CycNum& b) {
        a.check_same_field(b);
        CycNum r = a;
        for (int k = 0; k < r.f_->dim; ++k) r.c_[k] -= b.c_[k];
        return r;
    }
    CycNum operator-() const {
        CycNum r = *this;
        for (Rat& x : r.c_) x = -x;
        return r;
    }
    friend CycNum operator*(const Rat& s, const CycNum& a) {
        CycNum r = a;
        for (Rat& x : r.c_) x *= s;
        return r;
    }

    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        a.check_same_field(b);
        const CycField& F = *a.f_;
        // Raw convolution on exponent pairs, then fold back into the basis.
        int wp = 2 * F.deg_p - 1, wl = 2 * F.deg_l - 1;
        std::vector<Rat> ext(static_cast<size_t>(wp) * wl, Rat(0));
        std::vector<std::tuple<int, int, const Rat*>> na, nb;
        for (int i = 0; i < F.deg_p; ++i)
            for (int j = 0; j < F.deg_l; ++j) {
                if (a.c_[F.index(i, j)] != 0) na.emplace_back(i, j, &a.c_[F.index(i, j)]);
                if (b.c_[F.index(i, j)] != 0) nb.emplace_back(i, j, &b.c_[F.index(i, j)]);
            }
        Rat tmp;
        for (auto& [i1, j1, c1] : na)
            for (auto& [i2, j2, c2] : nb) {
                tmp = *c1 * *c2;
                ext[static_cast<size_t>(i1 + i2) * wl + (j1 + j2)] += tmp;
            }
        CycNum r(a.f_);
        for (int ep = 0; ep < wp; ++ep)
            for (int el = 0; el < wl; ++el) {
                Rat& v = ext[static_cast<size_t>(ep) * wl + el];
                if (v == 0) continue;
                long repp = ep % F.pn1;
                long rel = F.l == 0 ? 0 : el % F.l;
                for (auto [ip, sp] : F.red_p[repp])
                    for (auto [jl, sl] : F.red_l[rel]) {
                        if (sp * sl > 0)
                            r.c_[F.index(ip, jl)] += v;
                        else
                            r.c_[F.index(ip, jl)] -= v;
                    }
            }
        return r;
    }

    /// sigma_a on the p-part: zeta_p -> zeta_p^a, zeta_l fixed.
    CycNum galois_p(long a) const {
        long am = mod_pos(a, f_->pn1);
        if (am % f_->p == 0) throw std::invalid_argument("galois_p: a divisible by p");
        CycNum r(f_);
        for (int i = 0; i < f_->deg_p; ++i) {
            long e = (am * i) % f_->pn1;
            for (int j = 0; j < f_->deg_l; ++j) {
                const Rat& v = c_[f_->index(i, j)];
                if (v == 0) continue;
                for (auto [ip, sp] : f_->red_p[e]) {
                    if (sp > 0)
                        r.c_[f_->index(ip, j)] += v;
                    else
                        r.c_[f_->index(ip, j)] -= v;
                }
            }
        }
        return r;
    }

    /// zeta_l -> zeta_l^c, zeta_p fixed. Identity on fields without an l-part.
    CycNum galois_l(long c) const {
        if (f_->l == 0) return *this;
        long cm = mod_pos(c, f_->l);
        if (cm == 0) throw std::invalid_argument("galois_l: c divisible by l");
        CycNum r(f_);
        for (int j = 0; j < f_->deg_l; ++j) {
            long e = (cm * j) % f_->l;
            for (int i = 0; i < f_->deg_p; ++i) {
                const Rat& v = c_[f_->index(i, j)];
                if (v == 0) continue;
                for (auto [jl, sl] : f_->red_l[e]) {
                    if (sl > 0)
                        r.c_[f_->index(i, jl)] += v;
                    else
                        r.c_[f_->index(i, jl)] -= v;
                }
            }
        }
        return r;
    }

    /// Complex conjugation: inverts both roots of unity.
    CycNum conj() const { return galois_p(-1).galois_l(-1); }

    CycNum pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycNum r = one(f_);
        CycNum b = *this;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    /// Product of all Galois conjugates over Q; always a rational number.
    Rat absolute_norm() const {
        CycNum prod = one(f_);
        for (long a = 1; a < f_->pn1; ++a) {
            if (a % f_->p == 0) continue;
            CycNum conj_a = galois_p(a);
            if (f_->l == 0) {
                prod = prod * conj_a;
            } else {
                for (long c = 1; c < f_->l; ++c) prod = prod * conj_a.galois_l(c);
            }
        }
        return prod.rational_value();
    }

    /// Inverse via the conjugate product over the norm.
    CycNum inverse() const {
        if (is_zero()) throw std::invalid_argument("CycNum: division by zero");
        CycNum num = one(f_);
        for (long a = 1; a < f_->pn1; ++a) {
            if (a % f_->p == 0) continue;
            CycNum conj_a = galois_p(a);
            if (f_->l == 0) {
                if (a != 1) num = num * conj_a;
            } else {
                for (long c = 1; c < f_->l; ++c) {
                    if (a == 1 && c == 1) continue;
                    num = num * conj_a.galois_l(c);
                }
            }
        }
        Rat nrm = (*this * num).rational_value();
        if (nrm == 0) throw std::invalid_argument("CycNum: zero norm");
        return Rat(1) / nrm * num;
    }

    friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

    /// True when the element lies in Q(zeta_{p^{t+1}}, zeta_l) for t <= n.
    bool in_p_level(int t) const {
        long step = 1;
        for (int i = 0; i < f_->n - t; ++i) step *= f_->p;
        for (int i = 0; i < f_->deg_p; ++i)
            if (i % step != 0)
                for (int j = 0; j < f_->deg_l; ++j)
                    if (c_[f_->index(i, j)] != 0) return false;
        return true;
    }

    /// Reinterprets the element in the level-t subfield (p-part drop).
    CycNum to_p_level(int t) const {
        if (t == f_->n) return *this;
        if (t > f_->n) throw std::invalid_argument("to_p_level: not a subfield");
        if (!in_p_level(t)) throw std::invalid_argument("to_p_level: element not in subfield");
        long step = 1;
        for (int i = 0; i < f_->n - t; ++i) step *= f_->p;
        auto tf = CycField::make(f_->p, t, f_->l);
        CycNum r(tf);
        for (int i = 0; i < tf->deg_p; ++i)
            for (int j = 0; j < tf->deg_l; ++j) r.c_[tf->index(i, j)] = c_[f_->index(static_cast<int>(i * step), j)];
        return r;
    }

    /// Embeds into the level-t overfield via zeta_{p^{n+1}} = zeta_{p^{t+1}}^{p^{t-n}}.
    CycNum lift_p_level(int t) const {
        if (t == f_->n) return *this;
        if (t < f_->n) throw std::invalid_argument("lift_p_level: target below current level");
        long step = 1;
        for (int i = 0; i < t - f_->n; ++i) step *= f_->p;
        auto tf = CycField::make(f_->p, t, f_->l);
        CycNum r(tf);
        for (int i = 0; i < f_->deg_p; ++i)
            for (int j = 0; j < f_->deg_l; ++j) r.c_[tf->index(static_cast<int>(i * step), j)] = c_[f_->index(i, j)];
        return r;
    }

    /// True when the element lies in the zeta_l-free part Q(zeta_{p^{n+1}}).
    bool is_l_free() const {
        for (int i = 0; i < f_->deg_p; ++i)
            for (int j = 1; j < f_->deg_l; ++j)
                if (c_[f_->index(i, j)] != 0) return false;
        return true;
    }

    /// Drops the zeta_l coordinate for elements fixed by Gal over Q(zeta_{p^{n+1}}).
    CycNum drop_l() const {
        if (f_->l == 0) return *this;
        if (!is_l_free()) throw std::invalid_argument("drop_l: element has a zeta_l component");
        auto tf = CycField::make(f_->p, f_->n, 0);
        CycNum r(tf);
        for (int i = 0; i < f_->deg_p; ++i) r.c_[i] = c_[f_->index(i, 0)];
        return r;
    }

    /// Lifts an element of Q(zeta_{p^{n+1}}) into the composite field with l.
    CycNum with_l(long l) const {
        if (f_->l != 0) throw std::invalid_argument("with_l: already composite");
        auto tf = CycField::make(f_->p, f_->n, l);
        CycNum r(tf);
        for (int i = 0; i < f_->deg_p; ++i) r.c_[tf->index(i, 0)] = c_[i];
        return r;
    }

    std::string str() const {
        std::string s;
        bool first = true;
        for (int i = 0; i < f_->deg_p; ++i)
            for (int j = 0; j < f_->deg_l; ++j) {
                const Rat& v = c_[f_->index(i, j)];
                if (v == 0) continue;
                if (!first) s += " + ";
                s += v.get_str();
                if (i) s += "*z" + std::to_string(f_->pn1) + "^" + std::to_string(i);
                if (j) s += "*z" + std::to_string(f_->l) + "^" + std::to_string(j);
                first = false;
            }
        return first ? "0" : s;
    }

private:
    static long mod_pos(long a, long m) {
        long r = a % m;
        return r < 0 ? r + m : r;
    }
    void check_same_field(const CycNum& o) const {
        if (!f_ || !o.f_ || !f_->same(*o.f_))
            throw std::invalid_argument("CycNum: conductor mismatch");
    }

    CycFieldPtr f_;
    std::vector<Rat> c_;
};

/// Relative norm for the extension k_n / k_t (zeta_l retained): the product
/// over sigma_a with a = 1 mod p^{t+1}, re-expressed in the target field.
inline CycNum relative_norm(const CycNum& x, int target_level) {
    const CycField& F = *x.field();
    if (target_level == F.n) return x;
    if (target_level > F.n || target_level < 0)
        throw std::invalid_argument("relative_norm: invalid tower");
    long mod_t = 1;
    for (int i = 0; i <= target_level; ++i) mod_t *= F.p;
    CycNum prod = x;
    for (long a = 1 + mod_t; a < F.pn1; a += mod_t) prod = prod * x.galois_p(a);
    return prod.to_p_level(target_level);
}

/// Residue of x in Z[zeta]/(1 - zeta) = F_p, i.e. the coefficient sum mod p.
/// Requires denominators prime to p. x = 1 mod pi_n iff this returns 1.
inline Int residue_mod_pi(const CycNum& x) {
    const CycField& F = *x.field();
    if (F.l != 0) throw std::invalid_argument("residue_mod_pi: composite conductor");
    Rat sum = 0;
    for (const Rat& c : x.coords()) sum += c;
    Int den(sum.get_den());
    if (mpz_divisible_ui_p(den.get_mpz_t(), F.p))
        throw std::invalid_argument("residue_mod_pi: denominator divisible by p");
    return mod_euclid(Int(sum.get_num()) * inv_mod(den, Int(F.p)), Int(F.p));
}

/// Decides x/y in mu_{2 p^{n+1}}: returns (s, k) with x = (-1)^s zeta^k y,
/// or nullopt. Decided by exact comparison over all 2 p^{n+1} candidates.
inline std::optional<std::pair<int, long>> root_of_unity_ratio(const CycNum& x, const CycNum& y) {
    const CycFieldPtr& f = x.field();
    if (y.is_zero()) throw std::invalid_argument("root_of_unity_ratio: zero denominator");
    for (long k = 0; k < f->pn1; ++k) {
        CycNum zy = CycNum::zeta_p_pow(f, k) * y;
        if (x == zy) return std::make_pair(0, k);
        if (x == -zy) return std::make_pair(1, k);
    }
    return std::nullopt;
}

}  // namespace cyclo
