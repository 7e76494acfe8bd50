#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cyclo/cyclotomic.hpp"
#include "cyclo/padic.hpp"
#include "cyclo/rational.hpp"
#include "cyclo/zlattice.hpp"

namespace cyclo {

/// Index structure for G_n = (Z/p^{n+1})^*.
struct GroupRing {
    long p;
    int n;
    long pn1;
    std::vector<long> units;  // increasing representatives in [1, pn1)
    std::vector<int> pos;     // pos[a] = index into units, -1 for non-units

    static std::shared_ptr<const GroupRing> make(long p, int n) {
        static std::map<std::pair<long, int>, std::shared_ptr<const GroupRing>> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, n);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto g = std::make_shared<GroupRing>();
        g->p = p;
        g->n = n;
        g->pn1 = 1;
        for (int i = 0; i <= n; ++i) g->pn1 *= p;
        g->pos.assign(g->pn1, -1);
        for (long a = 1; a < g->pn1; ++a)
            if (a % p != 0) {
                g->pos[a] = static_cast<int>(g->units.size());
                g->units.push_back(a);
            }
        std::shared_ptr<const GroupRing> c = g;
        cache.emplace(key, c);
        return c;
    }

    long reduce(long a) const {
        long r = a % pn1;
        return r < 0 ? r + pn1 : r;
    }
    int index(long a) const {
        long r = reduce(a);
        if (r == 0 || pos[r] < 0) throw std::invalid_argument("GroupRing: not a unit mod p^(n+1)");
        return pos[r];
    }
};

using GroupRingPtr = std::shared_ptr<const GroupRing>;

/// Element of Q[G_n] with exact rational coefficients.
class GroupRingElt {
public:
    GroupRingElt() = default;
    explicit GroupRingElt(GroupRingPtr g) : g_(std::move(g)), c_(g_->units.size(), Rat(0)) {}

    static GroupRingElt zero(const GroupRingPtr& g) { return GroupRingElt(g); }
    static GroupRingElt sigma(const GroupRingPtr& g, long a) {
        GroupRingElt x(g);
        x.c_[g->index(a)] = 1;
        return x;
    }
    static GroupRingElt constant(const GroupRingPtr& g, const Rat& q) {
        GroupRingElt x(g);
        x.c_[g->index(1)] = q;
        return x;
    }
    /// The norm element sum_a sigma_a.
    static GroupRingElt norm_elt(const GroupRingPtr& g) {
        GroupRingElt x(g);
        for (Rat& v : x.c_) v = 1;
        return x;
    }
    /// A fixed integral lift of the real norm: sum over representatives
    /// 1 <= a < p^{n+1}/2 of the transversal of {+-1}.
    static GroupRingElt norm_plus(const GroupRingPtr& g) {
        GroupRingElt x(g);
        for (long a : g->units)
            if (2 * a < g->pn1) x.c_[g->index(a)] = 1;
        return x;
    }

    const GroupRingPtr& ring() const { return g_; }
    const Rat& coeff(long a) const { return c_[g_->index(a)]; }
    void set_coeff(long a, const Rat& v) { c_[g_->index(a)] = v; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const {
        for (const Rat& v : c_)
            if (v != 0) return false;
        return true;
    }
    bool is_integral() const {
        for (const Rat& v : c_)
            if (v.get_den() != 1) return false;
        return true;
    }

    Rat augmentation() const {
        Rat s = 0;
        for (const Rat& v : c_) s += v;
        return s;
    }

    friend bool operator==(const GroupRingElt& a, const GroupRingElt& b) {
        a.check(b);
        return a.c_ == b.c_;
    }
    friend GroupRingElt operator+(const GroupRingElt& a, const GroupRingElt& b) {
        a.check(b);
        GroupRingElt r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend GroupRingElt operator-(const GroupRingElt& a, const GroupRingElt& b) {
        a.check(b);
        GroupRingElt r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    GroupRingElt operator-() const {
        GroupRingElt r = *this;
        for (Rat& v : r.c_) v = -v;
        return r;
    }
    friend GroupRingElt operator*(const Rat& s, const GroupRingElt& a) {
        GroupRingElt r = a;
        for (Rat& v : r.c_) v *= s;
        return r;
    }
    /// Convolution product via sigma_a sigma_b = sigma_{ab}.
    friend GroupRingElt operator*(const GroupRingElt& a, const GroupRingElt& b) {
        a.check(b);
        const GroupRing& G = *a.g_;
        GroupRingElt r(a.g_);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                long ab = (G.units[i] * G.units[j]) % G.pn1;
                r.c_[G.pos[ab]] += a.c_[i] * b.c_[j];
            }
        }
        return r;
    }

    /// Coefficients as an integer vector; throws unless integral.
    IntVec int_coords() const {
        IntVec v;
        v.reserve(c_.size());
        for (const Rat& x : c_) {
            if (x.get_den() != 1) throw std::invalid_argument("GroupRingElt: not integral");
            v.push_back(Int(x.get_num()));
        }
        return v;
    }

    static GroupRingElt from_int_coords(const GroupRingPtr& g, const IntVec& v) {
        GroupRingElt x(g);
        if (v.size() != x.c_.size()) throw std::invalid_argument("GroupRingElt: size mismatch");
        for (size_t i = 0; i < v.size(); ++i) x.c_[i] = Rat(v[i]);
        return x;
    }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += c_[i].get_str() + "*s" + std::to_string(g_->units[i]);
        }
        return s.empty() ? "0" : s;
    }

private:
    void check(const GroupRingElt& o) const {
        if (!g_ || !o.g_ || g_->p != o.g_->p || g_->n != o.g_->n)
            throw std::invalid_argument("GroupRingElt: group mismatch");
    }

    GroupRingPtr g_;
    std::vector<Rat> c_;
};

/// theta_n = (1/p^{n+1}) sum_a a sigma_a^{-1}: coefficient of sigma_b is
/// a/p^{n+1} for the representative a in (0, p^{n+1}) with a*b = 1.
inline GroupRingElt stickelberger_element(const GroupRingPtr& g) {
    GroupRingElt th(g);
    for (long a : g->units) {
        long b = mpz_get_si(inv_mod(Int(a), Int(g->pn1)).get_mpz_t());
        Rat q(a, g->pn1);
        q.canonicalize();
        th.set_coeff(b, q);
    }
    return th;
}

/// (1 - sigma_{-1})/2 * x: projection onto the minus eigenspace.
inline GroupRingElt minus_part(const GroupRingElt& x) {
    GroupRingElt conj = GroupRingElt::sigma(x.ring(), -1) * x;
    return Rat(1, 2) * (x - conj);
}

/// Restriction Z[G_n] -> Z[G_{n-1}]: sums coefficients over the fibers of
/// (Z/p^{n+1})^* -> (Z/p^n)^*.
inline GroupRingElt restriction(const GroupRingElt& x) {
    const GroupRing& G = *x.ring();
    if (G.n < 1) throw std::invalid_argument("restriction: already at level 0");
    auto g0 = GroupRing::make(G.p, G.n - 1);
    GroupRingElt r(g0);
    for (size_t i = 0; i < G.units.size(); ++i) {
        long b = G.units[i] % g0->pn1;
        r.set_coeff(b, r.coeff(b) + x.coords()[i]);
    }
    return r;
}

/// The ideal S'_n with its finite generating set
/// {t - sigma_t : 1 <= t < p^{n+1}, (t,p) = 1} together with p^{n+1}
/// (the shift (t + p^{n+1}) - sigma_t differs from t - sigma_t by p^{n+1}).
/// Membership is decided on the Z-lattice spanned by all sigma_b-multiples
/// of the generators, and comes with an expansion certificate.
class SprimeIdeal {
public:
    struct Certificate {
        std::vector<GroupRingElt> multipliers;  // aligned with generators()
    };

    explicit SprimeIdeal(GroupRingPtr g) : g_(std::move(g)) {
        const GroupRing& G = *g_;
        for (long t = 2; t < G.pn1; ++t)
            if (t % G.p != 0)
                gens_.push_back(GroupRingElt::constant(g_, t) - GroupRingElt::sigma(g_, t));
        gens_.push_back(GroupRingElt::constant(g_, G.pn1));

        IntMat rows;
        for (const GroupRingElt& gen : gens_)
            for (long b : G.units) rows.push_back((GroupRingElt::sigma(g_, b) * gen).int_coords());
        sys_ = std::make_unique<HnfSystem>(std::move(rows));
    }

    static const SprimeIdeal& get(long p, int n) {
        static std::map<std::pair<long, int>, std::unique_ptr<SprimeIdeal>> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, n);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::make_unique<SprimeIdeal>(GroupRing::make(p, n))).first;
        return *it->second;
    }

    const std::vector<GroupRingElt>& generators() const { return gens_; }
    const GroupRingPtr& ring() const { return g_; }

    std::optional<Certificate> membership(const GroupRingElt& beta) const {
        if (!beta.is_integral()) throw std::invalid_argument("sprime_membership: non-integer coefficients");
        auto x = sys_->solve(beta.int_coords());
        if (!x) return std::nullopt;
        const GroupRing& G = *g_;
        Certificate cert;
        cert.multipliers.assign(gens_.size(), GroupRingElt::zero(g_));
        size_t k = 0;
        for (size_t gi = 0; gi < gens_.size(); ++gi)
            for (long b : G.units) {
                if ((*x)[k] != 0)
                    cert.multipliers[gi] =
                        cert.multipliers[gi] + Rat((*x)[k]) * GroupRingElt::sigma(g_, b);
                ++k;
            }
        return cert;
    }

    bool contains(const GroupRingElt& beta) const { return membership(beta).has_value(); }

    /// Re-expands a certificate; used to validate membership answers.
    GroupRingElt expand(const Certificate& cert) const {
        GroupRingElt acc = GroupRingElt::zero(g_);
        for (size_t i = 0; i < gens_.size(); ++i) acc = acc + cert.multipliers[i] * gens_[i];
        return acc;
    }

private:
    GroupRingPtr g_;
    std::vector<GroupRingElt> gens_;
    std::unique_ptr<HnfSystem> sys_;
};

/// Pushes a certificate along the restriction map: if delta expands as
/// sum mu_j g_j over the level-n generators, Res(delta) expands over the
/// level-(n-1) generators through Res(t - sigma_t) = (t' - sigma_{t'}) +
/// ((t - t')/p^n) p^n with t' = t mod p^n, and Res(p^{n+1}) = p * p^n.
inline SprimeIdeal::Certificate restrict_certificate(const SprimeIdeal& ideal_n,
                                                     const SprimeIdeal::Certificate& cert,
                                                     const SprimeIdeal& ideal_dn) {
    const GroupRing& G = *ideal_n.ring();
    const GroupRing& H = *ideal_dn.ring();
    if (H.pn1 * G.p != G.pn1) throw std::invalid_argument("restrict_certificate: level mismatch");
    const auto& gens_n = ideal_n.generators();
    const auto& gens_dn = ideal_dn.generators();

    // index of the generator t' - sigma_{t'} at the lower level
    std::map<long, size_t> t_index;
    {
        size_t idx = 0;
        for (long t = 2; t < H.pn1; ++t)
            if (t % H.p != 0) t_index[t] = idx++;
    }
    size_t const_index = gens_dn.size() - 1;

    SprimeIdeal::Certificate out;
    out.multipliers.assign(gens_dn.size(), GroupRingElt::zero(ideal_dn.ring()));
    auto add = [&](size_t gi, const GroupRingElt& mult) {
        out.multipliers[gi] = out.multipliers[gi] + mult;
    };

    for (size_t j = 0; j < gens_n.size(); ++j) {
        if (cert.multipliers[j].is_zero()) continue;
        GroupRingElt res_mu = restriction(cert.multipliers[j]);
        if (j + 1 == gens_n.size()) {
            // p^{n+1} = p * (p^n)
            add(const_index, Rat(G.p) * res_mu);
            continue;
        }
        // recover t from t - sigma_t
        long t = 0;
        for (long a : G.units)
            if (a != 1 && gens_n[j].coeff(a) != 0) t = a;
        long tr = t % H.pn1;
        if (tr != 1) add(t_index.at(tr), res_mu);
        if (t != tr) add(const_index, Rat((t - tr) / H.pn1) * res_mu);
    }
    return out;
}

/// beta * theta_n for beta in S'_n; the product is integral by
/// Stickelberger's theorem and non-integrality is reported as a contract
/// violation.
inline GroupRingElt stickelberger_multiply(const GroupRingElt& beta) {
    GroupRingElt prod = beta * stickelberger_element(beta.ring());
    if (!prod.is_integral())
        throw std::invalid_argument("stickelberger_multiply: product not integral, beta not in S'_n");
    return prod;
}

/// Decides beta in N_n^+ Z + Z[G_n]^-: equivalent to (1 + sigma_{-1}) beta
/// being an integer multiple of the norm element.
inline bool beta_residence_check(const GroupRingElt& beta) {
    if (!beta.is_integral()) throw std::invalid_argument("beta_residence_check: non-integer coefficients");
    GroupRingElt s = beta + GroupRingElt::sigma(beta.ring(), -1) * beta;
    Rat c = s.coeff(1);
    if (c.get_den() != 1) return false;
    return s == c * GroupRingElt::norm_elt(beta.ring());
}

/// x^beta = prod_a sigma_a(x)^{c_a} for integral beta; negative exponents
/// are collected into a single division.
inline CycNum group_ring_power(const CycNum& x, const GroupRingElt& beta) {
    const GroupRing& G = *beta.ring();
    if (x.field()->p != G.p || x.field()->n != G.n)
        throw std::invalid_argument("group_ring_power: level mismatch");
    CycNum num = CycNum::one(x.field());
    CycNum den = CycNum::one(x.field());
    bool has_neg = false;
    for (size_t i = 0; i < G.units.size(); ++i) {
        const Rat& c = beta.coords()[i];
        if (c == 0) continue;
        if (c.get_den() != 1) throw std::invalid_argument("group_ring_power: non-integer exponent");
        long e = mpz_get_si(c.get_num().get_mpz_t());
        CycNum conj = x.galois_p(G.units[i]);
        if (e > 0) {
            num = num * conj.pow(e);
        } else {
            den = den * conj.pow(-e);
            has_neg = true;
        }
    }
    if (has_neg) {
        if (den.is_zero()) throw std::invalid_argument("group_ring_power: zero base with negative exponent");
        return num * den.inverse();
    }
    return num;
}

/// An odd p-adic character psi = omega^j of Delta, j odd and psi != omega.
class OddChar {
public:
    OddChar(long p, long j, int prec) : p_(p), j_(j), prec_(prec) {
        if (p < 5) throw std::invalid_argument("OddChar: no valid odd character for p = 3");
        long jm = ((j % (p - 1)) + (p - 1)) % (p - 1);
        if (jm % 2 == 0) throw std::invalid_argument("OddChar: even exponent, character not odd");
        if (jm == 1) throw std::invalid_argument("OddChar: psi = omega excluded");
        j_ = jm;
    }

    long p() const { return p_; }
    long exponent() const { return j_; }
    int precision() const { return prec_; }

    /// psi(sigma_a) = omega(a)^j.
    PadicInt value(long a) const {
        return teichmuller(a, p_, prec_).pow(static_cast<unsigned long>(j_));
    }

private:
    long p_;
    long j_;
    int prec_;
};

/// e_psi = (1/|Delta|) sum_delta psi(delta) delta^{-1} as a table
/// a in (Z/p)^* -> coefficient of sigma_a in Z/p^N.
inline std::map<long, PadicInt> idempotent_table(long p, long j, int prec) {
    std::map<long, PadicInt> e;
    PadicInt inv_order = PadicInt(p, prec, p - 1).inverse();
    for (long a = 1; a < p; ++a) {
        long ainv = mpz_get_si(inv_mod(Int(a), Int(p)).get_mpz_t());
        PadicInt w = teichmuller(ainv, p, prec);
        PadicInt wj = w.pow(static_cast<unsigned long>(((j % (p - 1)) + (p - 1)) % (p - 1)));
        e.emplace(a, wj * inv_order);
    }
    return e;
}

inline std::map<long, PadicInt> idempotent(const OddChar& psi) {
    return idempotent_table(psi.p(), psi.exponent(), psi.precision());
}

/// Lists the valid odd exponents j for Delta at p: j odd, j != 1 mod (p-1).
inline std::vector<long> valid_psi_exponents(long p) {
    std::vector<long> js;
    for (long j = 3; j < p - 1; j += 2) js.push_back(j);
    return js;
}

}  // namespace cyclo
