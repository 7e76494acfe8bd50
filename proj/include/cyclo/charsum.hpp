#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cyclo/cyclotomic.hpp"
#include "cyclo/group_ring.hpp"
#include "cyclo/prime_site.hpp"
#include "cyclo/rational.hpp"

namespace cyclo {

/// chi_l(x) as an exponent t in Z/p^{n+1}, meaning chi(x) = zeta^t.
/// chi is defined by chi(x) = x^{-(q-1)/p^{n+1}} mod the site's prime.
inline long chi_exponent(const PrimeSite& site, const PrimeSite::FqElt& x) {
    long enc = site.encode(x);
    if (enc == 0) throw std::invalid_argument("chi_exponent: x = 0");
    long k = static_cast<long>(site.dlog_at(enc));
    return (site.chi_t0() % site.pn1) * (k % site.pn1) % site.pn1;
}

/// A Gauss sum tau_n(l) = -sum_{a in F_q} chi(a) zeta_l^{Tr(a)} with its
/// exact value in Q(zeta_{p^{n+1}}, zeta_l).
struct GaussSum {
    long l, p;
    int n;
    CycNum value;
};

/// Character-sum tables for one site, built in a single O(q f) pass over
/// F_q^*: tau counts (chi exponent x trace value) and Jacobi counts
/// (chi exponent of x and of 1-x). Everything downstream -- the Gauss sum,
/// every Jacobi sum, and tau^delta for delta in S'_n -- reads off these
/// two small matrices.
class CharTable {
public:
    explicit CharTable(PrimeSite& site) : site_(&site) {
        const PrimeSite& s = site;
        long pn1 = s.pn1;
        t0_ = s.chi_t0();
        tau_counts_.assign(pn1, std::vector<int64_t>(s.l, 0));
        jac_counts_.assign(pn1, std::vector<int64_t>(pn1, 0));

        std::vector<long> trb(s.f);
        for (int i = 0; i < s.f; ++i) {
            PrimeSite::FqElt e(s.f, 0);
            e[i] = 1;
            trb[i] = s.trace(e);
        }
        std::vector<long> digits(s.f, 0);  // odometer over F_q
        for (long enc = 1; enc < s.q; ++enc) {
            // increment base-l odometer
            for (int i = 0;; ++i) {
                if (++digits[i] < s.l) break;
                digits[i] = 0;
            }
            long k = static_cast<long>(s.dlog[enc]);
            long u = t0_ * (k % pn1) % pn1;
            long tr = 0;
            for (int i = 0; i < s.f; ++i)
                if (digits[i]) tr = (tr + digits[i] * trb[i]) % s.l;
            tau_counts_[u][tr] += 1;
            // 1 - x for x != 1
            long enc2 = 0;
            for (int i = s.f - 1; i >= 0; --i) {
                long d = i == 0 ? (1 - digits[0] + s.l) % s.l : (s.l - digits[i]) % s.l;
                enc2 = enc2 * s.l + d;
            }
            if (enc2 == 0) continue;  // x = 1
            long k2 = static_cast<long>(s.dlog[enc2]);
            long u2 = t0_ * (k2 % pn1) % pn1;
            jac_counts_[u][u2] += 1;
        }
    }

    const PrimeSite& site() const { return *site_; }
    PrimeSite& site_mut() { return *site_; }

    /// The Gauss sum as an exact element of Q(zeta_{p^{n+1}}, zeta_l).
    CycNum gauss_value() const {
        auto f = CycField::make(site_->p, site_->n, site_->l);
        std::vector<Rat> coords(f->dim, Rat(0));
        for (long u = 0; u < site_->pn1; ++u)
            for (long v = 0; v < site_->l; ++v) {
                int64_t c = tau_counts_[u][v];
                if (c == 0) continue;
                for (auto [ip, sp] : f->red_p[u])
                    for (auto [jl, sl] : f->red_l[v]) coords[f->index(ip, jl)] += Rat(-sp * sl * c);
            }
        return CycNum(f, coords);
    }

    /// tau * conj(tau) == q, decided exactly on the raw count matrices with
    /// integer arithmetic (cyclic 2D convolution, then basis reduction).
    bool tau_times_conj_is_q() const {
        long pn1 = site_->pn1, l = site_->l;
        std::vector<std::vector<int64_t>> prod(pn1, std::vector<int64_t>(l, 0));
        for (long u1 = 0; u1 < pn1; ++u1)
            for (long v1 = 0; v1 < l; ++v1) {
                int64_t c1 = tau_counts_[u1][v1];
                if (c1 == 0) continue;
                for (long u2 = 0; u2 < pn1; ++u2)
                    for (long v2 = 0; v2 < l; ++v2) {
                        int64_t c2 = tau_counts_[u2][v2];
                        if (c2 == 0) continue;
                        // conj term contributes at exponent (u1 - u2, v1 - v2)
                        long w = (u1 - u2 + pn1) % pn1;
                        long z = (v1 - v2 + l) % l;
                        prod[w][z] += c1 * c2;
                    }
            }
        auto f = CycField::make(site_->p, site_->n, site_->l);
        std::vector<Int> coords(f->dim, Int(0));
        for (long w = 0; w < pn1; ++w)
            for (long z = 0; z < l; ++z) {
                int64_t c = prod[w][z];
                if (c == 0) continue;
                for (auto [ip, sp] : f->red_p[w])
                    for (auto [jl, sl] : f->red_l[z]) coords[f->index(ip, jl)] += Int(sp * sl * c);
            }
        if (coords[0] != site_->q) return false;
        for (int i = 1; i < f->dim; ++i)
            if (coords[i] != 0) return false;
        return true;
    }

    /// J(chi^i, chi^j) = sum_{x != 0,1} chi^i(x) chi^j(1-x), an algebraic
    /// integer of k_n.
    CycNum jacobi(long i, long j) const {
        long pn1 = site_->pn1;
        i = ((i % pn1) + pn1) % pn1;
        j = ((j % pn1) + pn1) % pn1;
        auto f = CycField::make(site_->p, site_->n, 0);
        std::vector<Int> acc(f->deg_p, Int(0));
        for (long u = 0; u < pn1; ++u)
            for (long v = 0; v < pn1; ++v) {
                int64_t c = jac_counts_[u][v];
                if (c == 0) continue;
                long e = (i * u + j * v) % pn1;
                for (auto [ip, sp] : f->red_p[e]) acc[ip] += Int(sp * c);
            }
        std::vector<Rat> coords(acc.begin(), acc.end());
        return CycNum(f, coords);
    }

    /// tau^{t - sigma_t} = (-1)^{t-1} prod_{i=1}^{t-1} J(chi^i, chi),
    /// an element of k_n by Stickelberger's theorem.
    CycNum tau_power_t_minus_sigma(long t) const {
        ensure_jprod(t);
        CycNum r = jprod_[t];
        return t % 2 == 1 ? r : -r;
    }

    /// tau^{p^{n+1}} = -q * prod_{i=1}^{p^{n+1}-2} J(chi^i, chi), in k_n.
    CycNum tau_power_pn1() const {
        ensure_jprod(site_->pn1 - 1);
        return Rat(-site_->q) * jprod_[site_->pn1 - 1];
    }

    /// tau^delta for delta in S'_n, computed through the certificate
    /// expansion over {t - sigma_t} and p^{n+1}: each generator power is a
    /// Jacobi-sum product, and the group-ring multipliers act inside k_n.
    CycNum jacobi_power(const GroupRingElt& delta,
                        const SprimeIdeal::Certificate* cert = nullptr) const {
        const SprimeIdeal& S = SprimeIdeal::get(site_->p, site_->n);
        SprimeIdeal::Certificate local;
        if (!cert) {
            auto m = S.membership(delta);
            if (!m) throw std::invalid_argument("jacobi_power: delta not in S'_n");
            local = std::move(*m);
            cert = &local;
        }
        auto f = CycField::make(site_->p, site_->n, 0);
        CycNum acc = CycNum::one(f);
        const auto& gens = S.generators();
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            const GroupRingElt& mult = cert->multipliers[gi];
            if (mult.is_zero()) continue;
            CycNum base = gi + 1 == gens.size()
                              ? tau_power_pn1()
                              : tau_power_t_minus_sigma(generator_t(gens[gi]));
            acc = acc * group_ring_power(base, mult);
        }
        return acc;
    }

    /// Direct-route oracle: tau^delta computed in the composite field from
    /// the full Gauss sum, negative exponents through conj(tau)/q. Verifies
    /// Galois descent to k_n and returns the descended value.
    CycNum jacobi_power_direct(const GroupRingElt& delta) const {
        const GroupRing& G = *delta.ring();
        CycNum tau = gauss_value();
        CycNum num = CycNum::one(tau.field());
        long neg_weight = 0;
        for (size_t i = 0; i < G.units.size(); ++i) {
            const Rat& c = delta.coords()[i];
            if (c == 0) continue;
            if (c.get_den() != 1) throw std::invalid_argument("jacobi_power_direct: non-integer delta");
            long e = mpz_get_si(c.get_num().get_mpz_t());
            CycNum conj_a = tau.galois_p(G.units[i]);
            if (e > 0) {
                num = num * conj_a.pow(e);
            } else {
                num = num * conj_a.conj().pow(-e);
                neg_weight += -e;
            }
        }
        if (neg_weight > 0) num = Rat(Int(1), pow_int(Int(site_->q), neg_weight)) * num;
        if (!num.is_l_free())
            throw std::logic_error("jacobi_power_direct: value failed Galois descent to k_n");
        return num.drop_l();
    }

private:
    static long generator_t(const GroupRingElt& gen) {
        // recovers t from the generator t - sigma_t
        const GroupRing& G = *gen.ring();
        for (long a : G.units)
            if (a != 1 && gen.coeff(a) != 0) return a;
        throw std::logic_error("generator_t: not a t - sigma_t generator");
    }

    void ensure_jprod(long upto) const {
        if (jprod_.empty()) {
            auto f = CycField::make(site_->p, site_->n, 0);
            jprod_.resize(site_->pn1);
            jprod_[1] = CycNum::one(f);
        }
        for (long t = 2; t <= upto; ++t)
            if (jprod_[t].coords().empty()) jprod_[t] = jprod_[t - 1] * jacobi(t - 1, 1);
    }

    PrimeSite* site_;
    long t0_ = 0;
    std::vector<std::vector<int64_t>> tau_counts_;
    std::vector<std::vector<int64_t>> jac_counts_;
    mutable std::vector<CycNum> jprod_;
};

inline GaussSum gauss_sum(CharTable& table) {
    return GaussSum{table.site().l, table.site().p, table.site().n, table.gauss_value()};
}

/// Valuation table for elements whose coordinates may carry l-power
/// denominators (tau^delta with negative Stickelberger coefficients):
/// clears l^k, computes the integral table, shifts back by k.
inline std::map<long, long> valuations_above_l_frac(const CycNum& x, PrimeSite& site) {
    long k = 0;
    for (const Rat& c : x.coords()) {
        if (c == 0) continue;
        long dv = val_p(Int(c.get_den()), site.l);
        if (dv > k) k = dv;
    }
    CycNum y = k == 0 ? x : Rat(pow_int(Int(site.l), k)) * x;
    auto table = valuations_above_l(y, site);
    if (k != 0)
        for (auto& [a, v] : table) v -= k;
    return table;
}

/// beta(tau^delta) = delta * theta_n: the annihilator invariant of the Weil
/// element tau^delta. The Jacobi side must be well defined (delta in S'_n);
/// the returned value is the Stickelberger product.
inline GroupRingElt weil_beta(CharTable& table, const GroupRingElt& delta) {
    const SprimeIdeal& S = SprimeIdeal::get(table.site().p, table.site().n);
    if (!S.contains(delta)) throw std::invalid_argument("weil_beta: delta not in S'_n");
    return stickelberger_multiply(delta);
}

/// Defect of the Gauss-sum norm compatibility
///   N_{n,n-1}(tau_n(L)) = tau_{n-1}(N_{n,n-1}(L)) * (-1)^s zeta^a l^b:
/// both sides are computed exactly and the decomposition is searched over
/// mu_{2 p^{n+1}} l^Z. The l-exponent is pinned by |tau|^2 = q on both
/// levels: b = (p-1) f_n / 2.
struct NormDefect {
    int sign_exp;   // s in (-1)^s
    long zeta_exp;  // a
    long l_exp;     // b
};

/// The level-(n-1) site whose prime lies below the given site's prime:
/// its factor g' satisfies g'(zeta^p) = 0 in the level-n residue field.
/// This is the coherence that makes N_{n,n-1} compose with the Gauss maps.
inline PrimeSite compatible_lower_site(const PrimeSite& site_n, long q_max = 8000000) {
    if (site_n.n < 1) throw std::invalid_argument("compatible_lower_site: already at level 0");
    long l = site_n.l, p = site_n.p;
    PrimeSite::Options probe_opts;
    probe_opts.q_max = q_max;
    probe_opts.build_dlog = false;
    PrimeSite probe = PrimeSite::make(l, p, site_n.n - 1, probe_opts);
    auto zp = site_n.fq_pow(site_n.zeta_image(), Int(p));
    for (int idx = 0; idx < (int)probe.all_factors.size(); ++idx) {
        const PolyL& cand = probe.all_factors[idx];
        PrimeSite::FqElt acc(site_n.f, 0), pw(site_n.f, 0);
        pw[0] = 1;
        for (size_t i = 0; i < cand.size(); ++i) {
            for (int k = 0; k < site_n.f; ++k) acc[k] = (acc[k] + cand[i] * pw[k]) % l;
            pw = site_n.fq_mul(pw, zp);
        }
        bool zero = true;
        for (long c : acc)
            if (c != 0) zero = false;
        if (zero) {
            PrimeSite::Options o;
            o.q_max = q_max;
            o.factor_index = idx;
            return PrimeSite::make(l, p, site_n.n - 1, o);
        }
    }
    throw std::logic_error("compatible_lower_site: no compatible factor found");
}

namespace detail {

/// Integer-coefficient arithmetic on the reduced tensor basis; the Gauss
/// sums and their conjugate products stay integral, and plain mpz
/// multiply-adds are several times faster than rational ones at the
/// composite dimensions involved here.
using IntCoords = std::vector<Int>;

inline IntCoords int_coords_of(const CycNum& x) {
    IntCoords out;
    out.reserve(x.coords().size());
    for (const Rat& c : x.coords()) {
        if (c.get_den() != 1) throw std::invalid_argument("int_coords_of: non-integral");
        out.emplace_back(c.get_num());
    }
    return out;
}

inline CycNum cyc_of_int_coords(const CycFieldPtr& f, const IntCoords& v) {
    std::vector<Rat> coords(v.begin(), v.end());
    return CycNum(f, coords);
}

inline IntCoords int_galois_p(const CycFieldPtr& f, const IntCoords& x, long a) {
    const CycField& F = *f;
    long am = ((a % F.pn1) + F.pn1) % F.pn1;
    IntCoords r(F.dim, Int(0));
    for (int i = 0; i < F.deg_p; ++i) {
        long e = am * i % F.pn1;
        for (int j = 0; j < F.deg_l; ++j) {
            const Int& v = x[F.index(i, j)];
            if (v == 0) continue;
            for (auto [ip, sp] : F.red_p[e]) {
                if (sp > 0)
                    r[F.index(ip, j)] += v;
                else
                    r[F.index(ip, j)] -= v;
            }
        }
    }
    return r;
}

inline IntCoords int_mul(const CycFieldPtr& f, const IntCoords& a, const IntCoords& b) {
    const CycField& F = *f;
    int wp = 2 * F.deg_p - 1, wl = 2 * F.deg_l - 1;
    std::vector<Int> ext(static_cast<size_t>(wp) * wl, Int(0));
    for (int i1 = 0; i1 < F.deg_p; ++i1)
        for (int j1 = 0; j1 < F.deg_l; ++j1) {
            const Int& c1 = a[F.index(i1, j1)];
            if (c1 == 0) continue;
            const size_t row = static_cast<size_t>(i1) * wl + j1;
            for (int i2 = 0; i2 < F.deg_p; ++i2)
                for (int j2 = 0; j2 < F.deg_l; ++j2) {
                    const Int& c2 = b[F.index(i2, j2)];
                    if (c2 == 0) continue;
                    Int& slot = ext[row + static_cast<size_t>(i2) * wl + j2];
                    mpz_addmul(slot.get_mpz_t(), c1.get_mpz_t(), c2.get_mpz_t());
                }
        }
    IntCoords r(F.dim, Int(0));
    for (int ep = 0; ep < wp; ++ep)
        for (int el = 0; el < wl; ++el) {
            Int& v = ext[static_cast<size_t>(ep) * wl + el];
            if (v == 0) continue;
            long repp = ep % F.pn1;
            long rel = F.l == 0 ? 0 : el % F.l;
            for (auto [ip, sp] : F.red_p[repp])
                for (auto [jl, sl] : F.red_l[rel]) {
                    if (sp * sl > 0)
                        r[F.index(ip, jl)] += v;
                    else
                        r[F.index(ip, jl)] -= v;
                }
        }
    return r;
}

}  // namespace detail

/// Core computation given already-built tables for coherent sites at
/// levels n and n-1 (tab_dn's prime must lie below tab_n's).
inline NormDefect norm_compat_defect(CharTable& tab_n, CharTable& tab_dn) {
    const PrimeSite& site_n = tab_n.site();
    const PrimeSite& site_dn = tab_dn.site();
    long p = site_n.p, l = site_n.l;
    int n = site_n.n;

    // relative norm of tau over a = 1 mod p^n, in integer coordinates
    CycNum tau_n = tab_n.gauss_value();
    auto fc_n = tau_n.field();
    detail::IntCoords prod = detail::int_coords_of(tau_n);
    long mod_t = site_n.pn1 / p;
    for (long a = 1 + mod_t; a < site_n.pn1; a += mod_t)
        prod = detail::int_mul(fc_n, prod, detail::int_galois_p(fc_n, detail::int_coords_of(tau_n), a));
    CycNum lhs = detail::cyc_of_int_coords(fc_n, prod).to_p_level(n - 1);

    long e = site_n.f / site_dn.f;
    CycNum tau_dn = tab_dn.gauss_value();
    auto fc_dn = tau_dn.field();
    detail::IntCoords rhs_i = detail::int_coords_of(tau_dn);
    for (long k = 1; k < e; ++k) rhs_i = detail::int_mul(fc_dn, rhs_i, detail::int_coords_of(tau_dn));
    CycNum rhs = detail::cyc_of_int_coords(fc_dn, rhs_i);

    long b = (p - 1) * site_n.f / 2;
    CycNum rhs_scaled = Rat(pow_int(Int(l), b)) * rhs;
    CycNum lhs_up = lhs.lift_p_level(n);
    CycNum rhs_up = rhs_scaled.lift_p_level(n);
    auto fc = lhs_up.field();
    for (long a = 0; a < site_n.pn1; ++a) {
        CycNum cand = CycNum::monomial(fc, a, 0) * rhs_up;
        if (lhs_up == cand) return NormDefect{0, a, b};
        if (lhs_up == -cand) return NormDefect{1, a, b};
    }
    throw std::runtime_error("norm_compat_defect: no defect decomposition found");
}

inline NormDefect norm_compat_defect(long p, int n, long l, long q_max = 8000000) {
    if (n < 1) throw std::invalid_argument("norm_compat_defect: n >= 1 required");
    PrimeSite::Options opts;
    opts.q_max = q_max;
    PrimeSite site_n = PrimeSite::make(l, p, n, opts);
    PrimeSite site_dn = compatible_lower_site(site_n, q_max);
    CharTable tab_n(site_n), tab_dn(site_dn);
    return norm_compat_defect(tab_n, tab_dn);
}

}  // namespace cyclo
