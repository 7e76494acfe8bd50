#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclo/cyclotomic.hpp"
#include "cyclo/fqpoly.hpp"
#include "cyclo/rational.hpp"
#include "cyclo/zlattice.hpp"

namespace cyclo {

struct SiteTooLarge : std::runtime_error {
    SiteTooLarge(long l, long p, int n, const Int& q)
        : std::runtime_error("prime site l=" + std::to_string(l) + " p=" + std::to_string(p) +
                             " n=" + std::to_string(n) + " has q=" + q.get_str() +
                             " beyond the configured bound"),
          q_value(q) {}
    Int q_value;
};

struct GeneratorNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotWhitelisted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Levels (p, n) where Q(zeta_{p^{n+1}}) has class number 1; generator
/// search is only meaningful there.
inline bool class_number_one(long p, int n) {
    static const std::pair<long, int> wl[] = {{3, 0}, {3, 1}, {3, 2}, {5, 0}, {5, 1}, {7, 0}};
    for (auto [wp, wn] : wl)
        if (wp == p && wn == n) return true;
    return false;
}

/// All arithmetic data attached to a rational prime l != p at level n:
/// the residue field F_q with a discrete-log table, a deterministically
/// chosen factor of Phi_{p^{n+1}} mod l fixing the prime above l, and a
/// Hensel lift of that factor for computing valuations.
class PrimeSite {
public:
    using FqElt = std::vector<long>;

    long l = 0, p = 0;
    int n = 0;
    int f = 0;   // residue degree = multiplicative order of l mod p^{n+1}
    long q = 0;  // l^f
    long pn1 = 0;
    int phi = 0;  // degree of Phi_{p^{n+1}}

    PolyL g_poly;                      // chosen monic degree-f factor of Phi mod l
    std::vector<PolyL> all_factors;    // every factor, sorted by coefficient sequence
    int factor_index = 0;              // position of g_poly in all_factors
    FqElt fq_generator;                // generator of F_q^* (as poly mod g_poly)
    std::vector<uint32_t> dlog;        // dlog[encode(x)], defined for x != 0
    std::vector<long> coset_reps;      // smallest member of each coset of <l> in (Z/p^{n+1})^*

    int hensel_prec = 0;     // M
    Int hensel_modulus;      // l^M
    PolyZ hensel_factor;     // lift of g_poly mod l^M
    PolyZ hensel_cofactor;   // lift of Phi/g mod l^M

    struct Options {
        int hensel_prec = 8;
        long q_max = 8000000;
        int factor_index = -1;   // -1: canonical (lexicographically least factor)
        bool build_dlog = true;
        long generator_hint = 0;  // cached encode of a known generator; verified before use
    };

    static PrimeSite make(long l, long p, int n);
    static PrimeSite make(long l, long p, int n, const Options& opts);

    // --- F_q arithmetic on coefficient vectors of length f mod g_poly ---

    long encode(const FqElt& x) const {
        long e = 0;
        for (int i = f - 1; i >= 0; --i) e = e * l + x[i];
        return e;
    }
    FqElt decode(long e) const {
        FqElt x(f, 0);
        for (int i = 0; i < f; ++i) {
            x[i] = e % l;
            e /= l;
        }
        return x;
    }

    FqElt fq_mul(const FqElt& a, const FqElt& b) const {
        std::vector<long> acc(2 * f - 1, 0);
        for (int i = 0; i < f; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < f; ++j) acc[i + j] = (acc[i + j] + a[i] * b[j]) % l;
        }
        reduce_in_place(acc);
        acc.resize(f);
        return acc;
    }

    FqElt fq_pow(const FqElt& a, Int e) const {
        long order = q - 1;
        e = mod_euclid(e, Int(order));
        FqElt r(f, 0);
        r[0] = 1;
        FqElt b = a;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = fq_mul(r, b);
            b = fq_mul(b, b);
            e >>= 1;
        }
        return r;
    }

    /// Tr_{F_q/F_l} as the linear form sum c_i Tr(y^i).
    long trace(const FqElt& x) const {
        long t = 0;
        for (int i = 0; i < f; ++i) t = (t + x[i] * tr_basis_[i]) % l;
        return t;
    }

    uint32_t dlog_at(long enc) const {
        if (enc <= 0 || enc >= q) throw std::invalid_argument("dlog_at: not a unit of F_q");
        return dlog[enc];
    }

    /// The image of zeta_{p^{n+1}} in F_q (the class of y mod g_poly).
    FqElt zeta_image() const {
        FqElt z(f, 0);
        if (f == 1)
            z[0] = ((l - g_poly[0]) % l + l) % l;  // root of the linear factor
        else
            z[1] = 1;
        return z;
    }

    /// chi exponent base: chi(fq_generator^s) = zeta^{t0 s}. Derived from
    /// dlog(zeta_image) = e (q-1)/p^{n+1} via t0 = -e^{-1} mod p^{n+1}.
    long chi_t0() const {
        long sz = dlog[encode(zeta_image())];
        long step = (q - 1) / pn1;
        if (sz % step != 0) throw std::logic_error("chi_t0: zeta image has wrong order");
        long e = sz / step;
        long einv = mpz_get_si(inv_mod(Int(e), Int(pn1)).get_mpz_t());
        return ((-einv) % pn1 + pn1) % pn1;
    }

    /// Raises the Hensel precision to at least M.
    void ensure_hensel(int M) {
        if (M <= hensel_prec) return;
        lift_factorization(M);
    }

    std::string key() const {
        return "p" + std::to_string(p) + "_n" + std::to_string(n) + "_l" + std::to_string(l);
    }

private:
    std::vector<long> tr_basis_;  // Tr(y^i) for i < f
    PolyL phi_mod_l_;             // Phi_{p^{n+1}} mod l

    void reduce_in_place(std::vector<long>& acc) const {
        // g_poly is monic of degree f: acc[e] y^e = -acc[e] * (lower part of g) shifted
        for (int e = static_cast<int>(acc.size()) - 1; e >= f; --e) {
            long c = acc[e] % l;
            if (c == 0) continue;
            acc[e] = 0;
            for (int i = 0; i < f; ++i)
                acc[e - f + i] = ((acc[e - f + i] - c * g_poly[i]) % l + l) % l;
        }
    }

    void build_trace_basis() {
        // Newton power sums of the roots of g_poly: s_0 = f and
        // s_k = -(k a_{f-k} + sum_{i=1}^{k-1} a_{f-i} s_{k-i}), a_j = coeff of y^j.
        tr_basis_.assign(f, 0);
        tr_basis_[0] = f % l;
        for (int k = 1; k < f; ++k) {
            long s = (k % l) * g_poly[f - k] % l;
            for (int i = 1; i < k; ++i) s = (s + g_poly[f - i] * tr_basis_[k - i]) % l;
            tr_basis_[k] = ((-s) % l + l) % l;
        }
    }

    void lift_factorization(int M);
    friend PrimeSite make_prime_site_impl(long l, long p, int n, const PrimeSite::Options& opts);
};

namespace detail {

inline PolyL cyclotomic_poly_mod_l(long p, int n, long l) {
    // Phi_{p^{n+1}}(y) = sum_{j<p} y^{j p^n}
    long pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    PolyL phi(pn * (p - 1) + 1, 0);
    for (long j = 0; j < p; ++j) phi[j * pn] = 1 % l;
    fl::trim(phi);
    return phi;
}

/// Deterministic scan for a monic irreducible of degree f over F_l.
inline PolyL find_irreducible(long l, int f) {
    if (f == 1) return PolyL{0, 1};  // y itself
    for (long counter = 0;; ++counter) {
        PolyL h(f + 1, 0);
        h[f] = 1;
        long c = counter;
        for (int i = 0; i < f && c > 0; ++i) {
            h[i] = c % l;
            c /= l;
        }
        if (c > 0) throw std::logic_error("find_irreducible: search space exhausted");
        if (fl::is_irreducible(h, l)) return h;
    }
}

}  // namespace detail

inline void PrimeSite::lift_factorization(int M) {
    // Linear Hensel lifting of Phi = g * h from mod l to mod l^M, using the
    // Bezout pair s g + t h = 1 over F_l.
    PolyL g0 = g_poly;
    PolyL h0 = fl::divexact(phi_mod_l_, g0, l);
    auto [one, s, t] = fl::ext_gcd(g0, h0, l);
    if (fl::deg(one) != 0) throw std::logic_error("hensel: factor and cofactor not coprime");
    long c_inv = mpz_get_si(inv_mod(Int(one[0]), Int(l)).get_mpz_t());
    s = fl::scale(s, c_inv, l);
    t = fl::scale(t, c_inv, l);

    PolyZ G = flift::from_fl(g0), H = flift::from_fl(h0);
    PolyZ phi = flift::from_fl(phi_mod_l_);
    // phi here must be the exact integer cyclotomic polynomial
    {
        long pn = pn1 / p;
        phi.assign(pn * (p - 1) + 1, Int(0));
        for (long j = 0; j < p; ++j) phi[j * pn] = 1;
    }

    Int lk(l);
    for (int k = 1; k < M; ++k) {
        Int lk1 = lk * l;
        // E = (phi - G H) / l^k mod l
        PolyZ prod = flift::mul(G, H, lk1);
        PolyZ diff(std::max(phi.size(), prod.size()), Int(0));
        for (size_t i = 0; i < diff.size(); ++i) {
            Int v = (i < phi.size() ? phi[i] : Int(0)) - (i < prod.size() ? prod[i] : Int(0));
            diff[i] = mod_euclid(v, lk1);
        }
        PolyL E;
        for (auto& v : diff) {
            if (v % lk != 0) throw std::logic_error("hensel: drift off the factorization");
            E.push_back(mpz_get_si(mod_euclid(v / lk, Int(l)).get_mpz_t()));
        }
        fl::trim(E);
        // Solve E = dg * h0 + dh * g0 with deg dg < f: dg = t E mod g0.
        PolyL dg = fl::rem(fl::mul(t, E, l), g0, l);
        PolyL num = E;
        PolyL dgh = fl::mul(dg, h0, l);
        if (num.size() < dgh.size()) num.resize(dgh.size(), 0);
        for (size_t i = 0; i < dgh.size(); ++i) num[i] = ((num[i] - dgh[i]) % l + l) % l;
        fl::trim(num);
        PolyL dh = num.empty() ? PolyL{} : fl::divexact(num, g0, l);

        if (G.size() < dg.size()) G.resize(dg.size(), Int(0));
        for (size_t i = 0; i < dg.size(); ++i) G[i] += lk * dg[i];
        if (H.size() < dh.size()) H.resize(dh.size(), Int(0));
        for (size_t i = 0; i < dh.size(); ++i) H[i] += lk * dh[i];
        lk = lk1;
    }

    hensel_prec = M;
    hensel_modulus = lk;
    for (auto& v : G) v = mod_euclid(v, lk);
    for (auto& v : H) v = mod_euclid(v, lk);
    flift::trim(G);
    flift::trim(H);
    hensel_factor = std::move(G);
    hensel_cofactor = std::move(H);
}

inline PrimeSite make_prime_site_impl(long l, long p, int n, const PrimeSite::Options& opts) {
    PrimeSite s;
    s.l = l;
    s.p = p;
    s.n = n;
    s.pn1 = 1;
    for (int i = 0; i <= n; ++i) s.pn1 *= p;
    s.phi = static_cast<int>(s.pn1 - s.pn1 / p);
    s.f = static_cast<int>(mul_ord(l, s.pn1));
    Int qz = pow_int(Int(l), s.f);
    if (qz > opts.q_max) throw SiteTooLarge(l, p, n, qz);
    s.q = mpz_get_si(qz.get_mpz_t());
    s.phi_mod_l_ = detail::cyclotomic_poly_mod_l(p, n, l);

    // Factor Phi mod l: build F_q once with a bootstrap modulus, locate a
    // primitive p^{n+1}-th root of unity rho, and read the factors off the
    // Frobenius orbits of its powers.
    {
        PolyL h = detail::find_irreducible(l, s.f);
        auto mulh = [&](const PolyL& a, const PolyL& b) { return fl::rem(fl::mul(a, b, l), h, l); };
        auto powh = [&](PolyL a, Int e) {
            PolyL r{1};
            e = mod_euclid(e, Int(s.q - 1));
            while (e > 0) {
                if (mpz_odd_p(e.get_mpz_t())) r = mulh(r, a);
                a = mulh(a, a);
                e >>= 1;
            }
            return r;
        };
        // deterministic scan for rho of exact order p^{n+1}
        PolyL rho;
        for (long counter = 1;; ++counter) {
            PolyL z;
            long c = counter;
            while (c > 0) {
                z.push_back(c % l);
                c /= l;
            }
            fl::trim(z);
            if (z.empty() || fl::deg(z) >= s.f) throw std::logic_error("no rho found");
            PolyL cand = powh(z, Int((s.q - 1) / s.pn1));
            bool ok = true;
            PolyL t = cand;
            // cand has order dividing p^{n+1}; exact order iff cand^{p^n} != 1
            t = powh(cand, Int(s.pn1 / p));
            if (t == PolyL{1}) ok = false;
            if (ok) {
                rho = cand;
                break;
            }
        }
        // Each factor is the product of (y - rho^b) over one coset of <l>
        // acting on exponents; its coefficients land in F_l.
        std::vector<char> seen(s.pn1, 0);
        std::vector<PolyL> factors;
        for (long a = 1; a < s.pn1; ++a) {
            if (a % p == 0 || seen[a]) continue;
            std::vector<long> orbit;
            long x = a;
            while (!seen[x]) {
                seen[x] = 1;
                orbit.push_back(x);
                x = x * l % s.pn1;
            }
            std::vector<PolyL> coeffs{{1}};  // monic, degree 0 so far; coeffs[i] in F_q
            for (long b : orbit) {
                PolyL root = powh(rho, Int(b));
                std::vector<PolyL> next(coeffs.size() + 1);
                next[coeffs.size()] = coeffs.back();
                for (size_t i = coeffs.size(); i-- > 0;) {
                    PolyL term = mulh(coeffs[i], root);
                    PolyL low = i > 0 ? coeffs[i - 1] : PolyL{};
                    if (low.size() < term.size()) low.resize(term.size(), 0);
                    for (size_t k = 0; k < term.size(); ++k) low[k] = ((low[k] - term[k]) % l + l) % l;
                    fl::trim(low);
                    next[i] = low;
                }
                coeffs = std::move(next);
            }
            PolyL fac(coeffs.size(), 0);
            for (size_t i = 0; i < coeffs.size(); ++i) {
                if (fl::deg(coeffs[i]) > 0)
                    throw std::logic_error("factor coefficient not in F_l");
                fac[i] = coeffs[i].empty() ? 0 : coeffs[i][0];
            }
            factors.push_back(fac);
        }
        std::sort(factors.begin(), factors.end());
        s.all_factors = factors;
        if ((long)factors.size() != s.phi / s.f)
            throw std::logic_error("unexpected factor count of Phi mod l");
        int idx = opts.factor_index < 0 ? 0 : opts.factor_index;
        if (idx >= (int)factors.size()) throw std::invalid_argument("factor index out of range");
        s.factor_index = idx;
        s.g_poly = factors[idx];
    }

    s.build_trace_basis();

    // coset representatives of <l> in (Z/p^{n+1})^*
    {
        std::vector<char> seen(s.pn1, 0);
        for (long a = 1; a < s.pn1; ++a) {
            if (a % p == 0 || seen[a]) continue;
            s.coset_reps.push_back(a);
            long x = a;
            while (!seen[x]) {
                seen[x] = 1;
                x = x * l % s.pn1;
            }
        }
    }

    // multiplicative generator of F_q^*: first try sparse y + c, then scan
    if (opts.build_dlog) {
        std::vector<long> prime_factors;
        {
            long m = s.q - 1;
            for (long r = 2; r * r <= m; ++r)
                if (m % r == 0) {
                    prime_factors.push_back(r);
                    while (m % r == 0) m /= r;
                }
            if (m > 1) prime_factors.push_back(m);
        }
        auto is_generator = [&](const PrimeSite::FqElt& x) {
            for (long r : prime_factors)
                if (s.fq_pow(x, Int((s.q - 1) / r)) == PrimeSite::FqElt(s.decode(1)))
                    return false;
            return true;
        };
        bool found = false;
        if (opts.generator_hint > 1 && opts.generator_hint < s.q) {
            PrimeSite::FqElt x = s.decode(opts.generator_hint);
            if (is_generator(x)) {
                s.fq_generator = x;
                found = true;
            }
        }
        if (s.f > 1) {
            for (long c = 0; c < l && !found; ++c) {
                PrimeSite::FqElt x(s.f, 0);
                x[0] = c;
                x[1] = 1;
                if (is_generator(x)) {
                    s.fq_generator = x;
                    found = true;
                }
            }
        }
        for (long e = 2; e < s.q && !found; ++e) {
            PrimeSite::FqElt x = s.decode(e);
            if (is_generator(x)) {
                s.fq_generator = x;
                found = true;
            }
        }
        if (!found) throw std::logic_error("no generator of F_q^* found");

        // dlog table by multiplicative enumeration
        s.dlog.assign(s.q, 0);
        std::vector<long> x(s.f, 0), acc(2 * s.f - 1, 0);
        x[0] = 1;
        std::vector<std::pair<int, long>> gen_terms;
        for (int i = 0; i < s.f; ++i)
            if (s.fq_generator[i] != 0) gen_terms.push_back({i, s.fq_generator[i]});
        for (long k = 0;; ++k) {
            s.dlog[s.encode(x)] = static_cast<uint32_t>(k);
            if (k == s.q - 2) break;
            std::fill(acc.begin(), acc.end(), 0);
            for (auto [i, gi] : gen_terms)
                for (int j = 0; j < s.f; ++j) acc[i + j] = (acc[i + j] + gi * x[j]) % l;
            for (int e = 2 * s.f - 2; e >= s.f; --e) {
                long c = acc[e];
                if (c == 0) continue;
                acc[e] = 0;
                for (int i = 0; i < s.f; ++i)
                    acc[e - s.f + i] = ((acc[e - s.f + i] - c * s.g_poly[i]) % l + l) % l;
            }
            std::copy(acc.begin(), acc.begin() + s.f, x.begin());
        }
    }

    s.lift_factorization(opts.hensel_prec);
    return s;
}

inline PrimeSite PrimeSite::make(long l, long p, int n, const Options& opts) {
    if (l == p) throw std::invalid_argument("PrimeSite: l = p is excluded");
    if (l < 2) throw std::invalid_argument("PrimeSite: l must be prime");
    return make_prime_site_impl(l, p, n, opts);
}

inline PrimeSite PrimeSite::make(long l, long p, int n) { return make(l, p, n, Options{}); }

/// Valuation table of x at the primes above l: rep a -> v_l(sigma_a(x))
/// computed in the unramified completion (Z/l^M)[y]/(hensel_factor).
/// Raises the Hensel precision (bounded doublings) while the image is zero.
inline std::map<long, long> valuations_above_l(const CycNum& x, PrimeSite& site) {
    if (x.field()->p != site.p || x.field()->n != site.n || x.field()->l != 0)
        throw std::invalid_argument("valuations_above_l: x must lie in k_n");
    if (x.is_zero()) throw std::invalid_argument("valuations_above_l: x = 0");

    std::map<long, long> table;
    for (long a : site.coset_reps) {
        CycNum xa = x.galois_p(a);
        for (int attempt = 0;; ++attempt) {
            const Int& mod = site.hensel_modulus;
            PolyZ poly;
            poly.reserve(xa.coords().size());
            for (const Rat& c : xa.coords()) {
                Int den(c.get_den());
                if (mpz_divisible_ui_p(den.get_mpz_t(), site.l))
                    throw std::invalid_argument("valuations_above_l: denominator not prime to l");
                poly.push_back(mod_euclid(Int(c.get_num()) * inv_mod(den, mod), mod));
            }
            flift::trim(poly);
            PolyZ image = flift::rem(poly, site.hensel_factor, mod);
            long v = site.hensel_prec;
            bool zero = true;
            for (const Int& cv : image) {
                if (cv == 0) continue;
                zero = false;
                v = std::min(v, val_p(cv, site.l));
            }
            if (!zero && v < site.hensel_prec) {
                table[a] = v;
                break;
            }
            if (attempt >= 6)
                throw PrecisionExhausted("valuations_above_l: image stays zero at l^" +
                                         std::to_string(site.hensel_prec));
            site.ensure_hensel(2 * site.hensel_prec);
        }
    }
    return table;
}

namespace detail {

/// Integer-coefficient product of all conjugates, overflow-free for the
/// small boxes used in generator search.
inline bool int_norm_matches(const CycFieldPtr& fld, const std::vector<long>& coeffs, long target_abs) {
    const CycField& F = *fld;
    std::vector<long long> prod(F.deg_p, 0), conj(F.deg_p, 0), ext(2 * F.deg_p - 1, 0);
    std::vector<long long> cur(coeffs.begin(), coeffs.end());
    prod = cur;
    for (long a = 2; a < F.pn1; ++a) {
        if (a % F.p == 0) continue;
        // conjugate sigma_a of the original element
        std::fill(conj.begin(), conj.end(), 0);
        for (int i = 0; i < F.deg_p; ++i) {
            if (coeffs[i] == 0) continue;
            long e = (a * i) % F.pn1;
            for (auto [ip, sp] : F.red_p[e]) conj[ip] += sp > 0 ? coeffs[i] : -coeffs[i];
        }
        std::fill(ext.begin(), ext.end(), 0);
        for (int i = 0; i < F.deg_p; ++i) {
            if (prod[i] == 0) continue;
            for (int j = 0; j < F.deg_p; ++j) ext[i + j] += prod[i] * conj[j];
        }
        std::fill(prod.begin(), prod.end(), 0);
        for (int e = 0; e < 2 * F.deg_p - 1; ++e) {
            if (ext[e] == 0) continue;
            for (auto [ip, sp] : F.red_p[e % F.pn1]) prod[ip] += sp > 0 ? ext[e] : -ext[e];
        }
    }
    for (int i = 1; i < F.deg_p; ++i)
        if (prod[i] != 0) return false;
    return prod[0] == target_abs || prod[0] == -target_abs;
}

}  // namespace detail

/// Searches for a generator of the site's chosen prime: an element with
/// absolute norm +-q, valuation 1 at the chosen prime and 0 at its
/// conjugates. Deterministic: inert primes return l itself; small-degree
/// fields enumerate coefficient boxes in increasing max-norm with
/// lexicographic tie-breaking; larger fields reduce the ideal lattice by
/// LLL and scan short combinations in a fixed order.
inline CycNum find_generator(PrimeSite& site, int height_bound = 3) {
    if (!class_number_one(site.p, site.n))
        throw NotWhitelisted("find_generator: (p, n) outside the class-number-1 whitelist");
    auto fld = CycField::make(site.p, site.n, 0);
    const int d = fld->deg_p;

    auto accept = [&](const CycNum& alpha) {
        Rat nrm = alpha.absolute_norm();
        if (nrm != site.q && nrm != -site.q) return false;
        auto table = valuations_above_l(alpha, site);
        for (auto& [a, v] : table) {
            if (a == 1 && v != 1) return false;
            if (a != 1 && v != 0) return false;
        }
        return true;
    };

    if (site.f == site.phi) return CycNum::from_rat(fld, site.l);  // inert: (l) is the prime

    if (d <= 6) {
        std::vector<long> c(d, 0);
        for (int r = 1; r <= height_bound; ++r) {
            // enumerate vectors with max-norm exactly r in lexicographic order
            std::vector<long> v(d, -r);
            while (true) {
                bool on_shell = false;
                for (long x : v)
                    if (x == r || x == -r) on_shell = true;
                if (on_shell && detail::int_norm_matches(fld, v, site.q)) {
                    std::vector<Rat> coords(v.begin(), v.end());
                    CycNum alpha(fld, coords);
                    if (accept(alpha)) return alpha;
                }
                int i = d - 1;
                while (i >= 0 && v[i] == r) {
                    v[i] = -r;
                    --i;
                }
                if (i < 0) break;
                ++v[i];
            }
        }
    }

    // LLL route over the ideal lattice (l, g(zeta)).
    IntMat rows;
    for (int i = 0; i < d; ++i) {
        IntVec row(d, 0);
        row[i] = site.l;
        rows.push_back(row);
    }
    CycNum gz(fld);
    {
        std::vector<Rat> coords(d, Rat(0));
        CycNum acc = CycNum::zero(fld);
        for (size_t i = 0; i < site.g_poly.size(); ++i)
            acc = acc + CycNum::monomial(fld, static_cast<long>(i), 0, Rat(site.g_poly[i]));
        gz = acc;
    }
    for (int i = 0; i < d; ++i) {
        CycNum zi = CycNum::zeta_p_pow(fld, i) * gz;
        IntVec row;
        for (const Rat& cc : zi.coords()) row.push_back(Int(cc.get_num()));
        rows.push_back(row);
    }
    IntMat basis = hnf(rows);
    IntMat red = lll_reduce(basis);

    auto to_cyc = [&](const IntVec& v) {
        std::vector<Rat> coords;
        for (const Int& x : v) coords.emplace_back(x);
        return CycNum(fld, coords);
    };
    for (const IntVec& b : red) {
        CycNum cand = to_cyc(b);
        if (accept(cand)) return cand;
    }
    for (size_t i = 0; i < red.size(); ++i)
        for (size_t j = i + 1; j < red.size(); ++j) {
            IntVec sum(d), dif(d);
            for (int k = 0; k < d; ++k) {
                sum[k] = red[i][k] + red[j][k];
                dif[k] = red[i][k] - red[j][k];
            }
            CycNum cs = to_cyc(sum);
            if (accept(cs)) return cs;
            CycNum cd = to_cyc(dif);
            if (accept(cd)) return cd;
        }
    for (size_t i = 0; i < red.size(); ++i)
        for (size_t j = 0; j < red.size(); ++j) {
            if (i == j) continue;
            IntVec v(d);
            for (int k = 0; k < d; ++k) v[k] = 2 * red[i][k] + red[j][k];
            CycNum cand = to_cyc(v);
            if (accept(cand)) return cand;
        }
    throw GeneratorNotFound("find_generator: no generator within bound " +
                            std::to_string(height_bound));
}

}  // namespace cyclo
