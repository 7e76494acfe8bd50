#pragma once

#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclo/charsum.hpp"
#include "cyclo/cyclotomic.hpp"
#include "cyclo/group_ring.hpp"
#include "cyclo/iwasawa.hpp"
#include "cyclo/prime_site.hpp"

namespace cyclo {

using Json = nlohmann::ordered_json;

struct CheckReport {
    std::string check;
    std::map<std::string, std::string> params;
    enum class Status { Pass, Fail, Skip } status = Status::Skip;
    Json witness;
    double ms = 0;

    static const char* status_name(Status s) {
        switch (s) {
            case Status::Pass: return "pass";
            case Status::Fail: return "fail";
            default: return "skipped";
        }
    }
};

namespace detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline std::string rat_str(const Rat& q) { return q.get_str(); }

/// Expected valuation of sigma_a-conjugates at the site's prime, from the
/// Stickelberger exponent T = sum c_b sigma_b: val[a] = sum of c_b over the
/// orbit of a^{-1} under multiplication by l.
inline std::map<long, Rat> expected_valuations(const GroupRingElt& T, const PrimeSite& site) {
    std::map<long, Rat> expect;
    for (long a : site.coset_reps) {
        long ainv = mpz_get_si(inv_mod(Int(a), Int(site.pn1)).get_mpz_t());
        Rat sum = 0;
        long b = ainv;
        for (int i = 0; i < site.f; ++i) {
            sum += T.coeff(b);
            b = b * site.l % site.pn1;
        }
        expect[a] = sum;
    }
    return expect;
}

inline Json valuation_table_json(const std::map<long, long>& table) {
    Json j = Json::object();
    for (auto& [a, v] : table) j[std::to_string(a)] = v;
    return j;
}

}  // namespace detail

/// Stickelberger's theorem at one site and one beta in S'_n:
/// (i) the valuation table of tau^beta matches beta * theta_n,
/// (ii) the absolute norm is exactly +- l^(total), so no other prime divides,
/// (iii) tau^beta = 1 mod pi_n.
inline CheckReport check_stickelberger(CharTable& tab, const GroupRingElt& beta,
                                       const SprimeIdeal::Certificate* cert = nullptr) {
    detail::Stopwatch sw;
    PrimeSite& site = tab.site_mut();
    CheckReport rep;
    rep.check = "stickelberger";
    rep.params = {{"p", std::to_string(site.p)},
                  {"n", std::to_string(site.n)},
                  {"l", std::to_string(site.l)},
                  {"beta", beta.str()}};

    CycNum x = tab.jacobi_power(beta, cert);
    GroupRingElt T = stickelberger_multiply(beta);
    auto table = valuations_above_l_frac(x, site);
    auto expect = detail::expected_valuations(T, site);

    bool val_ok = true;
    for (auto& [a, v] : table) val_ok = val_ok && Rat(v) == expect.at(a);

    // norm accounts for every prime: N(x) = +- l^(f * sum v)
    Rat nrm = x.absolute_norm();
    long total = 0;
    for (auto& [a, v] : table) total += v;
    bool norm_ok;
    {
        Rat lpow(pow_int(Int(site.l), std::abs(site.f * total)));
        Rat scaled = site.f * total >= 0 ? Rat(nrm / lpow) : Rat(nrm * lpow);
        norm_ok = scaled == 1 || scaled == -1;
    }

    bool unit_ok = residue_mod_pi(x) == 1;

    rep.status = val_ok && norm_ok && unit_ok ? CheckReport::Status::Pass : CheckReport::Status::Fail;
    rep.witness = Json::object();
    rep.witness["valuations"] = detail::valuation_table_json(table);
    rep.witness["beta_theta"] = T.str();
    rep.witness["norm_is_power_of_l"] = norm_ok;
    rep.witness["principal_unit_congruence"] = unit_ok;
    rep.ms = sw.ms();
    return rep;
}

/// tau * conj(tau) = q, exact.
inline CheckReport check_gauss_norm(CharTable& tab) {
    detail::Stopwatch sw;
    const PrimeSite& site = tab.site();
    CheckReport rep;
    rep.check = "gauss_norm";
    rep.params = {{"p", std::to_string(site.p)},
                  {"n", std::to_string(site.n)},
                  {"l", std::to_string(site.l)}};
    bool ok = tab.tau_times_conj_is_q();
    rep.status = ok ? CheckReport::Status::Pass : CheckReport::Status::Fail;
    rep.witness = Json::object();
    rep.witness["q"] = site.q;
    rep.witness["f"] = site.f;
    rep.ms = sw.ms();
    return rep;
}

/// The Weil-module congruence at a split principal prime:
/// tau^delta / alpha^{delta theta} lies in mu_{2 p^{n+1}}.
inline CheckReport check_weil_congruence(CharTable& tab, const GroupRingElt& delta,
                                         const SprimeIdeal::Certificate* cert = nullptr) {
    detail::Stopwatch sw;
    PrimeSite& site = tab.site_mut();
    CheckReport rep;
    rep.check = "weil_congruence";
    rep.params = {{"p", std::to_string(site.p)},
                  {"n", std::to_string(site.n)},
                  {"l", std::to_string(site.l)},
                  {"delta", delta.str()}};
    if (!class_number_one(site.p, site.n)) {
        rep.witness["reason"] = "outside h = 1 whitelist";
        rep.ms = sw.ms();
        return rep;
    }
    if (site.f != 1) {
        rep.witness["reason"] = "site not split";
        rep.ms = sw.ms();
        return rep;
    }
    CycNum alpha = find_generator(site);
    CycNum x = tab.jacobi_power(delta, cert);
    CycNum a_pow = group_ring_power(alpha, stickelberger_multiply(delta));
    auto r = root_of_unity_ratio(x, a_pow);
    rep.status = r ? CheckReport::Status::Pass : CheckReport::Status::Fail;
    rep.witness = Json::object();
    rep.witness["alpha"] = alpha.str();
    if (r) {
        rep.witness["sign_exp"] = r->first;
        rep.witness["zeta_exp"] = r->second;
        rep.witness["modulus_needed"] = r->first == 0 ? "mu_p^{n+1}" : "mu_2p^{n+1}";
    }
    rep.ms = sw.ms();
    return rep;
}

/// The Weil element built from a minus annihilator beta (2 beta integral):
/// gamma = alpha^{2 beta} satisfies gamma conj(gamma) = 1 and generates
/// p^{2 beta}; its beta-invariant is 2 beta by construction and is verified
/// against the valuation table.
inline CheckReport construct_weil_from_annihilator(PrimeSite& site, const GroupRingElt& beta) {
    detail::Stopwatch sw;
    CheckReport rep;
    rep.check = "weil_construct";
    rep.params = {{"p", std::to_string(site.p)},
                  {"n", std::to_string(site.n)},
                  {"l", std::to_string(site.l)},
                  {"beta", beta.str()}};
    if (!class_number_one(site.p, site.n)) {
        rep.witness["reason"] = "outside h = 1 whitelist";
        rep.ms = sw.ms();
        return rep;
    }
    GroupRingElt conj_beta = GroupRingElt::sigma(beta.ring(), -1) * beta;
    GroupRingElt two_beta = beta + beta;
    if (!(conj_beta == -beta) || !two_beta.is_integral())
        throw std::invalid_argument("construct_weil: beta must be a minus element with 2 beta integral");

    CycNum alpha = find_generator(site);
    CycNum gamma = group_ring_power(alpha, two_beta);
    bool anti_unitary = gamma * gamma.conj() == CycNum::one(gamma.field());
    auto table = valuations_above_l_frac(gamma, site);
    auto expect = detail::expected_valuations(two_beta, site);
    bool val_ok = true;
    for (auto& [a, v] : table) val_ok = val_ok && Rat(v) == expect.at(a);

    rep.status = anti_unitary && val_ok ? CheckReport::Status::Pass : CheckReport::Status::Fail;
    rep.witness = Json::object();
    rep.witness["gamma_conj_gamma_is_one"] = anti_unitary;
    rep.witness["valuations"] = detail::valuation_table_json(table);
    rep.witness["beta_of_f_equals_2beta"] = val_ok;
    rep.ms = sw.ms();
    return rep;
}

/// beta-map identity: the annihilator invariant of tau^delta equals
/// delta theta_n; at split sites the full coefficient vector is also
/// reconstructed from the valuation table and compared.
inline CheckReport check_beta_identity(CharTable& tab, const GroupRingElt& delta,
                                       const SprimeIdeal::Certificate* cert = nullptr) {
    detail::Stopwatch sw;
    PrimeSite& site = tab.site_mut();
    CheckReport rep;
    rep.check = "beta_identity";
    rep.params = {{"p", std::to_string(site.p)},
                  {"n", std::to_string(site.n)},
                  {"l", std::to_string(site.l)},
                  {"delta", delta.str()}};
    GroupRingElt symbolic = weil_beta(tab, delta);
    bool ok = symbolic == stickelberger_multiply(delta);
    if (site.f == 1) {
        CycNum x = tab.jacobi_power(delta, cert);
        auto table = valuations_above_l_frac(x, site);
        GroupRingElt reconstructed(symbolic.ring());
        for (auto& [a, v] : table) {
            long binv = mpz_get_si(inv_mod(Int(a), Int(site.pn1)).get_mpz_t());
            reconstructed.set_coeff(binv, Rat(v));
        }
        ok = ok && reconstructed == symbolic;
        rep.witness["reconstructed_from_valuations"] = reconstructed.str();
    }
    rep.witness["delta_theta"] = symbolic.str();
    rep.status = ok ? CheckReport::Status::Pass : CheckReport::Status::Fail;
    rep.ms = sw.ms();
    return rep;
}

/// Res(S_n^-) = S_{n-1}^- as integer lattices, minus parts taken as
/// (1 - sigma_{-1})-images to stay integral.
inline CheckReport check_restriction_surjectivity(long p, int n) {
    detail::Stopwatch sw;
    CheckReport rep;
    rep.check = "restriction_surjectivity";
    rep.params = {{"p", std::to_string(p)}, {"n", std::to_string(n)}};
    if (n < 1) throw std::invalid_argument("check_restriction_surjectivity: n >= 1");

    auto minus_lattice_rows = [](long pp, int level) {
        const SprimeIdeal& S = SprimeIdeal::get(pp, level);
        auto g = S.ring();
        GroupRingElt theta = stickelberger_element(g);
        GroupRingElt one_minus_conj = GroupRingElt::sigma(g, 1) - GroupRingElt::sigma(g, -1);
        IntMat rows;
        for (const GroupRingElt& gen : S.generators())
            for (long b : g->units) {
                GroupRingElt r = one_minus_conj * GroupRingElt::sigma(g, b) * gen * theta;
                rows.push_back(r.int_coords());
            }
        return rows;
    };

    IntMat top = minus_lattice_rows(p, n);
    IntMat bottom = minus_lattice_rows(p, n - 1);
    IntMat res_rows;
    {
        const SprimeIdeal& S = SprimeIdeal::get(p, n);
        auto g = S.ring();
        for (const IntVec& row : top) {
            GroupRingElt x = GroupRingElt::from_int_coords(g, row);
            res_rows.push_back(restriction(x).int_coords());
        }
    }
    bool contained = true;
    HnfSystem bottom_sys(bottom);
    for (const IntVec& row : res_rows)
        contained = contained && bottom_sys.solve(row).has_value();
    bool equal = lattice_equal(res_rows, bottom);

    rep.status = contained && equal ? CheckReport::Status::Pass : CheckReport::Status::Fail;
    rep.witness = Json::object();
    rep.witness["containment"] = contained;
    rep.witness["lattice_equality"] = equal;
    rep.ms = sw.ms();
    return rep;
}

/// Norm commutation N_{n,n-1} o J_n^- = J_{n-1}^- o N_{n,n-1} up to
/// mu-homomorphisms, sampled at delta' = (1 - sigma_{-1}) delta0:
/// relative_norm(tau_n^{delta'}) / tau_{n-1}^{Res delta'}(l)^e lies in mu.
inline CheckReport check_norm_commutation(CharTable& tab_n, CharTable& tab_dn,
                                          const GroupRingElt& delta0,
                                          const SprimeIdeal::Certificate* cert0 = nullptr) {
    detail::Stopwatch sw;
    PrimeSite& site = tab_n.site_mut();
    CheckReport rep;
    rep.check = "norm_commutation";
    rep.params = {{"p", std::to_string(site.p)},
                  {"n", std::to_string(site.n)},
                  {"l", std::to_string(site.l)},
                  {"delta0", delta0.str()}};

    auto g = delta0.ring();
    GroupRingElt one_minus_conj = GroupRingElt::sigma(g, 1) - GroupRingElt::sigma(g, -1);
    GroupRingElt delta = one_minus_conj * delta0;

    const SprimeIdeal& S_n = SprimeIdeal::get(site.p, site.n);
    const SprimeIdeal& S_dn = SprimeIdeal::get(site.p, site.n - 1);
    SprimeIdeal::Certificate cert;
    if (cert0) {
        cert.multipliers.reserve(cert0->multipliers.size());
        for (const GroupRingElt& mu : cert0->multipliers)
            cert.multipliers.push_back(one_minus_conj * mu);
    } else {
        auto m = S_n.membership(delta);
        if (!m) throw std::invalid_argument("check_norm_commutation: delta not in S'_n");
        cert = std::move(*m);
    }
    SprimeIdeal::Certificate res_cert = restrict_certificate(S_n, cert, S_dn);

    CycNum lhs = relative_norm(tab_n.jacobi_power(delta, &cert), site.n - 1);
    GroupRingElt res_delta = restriction(delta);
    long e = site.f / tab_dn.site().f;
    CycNum rhs = tab_dn.jacobi_power(res_delta, &res_cert).pow(e);
    auto r = root_of_unity_ratio(lhs, rhs);
    rep.status = r ? CheckReport::Status::Pass : CheckReport::Status::Fail;
    rep.witness = Json::object();
    if (r) {
        rep.witness["sign_exp"] = r->first;
        rep.witness["zeta_exp"] = r->second;
    }
    rep.ms = sw.ms();
    return rep;
}

/// Gauss-sum norm compatibility defect (lemma: the two sides differ by
/// zeta^a l^b).
inline CheckReport check_norm_compat_defect(CharTable& tab_n, CharTable& tab_dn) {
    detail::Stopwatch sw;
    const PrimeSite& site = tab_n.site();
    CheckReport rep;
    rep.check = "norm_compat_defect";
    rep.params = {{"p", std::to_string(site.p)},
                  {"n", std::to_string(site.n)},
                  {"l", std::to_string(site.l)}};
    try {
        NormDefect d = norm_compat_defect(tab_n, tab_dn);
        rep.status = CheckReport::Status::Pass;
        rep.witness = Json::object();
        rep.witness["sign_exp"] = d.sign_exp;
        rep.witness["zeta_exp"] = d.zeta_exp;
        rep.witness["l_exp"] = d.l_exp;
    } catch (const std::runtime_error& err) {
        rep.status = CheckReport::Status::Fail;
        rep.witness["error"] = err.what();
    }
    rep.ms = sw.ms();
    return rep;
}

/// Grid configuration for the verification suite.
struct RunConfig {
    std::vector<long> primes = {3, 5, 7};
    int n_max = 1;
    long l_max = 200;
    long t_max = 12;          // delta-generator range
    std::vector<long> psi_exponents;  // empty: all valid per prime
    int precision = 3;        // p-adic digits N
    int hensel_prec = 8;      // M
    unsigned long seed = 0;
    long q_max = 8000000;
    long norm_compat_dim_max = 4096;  // composite-field dimension bound for the defect check
    std::set<std::string> checks;  // empty: all
    std::string out_path;
    std::string csv_path;
    std::string cache_path;

    bool enabled(const std::string& name) const { return checks.empty() || checks.count(name); }
};

/// The sampled deltas for one (p, n): generators t - sigma_t for
/// t = 2..min(p^{n+1}-1, t_max), the constant p^{n+1}, and two seeded
/// random Z-combinations with coefficients in [-3, 3]. Natural expansion
/// certificates ride along.
struct DeltaSample {
    GroupRingElt delta;
    SprimeIdeal::Certificate cert;
    std::string label;
};

inline std::vector<DeltaSample> sample_deltas(long p, int n, long t_max, unsigned long seed) {
    const SprimeIdeal& S = SprimeIdeal::get(p, n);
    auto g = S.ring();
    const auto& gens = S.generators();

    // map t -> generator index in S.generators() (t - sigma_t listed first)
    std::map<long, size_t> t_index;
    {
        size_t idx = 0;
        for (long t = 2; t < g->pn1; ++t)
            if (t % p != 0) t_index[t] = idx++;
    }
    size_t const_index = gens.size() - 1;

    std::vector<DeltaSample> out;
    auto empty_cert = [&] {
        SprimeIdeal::Certificate c;
        c.multipliers.assign(gens.size(), GroupRingElt::zero(g));
        return c;
    };

    std::vector<size_t> base_indices;
    for (long t = 2; t <= std::min(g->pn1 - 1, t_max); ++t) {
        if (t % p == 0) continue;
        DeltaSample s{gens[t_index.at(t)], empty_cert(), "t_minus_sigma_" + std::to_string(t)};
        s.cert.multipliers[t_index.at(t)] = GroupRingElt::sigma(g, 1);
        base_indices.push_back(t_index.at(t));
        out.push_back(std::move(s));
    }
    {
        DeltaSample s{gens[const_index], empty_cert(), "p_pow_" + std::to_string(g->pn1)};
        s.cert.multipliers[const_index] = GroupRingElt::sigma(g, 1);
        base_indices.push_back(const_index);
        out.push_back(std::move(s));
    }

    std::mt19937 rng(static_cast<unsigned long>(seed + 1000003 * p + 97 * n));
    std::uniform_int_distribution<long> coeff(-3, 3);
    for (int trial = 0; trial < 2; ++trial) {
        DeltaSample s{GroupRingElt::zero(g), empty_cert(), "random_combo_" + std::to_string(trial)};
        for (size_t gi : base_indices) {
            long c = coeff(rng);
            if (c == 0) continue;
            s.delta = s.delta + Rat(c) * gens[gi];
            s.cert.multipliers[gi] = s.cert.multipliers[gi] + GroupRingElt::constant(g, c);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline bool is_prime_long(long x) {
    if (x < 2) return false;
    for (long d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

/// Optional site cache: remembers the deterministic factor choice and a
/// known generator of F_q^* per (p, n, l, M). Discrete-log tables are not
/// cached (they are q-sized and cheaper to rebuild than to parse).
class SiteCache {
public:
    static std::string key(long l, long p, int n, int hensel_prec) {
        return "p" + std::to_string(p) + "_n" + std::to_string(n) + "_l" + std::to_string(l) +
               "_M" + std::to_string(hensel_prec);
    }

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) return;  // absent cache is fine
        Json j = Json::parse(in, nullptr, false);
        if (!j.is_discarded() && j.contains("sites") && j["sites"].is_object()) data_ = j["sites"];
    }

    void save(const std::string& path) const {
        Json j = Json::object();
        j["version"] = "1";
        j["sites"] = data_;
        std::ofstream out(path + ".tmp", std::ios::trunc);
        out << j.dump(1);
        out.close();
        std::rename((path + ".tmp").c_str(), path.c_str());
    }

    void apply(PrimeSite::Options& opts, long l, long p, int n) const {
        auto it = data_.find(key(l, p, n, opts.hensel_prec));
        if (it == data_.end()) return;
        if (it->contains("factor_index")) opts.factor_index = (*it)["factor_index"].get<int>();
        if (it->contains("generator")) opts.generator_hint = (*it)["generator"].get<long>();
    }

    void record(const PrimeSite& site) {
        Json e = Json::object();
        e["factor_index"] = site.factor_index;
        e["generator"] = site.encode(site.fq_generator);
        data_[key(site.l, site.p, site.n, site.hensel_prec)] = e;
    }

    size_t size() const { return data_.size(); }

private:
    Json data_ = Json::object();
};

/// Executes the section-2 suite over the configured grid. Failures never
/// abort the run; infeasible or out-of-scope entries are reported as skips
/// with a reason.
inline std::vector<CheckReport> run_grid(const RunConfig& cfg, SiteCache* cache = nullptr) {
    std::vector<CheckReport> out;

    auto skip = [&](const std::string& check, std::map<std::string, std::string> params,
                    const std::string& reason) {
        CheckReport rep;
        rep.check = check;
        rep.params = std::move(params);
        rep.status = CheckReport::Status::Skip;
        rep.witness = Json::object();
        rep.witness["reason"] = reason;
        out.push_back(std::move(rep));
    };

    // A thrown check is a failure with the error as witness, never an abort.
    auto guarded = [&](const std::string& check, const std::map<std::string, std::string>& params,
                       auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            CheckReport rep;
            rep.check = check;
            rep.params = params;
            rep.status = CheckReport::Status::Fail;
            rep.witness = Json::object();
            rep.witness["error"] = e.what();
            out.push_back(std::move(rep));
        }
    };

    for (long p : cfg.primes) {
        for (int n = 0; n <= cfg.n_max; ++n) {
            auto deltas = sample_deltas(p, n, cfg.t_max, cfg.seed);
            if (n >= 1 && cfg.enabled("restriction_surjectivity"))
                guarded("restriction_surjectivity",
                        {{"p", std::to_string(p)}, {"n", std::to_string(n)}},
                        [&] { return check_restriction_surjectivity(p, n); });

            for (long l = 2; l <= cfg.l_max; ++l) {
                if (!is_prime_long(l)) continue;
                std::map<std::string, std::string> base_params = {
                    {"p", std::to_string(p)}, {"n", std::to_string(n)}, {"l", std::to_string(l)}};
                if (l == p) {
                    skip("site", base_params, "l = p excluded");
                    continue;
                }
                PrimeSite::Options opts;
                opts.hensel_prec = cfg.hensel_prec;
                opts.q_max = cfg.q_max;
                if (cache) cache->apply(opts, l, p, n);
                std::unique_ptr<PrimeSite> site;
                try {
                    site = std::make_unique<PrimeSite>(PrimeSite::make(l, p, n, opts));
                } catch (const SiteTooLarge& e) {
                    skip("site", base_params, "q = " + e.q_value.get_str() + " exceeds q_max");
                    continue;
                }
                if (cache) cache->record(*site);
                CharTable tab(*site);

                if (cfg.enabled("gauss_norm"))
                    guarded("gauss_norm", base_params, [&] { return check_gauss_norm(tab); });

                bool split_whitelisted = class_number_one(p, n) && site->f == 1;

                for (const DeltaSample& d : deltas) {
                    auto labeled = std::map<std::string, std::string>(base_params);
                    labeled["delta"] = d.label;
                    if (cfg.enabled("stickelberger"))
                        guarded("stickelberger", labeled, [&] {
                            CheckReport r = check_stickelberger(tab, d.delta, &d.cert);
                            r.params["delta"] = d.label;
                            return r;
                        });
                    if (cfg.enabled("beta_identity"))
                        guarded("beta_identity", labeled, [&] {
                            CheckReport r = check_beta_identity(tab, d.delta, &d.cert);
                            r.params["delta"] = d.label;
                            return r;
                        });
                    if (cfg.enabled("weil_congruence")) {
                        if (split_whitelisted) {
                            guarded("weil_congruence", labeled, [&] {
                                CheckReport r = check_weil_congruence(tab, d.delta, &d.cert);
                                r.params["delta"] = d.label;
                                return r;
                            });
                        } else {
                            auto pp = base_params;
                            pp["delta"] = d.label;
                            skip("weil_congruence", pp,
                                 class_number_one(p, n) ? "site not split" : "outside h = 1 whitelist");
                        }
                    }
                }

                if (cfg.enabled("weil_construct")) {
                    if (split_whitelisted) {
                        auto g = GroupRing::make(p, n);
                        GroupRingElt one_minus_conj =
                            GroupRingElt::sigma(g, 1) - GroupRingElt::sigma(g, -1);
                        guarded("weil_construct", base_params, [&] {
                            return construct_weil_from_annihilator(*site, one_minus_conj);
                        });
                        GroupRingElt beta = minus_part(stickelberger_multiply(deltas[0].delta));
                        guarded("weil_construct", base_params,
                                [&] { return construct_weil_from_annihilator(*site, beta); });
                    } else {
                        skip("weil_construct", base_params,
                             class_number_one(p, n) ? "site not split" : "outside h = 1 whitelist");
                    }
                }

                if (n >= 1 && cfg.enabled("norm_commutation")) {
                    std::unique_ptr<PrimeSite> site_dn;
                    try {
                        site_dn = std::make_unique<PrimeSite>(compatible_lower_site(*site, cfg.q_max));
                    } catch (const SiteTooLarge& e) {
                        skip("norm_commutation", base_params,
                             "lower level q = " + e.q_value.get_str() + " exceeds q_max");
                    }
                    if (site_dn) {
                        CharTable tab_dn(*site_dn);
                        for (const DeltaSample& d : deltas) {
                            auto labeled = std::map<std::string, std::string>(base_params);
                            labeled["delta0"] = d.label;
                            guarded("norm_commutation", labeled, [&] {
                                CheckReport r = check_norm_commutation(tab, tab_dn, d.delta, &d.cert);
                                r.params["delta0"] = d.label;
                                return r;
                            });
                        }
                        if (cfg.enabled("norm_compat_defect")) {
                            long dim = static_cast<long>(site->phi) * (l - 1);
                            if (dim <= cfg.norm_compat_dim_max)
                                guarded("norm_compat_defect", base_params,
                                        [&] { return check_norm_compat_defect(tab, tab_dn); });
                            else
                                skip("norm_compat_defect", base_params,
                                     "composite dimension " + std::to_string(dim) +
                                         " beyond configured bound");
                        }
                    } else if (cfg.enabled("norm_compat_defect")) {
                        skip("norm_compat_defect", base_params, "lower level site infeasible");
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace cyclo
