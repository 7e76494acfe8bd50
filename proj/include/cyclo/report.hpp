#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclo/verify.hpp"

namespace cyclo {

inline Json check_report_to_json(const CheckReport& r) {
    Json j = Json::object();
    j["check"] = r.check;
    Json params = Json::object();
    for (auto& [k, v] : r.params) params[k] = v;
    j["params"] = params;
    j["status"] = CheckReport::status_name(r.status);
    j["witness"] = r.witness;
    j["ms"] = r.ms;
    return j;
}

inline Json config_to_json(const RunConfig& cfg) {
    Json j = Json::object();
    j["primes"] = cfg.primes;
    j["n_max"] = cfg.n_max;
    j["l_max"] = cfg.l_max;
    j["t_max"] = cfg.t_max;
    j["psi_exponents"] = cfg.psi_exponents;
    j["precision"] = cfg.precision;
    j["hensel_prec"] = cfg.hensel_prec;
    j["seed"] = cfg.seed;
    j["q_max"] = cfg.q_max;
    j["norm_compat_dim_max"] = cfg.norm_compat_dim_max;
    j["checks"] = std::vector<std::string>(cfg.checks.begin(), cfg.checks.end());
    return j;
}

/// FNV-1a over the canonical report dump with timing fields removed; the
/// hash is what determinism is measured against.
inline std::string determinism_hash(const Json& report) {
    Json stripped = report;
    if (stripped.contains("determinism_hash")) stripped.erase("determinism_hash");
    if (stripped.contains("results"))
        for (auto& r : stripped["results"]) r.erase("ms");
    std::string dump = stripped.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Json build_report(const RunConfig& cfg, const std::vector<CheckReport>& results) {
    Json j = Json::object();
    j["version"] = "1";
    j["config"] = config_to_json(cfg);
    Json arr = Json::array();
    long pass = 0, fail = 0, skipped = 0;
    for (const CheckReport& r : results) {
        arr.push_back(check_report_to_json(r));
        switch (r.status) {
            case CheckReport::Status::Pass: ++pass; break;
            case CheckReport::Status::Fail: ++fail; break;
            case CheckReport::Status::Skip: ++skipped; break;
        }
    }
    j["results"] = arr;
    Json agg = Json::object();
    agg["pass"] = pass;
    agg["fail"] = fail;
    agg["skipped"] = skipped;
    j["aggregate"] = agg;
    j["determinism_hash"] = determinism_hash(j);
    return j;
}

/// Atomic write: temp file in place, then rename.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_file_atomic: cannot open " + tmp);
        out << contents;
        if (!out) throw std::runtime_error("write_file_atomic: short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("write_file_atomic: rename failed for " + path);
}

inline std::string report_csv(const std::vector<CheckReport>& results) {
    std::string csv = "check,params,status,ms\n";
    for (const CheckReport& r : results) {
        std::string params;
        for (auto& [k, v] : r.params) {
            if (!params.empty()) params += ";";
            params += k + "=" + v;
        }
        csv += r.check + ",\"" + params + "\"," + CheckReport::status_name(r.status) + "," +
               std::to_string(r.ms) + "\n";
    }
    return csv;
}

}  // namespace cyclo
