#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "icalign/errors.hpp"
#include "icalign/network.hpp"

namespace icalign {

// Scenario file format (JSON):
//   {
//     "K": 3,
//     "M": 2,              // scalar broadcasts to all users; or list of K
//     "N": 2,
//     "S": 1,
//     "rho_db": 20.0,      // scalar or list of K
//     "alpha": 1.0,        // scalar -> off-diagonal value (diagonal = 1); or K x K matrix
//     "noise_sigma2": 1.0, // scalar or list of K
//     "interferer": {      // optional
//       "rho_e_db": 0.0,   // number, or the string "track_rho"
//       "alpha_e": [1, 0, 0],
//       "m_e": 2           // optional, default 2
//     }
//   }

namespace detail {

inline std::vector<double> broadcast_real(const nlohmann::json& j, int k, const std::string& key) {
    if (j.is_number()) return std::vector<double>(k, j.get<double>());
    if (j.is_array()) {
        auto v = j.get<std::vector<double>>();
        if ((int)v.size() != k)
            throw ContractViolation("scenario: " + key + " list must have length K");
        return v;
    }
    throw ContractViolation("scenario: " + key + " must be a number or a list");
}

inline std::vector<int> broadcast_int(const nlohmann::json& j, int k, const std::string& key) {
    if (j.is_number_integer()) return std::vector<int>(k, j.get<int>());
    if (j.is_array()) {
        auto v = j.get<std::vector<int>>();
        if ((int)v.size() != k)
            throw ContractViolation("scenario: " + key + " list must have length K");
        return v;
    }
    throw ContractViolation("scenario: " + key + " must be an integer or a list");
}

} // namespace detail

inline NetworkConfig config_from_json(const nlohmann::json& j) {
    for (const char* key : {"K", "M", "N", "S", "rho_db", "noise_sigma2"})
        if (!j.contains(key)) throw ContractViolation(std::string("scenario: missing key ") + key);

    NetworkConfig cfg;
    cfg.K = j.at("K").get<int>();
    if (cfg.K < 1) throw ContractViolation("scenario: K must be >= 1");
    cfg.M = detail::broadcast_int(j.at("M"), cfg.K, "M");
    cfg.N = detail::broadcast_int(j.at("N"), cfg.K, "N");
    cfg.S = detail::broadcast_int(j.at("S"), cfg.K, "S");
    const auto rho_db = detail::broadcast_real(j.at("rho_db"), cfg.K, "rho_db");
    cfg.rho.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) cfg.rho[k] = db_to_linear(rho_db[k]);
    cfg.noise_sigma2 = detail::broadcast_real(j.at("noise_sigma2"), cfg.K, "noise_sigma2");

    cfg.alpha.assign(cfg.K, std::vector<double>(cfg.K, 1.0));
    if (j.contains("alpha")) {
        const auto& ja = j.at("alpha");
        if (ja.is_number()) {
            const double a = ja.get<double>();
            for (int k = 0; k < cfg.K; ++k)
                for (int l = 0; l < cfg.K; ++l) cfg.alpha[k][l] = (k == l) ? 1.0 : a;
        } else if (ja.is_array()) {
            auto m = ja.get<std::vector<std::vector<double>>>();
            if ((int)m.size() != cfg.K)
                throw ContractViolation("scenario: alpha matrix must be K x K");
            for (int k = 0; k < cfg.K; ++k) {
                if ((int)m[k].size() != cfg.K)
                    throw ContractViolation("scenario: alpha matrix must be K x K");
                cfg.alpha[k] = m[k];
            }
        } else {
            throw ContractViolation("scenario: alpha must be a number or a K x K matrix");
        }
    }

    if (j.contains("interferer") && !j.at("interferer").is_null()) {
        const auto& ji = j.at("interferer");
        InterfererConfig ic;
        if (!ji.contains("rho_e_db") || !ji.contains("alpha_e"))
            throw ContractViolation("scenario: interferer needs rho_e_db and alpha_e");
        const auto& jr = ji.at("rho_e_db");
        if (jr.is_string()) {
            if (jr.get<std::string>() != "track_rho")
                throw ContractViolation("scenario: interferer rho_e_db string must be 'track_rho'");
            ic.track_rho = true;
            ic.rho_e = cfg.rho[0];
        } else {
            ic.rho_e = db_to_linear(jr.get<double>());
        }
        ic.alpha_e = detail::broadcast_real(ji.at("alpha_e"), cfg.K, "alpha_e");
        if (ji.contains("m_e")) ic.m_e = ji.at("m_e").get<int>();
        cfg.interferer = ic;
    }

    cfg.validate();
    return cfg;
}

inline NetworkConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("scenario: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ContractViolation("scenario: " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

} // namespace icalign
