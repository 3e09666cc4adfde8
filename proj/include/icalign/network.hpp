#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "icalign/cmat.hpp"
#include "icalign/errors.hpp"
#include "icalign/linalg.hpp"
#include "icalign/rng.hpp"

namespace icalign {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Rank-one out-of-network interferer: a single stream with its own power
/// and a per-receiver path loss.
struct InterfererConfig {
    double rho_e = 1.0;          // linear transmit power
    bool track_rho = false;      // follow the swept in-network rho
    std::vector<double> alpha_e; // per-receiver path loss, length K
    int m_e = 2;                 // transmit antennas
};

/// Static description of a K-user interference channel.
struct NetworkConfig {
    int K = 0;
    std::vector<int> M, N, S;                // per-user antenna/stream counts
    std::vector<double> rho;                 // per-user transmit power, linear
    std::vector<std::vector<double>> alpha;  // K x K path loss, alpha[k][l]: tx l -> rx k
    std::vector<double> noise_sigma2;        // per-receiver white noise variance
    std::optional<InterfererConfig> interferer;

    static NetworkConfig symmetric(int k_users, int m, int n, int s, double rho_lin,
                                   double alpha_cross = 1.0, double sigma2 = 1.0) {
        NetworkConfig c;
        c.K = k_users;
        c.M.assign(k_users, m);
        c.N.assign(k_users, n);
        c.S.assign(k_users, s);
        c.rho.assign(k_users, rho_lin);
        c.alpha.assign(k_users, std::vector<double>(k_users, alpha_cross));
        for (int i = 0; i < k_users; ++i) c.alpha[i][i] = 1.0;
        c.noise_sigma2.assign(k_users, sigma2);
        return c;
    }

    void set_all_rho(double rho_lin) {
        for (double& r : rho) r = rho_lin;
        if (interferer && interferer->track_rho) interferer->rho_e = rho_lin;
    }

    void set_cross_alpha(double a) {
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < K; ++l)
                if (k != l) alpha[k][l] = a;
    }

    void validate() const {
        auto need = [&](bool ok, const std::string& msg) {
            if (!ok) throw ContractViolation("NetworkConfig: " + msg);
        };
        need(K >= 1, "K must be >= 1");
        need((int)M.size() == K && (int)N.size() == K && (int)S.size() == K,
             "M/N/S must have length K");
        need((int)rho.size() == K && (int)noise_sigma2.size() == K,
             "rho/noise_sigma2 must have length K");
        need((int)alpha.size() == K, "alpha must be K x K");
        for (int k = 0; k < K; ++k) {
            need((int)alpha[k].size() == K, "alpha must be K x K");
            need(S[k] >= 1 && S[k] <= std::min(M[k], N[k]),
                 "streams must satisfy 1 <= S <= min(M, N) for user " + std::to_string(k));
            need(rho[k] >= 0.0, "rho must be >= 0");
            need(noise_sigma2[k] > 0.0, "noise_sigma2 must be > 0");
            for (int l = 0; l < K; ++l) need(alpha[k][l] >= 0.0, "alpha must be >= 0");
        }
        if (interferer) {
            need(interferer->rho_e >= 0.0, "interferer power must be >= 0");
            need((int)interferer->alpha_e.size() == K, "interferer alpha_e must have length K");
            need(interferer->m_e >= 1, "interferer antenna count must be >= 1");
            for (double a : interferer->alpha_e) need(a >= 0.0, "alpha_e must be >= 0");
        }
    }
};

/// One draw of all K^2 small-scale fading matrices plus the interferer
/// channels. Entries are CN(0,1); path loss stays in the config.
struct ChannelRealization {
    std::vector<std::vector<CMat>> H;      // H[k][l]: N[k] x M[l]
    std::optional<std::vector<CMat>> H_E;  // N[k] x M_E
    std::optional<CMat> f_E;               // M_E x 1, unit norm
};

/// Per-receiver noise covariance (white floor plus any uncoordinated
/// interference), Hermitian PSD.
struct NoiseModel {
    std::vector<CMat> R;
};

/// Draw order is fixed: H[0][0], H[0][1], ..., H[K-1][K-1] entry
/// row-major, then the interferer channels, then f_E.
inline ChannelRealization draw_realization(const NetworkConfig& cfg, Rng& rng) {
    cfg.validate();
    ChannelRealization real;
    real.H.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        real.H[k].reserve(cfg.K);
        for (int l = 0; l < cfg.K; ++l) {
            CMat h = rng.cgauss_matrix(cfg.N[k], cfg.M[l]);
            const Svd f = svd(h);
            if (!(f.sigma.back() > 0.0))
                throw NumericFailure("draw_realization: rank-deficient channel draw");
            real.H[k].push_back(std::move(h));
        }
    }
    if (cfg.interferer) {
        std::vector<CMat> he;
        he.reserve(cfg.K);
        for (int k = 0; k < cfg.K; ++k)
            he.push_back(rng.cgauss_matrix(cfg.N[k], cfg.interferer->m_e));
        real.H_E = std::move(he);
        real.f_E = rng.unit_vector(cfg.interferer->m_e);
    }
    return real;
}

/// R_k = sigma2_k I + alpha_E[k] rho_E (H_E f_E)(H_E f_E)*.
inline NoiseModel effective_noise_cov(const NetworkConfig& cfg, const ChannelRealization& real) {
    NoiseModel nm;
    nm.R.reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        CMat r = CMat::identity(cfg.N[k]) * cfg.noise_sigma2[k];
        if (cfg.interferer) {
            const CMat dir = (*real.H_E)[k] * (*real.f_E);
            r += outer(dir, dir) * (cfg.interferer->alpha_e[k] * cfg.interferer->rho_e);
        }
        nm.R.push_back(r.hermitize());
    }
    return nm;
}

/// Interference-plus-noise covariance at receiver k:
/// R_k + sum_{l != k} alpha[k][l] H[k][l] F_l F_l* H[k][l]*.
inline CMat interference_plus_noise_cov(const NetworkConfig& cfg, const ChannelRealization& real,
                                        const std::vector<CMat>& F, const NoiseModel& noise,
                                        int k) {
    CMat r = noise.R[k];
    for (int l = 0; l < cfg.K; ++l) {
        if (l == k) continue;
        if (F[l].rows() != cfg.M[l] || F[l].cols() != cfg.S[l])
            throw ContractViolation("interference_plus_noise_cov: precoder " + std::to_string(l) +
                                    " has shape " + F[l].shape_str());
        const CMat hf = real.H[k][l] * F[l];
        r += (hf * hf.adjoint()) * cfg.alpha[k][l];
    }
    return r.hermitize();
}

} // namespace icalign
