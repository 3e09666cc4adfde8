#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "icalign/cmat.hpp"
#include "icalign/linalg.hpp"
#include "icalign/network.hpp"

namespace icalign {

// Closed-form evaluation of the design objectives and the sum rate.
// All rates are log base 2 (bits per channel use).

/// log2 |I + Rhat^-1 a H F F* H*| for one user, via Cholesky log-dets of
/// the two Hermitian positive-definite factors.
inline double user_rate(const NetworkConfig& cfg, const ChannelRealization& real,
                        const std::vector<CMat>& F, const NoiseModel& noise, int k) {
    const CMat rhat = interference_plus_noise_cov(cfg, real, F, noise, k);
    const CMat hf = real.H[k][k] * F[k];
    const CMat sig = rhat + (hf * hf.adjoint()) * cfg.alpha[k][k];
    return (logdet_hpd(sig.hermitize(), "signal-plus-noise covariance") -
            logdet_hpd(rhat, "interference-plus-noise covariance")) / std::log(2.0);
}

inline double sum_rate(const NetworkConfig& cfg, const ChannelRealization& real,
                       const std::vector<CMat>& F, const NoiseModel& noise) {
    double r = 0.0;
    for (int k = 0; k < cfg.K; ++k) r += user_rate(cfg, real, F, noise, k);
    return r;
}

/// Post-processing coordinated interference power:
/// sum_k sum_{l != k} alpha[k][l] ||Phi_k* H[k][l] F_l||_F^2.
inline double leakage(const NetworkConfig& cfg, const ChannelRealization& real,
                      const std::vector<CMat>& F, const std::vector<CMat>& Phi) {
    double j = 0.0;
    for (int k = 0; k < cfg.K; ++k)
        for (int l = 0; l < cfg.K; ++l) {
            if (l == k) continue;
            const CMat t = Phi[k].adjoint() * real.H[k][l] * F[l];
            const double nf = t.norm_f();
            j += cfg.alpha[k][l] * nf * nf;
        }
    return j;
}

/// Interference plus noise leakage: leakage + sum_k tr(Phi_k* R_k Phi_k).
inline double inl(const NetworkConfig& cfg, const ChannelRealization& real,
                  const std::vector<CMat>& F, const std::vector<CMat>& Phi,
                  const NoiseModel& noise) {
    double j = leakage(cfg, real, F, Phi);
    for (int k = 0; k < cfg.K; ++k)
        j += (Phi[k].adjoint() * noise.R[k] * Phi[k]).trace().real();
    return j;
}

/// Expected sum of squared symbol-estimate errors, including the +sum_k S_k
/// constant so the value is a true expected squared error (>= 0).
inline double mse(const NetworkConfig& cfg, const ChannelRealization& real,
                  const std::vector<CMat>& F, const std::vector<CMat>& G,
                  const NoiseModel& noise) {
    double j = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        const CMat rhat = interference_plus_noise_cov(cfg, real, F, noise, k);
        const CMat hf = real.H[k][k] * F[k];
        const CMat cov = rhat + (hf * hf.adjoint()) * cfg.alpha[k][k];
        j += (G[k].adjoint() * cov * G[k]).trace().real();
        j -= 2.0 * std::sqrt(cfg.alpha[k][k]) * (G[k].adjoint() * hf).trace().real();
        j += cfg.S[k];
    }
    return j;
}

/// SINR of stream n at receiver k for receive vector g (column of G or Phi):
/// signal power over coordinated interference + inter-stream interference + noise.
inline double stream_sinr(const NetworkConfig& cfg, const ChannelRealization& real,
                          const std::vector<CMat>& F, const NoiseModel& noise, int k, int n,
                          const CMat& g) {
    const CMat hf = real.H[k][k] * F[k].col(n);
    const double sig = cfg.alpha[k][k] * std::norm(dot(g, hf));
    double den = (g.adjoint() * noise.R[k] * g)(0, 0).real();
    for (int l = 0; l < cfg.K; ++l) {
        if (l == k) continue;
        const CMat t = g.adjoint() * real.H[k][l] * F[l];
        const double nf = t.norm_f();
        den += cfg.alpha[k][l] * nf * nf;
    }
    for (int w = 0; w < cfg.S[k]; ++w) {
        if (w == n) continue;
        den += cfg.alpha[k][k] * std::norm(dot(g, real.H[k][k] * F[k].col(w)));
    }
    return sig / den;
}

/// Network SINR objective: total post-processing signal power divided by
/// total post-processing interference-plus-noise power across all streams.
inline double sinr_objective(const NetworkConfig& cfg, const ChannelRealization& real,
                             const std::vector<CMat>& F, const std::vector<CMat>& G,
                             const NoiseModel& noise) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        for (int n = 0; n < cfg.S[k]; ++n) {
            const CMat g = G[k].col(n);
            num += cfg.alpha[k][k] * std::norm(dot(g, real.H[k][k] * F[k].col(n)));
            den += (g.adjoint() * noise.R[k] * g)(0, 0).real();
            for (int l = 0; l < cfg.K; ++l) {
                if (l == k) continue;
                const CMat t = g.adjoint() * real.H[k][l] * F[l];
                const double nf = t.norm_f();
                den += cfg.alpha[k][l] * nf * nf;
            }
            for (int w = 0; w < cfg.S[k]; ++w) {
                if (w == n) continue;
                den += cfg.alpha[k][k] * std::norm(dot(g, real.H[k][k] * F[k].col(w)));
            }
        }
    }
    return num / den;
}

/// High-SNR slope of mean rate versus log2(SNR) over the top decade of the
/// sweep, i.e. bits per 3.01 dB: the empirical degrees of freedom.
inline double dof_slope(const std::map<double, double>& rate_by_gamma_db) {
    if (rate_by_gamma_db.size() < 2)
        throw ContractViolation("dof_slope: need at least two sweep points");
    const double top = rate_by_gamma_db.rbegin()->first;
    std::vector<double> x, y;
    for (const auto& [db, rate] : rate_by_gamma_db) {
        if (db < top - 10.0 - 1e-9) continue;
        x.push_back(db * std::log2(10.0) / 10.0); // log2(snr)
        y.push_back(rate);
    }
    if (x.size() < 2) throw ContractViolation("dof_slope: top decade has fewer than two points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

struct MetricReport {
    double sum_rate_bits = 0.0;
    double j_ia = 0.0, j_inl = 0.0, j_mse = 0.0, j_sinr = 0.0;
    std::vector<double> per_user_rate;
    std::vector<std::vector<double>> per_stream_sinr;
};

/// Evaluate every metric at one transceiver state. RX is interpreted as
/// the receive matrix set (Phi for subspace states, G otherwise); the
/// subspace objectives are meaningful when RX has orthonormal columns.
inline MetricReport evaluate_metrics(const NetworkConfig& cfg, const ChannelRealization& real,
                                     const std::vector<CMat>& F, const std::vector<CMat>& RX,
                                     const NoiseModel& noise) {
    MetricReport rep;
    rep.per_user_rate.resize(cfg.K);
    rep.per_stream_sinr.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        rep.per_user_rate[k] = user_rate(cfg, real, F, noise, k);
        rep.sum_rate_bits += rep.per_user_rate[k];
        rep.per_stream_sinr[k].resize(cfg.S[k]);
        for (int n = 0; n < cfg.S[k]; ++n)
            rep.per_stream_sinr[k][n] = stream_sinr(cfg, real, F, noise, k, n, RX[k].col(n));
    }
    rep.j_ia = leakage(cfg, real, F, RX);
    rep.j_inl = inl(cfg, real, F, RX, noise);
    rep.j_mse = mse(cfg, real, F, RX, noise);
    rep.j_sinr = sinr_objective(cfg, real, F, RX, noise);
    return rep;
}

} // namespace icalign
