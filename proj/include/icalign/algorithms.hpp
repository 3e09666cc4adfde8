#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "icalign/cmat.hpp"
#include "icalign/errors.hpp"
#include "icalign/linalg.hpp"
#include "icalign/metrics.hpp"
#include "icalign/network.hpp"
#include "icalign/rng.hpp"

namespace icalign {

enum class AlgorithmKind {
    IterIA,        // minimize coordinated interference leakage
    MinINL,        // minimize interference plus noise leakage
    JointMMSE,     // joint precoder/receiver MMSE with power inequality
    MaxSINR,       // maximize the network SINR ratio, per-column updates
    ApproxMaxSINR, // per-stream SINR baseline via the reciprocal network
    Greedy,        // selfish whitened eigenbeamforming sweeps
    RandomBF,      // random orthonormal precoders, no iteration
    ClosedFormIA3, // three-user closed-form alignment
};

inline std::string to_string(AlgorithmKind k) {
    switch (k) {
        case AlgorithmKind::IterIA: return "IterIA";
        case AlgorithmKind::MinINL: return "MinINL";
        case AlgorithmKind::JointMMSE: return "JointMMSE";
        case AlgorithmKind::MaxSINR: return "MaxSINR";
        case AlgorithmKind::ApproxMaxSINR: return "ApproxMaxSINR";
        case AlgorithmKind::Greedy: return "Greedy";
        case AlgorithmKind::RandomBF: return "RandomBF";
        case AlgorithmKind::ClosedFormIA3: return "ClosedFormIA3";
    }
    throw ContractViolation("to_string: unknown AlgorithmKind");
}

inline AlgorithmKind algorithm_from_string(const std::string& s) {
    for (AlgorithmKind k :
         {AlgorithmKind::IterIA, AlgorithmKind::MinINL, AlgorithmKind::JointMMSE,
          AlgorithmKind::MaxSINR, AlgorithmKind::ApproxMaxSINR, AlgorithmKind::Greedy,
          AlgorithmKind::RandomBF, AlgorithmKind::ClosedFormIA3})
        if (to_string(k) == s) return k;
    throw ContractViolation("unknown algorithm name: " + s);
}

/// Precoders F[l] (M_l x S_l) and receive matrices RX[k] (N_k x S_k).
/// RX holds Phi (orthonormal) for the subspace algorithms and G otherwise.
struct TransceiverState {
    std::vector<CMat> F;
    std::vector<CMat> RX;
};

struct AlgorithmTrace {
    std::vector<double> objective; // one entry per full sweep
    int iterations_run = 0;
    bool converged = false;
    int regularized_updates = 0; // max-SINR denominators that needed a trace floor
    TransceiverState final_state;
};

// ---------------------------------------------------------------------------
// Subspace updates
// ---------------------------------------------------------------------------

/// F_l = sqrt(rho_l/S_l) * eigenvectors of the S_l smallest eigenvalues of
/// sum_{k != l} alpha[k][l] H[k][l]* Phi_k Phi_k* H[k][l].
/// Shared by the leakage and INL objectives; precoders are independent of
/// each other within a sweep.
inline std::vector<CMat> ia_precoder_update(const NetworkConfig& cfg,
                                            const ChannelRealization& real,
                                            const std::vector<CMat>& Phi) {
    std::vector<CMat> F;
    F.reserve(cfg.K);
    for (int l = 0; l < cfg.K; ++l) {
        CMat acc = CMat::zeros(cfg.M[l], cfg.M[l]);
        for (int k = 0; k < cfg.K; ++k) {
            if (k == l) continue;
            const CMat hp = real.H[k][l].adjoint() * Phi[k];
            acc += (hp * hp.adjoint()) * cfg.alpha[k][l];
        }
        F.push_back(nu_min(acc.hermitize(), cfg.S[l]) * std::sqrt(cfg.rho[l] / cfg.S[l]));
    }
    return F;
}

/// Phi_k = eigenvectors of the S_k smallest eigenvalues of the coordinated
/// interference covariance at receiver k.
inline std::vector<CMat> ia_subspace_update(const NetworkConfig& cfg,
                                            const ChannelRealization& real,
                                            const std::vector<CMat>& F) {
    std::vector<CMat> Phi;
    Phi.reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        CMat acc = CMat::zeros(cfg.N[k], cfg.N[k]);
        for (int l = 0; l < cfg.K; ++l) {
            if (l == k) continue;
            const CMat hf = real.H[k][l] * F[l];
            acc += (hf * hf.adjoint()) * cfg.alpha[k][l];
        }
        Phi.push_back(nu_min(acc.hermitize(), cfg.S[k]));
    }
    return Phi;
}

/// Same as ia_subspace_update with the noise covariance added to the
/// accumulator, so the subspace also avoids strong noise directions.
inline std::vector<CMat> inl_subspace_update(const NetworkConfig& cfg,
                                             const ChannelRealization& real,
                                             const std::vector<CMat>& F,
                                             const NoiseModel& noise) {
    std::vector<CMat> Phi;
    Phi.reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k)
        Phi.push_back(nu_min(interference_plus_noise_cov(cfg, real, F, noise, k), cfg.S[k]));
    return Phi;
}

// ---------------------------------------------------------------------------
// Joint MMSE updates
// ---------------------------------------------------------------------------

/// Wiener receivers: G_k = (sum_l alpha H F F* H* + R_k)^-1 sqrt(alpha_kk) H_kk F_k.
inline std::vector<CMat> mmse_receiver_update(const NetworkConfig& cfg,
                                              const ChannelRealization& real,
                                              const std::vector<CMat>& F,
                                              const NoiseModel& noise) {
    std::vector<CMat> G;
    G.reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        CMat cov = interference_plus_noise_cov(cfg, real, F, noise, k);
        const CMat hf = real.H[k][k] * F[k];
        cov += (hf * hf.adjoint()) * cfg.alpha[k][k];
        G.push_back(solve_hpd(cov.hermitize(), hf * std::sqrt(cfg.alpha[k][k]),
                              "received-signal covariance (user " + std::to_string(k) + ")"));
    }
    return G;
}

namespace detail {

// ||F(mu)||_F^2 with F(mu) = Q diag(1/(lambda_i + mu)) C, in the
// eigenbasis of the quadratic term. Strictly decreasing in mu.
inline double mmse_power_at(const std::vector<double>& lambda, const std::vector<double>& crow2,
                            double mu) {
    double p = 0.0;
    for (size_t i = 0; i < lambda.size(); ++i) {
        if (crow2[i] == 0.0) continue;
        const double d = lambda[i] + mu;
        if (d <= 0.0) return std::numeric_limits<double>::infinity();
        p += crow2[i] / (d * d);
    }
    return p;
}

} // namespace detail

/// F_l = (mu_l I + sum_k alpha[k][l] H[k][l]* G_k G_k* H[k][l])^-1 sqrt(alpha_ll) H_ll* G_l
/// with mu_l = 0 when the unconstrained solution meets ||F_l||_F^2 <= rho_l,
/// otherwise the unique mu_l > 0 meeting the constraint with equality,
/// found by bracketed bisection on the monotone power curve.
/// mu_out, when given, receives the K multipliers.
inline std::vector<CMat> mmse_precoder_update(const NetworkConfig& cfg,
                                              const ChannelRealization& real,
                                              const std::vector<CMat>& G,
                                              std::vector<double>* mu_out = nullptr) {
    std::vector<CMat> F;
    F.reserve(cfg.K);
    if (mu_out) mu_out->assign(cfg.K, 0.0);
    for (int l = 0; l < cfg.K; ++l) {
        const int m = cfg.M[l];
        CMat t = CMat::zeros(m, m);
        for (int k = 0; k < cfg.K; ++k) {
            const CMat hg = real.H[k][l].adjoint() * G[k];
            t += (hg * hg.adjoint()) * cfg.alpha[k][l];
        }
        const CMat h = real.H[l][l].adjoint() * G[l] * std::sqrt(cfg.alpha[l][l]);
        if (h.norm_f() == 0.0) {
            F.push_back(CMat::zeros(m, cfg.S[l]));
            continue;
        }
        const HermEig et = herm_eig(t.hermitize());
        std::vector<double> lambda(et.values);
        for (double& v : lambda) v = std::max(v, 0.0);
        const CMat c = et.vectors.adjoint() * h; // coordinates of h in the eigenbasis
        std::vector<double> crow2(m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int s = 0; s < cfg.S[l]; ++s) crow2[i] += std::norm(c(i, s));

        const double rho = cfg.rho[l];
        double mu = 0.0;
        if (!(detail::mmse_power_at(lambda, crow2, 0.0) <= rho)) {
            double hi = 1.0;
            int expand = 0;
            while (detail::mmse_power_at(lambda, crow2, hi) >= rho) {
                hi *= 2.0;
                if (++expand > 200)
                    throw NumericFailure(
                        "mmse_precoder_update: bisection bracket not found for user " +
                        std::to_string(l) + " (rho=" + std::to_string(rho) +
                        ", power(2^200)=" +
                        std::to_string(detail::mmse_power_at(lambda, crow2, hi)) + ")");
            }
            double lo = 0.0;
            for (int it = 0; it < 300; ++it) {
                mu = 0.5 * (lo + hi);
                const double p = detail::mmse_power_at(lambda, crow2, mu);
                if (std::abs(p - rho) <= 1e-12 * rho) break;
                (p > rho ? lo : hi) = mu;
                if (hi - lo <= 1e-15 * std::max(1.0, hi)) {
                    mu = 0.5 * (lo + hi);
                    break;
                }
            }
        }
        CMat fl(m, cfg.S[l]);
        for (int i = 0; i < m; ++i) {
            for (int s = 0; s < cfg.S[l]; ++s) {
                cplx acc = 0.0;
                for (int k = 0; k < m; ++k) acc += et.vectors(i, k) * (c(k, s) / (lambda[k] + mu));
                fl(i, s) = acc;
            }
        }
        if (mu_out) (*mu_out)[l] = mu;
        F.push_back(std::move(fl));
    }
    return F;
}

// ---------------------------------------------------------------------------
// Max-SINR per-column updates
// ---------------------------------------------------------------------------

namespace detail {

struct SinrTotals {
    double num = 0.0, den = 0.0;
};

inline SinrTotals sinr_totals(const NetworkConfig& cfg, const ChannelRealization& real,
                              const std::vector<CMat>& F, const std::vector<CMat>& G,
                              const NoiseModel& noise) {
    SinrTotals t;
    for (int k = 0; k < cfg.K; ++k)
        for (int n = 0; n < cfg.S[k]; ++n) {
            const CMat g = G[k].col(n);
            t.num += cfg.alpha[k][k] * std::norm(dot(g, real.H[k][k] * F[k].col(n)));
            t.den += (g.adjoint() * noise.R[k] * g)(0, 0).real();
            for (int l = 0; l < cfg.K; ++l) {
                if (l == k) continue;
                const CMat x = g.adjoint() * real.H[k][l] * F[l];
                const double nf = x.norm_f();
                t.den += cfg.alpha[k][l] * nf * nf;
            }
            for (int w = 0; w < cfg.S[k]; ++w) {
                if (w == n) continue;
                t.den += cfg.alpha[k][k] * std::norm(dot(g, real.H[k][k] * F[k].col(w)));
            }
        }
    return t;
}

inline double quad_form(const CMat& a, const CMat& v) {
    return (v.adjoint() * a * v)(0, 0).real();
}

// Largest generalized eigenvector with the trace-floor fallback for a
// denominator that lost positive definiteness to round-off.
inline CMat ratio_argmax(const CMat& num, const CMat& den, int* regularized) {
    try {
        return gen_herm_eig_max(num.hermitize(), den.hermitize(), "SINR denominator").vector;
    } catch (const SingularMatrix&) {
        if (regularized) ++(*regularized);
        const double floor = 1e-12 * std::max(den.trace().real(), 1e-300);
        const CMat den2 = den.hermitize() + CMat::identity(den.rows()) * floor;
        return gen_herm_eig_max(num.hermitize(), den2, "regularized SINR denominator").vector;
    }
}

} // namespace detail

/// Replace column n of precoder l with the direction maximizing the global
/// SINR ratio, all other variables fixed; result scaled to ||f||^2 = rho/S.
/// The constant numerator/denominator remainders r and q enter as
/// (S_l/rho_l) r I and (S_l/rho_l) q I so the quotient equals the global
/// objective on the power sphere for any rho.
inline CMat maxsinr_precoder_column_update(const NetworkConfig& cfg,
                                           const ChannelRealization& real,
                                           const std::vector<CMat>& F,
                                           const std::vector<CMat>& G, const NoiseModel& noise,
                                           int l, int n, int* regularized = nullptr) {
    const int m = cfg.M[l];
    const CMat f = F[l].col(n);
    const CMat hgn = real.H[l][l].adjoint() * G[l].col(n);
    const CMat cmat = outer(hgn, hgn) * cfg.alpha[l][l];
    CMat amat = CMat::zeros(m, m);
    for (int w = 0; w < cfg.S[l]; ++w) {
        if (w == n) continue;
        const CMat hg = real.H[l][l].adjoint() * G[l].col(w);
        amat += outer(hg, hg) * cfg.alpha[l][l];
    }
    CMat bmat = CMat::zeros(m, m);
    for (int k = 0; k < cfg.K; ++k) {
        if (k == l) continue;
        for (int mm = 0; mm < cfg.S[k]; ++mm) {
            const CMat hg = real.H[k][l].adjoint() * G[k].col(mm);
            bmat += outer(hg, hg) * cfg.alpha[k][l];
        }
    }
    const auto tot = detail::sinr_totals(cfg, real, F, G, noise);
    const double r = std::max(tot.num - detail::quad_form(cmat, f), 0.0);
    const double q = std::max(tot.den - detail::quad_form(amat + bmat, f), 0.0);
    const double scale = cfg.S[l] / cfg.rho[l];
    const CMat num = cmat + CMat::identity(m) * (scale * r);
    const CMat den = amat + bmat + CMat::identity(m) * (scale * q);
    return detail::ratio_argmax(num, den, regularized) * std::sqrt(cfg.rho[l] / cfg.S[l]);
}

/// Receiver counterpart; unit-norm output, so the remainders embed without
/// power scaling and the receiver noise covariance stays inside the
/// denominator matrix (constant only when the noise is white).
inline CMat maxsinr_receiver_column_update(const NetworkConfig& cfg,
                                           const ChannelRealization& real,
                                           const std::vector<CMat>& F,
                                           const std::vector<CMat>& G, const NoiseModel& noise,
                                           int k, int n, int* regularized = nullptr) {
    const int nn = cfg.N[k];
    const CMat g = G[k].col(n);
    const CMat hfn = real.H[k][k] * F[k].col(n);
    const CMat cmat = outer(hfn, hfn) * cfg.alpha[k][k];
    CMat amat = CMat::zeros(nn, nn);
    for (int w = 0; w < cfg.S[k]; ++w) {
        if (w == n) continue;
        const CMat hf = real.H[k][k] * F[k].col(w);
        amat += outer(hf, hf) * cfg.alpha[k][k];
    }
    CMat bmat = CMat::zeros(nn, nn);
    for (int l = 0; l < cfg.K; ++l) {
        if (l == k) continue;
        for (int mm = 0; mm < cfg.S[l]; ++mm) {
            const CMat hf = real.H[k][l] * F[l].col(mm);
            bmat += outer(hf, hf) * cfg.alpha[k][l];
        }
    }
    const CMat gdep = amat + bmat + noise.R[k];
    const auto tot = detail::sinr_totals(cfg, real, F, G, noise);
    const double r = std::max(tot.num - detail::quad_form(cmat, g), 0.0);
    const double q = std::max(tot.den - detail::quad_form(gdep, g), 0.0);
    const CMat num = cmat + CMat::identity(nn) * r;
    const CMat den = gdep + CMat::identity(nn) * q;
    return detail::ratio_argmax(num, den, regularized);
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

/// Per-stream SINR baseline: each receive vector is the normalized MMSE
/// direction against all other streams, and precoders are obtained by the
/// same rule in the reciprocal network (links conjugate-transposed, roles
/// swapped, reciprocal streams carrying the forward per-stream powers and
/// white reciprocal noise), then rescaled to the power sphere.
inline TransceiverState approx_maxsinr_update(const NetworkConfig& cfg,
                                              const ChannelRealization& real,
                                              const TransceiverState& state,
                                              const NoiseModel& noise) {
    TransceiverState next;
    next.RX.reserve(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        CMat gk(cfg.N[k], cfg.S[k]);
        for (int n = 0; n < cfg.S[k]; ++n) {
            CMat b = noise.R[k];
            for (int l = 0; l < cfg.K; ++l)
                for (int m = 0; m < cfg.S[l]; ++m) {
                    if (l == k && m == n) continue;
                    const CMat hf = real.H[k][l] * state.F[l].col(m);
                    b += outer(hf, hf) * cfg.alpha[k][l];
                }
            CMat dir = solve_hpd(b.hermitize(),
                                 real.H[k][k] * state.F[k].col(n) * std::sqrt(cfg.alpha[k][k]),
                                 "per-stream covariance (user " + std::to_string(k) + ")");
            dir *= cplx(1.0 / dir.norm_f(), 0.0);
            gk.set_col(n, dir);
        }
        next.RX.push_back(std::move(gk));
    }
    next.F.reserve(cfg.K);
    for (int l = 0; l < cfg.K; ++l) {
        CMat fl(cfg.M[l], cfg.S[l]);
        for (int n = 0; n < cfg.S[l]; ++n) {
            CMat b = CMat::identity(cfg.M[l]) * cfg.noise_sigma2[l];
            for (int k = 0; k < cfg.K; ++k)
                for (int m = 0; m < cfg.S[k]; ++m) {
                    if (k == l && m == n) continue;
                    const CMat hg = real.H[k][l].adjoint() * next.RX[k].col(m);
                    b += outer(hg, hg) * (cfg.alpha[k][l] * cfg.rho[k] / cfg.S[k]);
                }
            CMat dir = solve_hpd(
                b.hermitize(), real.H[l][l].adjoint() * next.RX[l].col(n) * std::sqrt(cfg.alpha[l][l]),
                "reciprocal per-stream covariance (user " + std::to_string(l) + ")");
            dir *= cplx(std::sqrt(cfg.rho[l] / cfg.S[l]) / dir.norm_f(), 0.0);
            fl.set_col(n, dir);
        }
        next.F.push_back(std::move(fl));
    }
    return next;
}

/// One Gauss-Seidel sweep of selfish whitened eigenbeamforming: each user in
/// turn whitens its own interference-plus-noise and transmits on the top
/// right singular vectors of the whitened direct link.
inline std::vector<CMat> greedy_update(const NetworkConfig& cfg, const ChannelRealization& real,
                                       const std::vector<CMat>& F, const NoiseModel& noise) {
    std::vector<CMat> X = F;
    for (int l = 0; l < cfg.K; ++l) {
        const CMat w = interference_plus_noise_cov(cfg, real, X, noise, l);
        const CMat wh = hpd_inv_sqrt(w, "interference-plus-noise covariance (user " +
                                            std::to_string(l) + ")") *
                        (real.H[l][l] * std::sqrt(cfg.alpha[l][l]));
        const Svd f = svd(wh);
        X[l] = f.v.first_cols(cfg.S[l]) * std::sqrt(cfg.rho[l] / cfg.S[l]);
    }
    return X;
}

/// Orthonormal precoders from the left singular vectors of square i.i.d.
/// Gaussian draws; the non-iterative reference point.
inline std::vector<CMat> random_beamforming(const NetworkConfig& cfg, Rng& rng) {
    std::vector<CMat> F;
    F.reserve(cfg.K);
    for (int l = 0; l < cfg.K; ++l) {
        const Svd f = svd(rng.cgauss_matrix(cfg.M[l], cfg.M[l]));
        F.push_back(f.u.first_cols(cfg.S[l]) * std::sqrt(cfg.rho[l] / cfg.S[l]));
    }
    return F;
}

/// Three-user closed-form alignment: F_1 spans eigenvectors of the
/// round-trip channel product, F_2 and F_3 follow by matching spans.
/// `choice` selects which eigenvectors of the product seed F_1 (default:
/// the first S in the eigensolver's deterministic order).
inline std::vector<CMat> closed_form_ia_3user(const NetworkConfig& cfg,
                                              const ChannelRealization& real,
                                              std::vector<int> choice = {}) {
    if (cfg.K != 3) throw ContractViolation("closed_form_ia_3user: requires K = 3");
    const int m = cfg.M[0];
    for (int k = 0; k < 3; ++k)
        if (cfg.M[k] != m || cfg.N[k] != m)
            throw ContractViolation("closed_form_ia_3user: requires equal square antennas");
    if (m % 2 != 0 || cfg.S[0] != m / 2 || cfg.S[1] != m / 2 || cfg.S[2] != m / 2)
        throw ContractViolation("closed_form_ia_3user: requires S = M/2 with M even");

    const CMat e = solve_general(real.H[2][0], real.H[2][1], "H(3,1)") *
                   solve_general(real.H[0][1], real.H[0][2], "H(1,2)") *
                   solve_general(real.H[1][2], real.H[1][0], "H(2,3)");
    const EigGeneral eg = eig_general(e);
    const int s = cfg.S[0];
    if (choice.empty())
        for (int i = 0; i < s; ++i) choice.push_back(i);
    if ((int)choice.size() != s)
        throw ContractViolation("closed_form_ia_3user: eigenvector choice must have size S");
    CMat basis(m, s);
    for (int j = 0; j < s; ++j) {
        if (choice[j] < 0 || choice[j] >= m)
            throw ContractViolation("closed_form_ia_3user: eigenvector index out of range");
        basis.set_col(j, eg.vectors.col(choice[j]));
    }
    const CMat f1 = orthonormalize(basis);
    const CMat f2 = orthonormalize(solve_general(real.H[2][1], real.H[2][0] * f1, "H(3,2)"));
    const CMat f3 = orthonormalize(solve_general(real.H[1][2], real.H[1][0] * f1, "H(2,3)"));
    return {f1 * std::sqrt(cfg.rho[0] / s), f2 * std::sqrt(cfg.rho[1] / s),
            f3 * std::sqrt(cfg.rho[2] / s)};
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<CMat> maxsinr_init_receivers(const NetworkConfig& cfg,
                                                const ChannelRealization& real,
                                                const std::vector<CMat>& F,
                                                const NoiseModel& noise) {
    // Per-stream MMSE directions; well-defined before any G exists.
    TransceiverState tmp;
    tmp.F = F;
    return approx_maxsinr_update(cfg, real, tmp, noise).RX;
}

} // namespace detail

/// Random orthonormal precoders at full per-stream power plus one
/// receiver update of the given kind. The precoder draw consumes the
/// generator identically for every kind, so different algorithms can be
/// handed identical initializations from equal seeds.
inline TransceiverState init_state(AlgorithmKind kind, const NetworkConfig& cfg,
                                   const ChannelRealization& real, const NoiseModel& noise,
                                   Rng& rng) {
    TransceiverState st;
    st.F.reserve(cfg.K);
    for (int l = 0; l < cfg.K; ++l)
        st.F.push_back(orthonormalize(rng.cgauss_matrix(cfg.M[l], cfg.S[l])) *
                       std::sqrt(cfg.rho[l] / cfg.S[l]));
    switch (kind) {
        case AlgorithmKind::MinINL:
            st.RX = inl_subspace_update(cfg, real, st.F, noise);
            break;
        case AlgorithmKind::JointMMSE:
        case AlgorithmKind::Greedy:
            st.RX = mmse_receiver_update(cfg, real, st.F, noise);
            break;
        case AlgorithmKind::MaxSINR:
        case AlgorithmKind::ApproxMaxSINR:
            st.RX = detail::maxsinr_init_receivers(cfg, real, st.F, noise);
            break;
        default:
            st.RX = ia_subspace_update(cfg, real, st.F);
            break;
    }
    return st;
}

/// The objective each algorithm optimizes (rate for the baselines).
inline double algorithm_objective(AlgorithmKind kind, const NetworkConfig& cfg,
                                  const ChannelRealization& real, const TransceiverState& st,
                                  const NoiseModel& noise) {
    switch (kind) {
        case AlgorithmKind::IterIA:
        case AlgorithmKind::ClosedFormIA3: return leakage(cfg, real, st.F, st.RX);
        case AlgorithmKind::MinINL: return inl(cfg, real, st.F, st.RX, noise);
        case AlgorithmKind::JointMMSE: return mse(cfg, real, st.F, st.RX, noise);
        case AlgorithmKind::MaxSINR:
        case AlgorithmKind::ApproxMaxSINR: return sinr_objective(cfg, real, st.F, st.RX, noise);
        case AlgorithmKind::Greedy:
        case AlgorithmKind::RandomBF: return sum_rate(cfg, real, st.F, noise);
    }
    throw ContractViolation("algorithm_objective: unknown AlgorithmKind");
}

/// Alternate receiver and precoder updates until the objective decrement
/// falls below epsilon (or, for the minimizations, the objective itself
/// does), or max_iter sweeps. Max-SINR cycles columns receiver-first,
/// user index ascending, column index ascending, always against the
/// latest values. Objectives are recorded after each full sweep.
inline AlgorithmTrace run_algorithm(AlgorithmKind kind, const NetworkConfig& cfg,
                                    const ChannelRealization& real, Rng& rng, int max_iter = 100,
                                    double epsilon = 1e-8) {
    cfg.validate();
    if (max_iter < 1) throw ContractViolation("run_algorithm: max_iter must be >= 1");
    const NoiseModel noise = effective_noise_cov(cfg, real);
    AlgorithmTrace tr;

    if (kind == AlgorithmKind::RandomBF) {
        tr.final_state.F = random_beamforming(cfg, rng);
        tr.final_state.RX = ia_subspace_update(cfg, real, tr.final_state.F);
        tr.objective.push_back(sum_rate(cfg, real, tr.final_state.F, noise));
        tr.converged = true;
        return tr;
    }
    if (kind == AlgorithmKind::ClosedFormIA3) {
        tr.final_state.F = closed_form_ia_3user(cfg, real);
        tr.final_state.RX = ia_subspace_update(cfg, real, tr.final_state.F);
        tr.objective.push_back(leakage(cfg, real, tr.final_state.F, tr.final_state.RX));
        tr.converged = true;
        return tr;
    }

    TransceiverState st = init_state(kind, cfg, real, noise, rng);

    if (kind == AlgorithmKind::Greedy) {
        // Fixed sweep budget; no convergence claim, no early stop.
        const int sweeps = std::min(max_iter, 10);
        for (int t = 0; t < sweeps; ++t) {
            st.F = greedy_update(cfg, real, st.F, noise);
            tr.objective.push_back(sum_rate(cfg, real, st.F, noise));
        }
        tr.iterations_run = sweeps;
        st.RX = mmse_receiver_update(cfg, real, st.F, noise);
        tr.final_state = std::move(st);
        return tr;
    }

    const bool maximizing =
        (kind == AlgorithmKind::MaxSINR || kind == AlgorithmKind::ApproxMaxSINR);
    double prev = algorithm_objective(kind, cfg, real, st, noise);
    for (int t = 1; t <= max_iter; ++t) {
        try {
            switch (kind) {
                case AlgorithmKind::IterIA:
                    st.RX = ia_subspace_update(cfg, real, st.F);
                    st.F = ia_precoder_update(cfg, real, st.RX);
                    break;
                case AlgorithmKind::MinINL:
                    st.RX = inl_subspace_update(cfg, real, st.F, noise);
                    st.F = ia_precoder_update(cfg, real, st.RX);
                    break;
                case AlgorithmKind::JointMMSE:
                    st.RX = mmse_receiver_update(cfg, real, st.F, noise);
                    st.F = mmse_precoder_update(cfg, real, st.RX);
                    break;
                case AlgorithmKind::MaxSINR:
                    for (int k = 0; k < cfg.K; ++k)
                        for (int n = 0; n < cfg.S[k]; ++n)
                            st.RX[k].set_col(n, maxsinr_receiver_column_update(
                                                    cfg, real, st.F, st.RX, noise, k, n,
                                                    &tr.regularized_updates));
                    for (int l = 0; l < cfg.K; ++l)
                        for (int n = 0; n < cfg.S[l]; ++n)
                            st.F[l].set_col(n, maxsinr_precoder_column_update(
                                                   cfg, real, st.F, st.RX, noise, l, n,
                                                   &tr.regularized_updates));
                    break;
                case AlgorithmKind::ApproxMaxSINR:
                    st = approx_maxsinr_update(cfg, real, st, noise);
                    break;
                default:
                    throw ContractViolation("run_algorithm: unhandled kind");
            }
        } catch (const SingularMatrix& e) {
            throw NumericFailure(to_string(kind) + " iteration " + std::to_string(t) + ": " +
                                 e.what());
        } catch (const NumericFailure& e) {
            throw NumericFailure(to_string(kind) + " iteration " + std::to_string(t) + ": " +
                                 e.what());
        }
        const double obj = algorithm_objective(kind, cfg, real, st, noise);
        tr.objective.push_back(obj);
        tr.iterations_run = t;
        // The per-stream baseline is a fixed-point iteration, not a
        // monotone ascent; stop it on |change| instead.
        const double delta = (kind == AlgorithmKind::ApproxMaxSINR) ? std::abs(obj - prev)
                             : maximizing                           ? obj - prev
                                                                    : prev - obj;
        const bool small_objective = !maximizing && obj < epsilon;
        prev = obj;
        if (small_objective || delta < epsilon) {
            tr.converged = true;
            break;
        }
    }
    tr.final_state = std::move(st);
    return tr;
}

} // namespace icalign
