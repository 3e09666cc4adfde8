#pragma once

// Deliberately naive verification tools for the test suites: random
// feasible-point searches, central-difference gradients, and Monte-Carlo
// expectations. Nothing here calls into the library beyond CMat
// arithmetic; orthonormalization, Gaussian sampling, and determinants are
// re-implemented independently (polar-method normals vs the library's
// Box-Muller, plain Gram-Schmidt, pivoted elimination log-dets).

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "icalign/cmat.hpp"

namespace icalign::oracle {

/// Standard normals via the Marsaglia polar method on mt19937_64.
class PolarGauss {
public:
    explicit PolarGauss(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * unif() - 1.0;
            v = 2.0 * unif() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    cplx cgauss() {
        const double re = (*this)();
        const double im = (*this)();
        return cplx(re * M_SQRT1_2, im * M_SQRT1_2);
    }

    CMat cgauss_matrix(int rows, int cols) {
        CMat z(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) z(i, j) = cgauss();
        return z;
    }

    CMat unit_vector(int n) {
        CMat v = cgauss_matrix(n, 1);
        return v * (1.0 / v.norm_f());
    }

private:
    double unif() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Plain two-pass Gram-Schmidt; assumes full column rank draws.
inline CMat naive_orthonormal(const CMat& a) {
    CMat q = a;
    for (int j = 0; j < q.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < j; ++k) {
                cplx proj = 0.0;
                for (int i = 0; i < q.rows(); ++i) proj += std::conj(q(i, k)) * q(i, j);
                for (int i = 0; i < q.rows(); ++i) q(i, j) -= proj * q(i, k);
            }
        double nrm = 0.0;
        for (int i = 0; i < q.rows(); ++i) nrm += std::norm(q(i, j));
        nrm = std::sqrt(nrm);
        for (int i = 0; i < q.rows(); ++i) q(i, j) /= nrm;
    }
    return q;
}

/// Feasible sets used by the update rules: unit-norm columns or scaled
/// semi-unitary matrices.
struct FeasibleSet {
    int rows = 1;
    int cols = 1;
    double scale = 1.0; // Frobenius scale per column: each column norm = scale

    static FeasibleSet unit_sphere(int dim) { return {dim, 1, 1.0}; }
    static FeasibleSet scaled_orthonormal(int rows, int cols, double col_norm) {
        return {rows, cols, col_norm};
    }

    CMat draw(PolarGauss& rng) const {
        CMat q = naive_orthonormal(rng.cgauss_matrix(rows, cols));
        return q * scale;
    }
};

/// Best objective value over `samples` random feasible points.
template <class Objective>
double random_feasible_search(Objective&& objective, const FeasibleSet& feasible, long samples,
                              PolarGauss& rng, bool maximize = false) {
    if (samples < 1) throw ContractViolation("random_feasible_search: samples must be >= 1");
    double best = objective(feasible.draw(rng));
    for (long i = 1; i < samples; ++i) {
        const double v = objective(feasible.draw(rng));
        if (maximize ? (v > best) : (v < best)) best = v;
    }
    return best;
}

/// Central differences over the real and imaginary parts independently:
/// G(i,j) = d f / d Re(x_ij) + i * d f / d Im(x_ij).
template <class Field>
CMat finite_diff_gradient(Field&& f, const CMat& x, double step = 1e-6) {
    CMat g(x.rows(), x.cols());
    CMat xp = x;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) {
            const cplx orig = x(i, j);
            xp(i, j) = orig + step;
            const double fpr = f(xp);
            xp(i, j) = orig - step;
            const double fmr = f(xp);
            xp(i, j) = orig + cplx(0.0, step);
            const double fpi = f(xp);
            xp(i, j) = orig - cplx(0.0, step);
            const double fmi = f(xp);
            xp(i, j) = orig;
            g(i, j) = cplx((fpr - fmr) / (2.0 * step), (fpi - fmi) / (2.0 * step));
        }
    return g;
}

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
};

/// Sample mean and standard error of a scalar statistic.
template <class Statistic>
McEstimate mc_expectation(Statistic&& statistic, long samples, PolarGauss& rng) {
    if (samples < 1) throw ContractViolation("mc_expectation: samples must be >= 1");
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < samples; ++i) {
        const double v = statistic(rng);
        sum += v;
        sumsq += v * v;
    }
    McEstimate est;
    est.mean = sum / samples;
    if (samples > 1) {
        const double var = std::max(0.0, (sumsq - samples * est.mean * est.mean) / (samples - 1));
        est.se = std::sqrt(var / samples);
    }
    return est;
}

/// log|det A| by Gaussian elimination with partial pivoting; independent of
/// the library's Cholesky route.
inline double logdet_naive(CMat a) {
    const int n = a.rows();
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        int pr = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pr, k))) pr = i;
        if (pr != k)
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
        acc += std::log(std::abs(a(k, k)));
        for (int i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return acc;
}

} // namespace icalign::oracle
