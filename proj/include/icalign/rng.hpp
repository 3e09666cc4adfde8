#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "icalign/cmat.hpp"

namespace icalign {

// Seeding and all variate transforms are spelled out here so a fixed seed
// reproduces the same stream bit-for-bit on any platform with the same
// libm. std::mt19937_64 output is fully specified by the standard; the
// distributions below avoid std::*_distribution on purpose (those are
// implementation-defined).

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-task seed: master seed mixed with an index path
/// (e.g. {purpose, axis, realization, init}). Independent of execution
/// order and worker count.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> path) {
    uint64_t h = splitmix64(master);
    for (uint64_t v : path) h = splitmix64(h ^ splitmix64(v + 0x9e3779b97f4a7c15ULL));
    return h;
}

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Uniform in [0,1) with 53-bit mantissa.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller on (0,1] uniforms; pairs are cached.
    double std_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; // (0,1]
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly-symmetric complex Gaussian, unit variance per complex
    /// entry (real/imag independent, variance 1/2 each).
    cplx cgauss() {
        const double re = std_normal();
        const double im = std_normal();
        return cplx(re * M_SQRT1_2, im * M_SQRT1_2);
    }

    /// Matrix with i.i.d. CN(0,1) entries, filled row-major.
    CMat cgauss_matrix(int rows, int cols) {
        CMat z(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) z(i, j) = cgauss();
        return z;
    }

    /// Column vector uniform on the complex unit sphere.
    CMat unit_vector(int n) {
        CMat v = cgauss_matrix(n, 1);
        double nrm = v.norm_f();
        while (nrm < 1e-12) { // astronomically unlikely; redraw keeps the contract
            v = cgauss_matrix(n, 1);
            nrm = v.norm_f();
        }
        return v * (1.0 / nrm);
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace icalign
