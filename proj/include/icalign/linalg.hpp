#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "icalign/cmat.hpp"
#include "icalign/errors.hpp"

namespace icalign {

// Dense factorizations for small complex matrices. Everything here is a
// deterministic function of the input bits: fixed sweep orders, no
// randomized pivoting, eigenvector phase fixed by making the
// largest-magnitude entry real-positive.

namespace detail {

// Rotation parameters (c real, s real, e unit complex) diagonalizing the
// Hermitian 2x2 [[a, b],[conj(b), d]] with b = |b| e. The rotation is
// G = [[c, s*e],[-s*conj(e), c]]; G* M G has zero off-diagonal.
struct JacobiRot {
    double c, s;
    cplx e;
};

inline JacobiRot jacobi_rotation(double a, double d, cplx b) {
    const double babs = std::abs(b);
    const cplx e = b / babs;
    const double zeta = (a - d) / (2.0 * babs);
    const double sgn = (zeta >= 0.0) ? 1.0 : -1.0;
    // Smaller-magnitude root of t^2 - 2 zeta t - 1 = 0, in the division
    // form that stays accurate for large |zeta|.
    const double t = -sgn / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, e};
}

// Multiply column of a unit phase onto the eigenvector so its
// largest-magnitude entry is real positive; ties resolved by lowest row.
inline void fix_column_phase(CMat& v, int j) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < v.rows(); ++i) {
        const double m = std::abs(v(i, j));
        if (m > best) {
            best = m;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    const cplx z = v(imax, j);
    const cplx phase = std::conj(z) / std::abs(z);
    for (int i = 0; i < v.rows(); ++i) v(i, j) *= phase;
}

inline void require_square(const CMat& a, const char* who) {
    if (!a.is_square())
        throw ContractViolation(std::string(who) + ": non-square input " + a.shape_str());
}

inline void require_hermitian(const CMat& a, const char* who) {
    require_square(a, who);
    if (!a.is_hermitian(1e-10))
        throw ContractViolation(std::string(who) + ": input is not Hermitian within tolerance");
}

} // namespace detail

struct HermEig {
    std::vector<double> values; // ascending
    CMat vectors;               // orthonormal columns, one per value
    bool ties = false;          // some adjacent eigenvalue gap is below resolution
    double min_gap = 0.0;
};

/// Full spectrum of a Hermitian matrix via cyclic complex Jacobi.
/// Input is symmetrized as (A+A*)/2 before decomposition.
inline HermEig herm_eig(const CMat& a_in) {
    detail::require_hermitian(a_in, "herm_eig");
    CMat w = a_in.hermitize();
    const int n = w.rows();
    CMat v = CMat::identity(n);
    const double scale = std::max(w.norm_f(), 1e-300);

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(w(p, q));
        if (std::sqrt(2.0 * off) <= 1e-15 * scale) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx b = w(p, q);
                if (std::abs(b) <= 1e-18 * scale) continue;
                const auto r = detail::jacobi_rotation(w(p, p).real(), w(q, q).real(), b);
                const cplx se = r.s * r.e;
                // W <- G* W G, rows/cols p and q only.
                for (int i = 0; i < n; ++i) { // column update (right-multiply)
                    const cplx wp = w(i, p), wq = w(i, q);
                    w(i, p) = r.c * wp - std::conj(se) * wq;
                    w(i, q) = se * wp + r.c * wq;
                }
                for (int j = 0; j < n; ++j) { // row update (left-multiply)
                    const cplx wp = w(p, j), wq = w(q, j);
                    w(p, j) = r.c * wp - se * wq;
                    w(q, j) = std::conj(se) * wp + r.c * wq;
                }
                w(p, q) = std::conj(w(q, p)); // keep Hermitian against round-off
                for (int i = 0; i < n; ++i) { // accumulate V <- V G
                    const cplx vp = v(i, p), vq = v(i, q);
                    v(i, p) = r.c * vp - std::conj(se) * vq;
                    v(i, q) = se * vp + r.c * vq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return w(i, i).real() < w(j, j).real(); });

    HermEig out;
    out.values.resize(n);
    out.vectors = CMat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = w(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
        detail::fix_column_phase(out.vectors, j);
    }
    out.min_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < n; ++j) {
        const double gap = out.values[j + 1] - out.values[j];
        out.min_gap = std::min(out.min_gap, gap);
        if (gap < 1e-12 * std::max(1.0, std::abs(out.values[j]) + std::abs(out.values[j + 1])))
            out.ties = true;
    }
    return out;
}

/// Eigenvectors of the s smallest eigenvalues, as columns.
inline CMat nu_min(const CMat& a, int s) {
    const HermEig e = herm_eig(a);
    if (s > e.vectors.cols()) throw ContractViolation("nu_min: s exceeds dimension");
    return e.vectors.first_cols(s);
}

/// Lower Cholesky factor of a Hermitian positive-definite matrix.
/// `name` identifies the matrix in the singularity error.
inline CMat cholesky_lower(const CMat& a_in, const std::string& name = "matrix") {
    detail::require_square(a_in, "cholesky_lower");
    const CMat a = a_in.hermitize();
    const int n = a.rows();
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i).real()));
    CMat l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 1e-14 * std::max(scale, 1e-300)))
            throw SingularMatrix("cholesky: " + name + " is not positive definite (pivot " +
                                 std::to_string(d) + " at index " + std::to_string(j) + ")");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / l(j, j).real();
        }
    }
    return l;
}

/// Solve L X = B with L lower triangular.
inline CMat forward_subst(const CMat& l, const CMat& b) {
    const int n = l.rows();
    CMat x = b;
    for (int col = 0; col < b.cols(); ++col)
        for (int i = 0; i < n; ++i) {
            cplx s = x(i, col);
            for (int k = 0; k < i; ++k) s -= l(i, k) * x(k, col);
            x(i, col) = s / l(i, i);
        }
    return x;
}

/// Solve L* X = B with L lower triangular (i.e. back substitution).
inline CMat adjoint_subst(const CMat& l, const CMat& b) {
    const int n = l.rows();
    CMat x = b;
    for (int col = 0; col < b.cols(); ++col)
        for (int i = n - 1; i >= 0; --i) {
            cplx s = x(i, col);
            for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * x(k, col);
            x(i, col) = s / std::conj(l(i, i));
        }
    return x;
}

/// Solve B X = Y for Hermitian positive-definite B via Cholesky.
inline CMat solve_hpd(const CMat& b, const CMat& y, const std::string& name = "matrix") {
    if (b.rows() != y.rows())
        throw ContractViolation("solve_hpd: dimension mismatch " + b.shape_str() + " vs " +
                                y.shape_str());
    const CMat l = cholesky_lower(b, name);
    return adjoint_subst(l, forward_subst(l, y));
}

/// log(det(B)) for Hermitian positive-definite B, natural base.
inline double logdet_hpd(const CMat& b, const std::string& name = "matrix") {
    const CMat l = cholesky_lower(b, name);
    double s = 0.0;
    for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
    return 2.0 * s;
}

struct GenEigPair {
    double value;
    CMat vector; // unit Euclidean norm
};

/// Largest generalized eigenpair of (A, B), A Hermitian, B Hermitian
/// positive definite. Whitening route: B = LL*, ordinary Hermitian
/// problem on L^-1 A L^-*, eigenvector mapped back through L^-*.
inline GenEigPair gen_herm_eig_max(const CMat& a, const CMat& b,
                                   const std::string& b_name = "B") {
    detail::require_hermitian(a, "gen_herm_eig_max(A)");
    detail::require_hermitian(b, "gen_herm_eig_max(B)");
    if (a.rows() != b.rows())
        throw ContractViolation("gen_herm_eig_max: size mismatch " + a.shape_str() + " vs " +
                                b.shape_str());
    const HermEig eb = herm_eig(b);
    if (!(eb.values.front() > 1e-12 * b.norm_f()))
        throw SingularMatrix("gen_herm_eig_max: " + b_name +
                             " is numerically singular (min eigenvalue " +
                             std::to_string(eb.values.front()) + ")");
    const CMat l = cholesky_lower(b, b_name);
    const CMat t = forward_subst(l, a);                      // L^-1 A
    const CMat c = forward_subst(l, t.adjoint()).adjoint();  // L^-1 A L^-*
    const HermEig ec = herm_eig(c.hermitize());
    const int n = a.rows();
    CMat y = ec.vectors.col(n - 1);
    CMat v = adjoint_subst(l, y);
    v *= cplx(1.0 / v.norm_f(), 0.0);
    detail::fix_column_phase(v, 0);
    return {ec.values.back(), v};
}

struct Svd {
    CMat u;                    // orthonormal columns, m x r
    std::vector<double> sigma; // descending, non-negative, length r = min(m,n)
    CMat v;                    // orthonormal columns, n x r
};

/// Thin SVD via one-sided Jacobi on the columns.
inline Svd svd(const CMat& a) {
    a.ensure_finite("svd");
    if (a.rows() < a.cols()) {
        Svd t = svd(a.adjoint());
        return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
    }
    const int m = a.rows(), n = a.cols();
    CMat w = a;
    CMat v = CMat::identity(n);
    const double scale = std::max(a.norm_f(), 1e-300);

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += std::norm(w(i, p));
                    aqq += std::norm(w(i, q));
                    apq += std::conj(w(i, p)) * w(i, q);
                }
                if (std::abs(apq) <= 1e-15 * (std::sqrt(app * aqq) + 1e-30 * scale * scale))
                    continue;
                rotated = true;
                const auto r = detail::jacobi_rotation(app, aqq, apq);
                const cplx se = r.s * r.e;
                for (int i = 0; i < m; ++i) {
                    const cplx wp = w(i, p), wq = w(i, q);
                    w(i, p) = r.c * wp - std::conj(se) * wq;
                    w(i, q) = se * wp + r.c * wq;
                }
                for (int i = 0; i < n; ++i) {
                    const cplx vp = v(i, p), vq = v(i, q);
                    v(i, p) = r.c * vp - std::conj(se) * vq;
                    v(i, q) = se * vp + r.c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> nrm(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::norm(w(i, j));
        nrm[j] = std::sqrt(s);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return nrm[i] > nrm[j]; });

    Svd out;
    out.sigma.resize(n);
    out.u = CMat(m, n);
    out.v = CMat(n, n);
    const double rank_tol = 1e-14 * scale;
    std::vector<int> null_cols;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.sigma[j] = nrm[src];
        for (int i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (nrm[src] > rank_tol) {
            for (int i = 0; i < m; ++i) out.u(i, j) = w(i, src) / nrm[src];
            // Common phase convention; u sigma v* is unchanged.
            int imax = 0;
            double best = -1.0;
            for (int i = 0; i < m; ++i)
                if (std::abs(out.u(i, j)) > best) {
                    best = std::abs(out.u(i, j));
                    imax = i;
                }
            const cplx phase = std::conj(out.u(imax, j)) / std::abs(out.u(imax, j));
            for (int i = 0; i < m; ++i) out.u(i, j) *= phase;
            for (int i = 0; i < n; ++i) out.v(i, j) *= phase;
        } else {
            null_cols.push_back(j);
        }
    }
    // Deterministic orthonormal completion for (numerically) zero columns.
    for (int j : null_cols) {
        for (int cand = 0; cand < m; ++cand) {
            CMat r(m, 1);
            r(cand, 0) = 1.0;
            for (int k = 0; k < n; ++k) {
                if (k == j || (std::find(null_cols.begin(), null_cols.end(), k) != null_cols.end() && k > j))
                    continue;
                cplx proj = 0.0;
                for (int i = 0; i < m; ++i) proj += std::conj(out.u(i, k)) * r(i, 0);
                for (int i = 0; i < m; ++i) r(i, 0) -= proj * out.u(i, k);
            }
            const double rn = r.norm_f();
            if (rn > 0.5) {
                for (int i = 0; i < m; ++i) out.u(i, j) = r(i, 0) / rn;
                break;
            }
        }
    }
    return out;
}

/// Orthonormal basis with the same column span, via modified Gram-Schmidt
/// with one reorthogonalization pass.
inline CMat orthonormalize(const CMat& a) {
    if (a.rows() < a.cols())
        throw ContractViolation("orthonormalize: more columns than rows " + a.shape_str());
    const int m = a.rows(), n = a.cols();
    CMat q(m, n);
    for (int j = 0; j < n; ++j) {
        CMat vcol = a.col(j);
        const double orig = vcol.norm_f();
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < j; ++k) {
                const cplx proj = dot(q.col(k), vcol);
                for (int i = 0; i < m; ++i) vcol(i, 0) -= proj * q(i, k);
            }
        const double nrm = vcol.norm_f();
        if (!(nrm > 1e-10 * std::max(orig, 1e-300)))
            throw ContractViolation("orthonormalize: rank-deficient input (column " +
                                    std::to_string(j) + ")");
        for (int i = 0; i < m; ++i) q(i, j) = vcol(i, 0) / nrm;
    }
    return q;
}

/// A^{-1/2} for Hermitian positive definite A.
inline CMat hpd_inv_sqrt(const CMat& a, const std::string& name = "matrix") {
    const HermEig e = herm_eig(a);
    if (!(e.values.front() > 1e-14 * std::max(a.norm_f(), 1e-300)))
        throw SingularMatrix("hpd_inv_sqrt: " + name + " is numerically singular");
    const int n = a.rows();
    CMat z(n, n);
    for (int k = 0; k < n; ++k) {
        const double w = 1.0 / std::sqrt(e.values[k]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                z(i, j) += w * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return z;
}

/// Solve A X = B for general square A via LU with partial pivoting.
inline CMat solve_general(const CMat& a_in, const CMat& b, const std::string& name = "matrix") {
    detail::require_square(a_in, "solve_general");
    if (a_in.rows() != b.rows())
        throw ContractViolation("solve_general: dimension mismatch");
    const int n = a_in.rows();
    CMat a = a_in;
    CMat x = b;
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    const double scale = std::max(a.norm_f(), 1e-300);
    for (int k = 0; k < n; ++k) {
        int pr = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                pr = i;
            }
        if (best <= 1e-14 * scale)
            throw SingularMatrix("solve_general: " + name + " is numerically singular");
        if (pr != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
            for (int j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(pr, j));
        }
        for (int i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            for (int j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (int col = 0; col < x.cols(); ++col)
        for (int i = n - 1; i >= 0; --i) {
            cplx s = x(i, col);
            for (int k = i + 1; k < n; ++k) s -= a(i, k) * x(k, col);
            x(i, col) = s / a(i, i);
        }
    return x;
}

struct EigGeneral {
    std::vector<cplx> values;
    CMat vectors; // unit-norm right eigenvectors, one column per value
};

/// Right eigenpairs of a general complex square matrix: Householder
/// reduction to Hessenberg form, shifted QR to Schur form, eigenvectors
/// by triangular back substitution. Intended for small matrices.
inline EigGeneral eig_general(const CMat& a_in) {
    detail::require_square(a_in, "eig_general");
    a_in.ensure_finite("eig_general");
    const int n = a_in.rows();
    CMat h = a_in;
    CMat q = CMat::identity(n);
    const double scale = std::max(h.norm_f(), 1e-300);

    // Householder reduction to upper Hessenberg, accumulating Q.
    for (int k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm <= 1e-300) continue;
        std::vector<cplx> v(n, 0.0);
        const cplx x0 = h(k + 1, k);
        const cplx alpha = (std::abs(x0) > 0.0) ? -(x0 / std::abs(x0)) * xnorm : cplx(-xnorm, 0.0);
        for (int i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm = 0.0;
        for (int i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
        vnorm = std::sqrt(vnorm);
        if (vnorm <= 1e-300) continue;
        for (int i = k + 1; i < n; ++i) v[i] /= vnorm;
        // H <- (I - 2vv*) H (I - 2vv*), Q <- Q (I - 2vv*)
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= 2.0;
            for (int i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= 2.0;
            for (int j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = k + 1; j < n; ++j) s += q(i, j) * v[j];
            s *= 2.0;
            for (int j = k + 1; j < n; ++j) q(i, j) -= s * std::conj(v[j]);
        }
    }

    // Shifted QR on the Hessenberg form.
    auto subdiag_small = [&](int i) {
        return std::abs(h(i, i - 1)) <=
               1e-15 * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)) + 1e-30 * scale);
    };
    int hi = n - 1;
    int stuck = 0;
    int budget = 120 * std::max(n, 1);
    while (hi > 0 && budget-- > 0) {
        if (subdiag_small(hi)) {
            h(hi, hi - 1) = 0.0;
            --hi;
            stuck = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && !subdiag_small(lo)) --lo;
        if (lo > 0) h(lo, lo - 1) = 0.0;

        // Wilkinson shift from the trailing 2x2 of the active block.
        const cplx t11 = h(hi - 1, hi - 1), t12 = h(hi - 1, hi);
        const cplx t21 = h(hi, hi - 1), t22 = h(hi, hi);
        const cplx tr = t11 + t22;
        const cplx det = t11 * t22 - t12 * t21;
        const cplx disc = std::sqrt(tr * tr - 4.0 * det);
        const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
        cplx shift = (std::abs(l1 - t22) < std::abs(l2 - t22)) ? l1 : l2;
        if (++stuck % 12 == 0) shift = t22 + cplx(std::abs(h(hi, hi - 1)), 0.0); // exceptional

        for (int i = lo; i <= hi; ++i) h(i, i) -= shift;
        // QR by Givens on the subdiagonal, then RQ.
        std::vector<double> cs(hi);
        std::vector<cplx> sn(hi);
        for (int i = lo; i < hi; ++i) {
            const cplx f = h(i, i), g = h(i + 1, i);
            const double d = std::sqrt(std::norm(f) + std::norm(g));
            double c;
            cplx s;
            if (d <= 1e-300) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(f) <= 1e-300) {
                c = 0.0;
                s = std::conj(g) / std::abs(g);
            } else {
                c = std::abs(f) / d;
                s = (f / std::abs(f)) * std::conj(g) / d;
            }
            cs[i] = c;
            sn[i] = s;
            for (int j = i; j < n; ++j) {
                const cplx hi1 = h(i, j), hi2 = h(i + 1, j);
                h(i, j) = c * hi1 + s * hi2;
                h(i + 1, j) = -std::conj(s) * hi1 + c * hi2;
            }
        }
        for (int i = lo; i < hi; ++i) {
            for (int r = 0; r <= std::min(i + 1, hi); ++r) {
                const cplx h1 = h(r, i), h2 = h(r, i + 1);
                h(r, i) = cs[i] * h1 + std::conj(sn[i]) * h2;
                h(r, i + 1) = -sn[i] * h1 + cs[i] * h2;
            }
            for (int r = 0; r < n; ++r) {
                const cplx q1 = q(r, i), q2 = q(r, i + 1);
                q(r, i) = cs[i] * q1 + std::conj(sn[i]) * q2;
                q(r, i + 1) = -sn[i] * q1 + cs[i] * q2;
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += shift;
    }
    if (hi > 0 && budget <= 0)
        throw NumericFailure("eig_general: QR iteration did not converge within budget");

    // Eigenvectors of the triangular factor by back substitution.
    EigGeneral out;
    out.values.resize(n);
    out.vectors = CMat(n, n);
    for (int i = 0; i < n; ++i) out.values[i] = h(i, i);
    for (int i = 0; i < n; ++i) {
        std::vector<cplx> y(n, 0.0);
        y[i] = 1.0;
        for (int j = i - 1; j >= 0; --j) {
            cplx s = 0.0;
            for (int m = j + 1; m <= i; ++m) s += h(j, m) * y[m];
            cplx denom = h(j, j) - out.values[i];
            if (std::abs(denom) < 1e-14 * scale) denom = cplx(1e-14 * scale, 0.0);
            y[j] = -s / denom;
        }
        CMat vc(n, 1);
        for (int r = 0; r < n; ++r) {
            cplx s = 0.0;
            for (int m = 0; m <= i; ++m) s += q(r, m) * y[m];
            vc(r, 0) = s;
        }
        vc *= cplx(1.0 / vc.norm_f(), 0.0);
        detail::fix_column_phase(vc, 0);
        out.vectors.set_col(i, vc);
    }
    return out;
}

} // namespace icalign
