#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "icalign/errors.hpp"

namespace icalign {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Column vectors are n-by-1 matrices.
class CMat {
public:
    CMat() : rows_(0), cols_(0) {}

    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw ContractViolation("CMat: negative dimension");
    }

    CMat(int rows, int cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != static_cast<size_t>(rows) * cols)
            throw ContractViolation("CMat: entry count does not match rows*cols");
        ensure_finite("CMat");
    }

    /// Row-major brace construction: CMat(2, 2, {a, b, c, d}).
    CMat(int rows, int cols, std::initializer_list<cplx> entries)
        : CMat(rows, cols, std::vector<cplx>(entries)) {}

    static CMat zeros(int rows, int cols) { return CMat(rows, cols); }

    static CMat identity(int n) {
        CMat I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    static CMat diag(const std::vector<double>& d) {
        CMat D(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) D(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return D;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return a_.size(); }
    bool empty() const { return a_.empty(); }

    cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const cplx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<cplx>& entries() const { return a_; }

    void ensure_finite(const char* who) const {
        for (const cplx& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw ContractViolation(std::string(who) + ": non-finite entry");
    }

    CMat& operator+=(const CMat& o) {
        check_same_shape(o, "operator+=");
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    CMat& operator-=(const CMat& o) {
        check_same_shape(o, "operator-=");
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }

    CMat& operator*=(cplx s) {
        for (cplx& z : a_) z *= s;
        return *this;
    }

    friend CMat operator+(CMat x, const CMat& y) { return x += y; }
    friend CMat operator-(CMat x, const CMat& y) { return x -= y; }
    friend CMat operator*(CMat x, cplx s) { return x *= s; }
    friend CMat operator*(cplx s, CMat x) { return x *= s; }
    friend CMat operator*(CMat x, double s) { return x *= cplx(s, 0.0); }
    friend CMat operator*(double s, CMat x) { return x *= cplx(s, 0.0); }

    friend CMat operator*(const CMat& x, const CMat& y) {
        if (x.cols_ != y.rows_)
            throw ContractViolation("matmul: inner dimensions disagree (" + x.shape_str() +
                                    " * " + y.shape_str() + ")");
        CMat z(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                const cplx xik = x(i, k);
                if (xik == cplx(0.0, 0.0)) continue;
                for (int j = 0; j < y.cols_; ++j) z(i, j) += xik * y(k, j);
            }
        return z;
    }

    /// Conjugate transpose.
    CMat adjoint() const {
        CMat z(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) z(j, i) = std::conj((*this)(i, j));
        return z;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double norm_f() const {
        double s = 0.0;
        for (const cplx& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    CMat col(int j) const {
        CMat v(rows_, 1);
        for (int i = 0; i < rows_; ++i) v(i, 0) = (*this)(i, j);
        return v;
    }

    void set_col(int j, const CMat& v) {
        if (v.rows_ != rows_ || v.cols_ != 1)
            throw ContractViolation("set_col: shape mismatch");
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v(i, 0);
    }

    /// First s columns as a rows-by-s matrix.
    CMat first_cols(int s) const {
        if (s > cols_) throw ContractViolation("first_cols: s exceeds column count");
        CMat z(rows_, s);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < s; ++j) z(i, j) = (*this)(i, j);
        return z;
    }

    bool is_square() const { return rows_ == cols_; }

    bool is_hermitian(double tol) const {
        if (!is_square()) return false;
        double asym = 0.0;
        for (int i = 0; i < rows_; ++i)
            for (int j = i; j < cols_; ++j)
                asym += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
        return std::sqrt(asym) <= tol * (1.0 + norm_f());
    }

    /// (A + A*)/2; drops accumulated round-off asymmetry in Gram matrices.
    CMat hermitize() const {
        if (!is_square()) throw ContractViolation("hermitize: non-square input");
        CMat z(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                z(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        return z;
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    void check_same_shape(const CMat& o, const char* who) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ContractViolation(std::string(who) + ": shape mismatch " + shape_str() +
                                    " vs " + o.shape_str());
    }

    int rows_, cols_;
    std::vector<cplx> a_;
};

/// u v* for column vectors u (m x 1), v (n x 1) -> m x n.
inline CMat outer(const CMat& u, const CMat& v) {
    if (u.cols() != 1 || v.cols() != 1) throw ContractViolation("outer: expects column vectors");
    CMat z(u.rows(), v.rows());
    for (int i = 0; i < u.rows(); ++i)
        for (int j = 0; j < v.rows(); ++j) z(i, j) = u(i, 0) * std::conj(v(j, 0));
    return z;
}

/// u* v for column vectors.
inline cplx dot(const CMat& u, const CMat& v) {
    if (u.cols() != 1 || v.cols() != 1 || u.rows() != v.rows())
        throw ContractViolation("dot: expects equal-length column vectors");
    cplx s = 0.0;
    for (int i = 0; i < u.rows(); ++i) s += std::conj(u(i, 0)) * v(i, 0);
    return s;
}

inline double vec_norm(const CMat& u) { return u.norm_f(); }

/// Distance between the column spans of two orthonormal bases:
/// Frobenius norm of the projector difference.
inline double projector_distance(const CMat& q1, const CMat& q2) {
    return (q1 * q1.adjoint() - q2 * q2.adjoint()).norm_f();
}

} // namespace icalign
