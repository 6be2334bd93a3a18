#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "nht/rational.hpp"

namespace nht {

// Gaussian rational, the scalar ring of exact H3 matrices. Only ring
// operations are needed: det-1 matrices invert by adjugate.
struct CRat {
    Rat re, im;
    CRat() : re(0), im(0) {}
    CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    explicit CRat(long r) : re(r), im(0) {}

    CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
    CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
    CRat operator-() const { return {-re, -im}; }
    CRat operator*(const CRat& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    bool operator==(const CRat& o) const { return re == o.re && im == o.im; }
    std::complex<double> to_complex() const { return {rat_to_double(re), rat_to_double(im)}; }
};

namespace scalar {

inline double to_c(double x, double) = delete;  // guard against accidental use

inline std::complex<double> approx(double x) { return {x, 0.0}; }
inline std::complex<double> approx(const Rat& x) { return {rat_to_double(x), 0.0}; }
inline std::complex<double> approx(const std::complex<double>& x) { return x; }
inline std::complex<double> approx(const CRat& x) { return x.to_complex(); }

inline bool is_zero(double x) { return std::abs(x) < 1e-12; }
inline bool is_zero(const Rat& x) { return x == 0; }
inline bool is_zero(const std::complex<double>& x) { return std::abs(x) < 1e-12; }
inline bool is_zero(const CRat& x) { return x.re == 0 && x.im == 0; }

// true if the mod-± canonical representative should be the negated one
inline bool flip_sign(double x) { return x < 0; }
inline bool flip_sign(const Rat& x) { return x < 0; }
inline bool flip_sign(const std::complex<double>& x) {
    if (std::abs(x.real()) > 1e-12) return x.real() < 0;
    return x.imag() < 0;
}
inline bool flip_sign(const CRat& x) {
    if (x.re != 0) return x.re < 0;
    return x.im < 0;
}

}  // namespace scalar

// 2x2 matrix of determinant 1, identified with its negative. Entries in
// row-major order a b / c d.
template <class S>
struct Mat2 {
    S a{}, b{}, c{}, d{};

    static Mat2 identity() {
        Mat2 m;
        m.a = S(1); m.b = S(0); m.c = S(0); m.d = S(1);
        return m;
    }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 inverse() const { return {d, -b, -c, a}; }  // adjugate; valid since det == 1
    S det() const { return a * d - b * c; }
    S trace() const { return a + d; }

    // canonical representative mod +-1: first significant entry positive
    // (real) or of nonnegative real part, then nonnegative imaginary part
    void canonicalize() {
        const S* entries[4] = {&a, &b, &c, &d};
        for (const S* e : entries) {
            if (scalar::is_zero(*e)) continue;
            if (scalar::flip_sign(*e)) { a = -a; b = -b; c = -c; d = -d; }
            return;
        }
    }

    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

using Mat2d = Mat2<double>;
using Mat2q = Mat2<Rat>;
using CMat2d = Mat2<std::complex<double>>;
using CMat2q = Mat2<CRat>;

inline CMat2d to_cmat(const Mat2d& m) { return {scalar::approx(m.a), scalar::approx(m.b), scalar::approx(m.c), scalar::approx(m.d)}; }
inline CMat2d to_cmat(const Mat2q& m) { return {scalar::approx(m.a), scalar::approx(m.b), scalar::approx(m.c), scalar::approx(m.d)}; }
inline CMat2d to_cmat(const CMat2d& m) { return m; }
inline CMat2d to_cmat(const CMat2q& m) { return {scalar::approx(m.a), scalar::approx(m.b), scalar::approx(m.c), scalar::approx(m.d)}; }

// operator norm (largest singular value) of a 2x2 complex matrix
inline double op_norm(const CMat2d& m) {
    double f2 = std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d);
    double dt = std::abs(m.a * m.d - m.b * m.c);
    double hi = f2 + 2.0 * dt, lo = std::max(0.0, f2 - 2.0 * dt);
    return 0.5 * (std::sqrt(hi) + std::sqrt(lo));
}

// distance to +-identity in operator norm
inline double dist_to_pm_identity(const CMat2d& m) {
    CMat2d p = m, q = m;
    p.a -= 1.0; p.d -= 1.0;
    q.a += 1.0; q.d += 1.0;
    return std::min(op_norm(p), op_norm(q));
}

}  // namespace nht
