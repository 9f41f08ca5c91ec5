#ifndef KATOLIM_XFLOAT_HPP
#define KATOLIM_XFLOAT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace katolim {

// Extended-exponent real: value = m * 2^e with |m| in [0.5, 1) or m == 0.
// Double mantissa precision, 64-bit exponent. The p-sweeps work on spectra
// whose dynamic range (ratios like r^4096) is far outside double range, so
// every scale carried through the sweep kernel lives in one of these.
struct XReal {
    double m = 0.0;
    std::int64_t e = 0;

    XReal() = default;
    XReal(double mm, std::int64_t ee) : m(mm), e(ee) {}

    static XReal normalized(double m, std::int64_t e) {
        if (m == 0.0) return XReal{};
        int k = 0;
        m = std::frexp(m, &k);
        return XReal{m, e + k};
    }

    static XReal from(double x) { return normalized(x, 0); }

    // x * 2^t for real t (t need not be an integer).
    static XReal scaled(double x, double t) {
        if (x == 0.0) return XReal{};
        double ti = std::floor(t);
        double tf = t - ti; // in [0, 1)
        return normalized(x * std::exp2(tf), static_cast<std::int64_t>(ti));
    }

    static XReal exp2x(double t) { return scaled(1.0, t); }

    bool is_zero() const { return m == 0.0; }
    int sign() const { return m > 0.0 ? 1 : (m < 0.0 ? -1 : 0); }

    double to_double() const {
        if (m == 0.0) return 0.0;
        if (e < -1070) return 0.0;
        if (e > 1020) return m > 0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
        return std::ldexp(m, static_cast<int>(e));
    }

    // log2 of |value|; exponent dominates, mantissa refines.
    double log2_abs() const { return static_cast<double>(e) + std::log2(std::fabs(m)); }

    XReal operator-() const { return XReal{-m, e}; }

    friend XReal operator+(const XReal& a, const XReal& b) {
        if (a.m == 0.0) return b;
        if (b.m == 0.0) return a;
        const XReal& hi = (a.e >= b.e) ? a : b;
        const XReal& lo = (a.e >= b.e) ? b : a;
        std::int64_t d = lo.e - hi.e;
        if (d < -1070) return hi;
        return normalized(hi.m + std::ldexp(lo.m, static_cast<int>(d)), hi.e);
    }

    friend XReal operator-(const XReal& a, const XReal& b) { return a + (-b); }

    friend XReal operator*(const XReal& a, const XReal& b) {
        if (a.m == 0.0 || b.m == 0.0) return XReal{};
        return normalized(a.m * b.m, a.e + b.e);
    }

    friend XReal operator/(const XReal& a, const XReal& b) {
        if (a.m == 0.0) return XReal{};
        return normalized(a.m / b.m, a.e - b.e);
    }

    friend bool operator<(const XReal& a, const XReal& b) {
        int sa = a.sign(), sb = b.sign();
        if (sa != sb) return sa < sb;
        if (sa == 0) return false;
        if (a.e != b.e) return (sa > 0) ? (a.e < b.e) : (a.e > b.e);
        return a.m < b.m;
    }
    friend bool operator>(const XReal& a, const XReal& b) { return b < a; }
    friend bool operator<=(const XReal& a, const XReal& b) { return !(b < a); }
    friend bool operator>=(const XReal& a, const XReal& b) { return !(a < b); }
};

inline XReal xabs(const XReal& a) { return XReal{std::fabs(a.m), a.e}; }

inline XReal xsqrt(const XReal& a) {
    if (a.m == 0.0) return XReal{};
    double m = a.m;
    std::int64_t e = a.e;
    if (e % 2 != 0) {
        m *= 2.0;
        e -= 1;
    }
    return XReal::normalized(std::sqrt(m), e / 2);
}

// |value|^q for a positive value; exact exponent arithmetic through log2.
inline XReal xpow(const XReal& a, double q) {
    if (a.m == 0.0) return XReal{};
    return XReal::exp2x(q * a.log2_abs());
}

struct XComplex {
    XReal re, im;

    XComplex() = default;
    XComplex(XReal r, XReal i) : re(r), im(i) {}

    static XComplex from(std::complex<double> z) {
        return {XReal::from(z.real()), XReal::from(z.imag())};
    }
    static XComplex scaled(std::complex<double> z, double t) {
        return {XReal::scaled(z.real(), t), XReal::scaled(z.imag(), t)};
    }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    XComplex conj() const { return {re, -im}; }

    XReal abs2() const { return re * re + im * im; }

    friend XComplex operator+(const XComplex& a, const XComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend XComplex operator-(const XComplex& a, const XComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend XComplex operator*(const XComplex& a, const XComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend XComplex operator*(const XReal& a, const XComplex& b) {
        return {a * b.re, a * b.im};
    }
    friend XComplex operator*(const XComplex& a, std::complex<double> w) {
        return a * XComplex::from(w);
    }

    XComplex div(const XReal& d) const { return {re / d, im / d}; }

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

} // namespace katolim

#endif
