#pragma once

#include <complex>
#include <ostream>
#include <string>

#include "qhi/precision.hpp"

namespace qhi {

// Complex number over mpreal. Boost's mpc backend needs libmpc, which is not
// available here, so the handful of operations the library needs live here.
struct cplx {
    mpreal re;
    mpreal im;

    cplx() : re(0), im(0) {}
    cplx(const mpreal& r) : re(r), im(0) {}
    cplx(const mpreal& r, const mpreal& i) : re(r), im(i) {}
    cplx(int r) : re(r), im(0) {}
    cplx(double r) : re(r), im(0) {}
    cplx(double r, double i) : re(r), im(i) {}
    explicit cplx(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    cplx& operator+=(const cplx& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    cplx& operator-=(const cplx& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    cplx& operator*=(const cplx& o)
    {
        mpreal r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    cplx& operator*=(const mpreal& s)
    {
        re *= s;
        im *= s;
        return *this;
    }
    cplx& operator/=(const cplx& o);
    cplx& operator/=(const mpreal& s)
    {
        re /= s;
        im /= s;
        return *this;
    }

    std::complex<double> to_std() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
};

inline cplx operator+(cplx a, const cplx& b) { return a += b; }
inline cplx operator-(cplx a, const cplx& b) { return a -= b; }
inline cplx operator*(cplx a, const cplx& b) { return a *= b; }
inline cplx operator*(cplx a, const mpreal& s) { return a *= s; }
inline cplx operator*(const mpreal& s, cplx a) { return a *= s; }
inline cplx operator*(cplx a, int s) { return a *= mpreal(s); }
inline cplx operator*(int s, cplx a) { return a *= mpreal(s); }
inline cplx operator/(cplx a, const mpreal& s) { return a /= s; }
inline cplx operator/(cplx a, int s) { return a /= mpreal(s); }
inline cplx operator-(const cplx& a) { return {-a.re, -a.im}; }

inline mpreal norm(const cplx& z) { return z.re * z.re + z.im * z.im; }

inline cplx& cplx::operator/=(const cplx& o)
{
    if (o.re == 0 && o.im == 0)
        throw DivisionByZero("complex division by zero");
    // Smith's algorithm keeps the intermediate exponents in range.
    using boost::multiprecision::abs;
    if (abs(o.re) >= abs(o.im)) {
        mpreal r = o.im / o.re;
        mpreal d = o.re + o.im * r;
        mpreal nr = (re + im * r) / d;
        im = (im - re * r) / d;
        re = nr;
    } else {
        mpreal r = o.re / o.im;
        mpreal d = o.re * r + o.im;
        mpreal nr = (re * r + im) / d;
        im = (im * r - re) / d;
        re = nr;
    }
    return *this;
}

inline cplx operator/(cplx a, const cplx& b) { return a /= b; }
inline cplx operator/(int s, const cplx& b) { return cplx(s) / b; }
inline cplx operator/(const mpreal& s, const cplx& b) { return cplx(s) / b; }

inline bool operator==(const cplx& a, const cplx& b) { return a.re == b.re && a.im == b.im; }

inline cplx conj(const cplx& z) { return {z.re, -z.im}; }
inline cplx I() { return {mpreal(0), mpreal(1)}; }
inline cplx mul_i(const cplx& z) { return {-z.im, z.re}; }

inline mpreal abs(const cplx& z)
{
    mpreal r;
    mpfr_hypot(r.backend().data(), z.re.backend().data(), z.im.backend().data(), MPFR_RNDN);
    return r;
}

// Principal argument in (−π, π]; a signed zero imaginary part counts as +0.
inline mpreal arg(const cplx& z)
{
    if (z.im == 0) {
        if (z.re < 0)
            return const_pi();
        return mpreal(0);
    }
    return boost::multiprecision::atan2(z.im, z.re);
}

inline cplx exp(const cplx& z)
{
    mpreal m = boost::multiprecision::exp(z.re);
    mpreal s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), z.im.backend().data(), MPFR_RNDN);
    return {m * c, m * s};
}

inline cplx expi(const mpreal& t)
{
    mpreal s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), t.backend().data(), MPFR_RNDN);
    return {c, s};
}

// Principal logarithm.
inline cplx log(const cplx& z)
{
    if (z.re == 0 && z.im == 0)
        throw DivisionByZero("log of zero");
    return {boost::multiprecision::log(abs(z)), arg(z)};
}

// Log(1 + z), accurate when z is small.
inline cplx log1p(const cplx& z)
{
    using boost::multiprecision::abs;
    if (abs(z.re) + abs(z.im) > mpreal("0.25"))
        return log(cplx(mpreal(1) + z.re, z.im));
    // Re Log(1+z) = ½ log1p(2x + x² + y²), computed without cancellation.
    mpreal t = z.re * (mpreal(2) + z.re) + z.im * z.im;
    return {boost::multiprecision::log1p(t) / 2, arg(cplx(mpreal(1) + z.re, z.im))};
}

inline cplx sqrt(const cplx& z)
{
    if (z.re == 0 && z.im == 0)
        return z;
    mpreal r = abs(z);
    mpreal a = boost::multiprecision::sqrt((r + boost::multiprecision::abs(z.re)) / 2);
    if (z.re >= 0)
        return {a, z.im / (2 * a)};
    mpreal b = z.im < 0 ? -a : a;
    return {boost::multiprecision::abs(z.im) / (2 * a), b};
}

// Principal power x^p := exp(p·Log x).
inline cplx pow(const cplx& x, const cplx& p)
{
    return exp(p * log(x));
}

inline cplx ipow(cplx x, long n)
{
    if (n < 0)
        return cplx(1) / ipow(x, -n);
    cplx r(1);
    while (n) {
        if (n & 1)
            r *= x;
        n >>= 1;
        if (n)
            x *= x;
    }
    return r;
}

inline cplx sinh(const cplx& z)
{
    cplx e = exp(z);
    return (e - cplx(1) / e) / 2;
}

inline cplx cosh(const cplx& z)
{
    cplx e = exp(z);
    return (e + cplx(1) / e) / 2;
}

inline cplx coth(const cplx& z)
{
    // (1 + e^{−2z})/(1 − e^{−2z}) stays bounded for large Re z of either sign.
    if (z.re >= 0) {
        cplx e = exp(-2 * z);
        return (cplx(1) + e) / (cplx(1) - e);
    }
    cplx e = exp(2 * z);
    return -(cplx(1) + e) / (cplx(1) - e);
}

inline bool isfinite(const cplx& z)
{
    return boost::multiprecision::isfinite(z.re) && boost::multiprecision::isfinite(z.im);
}

inline cplx rebase(const cplx& z) { return {rebase(z.re), rebase(z.im)}; }

inline cplx make_cplx(const std::string& re, const std::string& im) { return {mpreal(re), mpreal(im)}; }

inline std::ostream& operator<<(std::ostream& os, const cplx& z)
{
    return os << '(' << z.re << ',' << z.im << ')';
}

}  // namespace qhi
