#pragma once

#include <vector>

#include "qhi/complex.hpp"

namespace qhi {

namespace detail {

// c_k = B_{2k}/(2k+1)! for the series Li₂(w) = u − u²/4 + Σ c_k u^{2k+1}, u = −Log(1−w).
// Cached per MPFR precision; extended on demand.
inline const mpreal& li2_coeff(std::size_t k)
{
    struct Cache {
        unsigned prec = 0;
        std::vector<mpreal> c;
    };
    thread_local Cache cache;
    unsigned prec = mpreal::default_precision();
    if (cache.prec != prec) {
        cache.prec = prec;
        cache.c.assign(1, mpreal(0));
    }
    while (cache.c.size() <= k) {
        std::size_t j = cache.c.size();
        mpreal two_pi_sq = 4 * const_pi() * const_pi();
        mpreal v = 2 * zeta_ui(2 * j) / (mpreal(2 * j + 1) * pow(two_pi_sq, static_cast<long>(j)));
        if (j % 2 == 0)
            v = -v;
        cache.c.push_back(v);
    }
    return cache.c[k];
}

// e_k = (2 − 4^k)·B_{2k}/(2k)!, the Taylor coefficients of (x/sinh x − 1)/x².
inline const mpreal& eps_coeff(std::size_t k)
{
    struct Cache {
        unsigned prec = 0;
        std::vector<mpreal> c;
    };
    thread_local Cache cache;
    unsigned prec = mpreal::default_precision();
    if (cache.prec != prec) {
        cache.prec = prec;
        cache.c.assign(1, mpreal(0));
    }
    while (cache.c.size() <= k) {
        std::size_t j = cache.c.size();
        mpreal two_pi_sq = 4 * const_pi() * const_pi();
        mpreal b = 2 * zeta_ui(2 * j) / pow(two_pi_sq, static_cast<long>(j));
        if (j % 2 == 0)
            b = -b;
        mpreal four_k = pow(mpreal(4), static_cast<long>(j));
        cache.c.push_back((mpreal(2) - four_k) * b);
    }
    return cache.c[k];
}

// Series branch: valid for |w| <= 1 and Re w <= 1/2, where |u| < 1.3.
inline cplx li2_series(const cplx& w)
{
    cplx u = -log1p(-w);
    cplx u2 = u * u;
    cplx sum = u - u2 / 4;
    cplx p = u;
    mpreal eps = working_eps();
    mpreal scale = abs(sum);
    if (scale == 0)
        return sum;
    for (std::size_t k = 1;; ++k) {
        p *= u2;
        cplx term = p * li2_coeff(k);
        sum += term;
        if (abs(term) < eps * scale)
            break;
        if (k > 4000)
            throw NonConvergent("li2 series");
    }
    return sum;
}

// |w| <= 1.
inline cplx li2_unit_disk(const cplx& w)
{
    if (w.re <= mpreal("0.5"))
        return li2_series(w);
    // Reflection: Li₂(w) = −Li₂(1−w) + π²/6 − Log w·Log(1−w).
    cplx one_minus = cplx(1) - w;
    mpreal pi = const_pi();
    if (one_minus.re == 0 && one_minus.im == 0)
        return cplx(pi * pi / 6);
    return -li2_series(one_minus) + cplx(pi * pi / 6) - log(w) * log(one_minus);
}

}  // namespace detail

// Principal-branch dilogarithm, cut along (1, +∞); Li₂(1) = π²/6.
inline cplx li2(const cplx& z)
{
    if (z.im == 0 && z.re > 1)
        throw CutViolation("li2 argument on the cut (1, +inf)");
    if (z.re == 0 && z.im == 0)
        return cplx(0);
    if (norm(z) <= 1)
        return detail::li2_unit_disk(z);
    // Inversion: Li₂(z) = −Li₂(1/z) − π²/6 − ½Log²(−z).
    mpreal pi = const_pi();
    cplx l = log(-z);
    return -detail::li2_unit_disk(cplx(1) / z) - cplx(pi * pi / 6) - l * l / 2;
}

inline cplx li2(const cplx& z, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    return li2(z);
}

// Reduces t into (−π, π].
inline mpreal reduce_angle(const mpreal& t)
{
    mpreal two_pi = 2 * const_pi();
    mpreal pi = const_pi();
    if (t > -pi && t <= pi)
        return t;
    mpreal r = t - two_pi * floor((t + pi) / two_pi);
    if (r <= -pi)
        r += two_pi;
    return r;
}

// Cl₂(t) = Im Li₂(e^{it}).
inline mpreal clausen2(const mpreal& t)
{
    mpreal r = reduce_angle(t);
    if (r == 0)
        return mpreal(0);
    mpreal pi = const_pi();
    if (r == pi)
        return mpreal(0);
    return li2(expi(r)).im;
}

inline mpreal clausen2(const mpreal& t, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    return clausen2(t);
}

// D(y) = Im Li₂(y) + arg(1−y)·Log|y|; vanishes on the real line.
inline mpreal bloch_wigner(const cplx& y)
{
    if ((y.re == 0 || y.re == 1) && y.im == 0)
        throw DegenerateInput("bloch_wigner at y in {0, 1}");
    if (y.im == 0)
        return mpreal(0);
    return li2(y).im + arg(cplx(1) - y) * log(abs(y));
}

inline mpreal bloch_wigner(const cplx& y, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    return bloch_wigner(y);
}

// ε(x) = (x/sinh x − 1)/x², by its Taylor series near 0.
inline cplx eps_fn(const cplx& x)
{
    if (norm(x) < mpreal("0.0625")) {
        cplx x2 = x * x;
        cplx sum = cplx(detail::eps_coeff(1));
        cplx p(1);
        mpreal eps = working_eps();
        mpreal scale = abs(sum);
        for (std::size_t k = 2;; ++k) {
            p *= x2;
            cplx term = p * detail::eps_coeff(k);
            sum += term;
            if (abs(term) < eps * scale)
                break;
            if (k > 4000)
                throw NonConvergent("eps series");
        }
        return sum;
    }
    return (x / sinh(x) - cplx(1)) / (x * x);
}

// Vol(S³ \ 4₁) = 2·Cl₂(π/3).
inline mpreal volume_41()
{
    return 2 * clausen2(const_pi() / 3);
}

}  // namespace qhi
