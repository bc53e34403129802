#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "qhi/dilog.hpp"
#include "qhi/quadrature.hpp"

namespace qhi {

// ζ^j = e^{2πij/N} for j = 0..N−1, cached per (N, precision).
inline const std::vector<cplx>& zeta_powers(int N)
{
    thread_local std::map<std::pair<int, unsigned>, std::vector<cplx>> cache;
    auto key = std::make_pair(N, static_cast<unsigned>(mpreal::default_precision()));
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    std::vector<cplx> z(N);
    mpreal step = 2 * const_pi() / N;
    for (int j = 0; j < N; ++j)
        z[j] = expi(step * j);
    if (cache.size() > 64)
        cache.clear();
    return cache.emplace(key, std::move(z)).first->second;
}

inline cplx zeta_pow(int N, long k)
{
    long r = k % N;
    if (r < 0)
        r += N;
    return zeta_powers(N)[r];
}

inline void require_odd(int N, int min = 3)
{
    if (N < min || N % 2 == 0)
        throw ValidationError("N must be odd and >= " + std::to_string(min) + ", got " + std::to_string(N));
}

// Pole/zero proximity tolerance 10^{−digits/2}.
inline mpreal proximity_tol(const PrecisionContext& ctx)
{
    return pow(mpreal(10), -ctx.digits / 2);
}

namespace detail {

// T(x) = Σ_{j=1}^{N−1} (N−j)·Log(1 − xζ^j), each Log principal.
// The sum is Log of P = ∏_m ∏_{j≤m}(1 − xζ^j) up to 2πik; k is recovered from
// a double-precision sum of the arguments, which costs O(N) multiplications
// instead of N logarithms.
inline cplx weighted_log_sum(const cplx& x, int N, const mpreal& zero_tol)
{
    const auto& zeta = zeta_powers(N);
    cplx Q(1), P(1);
    double argsum = 0;
    for (int j = 1; j < N; ++j) {
        cplx f = cplx(1) - x * zeta[j];
        if (abs(f) < zero_tol)
            throw DivisionByZero("factor 1 - x*zeta^" + std::to_string(j) + " vanishes");
        Q *= f;
        P *= Q;
        auto fd = f.to_std();
        argsum += (N - j) * std::atan2(fd.imag(), fd.real());
    }
    cplx L = log(P);
    double k = std::round((argsum - L.im.convert_to<double>()) / (2 * M_PI));
    L.im += 2 * const_pi() * mpreal(k);
    return L;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Faddeev's quantum dilogarithm by quadrature

struct FaddeevOptions {
    int max_shifts = 64;
};

inline cplx log_phi_b_strip(const cplx& z, const mpreal& b, const PrecisionContext& ctx)
{
    mpreal binv = 1 / b;
    mpreal rate = b + binv - 2 * boost::multiprecision::abs(z.im);
    if (rate <= 0)
        throw ValidationError("phi_b: point outside the integral strip");
    mpreal pi = const_pi();
    mpreal r = std::min(mpreal("0.5"), pi * std::min(b, binv) / 2);
    int d = ctx.digits + guard_digits;
    mpreal V = mpreal((d + 5) * std::log(10.0)) / rate + 2;

    auto f = [&](const cplx& w) {
        cplx num = exp(-2 * mul_i(z * w));
        cplx den = w * sinh(w * b) * sinh(w * binv) * 4;
        return num / den;
    };
    double reZ = std::abs(z.re.convert_to<double>());
    std::vector<PathPiece> pieces;
    // Geometric grading away from the origin, refined further for oscillation.
    std::vector<mpreal> cuts{r};
    while (cuts.back() * 2 < V)
        cuts.push_back(cuts.back() * 2);
    cuts.push_back(V);
    for (std::size_t k = cuts.size() - 1; k >= 1; --k) {
        double len = (cuts[k] - cuts[k - 1]).convert_to<double>();
        int n = 1 + static_cast<int>(len * (reZ + 1) / 2);
        pieces.push_back(PathPiece::line(cplx(-cuts[k]), cplx(-cuts[k - 1]), n));
    }
    pieces.push_back(PathPiece::arc(cplx(0), r, pi, mpreal(0), 2));
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        double len = (cuts[k] - cuts[k - 1]).convert_to<double>();
        int n = 1 + static_cast<int>(len * (reZ + 1) / 2);
        pieces.push_back(PathPiece::line(cplx(cuts[k - 1]), cplx(cuts[k]), n));
    }
    QuadOptions opt;
    opt.rel_tol = ctx.quad_rel_tol;
    opt.abs_tol = std::pow(10.0, -(ctx.digits + 2) > -300 ? -(ctx.digits + 2) : -300);
    return integrate_path(f, pieces, opt).value;
}

// Φ_b(z): direct quadrature once z is shifted into |Im z| <= max(b, 1/b)/2
// by the functional equation Φ(w) = (1 + e^{2πcw}e^{iπc²})·Φ(w + ic).
inline cplx phi_b(const cplx& z_in, const mpreal& b_in, const PrecisionContext& ctx,
                  const FaddeevOptions& fo = {})
{
    ctx.validate();
    scoped_precision guard(ctx);
    cplx z = rebase(z_in);
    mpreal b = rebase(b_in);
    if (b <= 0)
        throw ValidationError("phi_b: b must be positive");
    mpreal binv = 1 / b;
    mpreal pi = const_pi();
    mpreal tol = proximity_tol(ctx);

    // Poles at c_b + imb + inb⁻¹, zeros at −c_b − imb − inb⁻¹ (m, n >= 0).
    mpreal cb = (b + binv) / 2;
    if (boost::multiprecision::abs(z.re) < tol) {
        for (int sign : {1, -1}) {
            mpreal y = sign * z.im - cb;
            if (y < -tol)
                continue;
            int mmax = static_cast<int>((y / b).convert_to<double>()) + 1;
            for (int m = 0; m <= mmax; ++m) {
                mpreal rest = y - m * b;
                if (rest < -tol)
                    break;
                mpreal n = round(rest / binv);
                if (boost::multiprecision::abs(rest - n * binv) < tol) {
                    if (sign > 0)
                        throw PoleHit("phi_b: argument at a pole");
                    return cplx(0);
                }
            }
        }
    }

    mpreal c = std::max(b, binv);
    cplx factor(1);
    cplx w = z;
    int shifts = 0;
    cplx phase = expi(pi * c * c);
    while (w.im > c / 2) {
        if (++shifts > fo.max_shifts)
            throw ShiftOverflow("phi_b: too many functional-equation shifts");
        w.im -= c;
        // Φ(w + ic) = Φ(w) / (1 + e^{2πcw}e^{iπc²})
        factor /= cplx(1) + exp(2 * pi * c * w) * phase;
    }
    while (w.im < -c / 2) {
        if (++shifts > fo.max_shifts)
            throw ShiftOverflow("phi_b: too many functional-equation shifts");
        factor *= cplx(1) + exp(2 * pi * c * w) * phase;
        w.im += c;
    }
    return exp(log_phi_b_strip(w, b, ctx)) * factor;
}

// Ŝ_N(z) = Φ_{1/√N}((√N/2π)(z − i(π − π/N))) straight from the integral.
inline cplx s_hat_quadrature(const cplx& z_in, int N, const PrecisionContext& ctx)
{
    require_odd(N);
    scoped_precision guard(ctx);
    cplx z = rebase(z_in);
    mpreal pi = const_pi();
    mpreal sqrtN = sqrt(mpreal(N));
    cplx w = (z - cplx(mpreal(0), pi - pi / N)) * (sqrtN / (2 * pi));
    return phi_b(w, 1 / sqrtN, ctx);
}

// ---------------------------------------------------------------------------
// Ŝ_N in closed form

namespace detail {

// Distance checks against the pole set 2iπ + 2ipπ/N and the zero set −2iπ(l+1)/N.
inline void check_s_hat_singular(const cplx& z, int N, const mpreal& tol)
{
    if (boost::multiprecision::abs(z.re) >= tol)
        return;
    mpreal pi = const_pi();
    mpreal step = 2 * pi / N;
    mpreal k = round(z.im / step);
    if (boost::multiprecision::abs(z.im - k * step) >= tol)
        return;
    if (k >= N)
        throw PoleHit("s_hat: argument at a pole 2i*pi + 2i*p*pi/N");
    if (k <= -1)
        throw ZeroHit("s_hat: argument at a zero -2i*pi*(l+1)/N");
}

// log Ŝ_N(z) for Re z <= 0:
// (i/2πN)[Li₂(e^{Nz}) + Nz·Log(1 − e^{Nz})] + (1/N)Σ_{j=1}^{N−1}(N−j)·Log(1 − e^zζ^j).
inline cplx log_s_hat_left(const cplx& z, int N, const mpreal& tol)
{
    mpreal pi = const_pi();
    cplx X = exp(z * N);
    cplx one_minus_X = cplx(1) - X;
    cplx head = li2(X);
    if (!(z.re == 0 && z.im == 0))
        head += z * N * log(one_minus_X);
    head = mul_i(head) / (2 * pi * N);
    return head + weighted_log_sum(exp(z), N, tol) / N;
}

}  // namespace detail

// A logarithm of Ŝ_N(z), analytic in z away from the pole and zero sets.
// For Re z > 0 the inversion relation Ŝ_N(z)·Ŝ_N(z′) = e^{iπ(b²+b⁻²)/12}·e^{iπw²},
// z′ = −z + 2i(π − π/N), w = (√N/2π)(z − i(π − π/N)), brings z to the left half-plane.
namespace detail {

inline cplx log_s_hat_closed(const cplx& z, int N, const mpreal& tol)
{
    if (z.re <= 0)
        return log_s_hat_left(z, N, tol);
    mpreal pi = const_pi();
    cplx shift(mpreal(0), pi - pi / N);
    cplx zp = -z + shift * 2;
    cplx v = z - shift;
    // iπw² with w = (√N/2π)v equals iNv²/(4π).
    cplx quad = mul_i(v * v) * (mpreal(N) / (4 * pi));
    mpreal c = pi * (mpreal(1) / N + N) / 12;
    return cplx(mpreal(0), c) + quad - log_s_hat_left(zp, N, tol);
}

}  // namespace detail

inline cplx log_s_hat(const cplx& z_in, int N, const PrecisionContext& ctx)
{
    require_odd(N);
    scoped_precision guard(ctx);
    cplx z = rebase(z_in);
    mpreal tol = proximity_tol(ctx);
    detail::check_s_hat_singular(z, N, tol);
    // At 2πik/N, 0 < k < N, the closed form pairs two logarithmic
    // singularities that cancel. Near those points take the mean of the
    // closed form over a circle of radius step/4 instead; the nearest
    // singularity of log Ŝ_N is a full step away.
    mpreal pi = const_pi();
    mpreal step = 2 * pi / N;
    mpreal k = round(z.im / step);
    cplx centre(mpreal(0), k * step);
    if (k >= 1 && k <= N - 1 && abs(z - centre) < step / 8) {
        mpreal r = step / 4;
        int m = static_cast<int>(1.7 * (ctx.digits + guard_digits)) + 8;
        cplx sum;
        for (int j = 0; j < m; ++j) {
            cplx e = expi(2 * pi * j / m);
            cplx w = e * r;
            // Cauchy's formula for f(z) with z inside the circle around the centre.
            sum += detail::log_s_hat_closed(centre + w, N, tol) * w / (w - (z - centre));
        }
        return sum / m;
    }
    return detail::log_s_hat_closed(z, N, tol);
}

inline cplx s_hat(const cplx& z, int N, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    return exp(log_s_hat(z, N, ctx));
}

// ---------------------------------------------------------------------------
// Cyclic dilogarithm and g_N

inline void check_fermat(const cplx& x, const cplx& y, int N, const PrecisionContext& ctx)
{
    cplx xn = ipow(x, N), yn = ipow(y, N);
    mpreal scale = std::max({mpreal(1), abs(xn), abs(yn)});
    if (abs(xn + yn - cplx(1)) > ctx.eps(8) * scale)
        throw CurveViolation("(x, y) is not on x^N + y^N = 1");
}

// ω_N(x, y | n) = ∏_{j=1}^{n} y/(1 − xζ^j).
inline cplx omega(const cplx& x_in, const cplx& y_in, long n, int N, const PrecisionContext& ctx)
{
    require_odd(N);
    if (n < 0)
        throw ValidationError("omega: n must be non-negative");
    scoped_precision guard(ctx);
    cplx x = rebase(x_in), y = rebase(y_in);
    check_fermat(x, y, N, ctx);
    const auto& zeta = zeta_powers(N);
    cplx w(1);
    mpreal tol = proximity_tol(ctx);
    for (long j = 1; j <= n; ++j) {
        cplx d = cplx(1) - x * zeta[j % N];
        if (abs(d) < tol)
            throw DivisionByZero("omega: 1 - x*zeta^j vanishes");
        w = w * y / d;
    }
    return w;
}

// g_N(z) = ∏_{j=1}^{N−1} (1 − zζ^{−j})^{j/N} with principal powers.
inline cplx g_n(const cplx& z_in, int N, const PrecisionContext& ctx)
{
    require_odd(N, 1);
    scoped_precision guard(ctx);
    cplx z = rebase(z_in);
    if (N == 1)
        return cplx(1);
    return exp(detail::weighted_log_sum(z, N, proximity_tol(ctx)) / N);
}

// ---------------------------------------------------------------------------
// Correction terms Ξ_N and Ψ_N

// Ξ_N(z) = ∫_Ω ε(v/N)·exp(−izv/π − v + v/N)/(4 sinh v) dv, Ω the real line
// passing above 0 along a half circle of radius 1/2.
inline cplx xi_n(const cplx& z_in, int N, const PrecisionContext& ctx)
{
    require_odd(N);
    scoped_precision guard(ctx);
    cplx z = rebase(z_in);
    mpreal pi = const_pi();
    mpreal rate_pos = 2 - mpreal(1) / N - z.im / pi;
    mpreal rate_neg = z.im / pi + mpreal(1) / N;
    if (rate_pos <= 0 || rate_neg <= 0)
        throw StripViolation("xi_n: Im z must lie in (-pi/N, 2pi - pi/N)");
    int d = ctx.digits + guard_digits;
    mpreal Vp = mpreal((d + 5) * std::log(10.0)) / rate_pos + 2;
    mpreal Vn = mpreal((d + 5) * std::log(10.0)) / rate_neg + 2;
    mpreal invN = mpreal(1) / N;
    cplx a = -mul_i(z) / pi - cplx(1) + cplx(invN);

    auto f = [&](const cplx& v) { return eps_fn(v * invN) * exp(a * v) / (sinh(v) * 4); };
    double freq = std::abs(z.re.convert_to<double>()) / M_PI + 1;
    auto graded = [&](const mpreal& V, int sign, std::vector<PathPiece>& out) {
        std::vector<mpreal> cuts{mpreal("0.5")};
        while (cuts.back() * 2 < V)
            cuts.push_back(cuts.back() * 2);
        cuts.push_back(V);
        std::vector<PathPiece> seg;
        for (std::size_t k = 1; k < cuts.size(); ++k) {
            int n = 1 + static_cast<int>((cuts[k] - cuts[k - 1]).convert_to<double>() * freq / 2);
            seg.push_back(PathPiece::line(cplx(cuts[k - 1] * sign), cplx(cuts[k] * sign), n));
        }
        if (sign < 0) {
            for (auto it = seg.rbegin(); it != seg.rend(); ++it)
                out.push_back(PathPiece::line(it->b, it->a, it->panels));
        } else {
            out.insert(out.end(), seg.begin(), seg.end());
        }
    };
    std::vector<PathPiece> pieces;
    graded(Vn, -1, pieces);
    pieces.push_back(PathPiece::arc(cplx(0), mpreal("0.5"), pi, mpreal(0), 2));
    graded(Vp, 1, pieces);
    QuadOptions opt;
    opt.rel_tol = ctx.quad_rel_tol;
    opt.abs_tol = std::pow(10.0, std::max(-(ctx.digits + 2), -300));
    return integrate_path(f, pieces, opt).value;
}

// Ψ_N = Ξ_N + (N/2)[Log(1 − e^z) − (N/iπ)(Li₂(e^z) − Li₂(e^{z+iπ/N}))], so that
// Log Ŝ_N(z) = (N/2iπ)Li₂(e^z) − ½Log(1 − e^z) + Ψ_N(z)/N modulo 2πi.
inline cplx psi_n(const cplx& z_in, int N, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx z = rebase(z_in);
    mpreal pi = const_pi();
    cplx ez = exp(z);
    cplx ez2 = exp(z + cplx(mpreal(0), pi / N));
    cplx dl = li2(ez) - li2(ez2);
    // (N/iπ)·dl = −i(N/π)·dl
    cplx term = log(cplx(1) - ez) + mul_i(dl) * (mpreal(N) / pi);
    return xi_n(z, N, ctx) + term * (mpreal(N) / 2);
}

// ---------------------------------------------------------------------------
// Error envelope for |Ψ_N| on ]−∞, M] + i[δ − π/N, 2π − δ − π/N]

struct ErrorEnvelope {
    double bound = 0;
    double delta = 0;
    double M = 0;
    double B_prime = 0;
    double B_doubleprime = 0;

    static ErrorEnvelope make(double delta, double M, double B_prime, double B_doubleprime)
    {
        if (!(delta > 0 && delta < M_PI))
            throw ValidationError("ErrorEnvelope: delta must lie in (0, pi)");
        ErrorEnvelope e;
        e.delta = delta;
        e.M = M;
        e.B_prime = B_prime;
        e.B_doubleprime = B_doubleprime;
        e.bound = e.B_delta() + M_PI * std::exp(M / 2) / (2 * delta * std::sqrt(1 - M_PI * M_PI / 24));
        return e;
    }

    double B_delta() const { return B_prime / delta + B_doubleprime; }
    double c_M() const { return std::sqrt(1 + std::exp(M)); }
    // Bound on |e^z/(1 − e^z)| over the same half-strip.
    double exp_ratio_bound() const { return std::exp(M / 2) / (delta * std::sqrt(1 - M_PI * M_PI / 24)); }
};

}  // namespace qhi
