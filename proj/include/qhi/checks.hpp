#pragma once

#include <random>
#include <string>
#include <vector>

#include "qhi/io.hpp"

namespace qhi {

struct CheckResult {
    std::string name;
    double value = 0;      // the measured error or quantity
    double tolerance = 0;
    bool pass = false;
    std::string detail;
};

inline CheckResult make_check(std::string name, double value, double tol, std::string detail = "")
{
    return {std::move(name), value, tol, value <= tol, std::move(detail)};
}

inline bool all_pass(const std::vector<CheckResult>& rs)
{
    for (const auto& r : rs)
        if (!r.pass)
            return false;
    return true;
}

namespace detail {

// Random point off the imaginary axis, where the poles and zeros of Ŝ_N sit.
inline cplx random_strip_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> re(0.05, 2.5), im(-1.0, 2 * M_PI - 0.5), sign(0, 1);
    double x = re(rng);
    if (sign(rng) < 0.6)
        x = -x;
    return cplx(mpreal(x), mpreal(im(rng)));
}

}  // namespace detail

// |g_N(1)| = √N.
inline CheckResult check_g_modulus(int N, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    mpreal rt = sqrt(mpreal(N));
    mpreal err = abs(abs(g_n(cplx(1), N, ctx)) - rt) / rt;
    return make_check("g_N(1) modulus", to_double(err), to_double(ctx.eps(8)));
}

// Ŝ_N(z) = Ŝ_N(z + 2iπ/N)(1 − e^{z + 2iπ/N}) at random points.
inline CheckResult check_s_hat_functional(int N, int samples, std::mt19937_64& rng, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx step(mpreal(0), 2 * const_pi() / N);
    mpreal worst = 0;
    for (int k = 0; k < samples; ++k) {
        cplx z = detail::random_strip_point(rng);
        cplx lhs = s_hat(z, N, ctx);
        cplx rhs = s_hat(z + step, N, ctx) * (cplx(1) - exp(z + step));
        worst = std::max(worst, abs(lhs - rhs) / abs(lhs));
    }
    return make_check("s_hat functional equation", to_double(worst), to_double(ctx.eps(5)),
                      std::to_string(samples) + " points");
}

// ω_N(x, y | N) = 1 and ω_N(e^z, y | n) = yⁿ·Ŝ_N(z + 2niπ/N)/Ŝ_N(z) on x^N + y^N = 1.
inline std::vector<CheckResult> check_omega(int N, int samples, std::mt19937_64& rng, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    std::uniform_int_distribution<int> pick(1, N - 1);
    mpreal worst_period = 0, worst_ratio = 0;
    mpreal two_pi_n = 2 * const_pi() / N;
    for (int k = 0; k < samples; ++k) {
        cplx z = detail::random_strip_point(rng);
        cplx x = exp(z);
        cplx y = exp(log(cplx(1) - ipow(x, N)) / N);
        worst_period = std::max(worst_period, abs(omega(x, y, N, N, ctx) - cplx(1)));
        int n = pick(rng);
        cplx w = omega(x, y, n, N, ctx);
        cplx r = ipow(y, n) * s_hat(z + cplx(mpreal(0), two_pi_n * n), N, ctx) / s_hat(z, N, ctx);
        worst_ratio = std::max(worst_ratio, abs(w - r) / abs(w));
    }
    std::string pts = std::to_string(samples) + " points";
    return {make_check("omega periodicity", to_double(worst_period), to_double(ctx.eps(8)), pts),
            make_check("omega ratio identity", to_double(worst_ratio), to_double(ctx.eps(8)), pts)};
}

// J_N(1, 1 | 0) = ⟨K⟩_N.
inline CheckResult check_kashaev_kernel(int N, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    mpreal k = kashaev(N, ctx);
    mpreal err = abs(j_kernel(cplx(1), cplx(1), 0, N, ctx) - cplx(k)) / k;
    return make_check("J_N(1,1|0) = Kashaev", to_double(err), to_double(ctx.eps(8)));
}

// Σ_i κ(λ)^{−i} J_N(uq0, vq0 | i) against the reduced invariant.
inline CheckResult check_kernel_sum(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx red = reduced_qhi(q, ctx);
    mpreal err = abs(kernel_sum(q, ctx) - red) / abs(red);
    return make_check("kernel sum = reduced invariant", to_double(err), to_double(ctx.eps(12)));
}

inline CheckResult check_residue(const QuantumGluingPoint& q, const PrecisionContext& ctx, double tol = 1e-8)
{
    ResidueCheck rc = residue_check(q, ctx);
    return make_check("residue identity", to_double(rc.rel_diff), tol,
                      "quad_rel_tol " + decimal(ctx.quad_rel_tol));
}

// The exact-identity suite at one N. Every check is an identity that holds to
// working precision (or quadrature tolerance for the residue integral).
inline std::vector<CheckResult> exact_suite(int N, const ColorSystem& colors, const GluingPoint& p,
                                            const PrecisionContext& ctx, std::uint64_t seed = 20260101)
{
    require_odd(N);
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    out.push_back(check_g_modulus(N, ctx));
    out.push_back(check_s_hat_functional(N, 20, rng, ctx));
    for (auto& r : check_omega(N, 10, rng, ctx))
        out.push_back(r);
    out.push_back(check_kashaev_kernel(N, ctx));
    QuantumGluingPoint q = quantum_lift(p, colors, N, ctx);
    out.push_back(check_kernel_sum(q, ctx));
    out.push_back(check_residue(q, ctx));
    return out;
}

// Limits of √N|I_±,N| in case (b) along the deformed contours.
inline constexpr double spm_constant_plus = 3.303;
inline constexpr double spm_constant_minus = 5.34;

// Classical-integral constants at one N: case (b) checks √N|I_±| against the
// limits above at 1%; case (a) checks (2π/N)Log|I_−| against Vol/2 at 0.05.
inline std::vector<CheckResult> spm_suite(Case c, int N, const ContourParams& prm, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    std::vector<CheckResult> out;
    double sn = std::sqrt(static_cast<double>(N));
    if (c == Case::B) {
        for (Variant v : {Variant::Plus, Variant::Minus}) {
            Potential p = Potential::limit(c, v);
            ClassicalIntegral I = classical_integral(p, N, prm, ctx);
            double m = sn * to_double(abs(I.value));
            double target = v == Variant::Plus ? spm_constant_plus : spm_constant_minus;
            out.push_back(make_check(std::string("sqrt(N)|I_") + (v == Variant::Plus ? "+" : "-") + "|",
                                     std::abs(m - target) / target, 0.01,
                                     "value " + decimal(m) + " target " + decimal(target) + " contour " +
                                         scenario_name(I.scenario)));
            cplx sp = spm_prediction(p, N, ctx);
            double ratio = to_double(abs(I.value / sp - cplx(1)));
            out.push_back(make_check(std::string("SPM ratio ") + variant_name(v), ratio, 0.01,
                                     "|I/SPM - 1|"));
        }
    } else {
        Potential p = Potential::limit(c, Variant::Minus);
        ClassicalIntegral I = classical_integral(p, N, prm, ctx);
        double g = to_double(2 * const_pi() / N * log(abs(I.value)));
        double half_vol = to_double(volume_41()) / 2;
        out.push_back(make_check("growth of I_-", std::abs(g - half_vol), 0.05,
                                 "value " + decimal(g) + " target " + decimal(half_vol)));
    }
    return out;
}

}  // namespace qhi
