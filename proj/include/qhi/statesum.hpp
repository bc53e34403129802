#pragma once

#include <chrono>
#include <vector>

#include "qhi/contour.hpp"
#include "qhi/gluing.hpp"

namespace qhi {

struct StateSumResult {
    int N = 0;
    cplx sigma_u, sigma_vstar;
    cplx g_u0, g_v0star;
    cplx reduced;
    cplx defect;
    mpreal full_modulus;
    mpreal growth;
    int digits_used = 0;
    double seconds = 0;
};

// Σ_N(x0, x1) = Σ_{β=0}^{N−1} ζ^{β²}·ω_N(x0, x1⁻¹ | β), with ω built incrementally.
inline cplx sigma_n(const cplx& x0_in, const cplx& x1_in, int N, const PrecisionContext& ctx)
{
    require_odd(N);
    scoped_precision guard(ctx);
    cplx x0 = rebase(x0_in);
    cplx y = cplx(1) / rebase(x1_in);
    check_fermat(x0, y, N, ctx);
    const auto& zeta = zeta_powers(N);
    mpreal tol = proximity_tol(ctx);
    cplx w(1), sum(1);
    for (long beta = 1; beta < N; ++beta) {
        cplx d = cplx(1) - x0 * zeta[beta];
        if (abs(d) < tol)
            throw DivisionByZero("sigma_n: 1 - x0*zeta^beta vanishes");
        w = w * y / d;
        sum += zeta[(beta * beta) % N] * w;
    }
    return sum;
}

inline StateSumResult full_qhi(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    auto t0 = std::chrono::steady_clock::now();
    scoped_precision guard(ctx);
    int N = q.N;
    StateSumResult r;
    r.N = N;
    cplx uq0 = rebase(q.uq[0]), uq1 = rebase(q.uq[1]);
    cplx vs0 = conj(rebase(q.vq[0])), vs1 = conj(rebase(q.vq[1]));
    r.sigma_u = sigma_n(uq0, uq1, N, ctx);
    r.sigma_vstar = sigma_n(vs0, vs1, N, ctx);
    r.g_u0 = g_n(uq0, N, ctx);
    r.g_v0star = g_n(vs0, N, ctx);
    mpreal g1 = abs(g_n(cplx(1), N, ctx));
    r.reduced = r.g_u0 * conj(r.g_v0star) / (g1 * g1) * r.sigma_u * conj(r.sigma_vstar);
    r.defect = ipow(uq0 * rebase(q.vq[0]), -static_cast<long>((N - 1) / 2));
    r.full_modulus = abs(r.defect) * abs(r.reduced);
    if (r.full_modulus == 0)
        throw NumericError("full_qhi: invariant vanishes, growth undefined");
    r.growth = 2 * const_pi() / N * log(r.full_modulus);
    r.digits_used = ctx.digits;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline cplx reduced_qhi(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    return full_qhi(q, ctx).reduced;
}

// ⟨K⟩_N = Σ_{j=0}^{N−1} ∏_{k=1}^{j} |1 − ζ^k|⁻², with |1 − ζ^k|² = 4 sin²(πk/N).
inline mpreal kashaev(int N, const PrecisionContext& ctx)
{
    require_odd(N, 1);
    scoped_precision guard(ctx);
    mpreal pi = const_pi();
    mpreal term = 1, sum = 1;
    for (int j = 1; j < N; ++j) {
        mpreal s = sin(pi * j / N);
        term /= 4 * s * s;
        sum += term;
    }
    return sum;
}

namespace detail {

// J_N(u0, v0 | i) for any i >= 0, without range restriction.
inline cplx j_kernel_raw(const cplx& u0_in, const cplx& v0_in, long i, int N, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx u0 = rebase(u0_in), v0 = rebase(v0_in);
    mpreal tol = proximity_tol(ctx);
    long top = i + N;
    // prefix products ∏_{k=1}^{m}(1 − xζ^k)
    std::vector<cplx> pu(top + 1, cplx(1)), pv(top + 1, cplx(1));
    for (long k = 1; k <= top; ++k) {
        cplx z = zeta_pow(N, k);
        pu[k] = pu[k - 1] * (cplx(1) - u0 * z);
        pv[k] = pv[k - 1] * (cplx(1) - v0 * z);
    }
    cplx u2 = u0 * u0, v2 = v0 * v0;
    cplx upow = ipow(u2, i);            // u0^{2(i+j)}
    cplx vpow = ipow(v2, -i);           // v0^{−2(i−j)}
    cplx sum;
    for (long j = 0; j < N; ++j) {
        if (abs(pu[i + j]) < tol)
            throw DivisionByZero("j_kernel: denominator product vanishes");
        cplx term = zeta_pow(N, 4 * i * j + i) * upow * vpow * pv[i + N - j - 1] / pu[i + j];
        sum += term;
        upow *= u2;
        vpow *= v2;
    }
    return g_n(u0, N, ctx) / (g_n(v0, N, ctx) * N) * sum;
}

}  // namespace detail

// J_N(u0, v0 | i) = g_N(u0)/(N g_N(v0))·Σ_j ζ^{4ij+i} u0^{2(i+j)} v0^{−2(i−j)}
//                   ·∏_{k=1}^{i+N−j−1}(1 − v0ζ^k) / ∏_{k=1}^{i+j}(1 − u0ζ^k).
inline cplx j_kernel(const cplx& u0, const cplx& v0, long i, int N, const PrecisionContext& ctx)
{
    require_odd(N);
    if (i < 0 || i >= N)
        throw ValidationError("j_kernel: i must lie in [0, N)");
    return detail::j_kernel_raw(u0, v0, i, N, ctx);
}

// Σ_{i=0}^{N−1} κ(λ_K)^{−i}·J_N(uq0, vq0 | i).
inline cplx kernel_sum(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx kl = boundary_weight(q, ctx).first;
    cplx inv = cplx(1) / kl;
    cplx w(1), sum;
    for (long i = 0; i < q.N; ++i) {
        sum += w * j_kernel(q.uq[0], q.vq[0], i, q.N, ctx);
        w *= inv;
    }
    return sum;
}

struct ResidueCheck {
    cplx lhs, rhs;
    mpreal rel_diff;
    QuadResult quad;
};

// Σ_N(uq0, uq1) against 1 + (1/Ŝ_N(l0))·(N/4iπ)·∮ e^{(N/2iπ)(z² − l1 z)}·Ŝ_N(l0 + z)·coth(Nz/2) dz.
inline ResidueCheck residue_check(const QuantumGluingPoint& q, const Contour& contour, const PrecisionContext& ctx)
{
    if (contour.vertices.size() < 2 || !contour.closed())
        throw ContourInvalid("residue_check: contour must be closed");
    scoped_precision guard(ctx);
    int N = q.N;
    mpreal pi = const_pi();
    cplx l0 = rebase(q.l0u), l1 = rebase(q.l1u);
    mpreal tol = proximity_tol(ctx);
    mpreal step = 2 * pi / N;

    // coth(Nz/2) has poles at 2πiβ/N; Ŝ_N(l0 + z) at 2πi + 2πip/N − l0.
    mpreal lo = 0, hi = 0;
    for (const cplx& v : contour.vertices) {
        lo = std::min(lo, v.im);
        hi = std::max(hi, v.im);
    }
    long bmin = static_cast<long>(floor(lo / step).convert_to<double>()) - 1;
    long bmax = static_cast<long>(ceil(hi / step).convert_to<double>()) + 1;
    for (long beta = bmin; beta <= bmax; ++beta) {
        if (contour_distance(contour, cplx(mpreal(0), step * beta)) < tol)
            throw PoleOnContour("residue_check: contour passes through a pole of coth(Nz/2)");
    }
    long pmin = static_cast<long>(floor(((lo + l0.im) - 2 * pi) / step).convert_to<double>()) - 1;
    long pmax = static_cast<long>(ceil(((hi + l0.im) - 2 * pi) / step).convert_to<double>()) + 1;
    for (long p = std::max(0L, pmin); p <= pmax; ++p) {
        cplx pole = cplx(mpreal(0), 2 * pi + step * p) - l0;
        if (contour_distance(contour, pole) < tol)
            throw PoleOnContour("residue_check: contour passes through a pole of s_hat");
    }

    contour.validate(tol);

    cplx log_s0 = log_s_hat(l0, N, ctx);
    mpreal n2pi = mpreal(N) / (2 * pi);
    auto integrand = [&](const cplx& z) {
        // (N/2iπ)·w = −i·(N/2π)·w
        cplx e = -mul_i(z * z - l1 * z) * n2pi + log_s_hat(l0 + z, N, ctx) - log_s0;
        return exp(e) * coth(z * N / 2);
    };
    QuadOptions opt;
    opt.rel_tol = ctx.quad_rel_tol;
    ResidueCheck rc;
    rc.quad = integrate_path(integrand, contour.pieces(), opt);
    // N/(4iπ) = −i·N/(4π)
    rc.rhs = cplx(1) - mul_i(rc.quad.value) * (mpreal(N) / (4 * pi));
    rc.lhs = sigma_n(q.uq[0], q.uq[1], N, ctx);
    rc.rel_diff = abs(rc.lhs - rc.rhs) / abs(rc.lhs);
    return rc;
}

inline ResidueCheck residue_check(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    return residue_check(q, residue_rectangle(q.N), ctx);
}

}  // namespace qhi
