#pragma once

// Direct transcriptions of the defining sums, kept free of the library's
// incremental and prefix-product shortcuts. Cost is O(N²) per call.

#include <random>
#include <vector>

#include "qhi/qhi.hpp"

namespace qhi::oracle {

inline cplx zeta(int N, long k)
{
    return expi(2 * const_pi() * mpreal(k) / N);
}

// ω_N(x, y | n) = ∏_{j=1}^{n} y/(1 − xζ^j), every factor recomputed.
inline cplx omega(const cplx& x, const cplx& y, long n, int N)
{
    cplx w(1);
    for (long j = 1; j <= n; ++j)
        w = w * y / (cplx(1) - x * zeta(N, j));
    return w;
}

// Σ_{β=0}^{N−1} ζ^{β²}·ω_N(x0, 1/x1 | β), each ω from scratch.
inline cplx sigma(const cplx& x0, const cplx& x1, int N)
{
    cplx y = cplx(1) / x1;
    cplx s;
    for (long beta = 0; beta < N; ++beta)
        s += zeta(N, beta * beta) * omega(x0, y, beta, N);
    return s;
}

// g_N(x) = ∏_{j=1}^{N−1} exp((j/N)·Log(1 − xζ^{−j})).
inline cplx g(const cplx& x, int N)
{
    cplx s;
    for (int j = 1; j < N; ++j)
        s += log(cplx(1) - x * zeta(N, -j)) * (mpreal(j) / N);
    return exp(s);
}

inline cplx reduced(const QuantumGluingPoint& q)
{
    int N = q.N;
    cplx v0s = conj(q.vq[0]), v1s = conj(q.vq[1]);
    mpreal g1 = abs(g(cplx(1), N));
    return g(q.uq[0], N) * conj(g(v0s, N)) / (g1 * g1) * sigma(q.uq[0], q.uq[1], N) * conj(sigma(v0s, v1s, N));
}

// Points near the complete point, v0 taken as the root closest to e^{−iπ/3}
// so the branch structure of the logs is the geometric one.
inline std::vector<GluingPoint> random_points(int count, std::mt19937_64& rng, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    std::uniform_real_distribution<double> d(-0.05, 0.05);
    std::vector<GluingPoint> out;
    GluingPoint c = complete_point(ctx);
    while (static_cast<int>(out.size()) < count) {
        cplx u0 = c.u0 * cplx(1 + d(rng), d(rng));
        auto roots = solve_curve(u0, ctx);
        const GluingPoint* best = nullptr;
        for (const auto& r : roots)
            if (!best || abs(r.v0 - c.v0) < abs(best->v0 - c.v0))
                best = &r;
        out.push_back(*best);
    }
    return out;
}

}  // namespace qhi::oracle
