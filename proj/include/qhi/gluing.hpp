#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <utility>
#include <vector>

#include "qhi/faddeev.hpp"

namespace qhi {

// Shape parameters of one ideal tetrahedron, w_{k+1} = 1/(1 − w_k).
struct ShapeTriple {
    cplx w0, w1, w2;

    static ShapeTriple from(const cplx& w0)
    {
        if ((w0.re == 0 || w0.re == 1) && w0.im == 0)
            throw DegenerateInput("shape parameter in {0, 1}");
        ShapeTriple t;
        t.w0 = w0;
        t.w1 = cplx(1) / (cplx(1) - w0);
        t.w2 = cplx(1) / (cplx(1) - t.w1);
        return t;
    }

    const cplx& operator[](int k) const { return k == 0 ? w0 : (k == 1 ? w1 : w2); }
};

// A point (u0, v0) of the gluing curve u0²v0² = (1 − u0)(1 − v0).
struct GluingPoint {
    cplx u0, v0;
    ShapeTriple u, v;

    static GluingPoint make(const cplx& u0, const cplx& v0)
    {
        GluingPoint p;
        p.u0 = u0;
        p.v0 = v0;
        p.u = ShapeTriple::from(u0);
        p.v = ShapeTriple::from(v0);
        return p;
    }
};

inline cplx curve_residual(const cplx& u0, const cplx& v0)
{
    return u0 * u0 * v0 * v0 - (cplx(1) - u0) * (cplx(1) - v0);
}

inline GluingPoint complete_point(const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    mpreal t = const_pi() / 3;
    return GluingPoint::make(expi(t), expi(-t));
}

// Both roots v0 of u0²v0² + (1 − u0)v0 − (1 − u0) = 0, sorted by (Im, Re).
inline std::vector<GluingPoint> solve_curve(const cplx& u0_in, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx u0 = rebase(u0_in);
    if ((u0.re == 0 || u0.re == 1) && u0.im == 0)
        throw DegenerateInput("solve_curve: u0 in {0, 1}");
    cplx a = u0 * u0;
    cplx b = cplx(1) - u0;
    cplx c = -b;
    cplx disc = sqrt(b * b - a * c * 4);
    // Pick the numerically stable pairing of the quadratic formula.
    cplx q = (b.re * disc.re + b.im * disc.im >= 0) ? -(b + disc) / 2 : -(b - disc) / 2;
    std::vector<cplx> roots;
    if (q.re == 0 && q.im == 0) {
        roots = {cplx(0), cplx(0)};
    } else {
        roots = {q / a, c / q};
    }
    std::sort(roots.begin(), roots.end(), [](const cplx& x, const cplx& y) {
        if (x.im != y.im)
            return x.im < y.im;
        return x.re < y.re;
    });
    std::vector<GluingPoint> out;
    for (const cplx& v : roots) {
        if ((v.re == 0 || v.re == 1) && v.im == 0)
            continue;
        out.push_back(GluingPoint::make(u0, v));
    }
    return out;
}

// δ(λ_K) = u0⁴/(1 − u0)², δ(μ_K) = (u0 − 1)(v0 − 1)/(u0·v0).
inline std::pair<cplx, cplx> dilation(const GluingPoint& p, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx u0 = rebase(p.u0), v0 = rebase(p.v0);
    cplx om = cplx(1) - u0;
    cplx dl = (u0 * u0 * u0 * u0) / (om * om);
    cplx dm = (u0 - cplx(1)) * (v0 - cplx(1)) / (u0 * v0);
    return {dl, dm};
}

enum class Case { A, B };

inline const char* case_name(Case c) { return c == Case::A ? "a" : "b"; }

// Integer edge colors with the weight data they were built from. The weights
// are stored as integers: lk_lambda = 2πi·lk_lambda_2pii, lk_mu = πi·lk_mu_pii.
struct ColorSystem {
    long a0 = 0, a1 = 0, a2 = 0;
    long b0 = 0, b1 = 0, b2 = 0;
    long lk_lambda_2pii = 0;
    long lk_mu_pii = 0;
    int h2_mu = 0;
    long h_rho_lambda_2pii = 0;

    cplx lk_lambda() const { return cplx(mpreal(0), 2 * const_pi() * lk_lambda_2pii); }
    cplx lk_mu() const { return cplx(mpreal(0), const_pi() * lk_mu_pii); }
    cplx h_rho_lambda() const { return cplx(mpreal(0), 2 * const_pi() * h_rho_lambda_2pii); }

    long tetra_residual_u() const { return a0 + a1 + a2 + 2; }
    long tetra_residual_v() const { return b0 + b1 + b2 - 2; }
    long edge_residual() const { return a1 + 2 * a2 - 2 * b0 - b1 + 4; }
};

namespace detail {

inline long lattice_multiple(const cplx& v, const mpreal& unit, const char* what)
{
    mpreal tol = pow(mpreal(10), -20);
    mpreal k = round(v.im / unit);
    if (boost::multiprecision::abs(v.re) > tol || boost::multiprecision::abs(v.im - k * unit) > tol)
        throw WeightViolation(std::string(what) + " is off its lattice");
    return k.convert_to<long>();
}

inline long floor_mod2(long x) { return ((x % 2) + 2) % 2; }

}  // namespace detail

// Colors from the weights at the complete point (or from h_ρ elsewhere):
// a1 = −2a0 + lκ(λ)/2πi − 2, b0 = lκ(μ)/πi − a0, b1 = 2a0 − 2lκ(μ)/πi − lκ(λ)/2πi + 2.
inline ColorSystem colors_from_weights(long a0, long lk_lambda_2pii, long lk_mu_pii)
{
    if (a0 < 4 || a0 % 2 != 0)
        throw ValidationError("a0 must be even and >= 4");
    ColorSystem c;
    c.a0 = a0;
    c.a1 = -2 * a0 + lk_lambda_2pii - 2;
    c.b0 = lk_mu_pii - a0;
    c.b1 = 2 * a0 - 2 * lk_mu_pii - lk_lambda_2pii + 2;
    c.a2 = -2 - c.a0 - c.a1;
    c.b2 = 2 - c.b0 - c.b1;
    c.lk_lambda_2pii = lk_lambda_2pii;
    c.lk_mu_pii = lk_mu_pii;
    c.h2_mu = static_cast<int>(detail::floor_mod2(c.a2 + c.b2));
    c.h_rho_lambda_2pii = lk_lambda_2pii;
    return c;
}

inline ColorSystem colors_from_weights(long a0, const cplx& lk_lambda, const cplx& lk_mu, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    mpreal pi = const_pi();
    long kl = detail::lattice_multiple(lk_lambda, 2 * pi, "lk_lambda");
    long km = detail::lattice_multiple(lk_mu, pi, "lk_mu");
    return colors_from_weights(a0, kl, km);
}

inline Case classify_case(const ColorSystem& c)
{
    return detail::floor_mod2(c.a1) == 1 ? Case::A : Case::B;
}

// Default colors of the two cases: a0 = 4, lκ(μ) = 0 and lκ(λ) = 2πi (a) or 4πi (b).
inline ColorSystem default_colors(Case k, long a0 = 4)
{
    return colors_from_weights(a0, k == Case::A ? 1 : 2, 0);
}

struct QuantumGluingPoint {
    GluingPoint base;
    ColorSystem colors;
    int N = 0;
    std::array<cplx, 3> uq, vq;
    // Logarithms of uq0, uq1 and of conj(vq0), conj(vq1), normalized so that
    // Im l0 ∈ (−2π, 0] and Im l1 ∈ (0, 2π].
    cplx l0u, l1u, l0v_star, l1v_star;
    // Multiples of 2πi added during normalization.
    long shift_l0u = 0, shift_l1u = 0, shift_l0v_star = 0, shift_l1v_star = 0;
};

namespace detail {

// Adds 2πik so that Im lies in (lo, lo + 2π].
inline long normalize_window(cplx& l, const mpreal& lo)
{
    mpreal two_pi = 2 * const_pi();
    mpreal k = ceil((lo - l.im) / two_pi);
    l.im += k * two_pi;
    if (l.im <= lo) {
        l.im += two_pi;
        k += 1;
    }
    return k.convert_to<long>();
}

}  // namespace detail

// Quantum shapes uq_k = exp((Log u_k + πi(N+1)a_k)/N) and their normalized logs.
inline QuantumGluingPoint quantum_lift(const GluingPoint& p_in, const ColorSystem& c, int N, const PrecisionContext& ctx)
{
    require_odd(N);
    scoped_precision guard(ctx);
    QuantumGluingPoint q;
    q.base = GluingPoint::make(rebase(p_in.u0), rebase(p_in.v0));
    q.colors = c;
    q.N = N;
    mpreal pi = const_pi();
    const GluingPoint& p = q.base;
    if (abs(curve_residual(p.u0, p.v0)) > ctx.eps(8) * std::max(mpreal(1), norm(p.u0) * norm(p.v0)))
        throw CurveViolation("quantum_lift: (u0, v0) is not on the gluing curve");

    std::array<long, 3> a{c.a0, c.a1, c.a2}, b{c.b0, c.b1, c.b2};
    std::array<cplx, 3> Lu, Lv;
    for (int k = 0; k < 3; ++k) {
        Lu[k] = (log(p.u[k]) + cplx(mpreal(0), pi * (N + 1) * a[k])) / N;
        Lv[k] = (log(p.v[k]) + cplx(mpreal(0), pi * (N + 1) * b[k])) / N;
        q.uq[k] = exp(Lu[k]);
        q.vq[k] = exp(Lv[k]);
    }

    mpreal tol = ctx.eps(8);
    auto rel = [](const cplx& x, const cplx& target) { return abs(x - target) / abs(target); };
    cplx tet_u = q.uq[0] * q.uq[1] * q.uq[2];
    cplx tet_v = q.vq[0] * q.vq[1] * q.vq[2];
    cplx edge = q.uq[1] * q.uq[0] * q.uq[0] / (q.vq[2] * q.vq[2] * q.vq[1]);
    if (rel(tet_u, expi(-pi / N)) > tol || rel(tet_v, expi(pi / N)) > tol)
        throw RelationViolation("quantum_lift: tetrahedral relation fails");
    if (rel(edge, expi(-2 * pi / N)) > tol)
        throw RelationViolation("quantum_lift: edge relation fails");
    for (int k = 0; k < 3; ++k) {
        if (rel(ipow(q.uq[k], N), p.u[k]) > tol || rel(ipow(q.vq[k], N), p.v[k]) > tol)
            throw RelationViolation("quantum_lift: quantum shape is not an N-th root");
    }

    mpreal two_pi = 2 * pi;
    q.l0u = Lu[0];
    q.l1u = Lu[1];
    q.l0v_star = conj(Lv[0]);
    q.l1v_star = conj(Lv[1]);
    q.shift_l0u = detail::normalize_window(q.l0u, -two_pi);
    q.shift_l1u = detail::normalize_window(q.l1u, mpreal(0));
    q.shift_l0v_star = detail::normalize_window(q.l0v_star, -two_pi);
    q.shift_l1v_star = detail::normalize_window(q.l1v_star, mpreal(0));
    return q;
}

// κ(λ_K) = uq0²·uq2⁻², κ(μ_K) = uq2·vq2.
inline std::pair<cplx, cplx> boundary_weight(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    cplx kl = q.uq[0] * q.uq[0] / (q.uq[2] * q.uq[2]);
    cplx km = q.uq[2] * q.vq[2];
    return {kl, km};
}

}  // namespace qhi
