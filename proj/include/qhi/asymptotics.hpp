#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qhi/statesum.hpp"

namespace qhi {

enum class Variant { Minus, Plus };

inline const char* variant_name(Variant v) { return v == Variant::Minus ? "minus" : "plus"; }

// f_−(z) = Li₂(e^{l0+z}) + z² − l1·z and f_+(z) = Li₂(e^{l0+z}) + z² − (l1 − 2πi)·z.
struct Potential {
    Variant variant = Variant::Minus;
    cplx l0_inf;
    cplx l1_inf;

    // The coefficient of −z: l1 for Minus, l1 − 2πi for Plus.
    cplx linear() const
    {
        if (variant == Variant::Minus)
            return l1_inf;
        return l1_inf - cplx(mpreal(0), 2 * const_pi());
    }

    // Limits l0 = −2πi, l1 = πi (case a) or 2πi (case b).
    static Potential limit(Case c, Variant v)
    {
        mpreal pi = const_pi();
        Potential p;
        p.variant = v;
        p.l0_inf = cplx(mpreal(0), -2 * pi);
        p.l1_inf = cplx(mpreal(0), c == Case::A ? pi : 2 * pi);
        return p;
    }
};

inline cplx potential_eval(const Potential& p, const cplx& z)
{
    return li2(exp(p.l0_inf + z)) + z * z - p.linear() * z;
}

inline cplx potential_eval(const Potential& p, const cplx& z, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    Potential q{p.variant, rebase(p.l0_inf), rebase(p.l1_inf)};
    return potential_eval(q, rebase(z));
}

// f′(z) = 2z − Log(1 − e^{l0+z}) − l1 (l1 − 2πi for Plus).
inline cplx potential_derivative(const Potential& p, const cplx& z)
{
    cplx w = exp(p.l0_inf + z);
    if (w.im == 0 && w.re > 1)
        throw CutViolation("potential derivative on the cut");
    return z * 2 - log(cplx(1) - w) - p.linear();
}

inline cplx second_derivative(const Potential& p, const cplx& z0)
{
    cplx w = exp(p.l0_inf + z0);
    if (w.im == 0 && w.re >= 1)
        throw CutViolation("second derivative on the cut");
    return cplx(1) + cplx(1) / (cplx(1) - w);
}

inline cplx second_derivative(const Potential& p, const cplx& z0, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    Potential q{p.variant, rebase(p.l0_inf), rebase(p.l1_inf)};
    return second_derivative(q, rebase(z0));
}

// Critical point of f_±: the roots X of e^{−l1}X² + e^{l0}X − 1 = 0 give
// z0 = Log X + 2πik, and the one with f′(z0) = 0 for principal Log is kept.
// That condition places 2·Im z0 in (−π, π] + Im l1, shifted by −2π for Plus.
inline cplx saddle_points(const Potential& p_in, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    Potential p{p_in.variant, rebase(p_in.l0_inf), rebase(p_in.l1_inf)};
    mpreal pi = const_pi();
    cplx lin = p.linear();
    cplx a = exp(-lin);
    cplx b = exp(p.l0_inf);
    cplx disc = sqrt(b * b + a * 4);
    cplx q = (b.re * disc.re + b.im * disc.im >= 0) ? -(b + disc) / 2 : -(b - disc) / 2;
    std::vector<cplx> roots;
    if (!(q.re == 0 && q.im == 0)) {
        roots.push_back(q / a);
        roots.push_back(cplx(-1) / q);
    }
    mpreal tol = ctx.eps(8);
    std::vector<cplx> found;
    for (const cplx& X : roots) {
        if (X.re == 0 && X.im == 0)
            continue;
        cplx L = log(X);
        cplx w = b * X;
        if (abs(cplx(1) - w) < tol)
            continue;
        // f′(Log X) = 2Log X − Log(1 − e^{l0}X) − lin ∈ 2πiℤ; need it in 4πiℤ.
        cplx r = L * 2 - log(cplx(1) - w) - lin;
        mpreal m = round(r.im / (2 * pi));
        if (boost::multiprecision::abs(r.re) > tol * (1 + abs(L)) ||
            boost::multiprecision::abs(r.im - m * 2 * pi) > tol * (1 + abs(L)))
            continue;
        long mi = m.convert_to<long>();
        if (mi % 2 != 0)
            continue;
        cplx z = L - cplx(mpreal(0), pi * mi);
        found.push_back(z);
    }
    if (found.empty())
        throw NoAdmissibleRoot("saddle_points: no critical point satisfies f'(z0) = 0");
    if (found.size() > 1 && abs(found[0] - found[1]) > tol)
        throw NoAdmissibleRoot("saddle_points: critical point is not unique");
    return found[0];
}

// ---------------------------------------------------------------------------
// Contours

enum class Scenario { Rectangle, Vertical, CaseA_Plus, CaseB_Plus, CaseB_Minus };

inline const char* scenario_name(Scenario s)
{
    switch (s) {
    case Scenario::Rectangle: return "rectangle";
    case Scenario::Vertical: return "vertical";
    case Scenario::CaseA_Plus: return "caseA_plus";
    case Scenario::CaseB_Plus: return "caseB_plus";
    case Scenario::CaseB_Minus: return "caseB_minus";
    }
    return "unknown";
}

struct ContourParams {
    double alpha_minus = 0.1;   // s⁻ = α⁻π/N, α⁻ ∈ (0, 1)
    double alpha_plus = 1.5;    // s⁺ = α⁺π/N, α⁺ ∈ (0, 2)
    double eta = 0.3;           // offset below the real axis, CaseB_Plus
    double eta_prime = 0.3;     // offset below 2πi, CaseB_Plus
    double x = -12;             // left edge, CaseA_Plus
    double eps = 0.3;           // half-gap around iπ, CaseB_Minus
    double rect_eps = 0;        // rectangle half-width; 0 means π/N

    void validate() const
    {
        if (!(alpha_minus > 0 && alpha_minus < 1))
            throw ContourInvalid("alpha_minus must lie in (0, 1)");
        if (!(alpha_plus > 0 && alpha_plus < 2))
            throw ContourInvalid("alpha_plus must lie in (0, 2)");
        if (!(eta > 0 && eta < 1) || !(eta_prime > 0 && eta_prime < 1))
            throw ContourInvalid("eta, eta_prime must lie in (0, 1)");
        if (!(x < -1))
            throw ContourInvalid("x must be < -1");
        if (!(eps > 0 && eps < 1))
            throw ContourInvalid("eps must lie in (0, 1)");
        if (rect_eps < 0)
            throw ContourInvalid("rect_eps must be non-negative");
    }
};

namespace detail {

// Initial panels per segment: about one per ten oscillations of e^{−inf},
// whose phase moves at rate n|f′| ≈ n(2|z| + π). Bisection refines from there.
inline int oscillation_panels(const cplx& a, const cplx& b, int N)
{
    double len = to_double(abs(b - a));
    double reach = 2 * std::max(to_double(abs(a)), to_double(abs(b))) + M_PI;
    double oscillations = N / (2 * M_PI) * reach * len / (2 * M_PI);
    return std::max(2, static_cast<int>(std::ceil(oscillations / 10)));
}

inline void register_cuts(Contour& c, const Potential& p)
{
    mpreal two_pi = 2 * const_pi();
    for (int k = -3; k <= 3; ++k)
        c.cuts.push_back(Cut{-p.l0_inf + cplx(mpreal(0), two_pi * k)});
}

}  // namespace detail

// Scenario polylines. Vertices of the deformed routes:
//   CaseA_Plus:  is⁻ → 0 → x → x + 2πi → 2πi → 2πi − is⁺
//   CaseB_Plus:  is⁻ → 0 → −iη → a → a + 2πi − iη′ → 2πi − iη′ → 2πi − is⁺
//   CaseB_Minus: is⁻ → 1 + is⁻ → 1 + i(π − ε) → b + iπ → i(π + ε) → 2πi − is⁺
// with a = Log((√5 − 1)/2) and b = Log((√5 + 1)/2).
inline Contour build_contour(Scenario s, int N, const Potential& p, const ContourParams& prm,
                             const PrecisionContext& ctx)
{
    require_odd(N);
    prm.validate();
    scoped_precision guard(ctx);
    mpreal pi = const_pi();
    Potential pot{p.variant, rebase(p.l0_inf), rebase(p.l1_inf)};
    mpreal sm = pi * mpreal(prm.alpha_minus) / N;
    mpreal sp = pi * mpreal(prm.alpha_plus) / N;
    cplx i2pi(mpreal(0), 2 * pi);
    auto iy = [](const mpreal& y) { return cplx(mpreal(0), y); };

    Contour c;
    c.name = scenario_name(s);
    switch (s) {
    case Scenario::Rectangle: {
        mpreal e = prm.rect_eps > 0 ? mpreal(prm.rect_eps) : pi / N;
        c = residue_rectangle(N, e, sm, sp);
        c.name = scenario_name(s);
        return c;
    }
    case Scenario::Vertical:
        c.vertices = {iy(sm), i2pi - iy(sp)};
        break;
    case Scenario::CaseA_Plus: {
        mpreal x(prm.x);
        c.vertices = {iy(sm), cplx(0), cplx(x), cplx(x) + i2pi, i2pi, i2pi - iy(sp)};
        break;
    }
    case Scenario::CaseB_Plus: {
        mpreal a = log((sqrt(mpreal(5)) - 1) / 2);
        mpreal eta(prm.eta), etap(prm.eta_prime);
        c.vertices = {iy(sm), cplx(0), iy(-eta), cplx(a), cplx(a, 2 * pi - etap), iy(2 * pi - etap), i2pi - iy(sp)};
        break;
    }
    case Scenario::CaseB_Minus: {
        mpreal b = log((sqrt(mpreal(5)) + 1) / 2);
        mpreal e(prm.eps);
        c.vertices = {iy(sm), cplx(mpreal(1), sm), cplx(mpreal(1), pi - e), cplx(b, pi), iy(pi + e), i2pi - iy(sp)};
        break;
    }
    }
    for (std::size_t k = 0; k + 1 < c.vertices.size(); ++k)
        c.panels.push_back(detail::oscillation_panels(c.vertices[k], c.vertices[k + 1], N));
    detail::register_cuts(c, pot);
    c.validate(proximity_tol(ctx));
    return c;
}

inline QuadResult contour_integral_ex(const std::function<cplx(const cplx&)>& f, const Contour& c,
                                      const PrecisionContext& ctx)
{
    c.validate();
    scoped_precision guard(ctx);
    QuadOptions opt;
    opt.rel_tol = ctx.quad_rel_tol;
    return integrate_path(f, c.pieces(), opt);
}

inline cplx contour_integral(const std::function<cplx(const cplx&)>& f, const Contour& c, const PrecisionContext& ctx)
{
    return contour_integral_ex(f, c, ctx).value;
}

enum class Route { Auto, Vertical, Deformed };

inline std::optional<Scenario> deformed_scenario(const Potential& p)
{
    // The two cases are told apart by the limit of l1: πi (a) or 2πi (b).
    double l1 = to_double(p.l1_inf.im);
    bool case_b = std::abs(l1 - 2 * M_PI) < std::abs(l1 - M_PI);
    if (p.variant == Variant::Plus)
        return case_b ? Scenario::CaseB_Plus : Scenario::CaseA_Plus;
    if (case_b)
        return Scenario::CaseB_Minus;
    return std::nullopt;
}

// Decimal digits lost to cancellation on the vertical route: the peak of
// |e^{−inf}| there against the O(1/√N) size of the integral.
inline double vertical_cancellation_digits(const Potential& p, int N)
{
    scoped_precision guard(30);
    double n = N / (2 * M_PI);
    double peak = -1e300;
    for (int k = 1; k < 400; ++k) {
        mpreal y = 2 * const_pi() * k / 400;
        cplx f = potential_eval(p, cplx(mpreal(0), y));
        peak = std::max(peak, to_double(f.im));
    }
    return (n * peak) / std::log(10.0) + 0.5 * std::log10(static_cast<double>(N));
}

struct ClassicalIntegral {
    cplx value;
    Scenario scenario = Scenario::Vertical;
    QuadResult quad;
};

// I_{±,N} = ∫ e^{(N/2iπ) f_±(z)} dz from is⁻ to 2πi − is⁺, along the vertical
// segment or along a deformed contour with the same endpoints.
inline ClassicalIntegral classical_integral(const Potential& p, int N, const ContourParams& prm,
                                            const PrecisionContext& ctx, Route route = Route::Auto)
{
    require_odd(N);
    scoped_precision guard(ctx);
    Potential pot{p.variant, rebase(p.l0_inf), rebase(p.l1_inf)};
    Scenario s = Scenario::Vertical;
    if (route == Route::Deformed) {
        auto d = deformed_scenario(pot);
        if (!d)
            throw ContourInvalid("no deformed scenario for this potential");
        s = *d;
    } else if (route == Route::Auto) {
        auto d = deformed_scenario(pot);
        if (d && vertical_cancellation_digits(pot, N) > ctx.digits - 20)
            s = *d;
    }
    Contour c = build_contour(s, N, pot, prm, ctx);
    mpreal n = mpreal(N) / (2 * const_pi());
    auto f = [&](const cplx& z) { return exp(-mul_i(potential_eval(pot, z)) * n); };
    ClassicalIntegral out;
    out.scenario = s;
    out.quad = contour_integral_ex(f, c, ctx);
    out.value = out.quad.value;
    return out;
}

inline ClassicalIntegral classical_integral(const Potential& p, int N, const mpreal& s_minus, const mpreal& s_plus,
                                            const PrecisionContext& ctx, Route route = Route::Auto)
{
    ContourParams prm;
    prm.alpha_minus = to_double(s_minus * N / const_pi());
    prm.alpha_plus = to_double(s_plus * N / const_pi());
    return classical_integral(p, N, prm, ctx, route);
}

// Steepest-descent direction at z0 for e^{−inf}, oriented upward (Im > 0, or
// Re > 0 when horizontal).
inline cplx descent_direction(const cplx& f2)
{
    mpreal pi = const_pi();
    mpreal th = -pi / 4 - arg(f2) / 2;
    cplx d = expi(th);
    if (d.im < 0 || (d.im == 0 && d.re < 0))
        d = -d;
    return d;
}

// One-term saddle-point value √(2π/n)·e^{iθ}/√|f″(z0)|·e^{−inf(z0)}, n = N/2π.
inline cplx spm_prediction(const Potential& p_in, int N, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    Potential p{p_in.variant, rebase(p_in.l0_inf), rebase(p_in.l1_inf)};
    cplx z0 = saddle_points(p, ctx);
    cplx f2 = second_derivative(p, z0);
    if (abs(f2) < ctx.eps(8))
        throw DegenerateSaddle("spm_prediction: f''(z0) vanishes");
    mpreal n = mpreal(N) / (2 * const_pi());
    cplx e = exp(-mul_i(potential_eval(p, z0)) * n);
    mpreal mod = sqrt(2 * const_pi() / n) / sqrt(abs(f2));
    return e * descent_direction(f2) * mod;
}

// Endpoint contribution e^{−inf(z0)}·g(z0)/(i f′(z0) n) of ∫_{z0} g e^{−inf}.
inline cplx perron_prediction(const cplx& g, const cplx& fprime, const cplx& f, const mpreal& n)
{
    if (fprime.re == 0 && fprime.im == 0)
        throw DegenerateInput("perron_prediction: f'(z0) = 0");
    if (g.re == 0 && g.im == 0)
        return cplx(0);
    return exp(-mul_i(f) * n) * g / (mul_i(fprime) * n);
}

// ρ(z) = e^{−l1′z/2iπ}·(1 − e^z)^{−l0′/2iπ − 1/2}, l_k′ = Log u_k + iπa_k.
inline cplx rho(const cplx& z, const cplx& l0p, const cplx& l1p)
{
    mpreal two_pi = 2 * const_pi();
    // w/(2iπ) = −i·w/(2π)
    cplx e1 = mul_i(l1p * z) / two_pi;
    cplx pw = mul_i(l0p) / two_pi - cplx(mpreal("0.5"));
    return exp(e1) * pow(cplx(1) - exp(z), pw);
}

struct QuantumIntegral {
    int N = 0;
    cplx value;            // (N/4iπ)·∮ e^{(N/2iπ)(z² − l1z)}·Ŝ_N(l0 + z)·coth(Nz/2) dz
    cplx s_hat_l0;         // Ŝ_N(l0)
    mpreal growth;         // (2π/N)·Log|value|
    cplx rho_at_saddle;    // ρ at the Minus critical point of the limit potential
    cplx saddle;
    QuadResult quad;
};

inline QuantumIntegral quantum_integral(const QuantumGluingPoint& q, const PrecisionContext& ctx)
{
    scoped_precision guard(ctx);
    int N = q.N;
    mpreal pi = const_pi();
    cplx l0 = rebase(q.l0u), l1 = rebase(q.l1u);
    Contour c = residue_rectangle(N);
    c.validate(proximity_tol(ctx));
    mpreal n2pi = mpreal(N) / (2 * pi);
    auto integrand = [&](const cplx& z) {
        cplx e = -mul_i(z * z - l1 * z) * n2pi + log_s_hat(l0 + z, N, ctx);
        return exp(e) * coth(z * N / 2);
    };
    QuadOptions opt;
    opt.rel_tol = ctx.quad_rel_tol;
    QuantumIntegral out;
    out.N = N;
    out.quad = integrate_path(integrand, c.pieces(), opt);
    out.value = -mul_i(out.quad.value) * (mpreal(N) / (4 * pi));
    out.s_hat_l0 = s_hat(l0, N, ctx);
    out.growth = 2 * pi / N * log(abs(out.value));

    Case k = classify_case(q.colors);
    out.saddle = saddle_points(Potential::limit(k, Variant::Minus), ctx);
    cplx l0p = log(q.base.u[0]) + cplx(mpreal(0), pi * q.colors.a0);
    cplx l1p = log(q.base.u[1]) + cplx(mpreal(0), pi * q.colors.a1);
    out.rho_at_saddle = rho(out.saddle, l0p, l1p);
    return out;
}

// ---------------------------------------------------------------------------
// Growth series and extrapolation

enum class GrowthModel { LogInverse, Inverse };

inline const char* model_name(GrowthModel m)
{
    return m == GrowthModel::LogInverse ? "c0 + c1*log(N)/N + c2/N" : "c0 + c2/N";
}

struct GrowthRow {
    int N = 0;
    std::complex<double> value;
    double log_modulus = 0;   // Log|value|, kept separately since |value| can overflow double
    double growth = 0;
};

struct GrowthFit {
    double c0 = 0, c1 = 0, c2 = 0;
    std::string model;
    double residual = 0;       // RMS residual
    double condition = 0;
};

struct GrowthSeries {
    std::vector<GrowthRow> rows;
    std::optional<GrowthFit> fit;

    void add(int N, const cplx& value)
    {
        mpreal m = abs(value);
        if (m == 0)
            throw NumericError("growth series: zero value");
        GrowthRow r;
        r.N = N;
        r.log_modulus = to_double(log(m));
        r.value = value.to_std();
        r.growth = 2 * M_PI / N * r.log_modulus;
        rows.push_back(r);
    }

    void add_log(int N, const std::complex<double>& value, double log_modulus)
    {
        GrowthRow r;
        r.N = N;
        r.value = value;
        r.log_modulus = log_modulus;
        r.growth = 2 * M_PI / N * log_modulus;
        rows.push_back(r);
    }
};

inline GrowthFit growth_fit(const std::vector<std::pair<double, double>>& pts, GrowthModel model,
                            double cond_cap = 1e12)
{
    if (pts.size() < 4)
        throw ValidationError("growth_fit needs at least 4 rows");
    int cols = model == GrowthModel::LogInverse ? 3 : 2;
    Eigen::MatrixXd A(pts.size(), cols);
    Eigen::VectorXd y(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double N = pts[k].first;
        A(k, 0) = 1;
        if (model == GrowthModel::LogInverse) {
            A(k, 1) = std::log(N) / N;
            A(k, 2) = 1 / N;
        } else {
            A(k, 1) = 1 / N;
        }
        y(k) = pts[k].second;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!(cond <= cond_cap))
        throw IllConditioned("growth_fit: design matrix condition " + std::to_string(cond));
    Eigen::VectorXd c = svd.solve(y);
    GrowthFit f;
    f.c0 = c(0);
    if (model == GrowthModel::LogInverse) {
        f.c1 = c(1);
        f.c2 = c(2);
    } else {
        f.c2 = c(1);
    }
    f.model = model_name(model);
    f.residual = std::sqrt((A * c - y).squaredNorm() / pts.size());
    f.condition = cond;
    return f;
}

inline GrowthFit growth_fit(GrowthSeries& s, GrowthModel model = GrowthModel::LogInverse)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : s.rows)
        pts.emplace_back(r.N, r.growth);
    GrowthFit f = growth_fit(pts, model);
    s.fit = f;
    return f;
}

// Least-squares line y = c + β·x with the standard error of β.
struct LineFit {
    double c = 0, beta = 0, beta_se = 0, max_residual = 0;
};

inline LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 3)
        throw ValidationError("line_fit needs at least 3 points");
    Eigen::MatrixXd A(x.size(), 2);
    Eigen::VectorXd b(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        A(k, 0) = 1;
        A(k, 1) = x[k];
        b(k) = y[k];
    }
    Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    Eigen::VectorXd r = b - A * c;
    LineFit f;
    f.c = c(0);
    f.beta = c(1);
    f.max_residual = r.cwiseAbs().maxCoeff();
    double s2 = r.squaredNorm() / (x.size() - 2);
    Eigen::Matrix2d cov = (A.transpose() * A).inverse() * s2;
    f.beta_se = std::sqrt(cov(1, 1));
    return f;
}

struct PMResult {
    bool member = false;
    double beta = 0;
    double max_residual = 0;
};

// Polynomial-modulus test: Log|value| ≈ c + β·Log N with every residual below threshold.
inline PMResult pm_check_detail(const std::vector<std::pair<int, double>>& log_moduli, double threshold = 1.0)
{
    if (log_moduli.size() < 4)
        throw ValidationError("pm_check needs at least 4 rows");
    std::vector<double> x, y;
    for (const auto& [N, lm] : log_moduli) {
        x.push_back(std::log(static_cast<double>(N)));
        y.push_back(lm);
    }
    LineFit f = line_fit(x, y);
    PMResult r;
    r.beta = f.beta;
    r.max_residual = f.max_residual;
    r.member = f.max_residual < threshold;
    return r;
}

inline bool pm_check(const std::vector<std::pair<int, cplx>>& values, double threshold = 1.0)
{
    std::vector<std::pair<int, double>> lm;
    for (const auto& [N, v] : values) {
        mpreal m = abs(v);
        if (m == 0)
            return false;
        lm.emplace_back(N, to_double(log(m)));
    }
    return pm_check_detail(lm, threshold).member;
}

// Slope of arg(values) against N after unwrapping by nearest-branch continuation.
inline LineFit phase_slope(const std::vector<std::pair<int, std::complex<double>>>& values)
{
    std::vector<double> x, y;
    double prev = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        double a = std::arg(values[k].second);
        if (k > 0)
            a += 2 * M_PI * std::round((prev - a) / (2 * M_PI));
        prev = a;
        x.push_back(values[k].first);
        y.push_back(a);
    }
    return line_fit(x, y);
}

}  // namespace qhi
