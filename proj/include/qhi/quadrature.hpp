#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <queue>
#include <utility>
#include <vector>

#include "qhi/complex.hpp"

namespace qhi {

// Oriented piece of an integration path, parametrized by t ∈ [0, 1].
struct PathPiece {
    enum class Kind { Line, Arc };
    Kind kind = Kind::Line;
    cplx a, b;               // line endpoints
    cplx center;             // arc data
    mpreal radius, theta0, theta1;
    int panels = 1;          // initial number of equal panels

    static PathPiece line(const cplx& from, const cplx& to, int panels = 1)
    {
        PathPiece p;
        p.kind = Kind::Line;
        p.a = from;
        p.b = to;
        p.panels = std::max(1, panels);
        return p;
    }

    static PathPiece arc(const cplx& c, const mpreal& r, const mpreal& t0, const mpreal& t1, int panels = 1)
    {
        PathPiece p;
        p.kind = Kind::Arc;
        p.center = c;
        p.radius = r;
        p.theta0 = t0;
        p.theta1 = t1;
        p.a = c + r * expi(t0);
        p.b = c + r * expi(t1);
        p.panels = std::max(1, panels);
        return p;
    }

    // z(t) and dz/dt.
    std::pair<cplx, cplx> eval(const mpreal& t) const
    {
        if (kind == Kind::Line) {
            cplx d = b - a;
            return {a + d * t, d};
        }
        mpreal th = theta0 + (theta1 - theta0) * t;
        cplx e = expi(th);
        return {center + radius * e, mul_i(e) * (radius * (theta1 - theta0))};
    }
};

struct QuadOptions {
    double rel_tol = 1e-30;
    double abs_tol = 0.0;
    int order = 0;            // Gauss–Legendre points per panel; 0 picks from rel_tol and the precision
    int max_panels = 200000;
};

struct QuadResult {
    cplx value;
    mpreal error;
    long evaluations = 0;
    int panels = 0;
};

namespace detail {

struct GaussRule {
    std::vector<mpreal> x;  // nodes on (−1, 1)
    std::vector<mpreal> w;
};

// Gauss–Legendre nodes by Newton iteration on P_m at the current precision.
inline const GaussRule& gauss_rule(int m)
{
    thread_local std::map<std::pair<int, unsigned>, GaussRule> cache;
    unsigned prec = mpreal::default_precision();
    auto key = std::make_pair(m, prec);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;

    GaussRule rule;
    rule.x.resize(m);
    rule.w.resize(m);
    mpreal eps = working_eps();
    for (int i = 0; i < (m + 1) / 2; ++i) {
        mpreal x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        mpreal dp;
        for (int iter = 0; iter < 100; ++iter) {
            mpreal p0 = 1, p1 = x;
            for (int k = 2; k <= m; ++k) {
                mpreal p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1);
            mpreal dx = p1 / dp;
            x -= dx;
            if (boost::multiprecision::abs(dx) < eps)
                break;
        }
        mpreal p0 = 1, p1 = x;
        for (int k = 2; k <= m; ++k) {
            mpreal p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1);
        mpreal w = 2 / ((1 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.x[m - 1 - i] = x;
        rule.w[i] = w;
        rule.w[m - 1 - i] = w;
    }
    return cache.emplace(key, std::move(rule)).first->second;
}

inline int default_order(double rel_tol)
{
    int d = static_cast<int>(mpreal::default_precision());
    if (rel_tol > 0)
        d = std::min(d, static_cast<int>(std::ceil(-std::log10(rel_tol))));
    return std::clamp(d / 2 + 8, 16, 120);
}

template <class F>
cplx gauss_panel(F& f, const PathPiece& piece, const mpreal& t0, const mpreal& t1, const GaussRule& rule, long& evals)
{
    mpreal half = (t1 - t0) / 2;
    mpreal mid = (t1 + t0) / 2;
    cplx sum;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
        auto [z, dz] = piece.eval(mid + half * rule.x[k]);
        sum += f(z) * dz * rule.w[k];
        ++evals;
    }
    return sum * half;
}

}  // namespace detail

// ∫ f(z) dz along the concatenated pieces, by globally adaptive Gauss–Legendre
// bisection. A panel's error estimate is |G(panel) − G(left) − G(right)|; the
// panel with the largest estimate is split until the summed estimate meets
// max(rel_tol·|I|, abs_tol, roundoff floor).
template <class F>
QuadResult integrate_path(F&& f, const std::vector<PathPiece>& pieces, const QuadOptions& opt)
{
    const int m = opt.order > 0 ? opt.order : detail::default_order(opt.rel_tol);
    const detail::GaussRule& rule = detail::gauss_rule(m);

    struct Panel {
        std::size_t piece;
        mpreal t0, t1;
        cplx left, right;
        mpreal err;
    };
    auto cmp = [](const Panel* a, const Panel* b) { return a->err < b->err; };
    std::vector<std::unique_ptr<Panel>> store;
    std::priority_queue<Panel*, std::vector<Panel*>, decltype(cmp)> queue(cmp);

    QuadResult res;
    cplx total;
    mpreal total_err = 0;
    mpreal total_abs = 0;

    auto make_panel = [&](std::size_t pi, const mpreal& t0, const mpreal& t1, const cplx& whole) {
        auto p = std::make_unique<Panel>();
        p->piece = pi;
        p->t0 = t0;
        p->t1 = t1;
        mpreal tm = (t0 + t1) / 2;
        p->left = detail::gauss_panel(f, pieces[pi], t0, tm, rule, res.evaluations);
        p->right = detail::gauss_panel(f, pieces[pi], tm, t1, rule, res.evaluations);
        cplx est = p->left + p->right;
        p->err = abs(whole - est);
        total += est;
        total_err += p->err;
        total_abs += abs(p->left) + abs(p->right);
        queue.push(p.get());
        store.push_back(std::move(p));
    };

    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        int n = pieces[pi].panels;
        for (int k = 0; k < n; ++k) {
            mpreal t0 = mpreal(k) / n;
            mpreal t1 = mpreal(k + 1) / n;
            cplx whole = detail::gauss_panel(f, pieces[pi], t0, t1, rule, res.evaluations);
            make_panel(pi, t0, t1, whole);
        }
    }

    // Running sums drift under repeated subtraction, so they are rebuilt from
    // the live panels periodically and before accepting convergence.
    auto resum = [&]() {
        total = cplx();
        total_err = 0;
        total_abs = 0;
        std::vector<Panel*> live;
        while (!queue.empty()) {
            live.push_back(queue.top());
            queue.pop();
        }
        for (Panel* p : live) {
            total += p->left + p->right;
            total_err += p->err;
            total_abs += abs(p->left) + abs(p->right);
            queue.push(p);
        }
    };

    mpreal rel = opt.rel_tol;
    mpreal abs_tol = opt.abs_tol;
    mpreal floor_eps = working_eps() * 64;
    auto converged = [&]() {
        mpreal target = std::max(rel * abs(total), abs_tol);
        target = std::max(target, floor_eps * total_abs);
        return total_err <= target;
    };
    long splits = 0;
    while (true) {
        if (converged()) {
            resum();
            if (converged())
                break;
        }
        if (static_cast<int>(queue.size()) >= opt.max_panels)
            throw NonConvergent("integrate_path: panel cap reached");
        Panel* worst = queue.top();
        queue.pop();
        total -= worst->left + worst->right;
        total_err -= worst->err;
        total_abs -= abs(worst->left) + abs(worst->right);
        mpreal tm = (worst->t0 + worst->t1) / 2;
        make_panel(worst->piece, worst->t0, tm, worst->left);
        make_panel(worst->piece, tm, worst->t1, worst->right);
        if (++splits % 256 == 0)
            resum();
    }
    res.value = total;
    res.error = total_err;
    res.panels = static_cast<int>(queue.size());
    return res;
}

template <class F>
QuadResult integrate_polyline(F&& f, const std::vector<cplx>& vertices, const std::vector<int>& panels,
                              const QuadOptions& opt)
{
    std::vector<PathPiece> pieces;
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k)
        pieces.push_back(PathPiece::line(vertices[k], vertices[k + 1], k < panels.size() ? panels[k] : 1));
    return integrate_path(std::forward<F>(f), pieces, opt);
}

}  // namespace qhi
