#pragma once

#include <string>
#include <vector>

#include "qhi/quadrature.hpp"

namespace qhi {

// Horizontal half-line {origin + t : t >= 0}, the image of a Li₂(e^{l0+z}) cut.
struct Cut {
    cplx origin;
};

// Distance from p to the segment [a, b].
inline mpreal segment_distance(const cplx& p, const cplx& a, const cplx& b)
{
    cplx d = b - a;
    mpreal len2 = norm(d);
    cplx w = p - a;
    mpreal t = (w.re * d.re + w.im * d.im) / len2;
    if (t < 0)
        t = 0;
    if (t > 1)
        t = 1;
    return abs(p - (a + d * t));
}

// True if [a, b] meets the cut anywhere except within tol of its origin.
inline bool segment_crosses_cut(const cplx& a, const cplx& b, const Cut& c, const mpreal& tol)
{
    mpreal y = c.origin.im;
    mpreal x0 = c.origin.re;
    mpreal da = a.im - y, db = b.im - y;
    using boost::multiprecision::abs;
    if (abs(da) <= tol && abs(db) <= tol) {
        // Segment runs along the cut line.
        mpreal right = std::max(a.re, b.re);
        return right > x0 + tol;
    }
    if ((da > tol && db > tol) || (da < -tol && db < -tol))
        return false;
    mpreal x;
    if (abs(da) <= tol)
        x = a.re;
    else if (abs(db) <= tol)
        x = b.re;
    else
        x = a.re + (b.re - a.re) * (da / (da - db));
    return x > x0 + tol;
}

// Oriented polyline; closed contours repeat their first vertex at the end.
// The registry lists cuts and poles the polyline must avoid.
struct Contour {
    std::string name;
    std::vector<cplx> vertices;
    std::vector<int> panels;  // initial panels per segment
    std::vector<Cut> cuts;
    std::vector<cplx> poles;

    std::size_t segments() const { return vertices.empty() ? 0 : vertices.size() - 1; }

    bool closed() const
    {
        return vertices.size() > 2 && abs(vertices.front() - vertices.back()) == 0;
    }

    std::vector<PathPiece> pieces() const
    {
        std::vector<PathPiece> out;
        for (std::size_t k = 0; k < segments(); ++k)
            out.push_back(PathPiece::line(vertices[k], vertices[k + 1], k < panels.size() ? panels[k] : 1));
        return out;
    }

    void validate(const mpreal& tol = mpreal("1e-20")) const
    {
        if (vertices.size() < 2)
            throw ContourInvalid("contour needs at least two vertices");
        for (std::size_t k = 0; k < segments(); ++k) {
            const cplx& a = vertices[k];
            const cplx& b = vertices[k + 1];
            if (!isfinite(a) || !isfinite(b))
                throw ContourInvalid("contour vertex is not finite");
            if (abs(b - a) == 0)
                throw ContourInvalid("contour has a degenerate segment");
            for (const Cut& c : cuts) {
                if (segment_crosses_cut(a, b, c, tol))
                    throw ContourInvalid(name + ": segment " + std::to_string(k) + " crosses a cut");
            }
            for (const cplx& p : poles) {
                if (segment_distance(p, a, b) < tol)
                    throw ContourInvalid(name + ": segment " + std::to_string(k) + " passes through a pole");
            }
        }
    }
};

inline mpreal contour_distance(const Contour& c, const cplx& p)
{
    mpreal best = -1;
    for (std::size_t k = 0; k < c.segments(); ++k) {
        mpreal d = segment_distance(p, c.vertices[k], c.vertices[k + 1]);
        if (best < 0 || d < best)
            best = d;
    }
    return best;
}

// Counterclockwise rectangle [−ε, ε] × [s⁻, 2π − s⁺].
inline Contour residue_rectangle(int N, const mpreal& eps, const mpreal& s_minus, const mpreal& s_plus)
{
    mpreal top = 2 * const_pi() - s_plus;
    if (!(eps > 0) || !(s_minus > 0) || !(s_plus > 0) || !(s_minus < top))
        throw ContourInvalid("residue rectangle: need eps, s-, s+ > 0 and s- < 2pi - s+");
    Contour c;
    c.name = "rectangle";
    int vert = std::max(4, N);
    c.vertices = {cplx(eps, s_minus), cplx(eps, top), cplx(-eps, top), cplx(-eps, s_minus), cplx(eps, s_minus)};
    c.panels = {vert, 2, vert, 2};
    mpreal step = 2 * const_pi() / N;
    for (int beta = 0; beta <= N; ++beta)
        c.poles.push_back(cplx(mpreal(0), step * beta));
    return c;
}

// Default placement ε = π/N, s⁻ = π/(2N), s⁺ = 3π/(2N).
inline Contour residue_rectangle(int N)
{
    mpreal pi = const_pi();
    return residue_rectangle(N, pi / N, pi / (2 * N), 3 * pi / (2 * N));
}

}  // namespace qhi
