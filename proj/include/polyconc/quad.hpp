#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "polyconc/errors.hpp"
#include "polyconc/poly.hpp"
#include "polyconc/weights.hpp"

namespace polyconc {
namespace quad {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline const double kGLNode[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
inline const double kGLWeight[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

inline double gl_panel(const std::function<double(double)>& fn, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0;
    for (int i = 0; i < 16; ++i) acc += kGLWeight[i] * fn(mid + half * kGLNode[i]);
    return acc * half;
}

inline double gl_composite(const std::function<double(double)>& fn, double a, double b,
                           int panels) {
    double acc = 0;
    double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) acc += gl_panel(fn, a + i * h, a + (i + 1) * h);
    return acc;
}

// Integral over [a, b] of an integrand whose derivatives blow up at the `c`
// end (c == a or c == b): dyadic panels accumulating toward c.
inline double gl_dyadic(const std::function<double(double)>& fn, double a, double b,
                        bool toward_b, int levels = 64) {
    double len = b - a;
    if (!(len > 0)) return 0;
    double acc = 0;
    double far = 1.0;
    for (int k = 0; k < levels; ++k) {
        double near = far * 0.5;
        double lo = toward_b ? b - far * len : a + near * len;
        double hi = toward_b ? b - near * len : a + far * len;
        // stop once subdivision degenerates at floating-point resolution; the
        // untouched tip carries O(ulp * ln(ulp)) mass
        if (!(hi > lo)) break;
        acc += gl_panel(fn, lo, hi);
        far = near;
    }
    return acc;
}

// Exact-enough integral of ln|t - r| * rho_w(t) over [a, b] intersected with
// the weight domain; handles r inside, at the edge of, or outside [a, b].
inline double log_linear_factor(const Weight& w, double r, double a, double b) {
    auto fn = [&](double t) { return std::log(std::abs(t - r)) * w.density(t); };
    if (r <= a || r >= b) {
        // Smooth on the interior; still refine toward the near end.
        if (r == a || r == b) return gl_dyadic(fn, a, b, r == b);
        double d = std::min(std::abs(r - a), std::abs(r - b));
        if (d > 0.1 * (b - a)) return gl_composite(fn, a, b, 64);
        return gl_dyadic(fn, a, b, std::abs(r - b) < std::abs(r - a));
    }
    return gl_dyadic(fn, a, r, true) + gl_dyadic(fn, r, b, false);
}

// integral of ln|g| * rho over [a,b] for g with no real roots there.
inline double log_smooth_poly(const Weight& w, const UniPoly& g, double a, double b,
                              int panels = 512) {
    auto fn = [&](double t) { return std::log(std::abs(g(t))) * w.density(t); };
    double v1 = gl_composite(fn, a, b, panels);
    double v2 = gl_composite(fn, a, b, 2 * panels);
    if (std::abs(v1 - v2) > 1e-8 * (1.0 + std::abs(v2)))
        v2 = gl_composite(fn, a, b, 4 * panels);
    return v2;
}

// integral of |f - r|^q * rho over the weight domain, q >= 0 real, splitting
// at the real roots of f - r and refining dyadically into each root.
inline double abs_power_integral(const Weight& w, const UniPoly& f, double r, double q) {
    Weight wt = w;
    if (std::isinf(wt.hi)) throw validation_error("abs_power_integral: truncate first");
    UniPoly g = f.plus_const(-r);
    std::vector<double> cuts{wt.lo};
    if (g.degree() > 0) {
        RootList rl = real_roots(g, wt.lo, wt.hi);
        for (double root : rl.roots)
            if (root > wt.lo && root < wt.hi) cuts.push_back(root);
    }
    cuts.push_back(wt.hi);
    std::sort(cuts.begin(), cuts.end());
    auto fn = [&](double t) { return std::pow(std::abs(g(t)), q) * wt.density(t); };
    double acc = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        bool root_left = i > 0;
        bool root_right = i + 2 < cuts.size();
        if (root_left && root_right) {
            double mid = 0.5 * (a + b);
            acc += gl_dyadic(fn, a, mid, false) + gl_dyadic(fn, mid, b, true);
        } else if (root_left) {
            acc += gl_dyadic(fn, a, b, false);
        } else if (root_right) {
            acc += gl_dyadic(fn, a, b, true);
        } else {
            acc += gl_composite(fn, a, b, 64);
        }
    }
    return acc;
}

} // namespace quad
} // namespace polyconc
