#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "polyconc/errors.hpp"
#include "polyconc/interval.hpp"
#include "polyconc/poly.hpp"

namespace polyconc {

// ---------------------------------------------------------------------------
// Weight: a positive 1D weight on an interval, from the two families that
// localization produces: exponential-affine e^{c0+c1 t}, and the power
// densities t^n / (alpha t + beta)^{n-1}.  Stored unnormalized; probability
// statements divide by moment 0 at the point of use.
// ---------------------------------------------------------------------------
enum class WeightKind { ExpAffine, Power, AffinePower };

struct Weight {
    WeightKind kind = WeightKind::ExpAffine;
    double c0 = 0, c1 = 0;        // ExpAffine: density e^{c0 + c1 t}
    int n = 0;                    // Power: t^n;  AffinePower: (alpha t + beta)^{n-1}
    double alpha = 0, beta = 0;   // AffinePower only
    double lo = 0, hi = 0;

    static Weight exp_affine(double c0, double c1, double lo, double hi) {
        Weight w;
        w.kind = WeightKind::ExpAffine;
        w.c0 = c0;
        w.c1 = c1;
        w.lo = lo;
        w.hi = hi;
        w.validate();
        return w;
    }
    static Weight uniform(double lo, double hi) { return exp_affine(0, 0, lo, hi); }
    static Weight power(int n, double lo, double hi) {
        Weight w;
        w.kind = WeightKind::Power;
        w.n = n;
        w.lo = lo;
        w.hi = hi;
        w.validate();
        return w;
    }
    static Weight affine_power(double alpha, double beta, int n, double lo, double hi) {
        Weight w;
        w.kind = WeightKind::AffinePower;
        w.alpha = alpha;
        w.beta = beta;
        w.n = n;
        w.lo = lo;
        w.hi = hi;
        w.validate();
        return w;
    }

    void validate() const {
        if (!(lo < hi)) throw validation_error("Weight: domain must have nonempty interior");
        if (!std::isfinite(lo)) throw validation_error("Weight: lo must be finite");
        if (std::isinf(hi)) {
            if (kind != WeightKind::ExpAffine || !(c1 < 0))
                throw numeric_error("Weight: infinite domain requires ExpAffine with c1 < 0");
        }
        switch (kind) {
            case WeightKind::ExpAffine:
                if (!std::isfinite(c0) || !std::isfinite(c1))
                    throw validation_error("Weight: non-finite ExpAffine parameters");
                break;
            case WeightKind::Power:
                if (n < 0) throw validation_error("Weight: Power needs n >= 0");
                if (lo < 0) throw validation_error("Weight: Power needs lo >= 0");
                break;
            case WeightKind::AffinePower:
                if (n < 1) throw validation_error("Weight: AffinePower needs n >= 1");
                // n == 1 is Lebesgue; positivity of alpha t + beta is vacuous there.
                if (n > 1 && (alpha * lo + beta <= 0 || alpha * hi + beta <= 0))
                    throw validation_error("Weight: AffinePower density not positive");
                break;
        }
    }

    double density(double t) const {
        switch (kind) {
            case WeightKind::ExpAffine: return std::exp(c0 + c1 * t);
            case WeightKind::Power: return std::pow(t, n);
            case WeightKind::AffinePower: return std::pow(alpha * t + beta, n - 1);
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// Exact elementary integrals.
// ---------------------------------------------------------------------------
namespace detail {

// int_0^x u^j e^{-u} du for integer j >= 0, stable in both regimes:
// positive-term series for small x, the exact finite complement sum for
// large x (no subtractive gamma recursions anywhere).
inline double lower_gamma_int(int j, double x) {
    if (x <= 0) return 0;
    if (std::isinf(x)) return factorial(j);
    if (x < j + 1.5) {
        double term = 1.0 / (j + 1);
        double sum = term;
        for (int m = 1; m < 600; ++m) {
            term *= x / (j + 1 + m);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return std::exp((j + 1) * std::log(x) - x) * sum;
    }
    double tail_term = 1.0;
    double tail_sum = 1.0;
    for (int i = 1; i <= j; ++i) {
        tail_term *= x / i;
        tail_sum += tail_term;
    }
    return factorial(j) * (1.0 - std::exp(-x) * tail_sum);
}

// int_0^D u^j e^{c u} du; D may be +inf when c < 0.
inline double mono_exp_integral(int j, double c, double D) {
    if (D <= 0) return 0;
    if (c == 0) {
        if (std::isinf(D)) throw numeric_error("divergent integral");
        return std::pow(D, j + 1) / (j + 1);
    }
    if (c < 0) {
        double lambda = -c;
        return lower_gamma_int(j, lambda * D) / std::pow(lambda, j + 1);
    }
    if (std::isinf(D) || c * D > 600.0) throw numeric_error("divergent or overflowing integral");
    double term = std::pow(D, j + 1) / (j + 1);
    double sum = term;
    for (int m = 1; m < 900; ++m) {
        term *= c * D * (j + m) / (static_cast<double>(m) * (j + 1 + m));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// int_a^b p(t) rho_w(t) dt on a subinterval with 0 <= a; the caller has
// already split at zero and reflected.  `p` is given by coefficients.
inline double piece_nonneg(const Weight& w, const UniPoly& p, double a, double b) {
    double D = b - a;
    if (!(D > 0)) return 0;
    switch (w.kind) {
        case WeightKind::ExpAffine: {
            double logf = w.c0 + w.c1 * a;
            if (logf > 700.0) throw numeric_error("weight overflow");
            double factor = std::exp(logf);
            std::vector<double> sh = p.shifted_coeffs(a);
            double acc = 0;
            for (std::size_t jj = 0; jj < sh.size(); ++jj)
                if (sh[jj] != 0) acc += sh[jj] * mono_exp_integral(static_cast<int>(jj), w.c1, D);
            return factor * acc;
        }
        case WeightKind::Power: {
            std::vector<double> q(p.coeffs().size() + w.n, 0.0);
            for (std::size_t i = 0; i < p.coeffs().size(); ++i) q[i + w.n] = p.coeffs()[i];
            std::vector<double> sh = UniPoly(std::move(q)).shifted_coeffs(a);
            double acc = 0;
            for (std::size_t jj = 0; jj < sh.size(); ++jj)
                if (sh[jj] != 0) acc += sh[jj] * std::pow(D, jj + 1.0) / (jj + 1.0);
            return acc;
        }
        case WeightKind::AffinePower: {
            double base = w.alpha * a + w.beta;
            std::vector<double> dens{1.0};  // (base + alpha u)^{n-1}
            for (int rep = 0; rep < w.n - 1; ++rep) {
                std::vector<double> nx(dens.size() + 1, 0.0);
                for (std::size_t i = 0; i < dens.size(); ++i) {
                    nx[i] += base * dens[i];
                    nx[i + 1] += w.alpha * dens[i];
                }
                dens = std::move(nx);
            }
            UniPoly integrand = UniPoly(p.shifted_coeffs(a)) * UniPoly(std::move(dens));
            double acc = 0;
            const auto& c = integrand.coeffs();
            for (std::size_t jj = 0; jj < c.size(); ++jj)
                if (c[jj] != 0) acc += c[jj] * std::pow(D, jj + 1.0) / (jj + 1.0);
            return acc;
        }
    }
    return 0;
}

inline UniPoly reflected_poly(const UniPoly& p) {
    std::vector<double> c = p.coeffs();
    for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
    return UniPoly(std::move(c));
}

inline Weight reflected_weight(const Weight& w, double a, double b) {
    // Weight as seen after t -> -t, valid on [-b, -a].
    switch (w.kind) {
        case WeightKind::ExpAffine: return Weight::exp_affine(w.c0, -w.c1, -b, -a);
        case WeightKind::AffinePower: return Weight::affine_power(-w.alpha, w.beta, w.n, -b, -a);
        case WeightKind::Power: throw validation_error("Power weight cannot sit below 0");
    }
    throw validation_error("unreachable");
}

} // namespace detail

// Exact integral of the polynomial p times the weight density over
// [a, b] subset of the weight domain.
inline double integrate_poly_piece(const Weight& w, const UniPoly& p, double a, double b) {
    if (!(b > a)) return 0;
    if (a < 0 && b > 0)
        return integrate_poly_piece(w, p, a, 0) + integrate_poly_piece(w, p, 0, b);
    if (b <= 0) {
        Weight rw = detail::reflected_weight(w, a, b);
        return integrate_poly_piece(rw, detail::reflected_poly(p), -b, -a);
    }
    return detail::piece_nonneg(w, p, a, b);
}

// int t^k dw over the full domain.
inline double moment(const Weight& w, int k) {
    if (k < 0) throw validation_error("moment: k must be >= 0");
    std::vector<double> mono(k + 1, 0.0);
    mono[k] = 1.0;
    return integrate_poly_piece(w, UniPoly(std::move(mono)), w.lo, w.hi);
}

inline double integrate_poly(const Weight& w, const UniPoly& f) {
    return integrate_poly_piece(w, f, w.lo, w.hi);
}

struct MomentTable {
    Weight weight;
    std::vector<double> moments;  // entry k = int t^k dw

    static MomentTable compute(const Weight& w, int K) {
        MomentTable t{w, {}};
        t.moments.reserve(K + 1);
        for (int k = 0; k <= K; ++k) t.moments.push_back(moment(w, k));
        return t;
    }
};

struct WeightedStats {
    double mass = 0;
    double mean = 0;
    double variance = 0;
};

inline WeightedStats stats(const Weight& w) {
    double m0 = moment(w, 0);
    double m1 = moment(w, 1);
    double m2 = moment(w, 2);
    if (!(m0 > 0) || !std::isfinite(m0)) throw numeric_error("stats: degenerate mass");
    WeightedStats s;
    s.mass = m0;
    s.mean = m1 / m0;
    s.variance = m2 / m0 - s.mean * s.mean;
    return s;
}

// inf over the grid of the variance of the normalized density t^n on
// [s, s+1], compared against the s -> infinity limit 1/12.
inline double c1_inf(int n, const std::vector<double>& s_grid) {
    if (s_grid.empty()) throw validation_error("c1_inf: empty grid");
    double best = 1.0 / 12.0;
    for (double s : s_grid) {
        if (s < 0) throw validation_error("c1_inf: grid entries must be >= 0");
        best = std::min(best, stats(Weight::power(n, s, s + 1.0)).variance);
    }
    return best;
}

// Mass of an interval union under the weight.  Boundary open/closed flags are
// ignored: the measures are atomless.
inline double integrate_indicator(const Weight& w, const IntervalUnion& A) {
    double tol = 1e-9 * std::max({1.0, std::abs(w.lo), std::abs(w.hi)});
    double acc = 0;
    UniPoly one = UniPoly::constant(1.0);
    for (const auto& part : A.parts()) {
        if (part.lo < w.lo - tol || part.hi > w.hi + tol)
            throw validation_error("integrate_indicator: set outside weight domain");
        acc += integrate_poly_piece(w, one, std::max(part.lo, w.lo), std::min(part.hi, w.hi));
    }
    return acc;
}

// log of the weight mass of [a, b]; exact in log space for ExpAffine so that
// far-tail masses keep their logarithms after the linear value underflows.
inline double log_mass(const Weight& w, double a, double b) {
    a = std::max(a, w.lo);
    b = std::min(b, w.hi);
    if (!(b > a)) return -kInf;
    if (w.kind == WeightKind::ExpAffine) {
        if (w.c1 == 0) return w.c0 + std::log(b - a);
        double span = w.c1 * (b - a);  // exp-affine mass = e^{c0+c1 a}(e^{span}-1)/c1
        if (w.c1 < 0)
            return w.c0 + w.c1 * a + std::log1p(-std::exp(span)) - std::log(-w.c1);
        return w.c0 + w.c1 * b + std::log1p(-std::exp(-span)) - std::log(w.c1);
    }
    double v = integrate_poly_piece(w, UniPoly::constant(1.0), a, b);
    return v > 0 ? std::log(v) : -kInf;
}

inline double log_integrate_indicator(const Weight& w, const IntervalUnion& A) {
    double m = -kInf;
    std::vector<double> logs;
    for (const auto& part : A.parts()) {
        double l = log_mass(w, part.lo, part.hi);
        if (l > -kInf) {
            logs.push_back(l);
            m = std::max(m, l);
        }
    }
    if (logs.empty()) return -kInf;
    double s = 0;
    for (double l : logs) s += std::exp(l - m);
    return m + std::log(s);
}

// Exact int |f - r| dw by splitting the domain at the real roots of f - r.
inline double integrate_abs_poly(const Weight& w, const UniPoly& f, double r) {
    UniPoly g = f.plus_const(-r);
    if (g.is_zero()) return 0;
    std::vector<double> cuts{w.lo};
    if (g.degree() > 0) {
        RootList rl = real_roots(g, w.lo, std::isinf(w.hi) ? kInf : w.hi);
        for (double root : rl.roots)
            if (root > w.lo && root < w.hi) cuts.push_back(root);
    }
    cuts.push_back(w.hi);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        double mid = std::isinf(b) ? a + 1.0 : 0.5 * (a + b);
        double sgn = g(mid) >= 0 ? 1.0 : -1.0;
        acc += sgn * integrate_poly_piece(w, g, a, b);
    }
    return acc;
}

// Exact int_U |f - r| dw over an interval union inside the domain.
inline double integrate_abs_poly_over(const Weight& w, const UniPoly& f, double r,
                                      const IntervalUnion& U) {
    UniPoly g = f.plus_const(-r);
    if (g.is_zero()) return 0;
    double tol = 1e-9 * std::max({1.0, std::abs(w.lo), std::abs(w.hi)});
    double acc = 0;
    for (const auto& part : U.parts()) {
        if (part.lo < w.lo - tol || part.hi > w.hi + tol)
            throw validation_error("integrate_abs_poly_over: set outside weight domain");
        double lo = std::max(part.lo, w.lo), hi = std::min(part.hi, w.hi);
        if (!(hi > lo)) continue;
        std::vector<double> cuts{lo};
        if (g.degree() > 0) {
            RootList rl = real_roots(g, lo, hi);
            for (double root : rl.roots)
                if (root > lo && root < hi) cuts.push_back(root);
        }
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = cuts[i], b = cuts[i + 1];
            if (!(b > a)) continue;
            double sgn = g(0.5 * (a + b)) >= 0 ? 1.0 : -1.0;
            acc += sgn * integrate_poly_piece(w, g, a, b);
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Canonical form: ExpAffine{0, c1 in {0,-1}} anchored at 0, or a pure Power
// weight.  `map`: u = map_a * t + map_b; for any integrand phi,
// int phi dw = jacobian * int phi((u - map_b)/map_a) dw_canonical(u).
// ---------------------------------------------------------------------------
struct Canonicalized {
    Weight weight;
    double map_a = 1;
    double map_b = 0;
    double jacobian = 1;
};

inline Canonicalized canonicalize(const Weight& w) {
    switch (w.kind) {
        case WeightKind::ExpAffine: {
            if (w.c1 == 0) {
                if (w.c0 == 0 && w.lo == 0) return {w, 1, 0, 1};
                return {Weight::uniform(0, w.hi - w.lo), 1, -w.lo, std::exp(w.c0)};
            }
            if (w.c1 < 0) {
                double a = -w.c1;
                double b = w.c1 * w.lo;
                double L = std::isinf(w.hi) ? kInf : a * w.hi + b;
                return {Weight::exp_affine(0, -1, 0, L), a, b,
                        std::exp(w.c0 + w.c1 * w.lo) / a};
            }
            // c1 > 0: reflect (t -> -t) and recurse on the c1 < 0 case.
            Weight refl = Weight::exp_affine(w.c0, -w.c1, -w.hi, -w.lo);
            Canonicalized sub = canonicalize(refl);
            return {sub.weight, -sub.map_a, sub.map_b, sub.jacobian};
        }
        case WeightKind::Power:
            return {w, 1, 0, 1};
        case WeightKind::AffinePower: {
            if (w.alpha == 0) {
                double j = std::pow(w.beta, w.n - 1);
                return {Weight::uniform(0, w.hi - w.lo), 1, -w.lo, j};
            }
            if (w.alpha < 0) {
                Weight refl = Weight::affine_power(-w.alpha, w.beta, w.n, -w.hi, -w.lo);
                Canonicalized sub = canonicalize(refl);
                return {sub.weight, -sub.map_a, sub.map_b, sub.jacobian};
            }
            return {Weight::power(w.n - 1, w.alpha * w.lo + w.beta, w.alpha * w.hi + w.beta),
                    w.alpha, w.beta, 1.0 / w.alpha};
        }
    }
    throw validation_error("unreachable");
}

// Truncation rule for infinite-domain weights: the smallest T with
// int_T^inf rho(t) (1+t)^{2d} dt < 1e-12, from the exponential closed form.
inline double truncation_point(const Weight& w, int d) {
    if (!std::isinf(w.hi)) return w.hi;
    double lambda = -w.c1;
    auto log_tail = [&](double T) {
        // e^{c0+c1 T} * sum_j binom(2d,j) (1+T)^{2d-j} j! / lambda^{j+1}
        double sum = 0;
        double binom = 1;
        for (int j = 0; j <= 2 * d; ++j) {
            sum += binom * std::pow(1.0 + T, 2 * d - j) * detail::factorial(j) /
                   std::pow(lambda, j + 1);
            binom = binom * (2.0 * d - j) / (j + 1.0);
        }
        return w.c0 + w.c1 * T + std::log(sum);
    };
    const double target = std::log(1e-12);
    double lo = w.lo, hi = std::max(w.lo + 1.0, 10.0);
    while (log_tail(hi) > target) {
        hi = hi * 2 + 10;
        if (hi > 1e7) throw numeric_error("truncation_point: tail does not decay");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (log_tail(mid) > target) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-9 * std::max(1.0, hi)) break;
    }
    return hi;
}

// The same weight restricted to a finite interval per the truncation rule.
inline Weight truncated(const Weight& w, int degree) {
    if (!std::isinf(w.hi)) return w;
    Weight out = w;
    out.hi = truncation_point(w, degree);
    return out;
}

} // namespace polyconc
