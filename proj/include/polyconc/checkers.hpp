#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "polyconc/errors.hpp"
#include "polyconc/numfmt.hpp"
#include "polyconc/poly.hpp"
#include "polyconc/quad.hpp"
#include "polyconc/weights.hpp"

namespace polyconc {

// ---------------------------------------------------------------------------
// IneqReport: one inequality instance, with the unknown constant stripped
// from the right-hand side.  witness_ratio = lhs / rhs_core is the smallest
// constant making the instance true; rhs_core = 0 < lhs is flagged infinite
// rather than thrown, so searches can rank such configurations.
// ---------------------------------------------------------------------------
struct IneqReport {
    double lhs = 0;
    double rhs_core = 0;
    double witness_ratio = 0;
    bool ratio_is_infinite = false;
    std::string tag;
    std::map<std::string, std::string> instance;
    std::map<std::string, double> aux;
};

struct PolyStats1D {
    double norm0 = 0;  // exp(int ln|f| dnu)
    double norm1 = 0;
    double norm2 = 0;
    double kf = 0;     // inf{k : nu(|f| >= k) <= 1/e}
    double mean = 0;
    double sigma = 0;
    double alpha = 0;  // int |f - mean| dnu
};

namespace detail {

inline void describe_poly(std::map<std::string, std::string>& m, const UniPoly& f) {
    std::string s;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i) s += ",";
        s += format_sig17(f.coeffs()[i]);
    }
    m["poly_coeffs"] = s;
}

inline void describe_weight(std::map<std::string, std::string>& m, const Weight& w) {
    switch (w.kind) {
        case WeightKind::ExpAffine:
            m["weight_kind"] = "exp_affine";
            m["weight_c0"] = format_sig17(w.c0);
            m["weight_c1"] = format_sig17(w.c1);
            break;
        case WeightKind::Power:
            m["weight_kind"] = "power";
            m["weight_n"] = std::to_string(w.n);
            break;
        case WeightKind::AffinePower:
            m["weight_kind"] = "affine_power";
            m["weight_alpha"] = format_sig17(w.alpha);
            m["weight_beta"] = format_sig17(w.beta);
            m["weight_n"] = std::to_string(w.n);
            break;
    }
    m["weight_lo"] = format_sig17(w.lo);
    m["weight_hi"] = format_sig17(w.hi);
}

// ratio with the infinity convention; the log values rescue far-tail
// instances whose linear masses underflowed.
inline void set_ratio(IneqReport& rep, double log_lhs, double log_rhs) {
    if (log_lhs == -kInf) {
        rep.witness_ratio = 0;
        rep.ratio_is_infinite = false;
        return;
    }
    if (log_rhs == -kInf) {
        rep.witness_ratio = 0;
        rep.ratio_is_infinite = true;
        return;
    }
    if (rep.lhs > 0 && rep.rhs_core > 0) rep.witness_ratio = rep.lhs / rep.rhs_core;
    else rep.witness_ratio = std::exp(log_lhs - log_rhs);
    rep.ratio_is_infinite = false;
}

} // namespace detail

// Masses (and log-masses) of the three epsilon-level sets.
struct LevelMasses {
    SignPartition part;
    double neg = 0, mid = 0, pos = 0;
    double log_neg = -kInf, log_mid = -kInf, log_pos = -kInf;
};

inline LevelMasses level_masses(const UniPoly& f, const Weight& w, double eps) {
    if (std::isinf(w.hi))
        throw validation_error("level_masses: truncate the weight first");
    LevelMasses lm;
    lm.part = sign_partition(f, eps, w.lo, w.hi);
    lm.neg = integrate_indicator(w, lm.part.neg);
    lm.mid = integrate_indicator(w, lm.part.mid);
    lm.pos = integrate_indicator(w, lm.part.pos);
    lm.log_neg = log_integrate_indicator(w, lm.part.neg);
    lm.log_mid = log_integrate_indicator(w, lm.part.mid);
    lm.log_pos = log_integrate_indicator(w, lm.part.pos);
    return lm;
}

// Unnormalized w({g >= level}); no epsilon band needed.
inline double superlevel_mass(const Weight& w, const UniPoly& g, double level) {
    UniPoly h = g.plus_const(-level);
    if (h.degree() == 0) return h.coeffs()[0] >= 0 ? moment(w, 0) : 0.0;
    std::vector<double> cuts{w.lo};
    RootList rl = real_roots(h, w.lo, w.hi);
    for (double r : rl.roots)
        if (r > w.lo && r < w.hi) cuts.push_back(r);
    cuts.push_back(w.hi);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0;
    UniPoly one = UniPoly::constant(1.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        if (h(0.5 * (a + b)) >= 0) acc += integrate_poly_piece(w, one, a, b);
    }
    return acc;
}

inline double sup_abs_on_domain(const UniPoly& f, double lo, double hi) {
    double m = std::max(std::abs(f(lo)), std::abs(f(hi)));
    if (f.degree() >= 2) {
        RootList crit = real_roots(f.derivative(), lo, hi);
        for (double r : crit.roots)
            if (r >= lo && r <= hi) m = std::max(m, std::abs(f(r)));
    }
    return m;
}

// inf{k : w(|f| >= k)/mass <= 1/e} by bisection; each probe evaluates the
// tail mass exactly.  Relative tolerance 1e-10 on k.
inline double k_of_f(const UniPoly& f, const Weight& w) {
    if (f.is_zero()) throw numeric_error("k_of_f: zero polynomial");
    double mass = moment(w, 0);
    double klo = 0;
    double khi = sup_abs_on_domain(f, w.lo, w.hi) * (1 + 1e-12) + 1e-300;
    const double target = mass / M_E;
    auto tail = [&](double k) {
        SignPartition p = sign_partition(f, k, w.lo, w.hi);
        return integrate_indicator(w, p.neg) + integrate_indicator(w, p.pos);
    };
    if (f.degree() == 0) {
        // tail jumps from mass to 0 at |c|; the bisection limit is |c|
        return std::abs(f.coeffs()[0]);
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (klo + khi);
        if (tail(mid) <= target) khi = mid;
        else klo = mid;
        if (khi - klo <= 1e-10 * std::max(khi, 1e-30)) break;
    }
    return khi;
}

namespace detail {

// ln of int ln|f| dw pieces: peel real linear factors, quadrate the rest.
inline double log_abs_integral(const UniPoly& f, const Weight& w) {
    if (f.is_zero()) throw numeric_error("log_abs_integral: zero polynomial");
    if (f.degree() == 0) return std::log(std::abs(f.coeffs()[0])) * moment(w, 0);
    double margin = 1.0 + 0.1 * (w.hi - w.lo);
    RootList rl = real_roots(f, w.lo - margin, w.hi + margin);
    std::vector<double> coeffs = f.coeffs();
    double acc = 0;
    for (std::size_t i = 0; i < rl.roots.size(); ++i) {
        double r = rl.roots[i];
        acc += rl.multiplicities[i] * quad::log_linear_factor(w, r, w.lo, w.hi);
        for (int m = 0; m < rl.multiplicities[i]; ++m) {
            // synthetic division by (t - r)
            std::vector<double> q(coeffs.size() - 1);
            double carry = coeffs.back();
            for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
                q[k] = carry;
                carry = coeffs[k] + r * carry;
            }
            coeffs = std::move(q);
        }
    }
    UniPoly g(coeffs);
    acc += quad::log_smooth_poly(w, g, w.lo, w.hi);
    return acc;
}

// (int |f|^q dnu)^{1/q}; exact polynomial path at integer q.
inline double norm_q_normalized(const UniPoly& f, const Weight& w, double q, double mass) {
    double raw;
    double qr = std::round(q);
    if (std::abs(q - qr) < 1e-12 && qr >= 1 && qr * f.degree() <= 40) {
        int iq = static_cast<int>(qr);
        UniPoly fq = UniPoly::constant(1.0);
        for (int i = 0; i < iq; ++i) fq = fq * f;
        bool odd = iq % 2 == 1;
        std::vector<double> cuts{w.lo};
        if (f.degree() > 0) {
            RootList rl = real_roots(f, w.lo, w.hi);
            for (double r : rl.roots)
                if (r > w.lo && r < w.hi) cuts.push_back(r);
        }
        cuts.push_back(w.hi);
        std::sort(cuts.begin(), cuts.end());
        raw = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = cuts[i], b = cuts[i + 1];
            if (!(b > a)) continue;
            double sgn = (odd && f(0.5 * (a + b)) < 0) ? -1.0 : 1.0;
            raw += sgn * integrate_poly_piece(w, fq, a, b);
        }
    } else {
        raw = quad::abs_power_integral(w, f, 0.0, q);
    }
    return std::pow(raw / mass, 1.0 / q);
}

} // namespace detail

// Norms, mean/sigma/alpha and k(f) of a polynomial against the normalized
// weight.
inline PolyStats1D poly_stats(const UniPoly& f, const Weight& w_in) {
    if (f.is_zero()) throw numeric_error("poly_stats: zero polynomial");
    Weight w = truncated(w_in, std::max(1, f.degree()));
    double mass = moment(w, 0);
    if (!(mass > 0) || !std::isfinite(mass)) throw numeric_error("poly_stats: divergent weight");
    PolyStats1D st;
    st.mean = integrate_poly(w, f) / mass;
    st.norm1 = integrate_abs_poly(w, f, 0) / mass;
    double m2 = integrate_poly(w, f * f) / mass;
    st.norm2 = std::sqrt(std::max(0.0, m2));
    st.sigma = std::sqrt(std::max(0.0, m2 - st.mean * st.mean));
    st.alpha = integrate_abs_poly(w, f, st.mean) / mass;
    st.norm0 = std::exp(detail::log_abs_integral(f, w) / mass);
    st.kf = k_of_f(f, w);
    return st;
}

// ---------------------------------------------------------------------------
// The inequality checkers.  Each evaluates both sides exactly (or to the
// documented quadrature tolerance) and reports the witness ratio.
// ---------------------------------------------------------------------------

// Localized product small-ball inequality:
//   eps * w{f <= -eps} * w{f >= eps}  <=  c * w{|f| < eps} * int |f - r| dw.
// Unnormalized on both sides.  Hot path: `product_smallball_core` skips the
// instance echo strings.
struct ProductSmallballCore {
    double lhs = 0, rhs_core = 0, ratio = 0;
    bool inf_flag = false;
    double neg = 0, mid = 0, pos = 0, l1 = 0;
};

inline ProductSmallballCore product_smallball_core(const UniPoly& f, const Weight& w,
                                                   double eps, double r) {
    if (!(eps > 0)) throw validation_error("check_product_smallball: eps must be > 0");
    ProductSmallballCore c;
    LevelMasses lm = level_masses(f, w, eps);
    c.neg = lm.neg;
    c.mid = lm.mid;
    c.pos = lm.pos;
    c.l1 = integrate_abs_poly(w, f, r);
    c.lhs = eps * lm.neg * lm.pos;
    c.rhs_core = lm.mid * c.l1;
    double log_lhs = std::log(eps) + lm.log_neg + lm.log_pos;
    double log_rhs = lm.log_mid + (c.l1 > 0 ? std::log(c.l1) : -kInf);
    if (log_lhs == -kInf) {
        c.ratio = 0;
    } else if (log_rhs == -kInf) {
        c.inf_flag = true;
    } else if (c.lhs > 0 && c.rhs_core > 0) {
        c.ratio = c.lhs / c.rhs_core;
    } else {
        c.ratio = std::exp(log_lhs - log_rhs);
    }
    return c;
}

inline IneqReport check_product_smallball(const UniPoly& f, const Weight& w_in, double eps,
                                          double r) {
    Weight w = truncated(w_in, std::max(1, f.degree()));
    ProductSmallballCore c = product_smallball_core(f, w, eps, r);
    IneqReport rep;
    rep.tag = "product-smallball";
    rep.lhs = c.lhs;
    rep.rhs_core = c.rhs_core;
    rep.witness_ratio = c.ratio;
    rep.ratio_is_infinite = c.inf_flag;
    detail::describe_poly(rep.instance, f);
    detail::describe_weight(rep.instance, w);
    rep.instance["eps"] = format_sig17(eps);
    rep.instance["r"] = format_sig17(r);
    rep.aux["mass_neg"] = c.neg;
    rep.aux["mass_mid"] = c.mid;
    rep.aux["mass_pos"] = c.pos;
    rep.aux["l1_shifted"] = c.l1;
    return rep;
}

// Carbery-Wright: ||f||_1^{1/d} mu(|f| <= alpha) <= C(d) alpha^{1/d}.
inline IneqReport check_carbery_wright(const UniPoly& f, const Weight& w_in, double alpha) {
    if (!(alpha > 0)) throw validation_error("check_carbery_wright: alpha must be > 0");
    Weight w = truncated(w_in, std::max(1, f.degree()));
    double mass = moment(w, 0);
    int d = std::max(1, f.degree());
    double norm1 = integrate_abs_poly(w, f, 0) / mass;
    SignPartition p = sign_partition(f, alpha, w.lo, w.hi);
    double small = integrate_indicator(w, p.mid) / mass;
    IneqReport rep;
    rep.tag = "carbery-wright";
    rep.lhs = std::pow(norm1, 1.0 / d) * small;
    rep.rhs_core = std::pow(alpha, 1.0 / d);
    detail::set_ratio(rep, rep.lhs > 0 ? std::log(rep.lhs) : -kInf, std::log(rep.rhs_core));
    detail::describe_poly(rep.instance, f);
    detail::describe_weight(rep.instance, w);
    rep.instance["alpha"] = format_sig17(alpha);
    rep.aux["norm1"] = norm1;
    rep.aux["mass_small"] = small;
    return rep;
}

// Tail bound mu(|f| >= (4t)^d k(f)) <= e^{-t} for t >= 1.
inline IneqReport check_nsv_tail(const UniPoly& f, const Weight& w_in, double t) {
    if (!(t >= 1)) throw validation_error("check_nsv_tail: t must be >= 1");
    Weight w = truncated(w_in, std::max(1, f.degree()));
    double mass = moment(w, 0);
    double kf = k_of_f(f, w);
    if (!(kf > 0)) throw numeric_error("check_nsv_tail: k(f) = 0");
    int d = std::max(1, f.degree());
    double level = std::pow(4.0 * t, d) * kf;
    double tail;
    if (level >= sup_abs_on_domain(f, w.lo, w.hi)) {
        tail = 0;
    } else {
        SignPartition p = sign_partition(f, level, w.lo, w.hi);
        tail = (integrate_indicator(w, p.neg) + integrate_indicator(w, p.pos)) / mass;
    }
    IneqReport rep;
    rep.tag = "nsv-tail";
    rep.lhs = tail;
    rep.rhs_core = std::exp(-t);
    detail::set_ratio(rep, tail > 0 ? std::log(tail) : -kInf, -t);
    detail::describe_poly(rep.instance, f);
    detail::describe_weight(rep.instance, w);
    rep.instance["t"] = format_sig17(t);
    rep.aux["k_f"] = kf;
    rep.aux["level"] = level;
    return rep;
}

// Restricted mass: mu(U)^{d+1} int|f| dmu <= (Cd)^{2d} int_U |f| dmu.
inline IneqReport check_restricted_mass(const UniPoly& f, const Weight& w_in,
                                        const IntervalUnion& U) {
    Weight w = truncated(w_in, std::max(1, f.degree()));
    double mass = moment(w, 0);
    int d = std::max(1, f.degree());
    double muU = integrate_indicator(w, U) / mass;
    double full = integrate_abs_poly(w, f, 0) / mass;
    double restr = integrate_abs_poly_over(w, f, 0, U) / mass;
    IneqReport rep;
    rep.tag = "restricted-mass";
    rep.lhs = std::pow(muU, d + 1) * full;
    rep.rhs_core = restr;
    detail::set_ratio(rep, rep.lhs > 0 ? std::log(rep.lhs) : -kInf,
                      restr > 0 ? std::log(restr) : -kInf);
    detail::describe_poly(rep.instance, f);
    detail::describe_weight(rep.instance, w);
    rep.aux["mu_U"] = muU;
    return rep;
}

// Khinchin-type: ||f||_q <= (cq)^d ||f||_0 and <= (cq)^d ||f||_1.
struct KhinchinReports {
    IneqReport vs_norm0;
    IneqReport vs_norm1;
};

inline KhinchinReports check_khinchin(const UniPoly& f, const Weight& w_in, double q) {
    if (!(q >= 1)) throw validation_error("check_khinchin: q must be >= 1");
    Weight w = truncated(w_in, std::max(1, f.degree()));
    double mass = moment(w, 0);
    int d = std::max(1, f.degree());
    double nq = detail::norm_q_normalized(f, w, q, mass);
    double n0 = std::exp(detail::log_abs_integral(f, w) / mass);
    double n1 = integrate_abs_poly(w, f, 0) / mass;
    double qd = std::pow(q, d);
    KhinchinReports out;
    for (int which = 0; which < 2; ++which) {
        IneqReport& rep = which == 0 ? out.vs_norm0 : out.vs_norm1;
        rep.tag = which == 0 ? "khinchin-L0" : "khinchin-L1";
        rep.lhs = nq;
        rep.rhs_core = qd * (which == 0 ? n0 : n1);
        detail::set_ratio(rep, nq > 0 ? std::log(nq) : -kInf,
                          rep.rhs_core > 0 ? std::log(rep.rhs_core) : -kInf);
        detail::describe_poly(rep.instance, f);
        detail::describe_weight(rep.instance, w);
        rep.instance["q"] = format_sig17(q);
        rep.aux["norm_q"] = nq;
        rep.aux["norm0"] = n0;
        rep.aux["norm1"] = n1;
    }
    return out;
}

// Reverse Poincare: sigma(mu) ||f'||_2 <= (Cd)^d ||f||_2.
inline IneqReport check_reverse_poincare(const UniPoly& f, const Weight& w_in) {
    Weight w = truncated(w_in, std::max(1, f.degree()));
    WeightedStats ws = stats(w);
    if (!(ws.variance > 0)) throw numeric_error("check_reverse_poincare: zero-variance weight");
    double mass = ws.mass;
    UniPoly fp = f.derivative();
    double n2f = std::sqrt(std::max(0.0, integrate_poly(w, f * f) / mass));
    double n2fp = std::sqrt(std::max(0.0, integrate_poly(w, fp * fp) / mass));
    IneqReport rep;
    rep.tag = "reverse-poincare";
    rep.lhs = std::sqrt(ws.variance) * n2fp;
    rep.rhs_core = n2f;
    detail::set_ratio(rep, rep.lhs > 0 ? std::log(rep.lhs) : -kInf,
                      n2f > 0 ? std::log(n2f) : -kInf);
    detail::describe_poly(rep.instance, f);
    detail::describe_weight(rep.instance, w);
    return rep;
}

// Mean deviation: mu(f - m_f >= eps_frac * alpha_f) reported as a raw
// probability (rhs_core = 1); mu(f < m_f) rides along for the sandwich.
inline IneqReport check_mean_deviation(const UniPoly& f, const Weight& w_in, double eps_frac) {
    Weight w = truncated(w_in, std::max(1, f.degree()));
    double mass = moment(w, 0);
    PolyStats1D st;
    st.mean = integrate_poly(w, f) / mass;
    double m2 = integrate_poly(w, f * f) / mass;
    double sigma2 = m2 - st.mean * st.mean;
    if (!(sigma2 > 0)) throw numeric_error("check_mean_deviation: sigma_f = 0");
    double alpha = integrate_abs_poly(w, f, st.mean) / mass;
    UniPoly g = f.plus_const(-st.mean);
    double p_up = superlevel_mass(w, g, eps_frac * alpha) / mass;
    double p_below = 1.0 - superlevel_mass(w, g, 0.0) / mass;
    IneqReport rep;
    rep.tag = "mean-deviation";
    rep.lhs = p_up;
    rep.rhs_core = 1.0;
    detail::set_ratio(rep, p_up > 0 ? std::log(p_up) : -kInf, 0.0);
    detail::describe_poly(rep.instance, f);
    detail::describe_weight(rep.instance, w);
    rep.instance["eps_frac"] = format_sig17(eps_frac);
    rep.aux["below_mean"] = p_below;
    rep.aux["alpha_f"] = alpha;
    rep.aux["mean"] = st.mean;
    return rep;
}

// Vanishing-point L1 comparison: int |f| t^n <= C(d,n) int |f - r| t^n,
// requiring a root of f inside the (power-weight) domain.
inline IneqReport check_vanishing_L1(const UniPoly& f, const Weight& w, double r) {
    if (w.kind != WeightKind::Power)
        throw validation_error("check_vanishing_L1: weight must be a Power density");
    RootList rl = real_roots(f, w.lo, w.hi);
    bool has_root = false;
    for (double root : rl.roots)
        if (root >= w.lo && root <= w.hi) has_root = true;
    if (!has_root)
        throw numeric_error("check_vanishing_L1: f has no root in the weight domain");
    IneqReport rep;
    rep.tag = "vanishing-L1";
    rep.lhs = integrate_abs_poly(w, f, 0);
    rep.rhs_core = integrate_abs_poly(w, f, r);
    detail::set_ratio(rep, rep.lhs > 0 ? std::log(rep.lhs) : -kInf,
                      rep.rhs_core > 0 ? std::log(rep.rhs_core) : -kInf);
    detail::describe_poly(rep.instance, f);
    detail::describe_weight(rep.instance, w);
    rep.instance["r"] = format_sig17(r);
    return rep;
}

} // namespace polyconc
