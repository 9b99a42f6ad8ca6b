#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "polyconc/errors.hpp"
#include "polyconc/interval.hpp"

namespace polyconc {

// ---------------------------------------------------------------------------
// UniPoly: dense univariate polynomial, coefficients in ascending degree.
// Invariant: coeffs nonempty; leading coefficient nonzero unless the
// polynomial is identically zero (then coeffs == {0}).
// ---------------------------------------------------------------------------
class UniPoly {
public:
    UniPoly() : coeffs_{0.0} {}
    explicit UniPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(0.0);
        trim();
    }
    static UniPoly constant(double c) { return UniPoly({c}); }

    // Monic product of (t - r_i), times leading coefficient `lc`.
    static UniPoly from_roots(const std::vector<double>& roots, double lc = 1.0) {
        std::vector<double> c{lc};
        for (double r : roots) {
            std::vector<double> next(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= r * c[i];
            }
            c = std::move(next);
        }
        return UniPoly(std::move(c));
    }

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    double leading() const { return coeffs_.back(); }
    double max_abs_coeff() const {
        double m = 0;
        for (double c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    double operator()(double t) const {
        double v = coeffs_.back();
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) v = v * t + coeffs_[i];
        return v;
    }

    // Running bound on the absolute Horner rounding error at t.
    double eval_error_bound(double t) const {
        double at = std::abs(t);
        double s = std::abs(coeffs_.back());
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) s = s * at + std::abs(coeffs_[i]);
        return s * (2.0 * static_cast<double>(coeffs_.size())) *
               std::numeric_limits<double>::epsilon();
    }

    // Sign of f(t), or 0 when the value is below the rounding noise floor.
    int robust_sign(double t) const {
        double v = (*this)(t);
        double e = 4.0 * eval_error_bound(t);
        if (v > e) return 1;
        if (v < -e) return -1;
        return 0;
    }

    UniPoly derivative() const {
        if (coeffs_.size() == 1) return UniPoly::constant(0.0);
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            d[i - 1] = coeffs_[i] * static_cast<double>(i);
        return UniPoly(std::move(d));
    }

    UniPoly plus_const(double c) const {
        std::vector<double> out = coeffs_;
        out[0] += c;
        return UniPoly(std::move(out));
    }

    UniPoly scaled(double s) const {
        std::vector<double> out = coeffs_;
        for (double& c : out) c *= s;
        return UniPoly(std::move(out));
    }

    UniPoly operator+(const UniPoly& o) const {
        std::vector<double> out(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
        return UniPoly(std::move(out));
    }
    UniPoly operator-(const UniPoly& o) const { return *this + o.scaled(-1.0); }

    UniPoly operator*(const UniPoly& o) const {
        if (is_zero() || o.is_zero()) return UniPoly();
        std::vector<double> out(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                out[i + j] += coeffs_[i] * o.coeffs_[j];
        return UniPoly(std::move(out));
    }

    // Coefficients of t -> f(a*t + b).
    UniPoly compose_affine(double a, double b) const {
        std::vector<double> out{coeffs_.back()};
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
            std::vector<double> next(out.size() + 1, 0.0);
            for (std::size_t j = 0; j < out.size(); ++j) {
                next[j + 1] += a * out[j];
                next[j] += b * out[j];
            }
            next[0] += coeffs_[i];
            out = std::move(next);
        }
        return UniPoly(std::move(out));
    }

    // Coefficients of u -> f(a + u) (Taylor shift), degree preserved.
    std::vector<double> shifted_coeffs(double a) const {
        std::vector<double> c = coeffs_;
        int d = degree();
        for (int i = 0; i < d; ++i)
            for (int j = d - 1; j >= i; --j) c[j] += a * c[j + 1];
        return c;
    }

    // Cauchy bound: all real roots lie in [-B, B].
    double root_bound() const {
        if (degree() == 0) return 0.0;
        double lead = std::abs(coeffs_.back());
        double m = 0;
        for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i)
            m = std::max(m, std::abs(coeffs_[i]));
        return 1.0 + m / lead;
    }

private:
    void trim() {
        while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    }
    std::vector<double> coeffs_;
};

inline double eval_uni(const UniPoly& f, double t) { return f(t); }
inline UniPoly derivative_uni(const UniPoly& f) { return f.derivative(); }

// ---------------------------------------------------------------------------
// RootList and real root isolation.
// ---------------------------------------------------------------------------
struct RootList {
    std::vector<double> roots;        // strictly increasing
    std::vector<int> multiplicities;  // parallel to roots
    double tol = 0;

    int total_multiplicity() const {
        int s = 0;
        for (int m : multiplicities) s += m;
        return s;
    }
};

namespace detail {

// Polynomial remainder a mod b over doubles; both inputs pre-normalized to
// max |coeff| = 1 so the zero cutoff below is meaningful.  `amplification`
// (when requested) accumulates the quotient magnitudes, which bound how much
// the division can blow up coefficient noise.
inline std::vector<double> poly_rem(std::vector<double> a, const std::vector<double>& b,
                                    double* amplification = nullptr) {
    const std::size_t db = b.size() - 1;
    double amp = 1.0;
    while (a.size() > db) {
        double q = a.back() / b.back();
        amp += std::abs(q);
        std::size_t off = a.size() - 1 - db;
        for (std::size_t i = 0; i < db; ++i) a[off + i] -= q * b[i];
        a.pop_back();
    }
    if (amplification) *amplification = amp;
    return a;
}

struct SturmChain {
    std::vector<UniPoly> elems;
    bool degraded = false;

    // Sign variation count; nullopt when the sign of f itself at x is
    // indistinguishable from rounding noise.
    std::optional<int> variations(double x) const {
        int prev = 0;
        int count = 0;
        for (std::size_t k = 0; k < elems.size(); ++k) {
            int s = elems[k].robust_sign(x);
            if (k == 0 && s == 0) return std::nullopt;
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    }
};

inline UniPoly normalized(const UniPoly& p) {
    double m = p.max_abs_coeff();
    return m > 0 ? p.scaled(1.0 / m) : p;
}

inline SturmChain build_sturm(const UniPoly& f) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    SturmChain chain;
    chain.elems.push_back(normalized(f));
    if (f.degree() == 0) return chain;
    chain.elems.push_back(normalized(f.derivative()));
    // Per-element coefficient noise estimates, used as the pseudo-remainder
    // guard: a remainder below its own propagated noise is the numerical gcd.
    std::vector<double> noise{kEps, kEps};
    while (chain.elems.back().degree() > 0) {
        const UniPoly& hi = chain.elems[chain.elems.size() - 2];
        const UniPoly& lo = chain.elems.back();
        if (std::abs(lo.leading()) < 1e-12) {
            chain.degraded = true;
            break;
        }
        double amp = 1.0;
        std::vector<double> rem = poly_rem(hi.coeffs(), lo.coeffs(), &amp);
        double m = 0;
        for (double c : rem) m = std::max(m, std::abs(c));
        double rem_noise = amp * (noise[noise.size() - 2] + noise.back() + kEps);
        if (m < 64.0 * rem_noise) break;  // numerical gcd reached
        for (double& c : rem) c = -c / m;
        noise.push_back(rem_noise / m);
        chain.elems.push_back(UniPoly(std::move(rem)));
    }
    return chain;
}

// Variation count at x, retrying with deterministic outward jitter when the
// probe lands indistinguishably close to a root.
inline std::optional<int> variations_jittered(const SturmChain& chain, double& x, double dir) {
    for (int attempt = 0; attempt < 24; ++attempt) {
        auto v = chain.variations(x);
        if (v) return v;
        double step = std::max(std::abs(x), 1.0) * 1e-13 * static_cast<double>(1 << attempt);
        x += dir * step;
    }
    return std::nullopt;
}

// Bisection of g on [a,b] assuming a clean sign change, then Newton polish.
inline double bisect_polish(const UniPoly& g, const UniPoly& gp, double a, double b, int sa) {
    for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        double v = g(mid);
        if (v == 0) { a = b = mid; break; }
        if ((v > 0 ? 1 : -1) == sa) a = mid; else b = mid;
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        double d = gp(x);
        if (d == 0) break;
        double step = g(x) / d;
        double nx = x - step;
        if (!(nx > a - (b - a) && nx < b + (b - a))) break;
        x = nx;
    }
    return x;
}

} // namespace detail

// Multiplicity of f at r per the scale-invariant threshold rule:
// multiplicity k when |f^(j)(r)| <= tol*scale for all j < k, with
// scale = max|coeff| * max(1,|r|)^deg.
inline int detect_multiplicity(const std::vector<UniPoly>& dchain, double r, double tol) {
    const UniPoly& f = dchain[0];
    double scale = f.max_abs_coeff() * std::pow(std::max(1.0, std::abs(r)), f.degree());
    int m = 0;
    for (std::size_t j = 0; j < dchain.size(); ++j) {
        if (std::abs(dchain[j](r)) <= tol * scale) ++m;
        else break;
    }
    return m;
}

namespace detail {

// Refine the single distinct root inside [a,b].  Tries candidate
// multiplicities from high to low: for a multiplicity-m root, f^(m-1) has a
// simple zero there and locates it to machine precision where bisection on f
// itself would stall at the noise plateau.
inline std::optional<std::pair<double, int>> refine_root(const std::vector<UniPoly>& dchain,
                                                         double a, double b, double tol) {
    const int d = dchain[0].degree();
    for (int mult = d; mult >= 1; --mult) {
        const UniPoly& g = dchain[mult - 1];
        int sa = g.robust_sign(a);
        int sb = g.robust_sign(b);
        if (sa == 0 || sb == 0 || sa == sb) continue;
        double r = bisect_polish(g, dchain[mult], a, b, sa);
        int got = detect_multiplicity(dchain, r, tol);
        if (got >= mult) return std::make_pair(r, got);
    }
    return std::nullopt;
}

} // namespace detail

// All real roots of f in `domain`, multiplicities detected via repeated
// derivative vanishing.  Sturm-sequence isolation with bisection refinement;
// ambiguous floating-point sign counts fall back to a dense sign scan.
inline RootList real_roots(const UniPoly& f, double lo, double hi, double tol = 1e-12) {
    if (f.is_zero()) throw numeric_error("real_roots: zero polynomial");
    RootList out;
    out.tol = tol;
    if (f.degree() == 0) return out;
    if (lo > hi) throw validation_error("real_roots: empty domain");

    // Clip unbounded queries to the Cauchy bound.
    double bound = f.root_bound();
    lo = std::max(lo, -bound - 1.0);
    hi = std::min(hi, bound + 1.0);
    if (lo > hi) return out;

    std::vector<UniPoly> dchain;
    dchain.push_back(f);
    for (int j = 0; j < f.degree(); ++j) dchain.push_back(dchain.back().derivative());

    const double pad = 4.0 * tol * std::max({1.0, std::abs(lo), std::abs(hi)});
    double a0 = lo - pad;
    double b0 = hi + pad;

    auto accept = [&](double r, int mult) {
        if (r < lo - tol || r > hi + tol) return;
        for (std::size_t i = 0; i < out.roots.size(); ++i)
            if (std::abs(out.roots[i] - r) <= 4.0 * tol) return;
        out.roots.push_back(r);
        out.multiplicities.push_back(mult);
    };

    bool need_fallback = false;

    // Fast paths for the degrees the checkers hammer on.
    if (f.degree() == 1) {
        double r = -f.coeffs()[0] / f.coeffs()[1];
        accept(r, 1);
    } else if (f.degree() == 2) {
        double c = f.coeffs()[0], b = f.coeffs()[1], a2 = f.coeffs()[2];
        double disc = b * b - 4.0 * a2 * c;
        double dscale = std::max(b * b, std::abs(4.0 * a2 * c));
        if (disc > 1e-14 * dscale) {
            double sq = std::sqrt(disc);
            double q = -0.5 * (b + (b >= 0 ? sq : -sq));
            double r1 = q / a2;
            double r2 = (q != 0) ? c / q : -b / a2 - r1;
            if (r1 > r2) std::swap(r1, r2);
            accept(r1, 1);
            accept(r2, 1);
        } else if (disc > -1e-14 * dscale) {
            accept(-b / (2.0 * a2), detect_multiplicity(dchain, -b / (2.0 * a2), tol));
        }
        // disc < 0: no real roots
    } else {
        detail::SturmChain chain = detail::build_sturm(f);
        if (chain.degraded) {
            need_fallback = true;
        } else {
            double xa = a0, xb = b0;
            auto va = detail::variations_jittered(chain, xa, -1.0);
            auto vb = detail::variations_jittered(chain, xb, +1.0);
            if (!va || !vb) {
                need_fallback = true;
            } else {
                struct Seg { double a, b; int va, vb; };
                std::vector<Seg> stack{{xa, xb, *va, *vb}};
                while (!stack.empty() && !need_fallback) {
                    Seg s = stack.back();
                    stack.pop_back();
                    int n = s.va - s.vb;
                    if (n <= 0) continue;
                    double width = s.b - s.a;
                    double wmin = std::max(64.0 * tol,
                                           1e-7 * std::max({1.0, std::abs(s.a), std::abs(s.b)}));
                    if (n == 1 || width <= wmin) {
                        // Shrink by Sturm counts first: the derivative cascade
                        // needs an interval whose only derivative zeros belong
                        // to the root itself.  Sign ambiguity here just means
                        // we are already deep inside the root's noise plateau.
                        double ra = s.a, rb = s.b;
                        if (n == 1) {
                            int cva = s.va;
                            double wref = std::max(
                                64.0 * tol,
                                2.5e-4 * std::max({1.0, std::abs(ra), std::abs(rb)}));
                            while (rb - ra > wref) {
                                double mid = 0.5 * (ra + rb);
                                auto vm = chain.variations(mid);
                                if (!vm) {
                                    bool moved = false;
                                    for (int k = 1; k <= 4 && !moved; ++k) {
                                        double alt = mid + k * (rb - ra) * 1e-3;
                                        if (alt <= ra || alt >= rb) break;
                                        if (auto v2 = chain.variations(alt)) {
                                            mid = alt;
                                            vm = v2;
                                            moved = true;
                                        }
                                    }
                                    if (!moved) break;
                                }
                                if (cva - *vm >= 1) rb = mid;
                                else { ra = mid; cva = *vm; }
                            }
                        }
                        auto ref = detail::refine_root(dchain, ra, rb, tol);
                        if (!ref && (ra != s.a || rb != s.b))
                            ref = detail::refine_root(dchain, s.a, s.b, tol);
                        if (ref) accept(ref->first, ref->second);
                        else need_fallback = true;
                        continue;
                    }
                    double mid = 0.5 * (s.a + s.b);
                    auto vm = detail::variations_jittered(chain, mid, +1.0);
                    if (!vm || mid <= s.a || mid >= s.b) {
                        auto ref = detail::refine_root(dchain, s.a, s.b, tol);
                        if (ref) accept(ref->first, ref->second);
                        else need_fallback = true;
                        continue;
                    }
                    stack.push_back({s.a, mid, s.va, *vm});
                    stack.push_back({mid, s.b, *vm, s.vb});
                }
            }
        }
    }

    if (need_fallback) {
        out.roots.clear();
        out.multiplicities.clear();
        // Dense sign scan: 2^16 panels over the padded domain; sign changes of
        // f catch odd roots, sign changes of f' plus a residual test catch
        // even-order touch points.
        const int kPanels = 1 << 16;
        const UniPoly& fp = dchain[1];
        double h = (b0 - a0) / kPanels;
        // Track the last nonzero signs so a grid point that evaluates to an
        // exact floating-point zero cannot swallow a crossing.
        double last_f_x = a0, last_fp_x = a0;
        int last_f_sign = (f(a0) > 0) - (f(a0) < 0);
        int last_fp_sign = (fp(a0) > 0) - (fp(a0) < 0);
        for (int i = 1; i <= kPanels; ++i) {
            double x = a0 + h * i;
            double vf = f(x), vfp = fp(x);
            int sf = (vf > 0) - (vf < 0);
            int sfp = (vfp > 0) - (vfp < 0);
            bool f_crossing = sf != 0 && last_f_sign != 0 && sf != last_f_sign;
            bool fp_crossing = sfp != 0 && last_fp_sign != 0 && sfp != last_fp_sign;
            if (f_crossing || fp_crossing) {
                double pa = f_crossing ? last_f_x : last_fp_x;
                auto ref = detail::refine_root(dchain, pa, x, tol);
                if (!ref)  // retry on a slightly widened bracket
                    ref = detail::refine_root(dchain, std::max(a0, pa - 2 * h),
                                              std::min(b0, x + 2 * h), tol);
                if (ref) accept(ref->first, ref->second);
            }
            if (sf != 0) { last_f_sign = sf; last_f_x = x; }
            if (sfp != 0) { last_fp_sign = sfp; last_fp_x = x; }
        }
    }

    std::vector<std::size_t> order(out.roots.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return out.roots[i] < out.roots[j]; });
    RootList sorted;
    sorted.tol = tol;
    for (std::size_t i : order) {
        sorted.roots.push_back(out.roots[i]);
        sorted.multiplicities.push_back(out.multiplicities[i]);
    }
    return sorted;
}

// ---------------------------------------------------------------------------
// SignPartition: the epsilon-level sets {f <= -eps}, {|f| < eps}, {f >= eps}
// as interval unions over a base interval.  Boundary convention: neg/pos are
// closed at finite boundary points, mid is open.
// ---------------------------------------------------------------------------
struct SignPartition {
    double eps = 0;
    IntervalUnion neg, mid, pos;
    Interval domain;
};

inline SignPartition sign_partition(const UniPoly& f, double eps, double lo, double hi,
                                    double tol = 1e-12) {
    if (!(eps > 0)) throw validation_error("sign_partition: eps must be > 0");
    if (lo > hi) throw validation_error("sign_partition: empty domain");
    SignPartition part;
    part.eps = eps;
    part.domain = {lo, hi, true, true};

    std::vector<double> cuts{lo};
    bool constant = f.degree() == 0;
    if (!constant) {
        for (const UniPoly& shifted : {f.plus_const(-eps), f.plus_const(eps)}) {
            RootList rl = real_roots(shifted, lo, hi, tol);
            for (double r : rl.roots)
                if (r > lo && r < hi) cuts.push_back(r);
        }
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    std::vector<Interval> neg, mid, pos;
    auto classify = [&](double v) {
        if (v >= eps) return 2;
        if (v <= -eps) return 0;
        return 1;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b <= a) continue;
        int cls = classify(f(0.5 * (a + b)));
        Interval iv{a, b, cls != 1, cls != 1};
        (cls == 0 ? neg : cls == 1 ? mid : pos).push_back(iv);
    }
    // Tangency points: a cut where the level is touched but both sides stay
    // mid belongs to pos or neg by the closed-boundary convention.
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
        double c = cuts[i];
        bool left_mid = false, right_mid = false;
        for (const auto& iv : mid) {
            if (iv.hi == c) left_mid = true;
            if (iv.lo == c) right_mid = true;
        }
        if (left_mid && right_mid) {
            double v = f(c);
            (v > 0 ? pos : neg).push_back({c, c, true, true});
        }
    }
    part.neg = IntervalUnion(std::move(neg));
    part.mid = IntervalUnion(std::move(mid));
    part.pos = IntervalUnion(std::move(pos));
    return part;
}

// ---------------------------------------------------------------------------
// MultiPoly: sparse multivariate polynomial on R^n.
// ---------------------------------------------------------------------------
struct MTerm {
    double coeff = 0;
    std::vector<int> expo;
};

class MultiPoly {
public:
    MultiPoly(int dim, std::vector<MTerm> terms) : dim_(dim) {
        if (dim <= 0) throw validation_error("MultiPoly: dim must be >= 1");
        for (auto& t : terms) {
            if (static_cast<int>(t.expo.size()) != dim)
                throw validation_error("MultiPoly: exponent vector length != dim");
            for (int e : t.expo)
                if (e < 0) throw validation_error("MultiPoly: negative exponent");
        }
        std::sort(terms.begin(), terms.end(),
                  [](const MTerm& a, const MTerm& b) { return a.expo < b.expo; });
        for (const auto& t : terms) {
            if (!terms_.empty() && terms_.back().expo == t.expo) terms_.back().coeff += t.coeff;
            else terms_.push_back(t);
        }
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                    [](const MTerm& t) { return t.coeff == 0.0; }),
                     terms_.end());
    }

    int dim() const { return dim_; }
    const std::vector<MTerm>& terms() const { return terms_; }

    int degree() const {
        int d = 0;
        for (const auto& t : terms_) {
            int s = 0;
            for (int e : t.expo) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    double eval(const double* x) const {
        double acc = 0;
        for (const auto& t : terms_) {
            double v = t.coeff;
            for (int i = 0; i < dim_; ++i)
                for (int e = 0; e < t.expo[i]; ++e) v *= x[i];
            acc += v;
        }
        return acc;
    }
    double eval(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw validation_error("MultiPoly::eval: dimension mismatch");
        return eval(x.data());
    }

    MultiPoly plus_const(double c) const {
        std::vector<MTerm> t = terms_;
        t.push_back({c, std::vector<int>(dim_, 0)});
        return MultiPoly(dim_, std::move(t));
    }
    MultiPoly scaled(double s) const {
        std::vector<MTerm> t = terms_;
        for (auto& q : t) q.coeff *= s;
        return MultiPoly(dim_, std::move(t));
    }

private:
    int dim_;
    std::vector<MTerm> terms_;
};

namespace detail {

inline double falling_factorial(int e, int a) {
    double v = 1;
    for (int i = 0; i < a; ++i) v *= static_cast<double>(e - i);
    return v;
}

inline double factorial(int n) {
    double v = 1;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

// Value of the partial derivative d^alpha f at x.
inline double partial_at(const MultiPoly& f, const std::vector<int>& alpha,
                         const std::vector<double>& x) {
    double acc = 0;
    for (const auto& t : f.terms()) {
        double v = t.coeff;
        bool dead = false;
        for (int i = 0; i < f.dim() && !dead; ++i) {
            if (t.expo[i] < alpha[i]) { dead = true; break; }
            v *= falling_factorial(t.expo[i], alpha[i]);
            for (int e = 0; e < t.expo[i] - alpha[i]; ++e) v *= x[i];
        }
        if (!dead) acc += v;
    }
    return acc;
}

template <typename Fn>
inline void for_each_multiindex(int dim, int total, std::vector<int>& cur, int pos, Fn&& fn) {
    if (pos == dim - 1) {
        cur[pos] = total;
        fn(cur);
        return;
    }
    for (int k = 0; k <= total; ++k) {
        cur[pos] = k;
        for_each_multiindex(dim, total - k, cur, pos + 1, fn);
    }
}

} // namespace detail

// Frobenius norm of the m-th derivative tensor of f at x:
// |D^m f(x)|^2 = sum over ordered index tuples of the squared partials.
inline double dm_norm_at(const MultiPoly& f, int m, const std::vector<double>& x) {
    if (m < 1 || m > f.degree())
        throw validation_error("dm_norm_at: m out of range");
    if (static_cast<int>(x.size()) != f.dim())
        throw validation_error("dm_norm_at: dimension mismatch");
    double acc = 0;
    std::vector<int> alpha(f.dim(), 0);
    detail::for_each_multiindex(f.dim(), m, alpha, 0, [&](const std::vector<int>& a) {
        double pd = detail::partial_at(f, a, x);
        if (pd == 0) return;
        double tuples = detail::factorial(m);
        for (int ai : a) tuples /= detail::factorial(ai);
        acc += tuples * pd * pd;
    });
    return std::sqrt(acc);
}

// Restriction g(t) = f(x + t (y - x)) as a univariate polynomial, built by
// interpolation at Chebyshev nodes on [0,1] (monomial expansion of the
// composition would blow up coefficients for larger n).
inline UniPoly restrict_to_segment(const MultiPoly& f, const std::vector<double>& x,
                                   const std::vector<double>& y) {
    if (static_cast<int>(x.size()) != f.dim() || static_cast<int>(y.size()) != f.dim())
        throw validation_error("restrict_to_segment: dimension mismatch");
    bool same = true;
    for (int i = 0; i < f.dim(); ++i)
        if (x[i] != y[i]) { same = false; break; }
    if (same) throw validation_error("restrict_to_segment: x == y");
    int d = f.degree();
    if (d > 12) throw validation_error("restrict_to_segment: degree cap 12 exceeded");
    int n = d + 1;

    std::vector<double> nodes(n), values(n), point(f.dim());
    for (int k = 0; k < n; ++k) {
        nodes[k] = n == 1 ? 0.5
                          : 0.5 + 0.5 * std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * n));
        for (int i = 0; i < f.dim(); ++i) point[i] = x[i] + nodes[k] * (y[i] - x[i]);
        values[k] = f.eval(point);
    }

    // Newton divided differences, then expansion to the monomial basis.
    std::vector<double> dd = values;
    for (int j = 1; j < n; ++j)
        for (int i = n - 1; i >= j; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j]);
    std::vector<double> coef{dd[n - 1]};
    for (int i = n - 2; i >= 0; --i) {
        std::vector<double> next(coef.size() + 1, 0.0);
        for (std::size_t j = 0; j < coef.size(); ++j) {
            next[j + 1] += coef[j];
            next[j] -= nodes[i] * coef[j];
        }
        next[0] += dd[i];
        coef = std::move(next);
    }
    // Strip interpolation noise in trailing coefficients.
    double scale = 0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    for (double c : coef) scale = std::max(scale, std::abs(c));
    while (coef.size() > 1 && std::abs(coef.back()) <= 1e-12 * scale) coef.pop_back();
    return UniPoly(std::move(coef));
}

} // namespace polyconc
