#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "polyconc/poly.hpp"
#include "polyconc/rng.hpp"

using namespace polyconc;
using Catch::Approx;

TEST_CASE("eval_uni basics") {
    CHECK(eval_uni(UniPoly({-1, 0, 1}), 2.0) == 3.0);
    CHECK(eval_uni(UniPoly({0}), 5.0) == 0.0);
    // (t+1)^2 (t-10) at t = 0
    UniPoly f = UniPoly::from_roots({-1, -1, 10});
    CHECK(eval_uni(f, 0.0) == Approx(-10.0).margin(1e-14));
}

TEST_CASE("derivative_uni basics and finite differences") {
    CHECK(derivative_uni(UniPoly({0, 0, 1})).coeffs() == std::vector<double>{0, 2});
    CHECK(derivative_uni(UniPoly({7})).is_zero());
    CHECK(derivative_uni(UniPoly({0, -3, 0, 1})).coeffs() == std::vector<double>{-3, 0, 3});

    Rng rng(1, 0);
    for (int trial = 0; trial < 20; ++trial) {
        auto fp = oracle::random_factored(rng, 5, -2, 2, 0.3);
        UniPoly d = derivative_uni(fp.poly);
        double t = rng.uniform(-1.5, 1.5);
        double h = 1e-6;
        double fd = (fp.poly(t + h) - fp.poly(t - h)) / (2 * h);
        double exact = d(t);
        double scale = std::max({1.0, std::abs(exact), fp.poly.max_abs_coeff()});
        CHECK(std::abs(fd - exact) <= 1e-6 * scale);
    }
}

TEST_CASE("real_roots on simple cases") {
    RootList r1 = real_roots(UniPoly({-1, 0, 1}), -2, 2, 1e-12);
    REQUIRE(r1.roots.size() == 2);
    CHECK(r1.roots[0] == Approx(-1.0).margin(1e-11));
    CHECK(r1.roots[1] == Approx(1.0).margin(1e-11));
    CHECK(r1.multiplicities == std::vector<int>{1, 1});

    RootList r2 = real_roots(UniPoly::from_roots({-1, -1, 3}), -5, 5, 1e-12);
    REQUIRE(r2.roots.size() == 2);
    CHECK(r2.roots[0] == Approx(-1.0).margin(1e-11));
    CHECK(r2.roots[1] == Approx(3.0).margin(1e-11));
    CHECK(r2.multiplicities == std::vector<int>{2, 1});

    RootList r3 = real_roots(UniPoly({1, 0, 1}), -10, 10, 1e-12);
    CHECK(r3.roots.empty());

    CHECK_THROWS_AS(real_roots(UniPoly({0}), -1, 1), numeric_error);
}

TEST_CASE("real_roots recovers random factored polynomials") {
    Rng rng(2024, 0);
    const double tol = 1e-10;
    for (int trial = 0; trial < 250; ++trial) {
        auto fp = oracle::random_factored(rng, 6, -3, 3, 0.1);
        RootList rl = real_roots(fp.poly, -3.5, 3.5, tol);
        REQUIRE(rl.roots.size() == fp.roots.size());
        std::vector<double> expect = fp.roots;
        std::vector<int> em = fp.mults;
        std::vector<std::size_t> order(expect.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return expect[a] < expect[b]; });
        for (std::size_t i = 0; i < order.size(); ++i) {
            CHECK(std::abs(rl.roots[i] - expect[order[i]]) <= tol);
            CHECK(rl.multiplicities[i] == em[order[i]]);
        }
    }
}

TEST_CASE("sign_partition on a line") {
    SignPartition p = sign_partition(UniPoly({0, 1}), 0.5, -2, 2);
    REQUIRE(p.neg.size() == 1);
    REQUIRE(p.mid.size() == 1);
    REQUIRE(p.pos.size() == 1);
    CHECK(p.neg.parts()[0].lo == Approx(-2.0));
    CHECK(p.neg.parts()[0].hi == Approx(-0.5).margin(1e-11));
    CHECK(p.mid.parts()[0].lo == Approx(-0.5).margin(1e-11));
    CHECK(p.mid.parts()[0].hi == Approx(0.5).margin(1e-11));
    CHECK_FALSE(p.mid.parts()[0].lo_closed);
    CHECK(p.pos.parts()[0].hi == Approx(2.0));
    CHECK(p.pos.parts()[0].lo_closed);
}

TEST_CASE("sign_partition when f clears the level everywhere") {
    SignPartition p = sign_partition(UniPoly({2, 0, 1}), 1.0, 0, 1);
    CHECK(p.neg.is_empty());
    CHECK(p.mid.is_empty());
    REQUIRE(p.pos.size() == 1);
    CHECK(p.pos.parts()[0].lo == 0.0);
    CHECK(p.pos.parts()[0].hi == 1.0);
}

namespace {
// Independent boundary oracle: dense sign scan plus bisection on f +- eps.
std::vector<double> scan_level_points(const UniPoly& f, double eps, double lo, double hi) {
    std::vector<double> cuts;
    const int kGrid = 1000000;
    for (double level : {eps, -eps}) {
        double prev = f(lo) - level;
        for (int i = 1; i <= kGrid; ++i) {
            double x = lo + (hi - lo) * i / kGrid;
            double v = f(x) - level;
            if ((prev < 0 && v >= 0) || (prev > 0 && v <= 0)) {
                double a = lo + (hi - lo) * (i - 1) / kGrid, b = x;
                double fa = prev;
                for (int it = 0; it < 80; ++it) {
                    double m = 0.5 * (a + b);
                    double fm = f(m) - level;
                    if ((fa < 0) == (fm < 0)) { a = m; fa = fm; }
                    else b = m;
                }
                cuts.push_back(0.5 * (a + b));
            }
            prev = v;
        }
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}
} // namespace

TEST_CASE("sign_partition boundaries match the sign-scan oracle") {
    UniPoly f({0, -1, 1});  // t^2 - t
    double eps = 0.1;
    SignPartition p = sign_partition(f, eps, 0, 2);
    // level crossings of f -+ eps inside [0, 2]; the remaining mid boundary
    // is the domain endpoint 0 itself (f(0) = 0 lands inside the band)
    std::vector<double> expected = scan_level_points(f, eps, 0, 2);
    REQUIRE(expected.size() == 3);
    expected.insert(expected.begin(), 0.0);

    std::vector<double> got;
    for (const auto& iv : p.mid.parts()) {
        got.push_back(iv.lo);
        got.push_back(iv.hi);
    }
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(got[i] - expected[i]) <= 1e-10);
}

TEST_CASE("sign_partition sampled sign conditions hold") {
    Rng rng(77, 0);
    for (int trial = 0; trial < 200; ++trial) {
        auto fp = oracle::random_factored(rng, 5, -2, 2, 0.15);
        double eps = std::pow(10.0, rng.uniform(-3, 0.5));
        double lo = rng.uniform(-3, -1), hi = rng.uniform(1, 3);
        SignPartition p = sign_partition(fp.poly, eps, lo, hi);
        auto sample_check = [&](const IntervalUnion& u, int cls) {
            for (const auto& iv : u.parts()) {
                if (iv.length() == 0) continue;
                for (int k = 0; k < 20; ++k) {
                    double margin = iv.length() * 1e-9;
                    double t = rng.uniform(iv.lo + margin, iv.hi - margin);
                    double v = fp.poly(t);
                    double slack = 4.0 * fp.poly.eval_error_bound(t);
                    if (cls == 0) CHECK(v <= -eps + slack);
                    if (cls == 1) CHECK(std::abs(v) < eps + slack);
                    if (cls == 2) CHECK(v >= eps - slack);
                }
            }
        };
        sample_check(p.neg, 0);
        sample_check(p.mid, 1);
        sample_check(p.pos, 2);
    }
}

TEST_CASE("restrict_to_segment composes exactly on small cases") {
    MultiPoly f1(2, {{1.0, {1, 1}}});  // x1 x2
    UniPoly g1 = restrict_to_segment(f1, {0, 0}, {1, 1});
    REQUIRE(g1.degree() == 2);
    CHECK(g1.coeffs()[2] == Approx(1.0).margin(1e-12));
    CHECK(std::abs(g1.coeffs()[0]) < 1e-12);
    CHECK(std::abs(g1.coeffs()[1]) < 1e-12);

    MultiPoly f2(2, {{1.0, {1, 0}}});  // x1
    UniPoly g2 = restrict_to_segment(f2, {0, 0}, {2, 0});
    REQUIRE(g2.degree() == 1);
    CHECK(g2.coeffs()[1] == Approx(2.0).margin(1e-13));

    MultiPoly f3(2, {{1.0, {2, 0}}, {1.0, {0, 2}}});  // x1^2 + x2^2
    UniPoly g3 = restrict_to_segment(f3, {1, 0}, {0, 1});
    REQUIRE(g3.degree() == 2);
    CHECK(g3.coeffs()[0] == Approx(1.0).margin(1e-12));
    CHECK(g3.coeffs()[1] == Approx(-2.0).margin(1e-12));
    CHECK(g3.coeffs()[2] == Approx(2.0).margin(1e-12));

    CHECK_THROWS_AS(restrict_to_segment(f3, {1, 0}, {1, 0}), validation_error);
    CHECK_THROWS_AS(restrict_to_segment(f3, {1}, {0, 1}), validation_error);
}

namespace {
MultiPoly random_multipoly(Rng& rng, int dim, int max_deg) {
    std::vector<MTerm> terms;
    int nterms = 2 + static_cast<int>(rng.uniform(0, 6));
    for (int i = 0; i < nterms; ++i) {
        MTerm t;
        t.coeff = rng.uniform(-2, 2);
        t.expo.resize(dim);
        int total = static_cast<int>(rng.uniform(0, max_deg + 0.999));
        for (int rep = 0; rep < total; ++rep) t.expo[static_cast<int>(rng.uniform(0, dim)) % dim]++;
        terms.push_back(t);
    }
    return MultiPoly(dim, terms);
}
} // namespace

TEST_CASE("restrict_to_segment agrees with direct evaluation along the line") {
    Rng rng(5150, 0);
    for (int trial = 0; trial < 40; ++trial) {
        int dim = 2 + static_cast<int>(rng.uniform(0, 3));
        MultiPoly f = random_multipoly(rng, dim, 6);
        if (f.degree() == 0) continue;
        std::vector<double> x(dim), y(dim);
        for (int i = 0; i < dim; ++i) {
            x[i] = rng.uniform(-1, 1);
            y[i] = rng.uniform(-1, 1);
        }
        y[0] += 0.5;  // ensure x != y
        UniPoly g = restrict_to_segment(f, x, y);
        std::vector<double> p(dim);
        for (int k = 0; k < 50; ++k) {
            double t = rng.uniform(0, 1);
            for (int i = 0; i < dim; ++i) p[i] = x[i] + t * (y[i] - x[i]);
            double direct = f.eval(p);
            double viag = g(t);
            double scale = std::max({1.0, std::abs(direct)});
            CHECK(std::abs(direct - viag) <= 1e-10 * scale);
        }
    }
}

namespace {
// Independent Frobenius norm: enumerate ordered index tuples directly.
double dm_norm_tuples(const MultiPoly& f, int m, const std::vector<double>& x) {
    int dim = f.dim();
    long total = 1;
    for (int i = 0; i < m; ++i) total *= dim;
    double acc = 0;
    for (long code = 0; code < total; ++code) {
        std::vector<int> alpha(dim, 0);
        long c = code;
        for (int i = 0; i < m; ++i) {
            alpha[c % dim]++;
            c /= dim;
        }
        double pd = 0;
        for (const auto& term : f.terms()) {
            double v = term.coeff;
            bool dead = false;
            for (int i = 0; i < dim; ++i) {
                if (term.expo[i] < alpha[i]) { dead = true; break; }
                for (int k = 0; k < alpha[i]; ++k) v *= term.expo[i] - k;
                for (int k = 0; k < term.expo[i] - alpha[i]; ++k) v *= x[i];
            }
            if (!dead) pd += v;
        }
        acc += pd * pd;
    }
    return std::sqrt(acc);
}
} // namespace

TEST_CASE("dm_norm_at matches hand values and tuple enumeration") {
    MultiPoly sq(1, {{1.0, {2}}});
    CHECK(dm_norm_at(sq, 2, {0.7}) == Approx(2.0));
    CHECK(dm_norm_at(sq, 1, {3.0}) == Approx(6.0));

    MultiPoly xy(2, {{1.0, {1, 1}}});
    CHECK(dm_norm_at(xy, 2, {0.3, -0.2}) == Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(dm_norm_at(xy, 3, {0.0, 0.0}), validation_error);
    CHECK_THROWS_AS(dm_norm_at(xy, 0, {0.0, 0.0}), validation_error);

    Rng rng(31, 0);
    for (int trial = 0; trial < 25; ++trial) {
        int dim = 2 + static_cast<int>(rng.uniform(0, 2));
        MultiPoly f = random_multipoly(rng, dim, 4);
        if (f.degree() < 1) continue;
        std::vector<double> x(dim);
        for (auto& xi : x) xi = rng.uniform(-1.5, 1.5);
        for (int m = 1; m <= std::min(3, f.degree()); ++m)
            CHECK(dm_norm_at(f, m, x) == Approx(dm_norm_tuples(f, m, x)).margin(1e-10));
    }
}

TEST_CASE("Taylor-bound inequality holds pathwise for random polynomials") {
    Rng rng(99, 0);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int dim = 2 + static_cast<int>(rng.uniform(0, 2));
        MultiPoly f = random_multipoly(rng, dim, 4);
        int d = f.degree();
        if (d < 1) continue;
        std::vector<double> x(dim), y(dim);
        for (int i = 0; i < dim; ++i) {
            x[i] = rng.uniform(-1.2, 1.2);
            y[i] = rng.uniform(-1.2, 1.2);
        }
        double dist = 0;
        for (int i = 0; i < dim; ++i) dist += (y[i] - x[i]) * (y[i] - x[i]);
        dist = std::sqrt(dist);
        double rhs = 0, factm = 1;
        for (int m = 1; m <= d; ++m) {
            factm *= m;
            rhs += dm_norm_at(f, m, x) * std::pow(dist, m) / factm;
        }
        double lhs = std::abs(f.eval(y) - f.eval(x));
        CHECK(lhs <= rhs * (1 + 1e-12) + 1e-12);
        ++checked;
    }
    REQUIRE(checked > 30);
}
