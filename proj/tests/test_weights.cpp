#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "polyconc/weights.hpp"

using namespace polyconc;
using Catch::Approx;

TEST_CASE("moment closed forms") {
    Weight exp1 = Weight::exp_affine(0, -1, 0, kInf);
    CHECK(moment(exp1, 1) == Approx(1.0).epsilon(1e-13));
    CHECK(moment(exp1, 0) == Approx(1.0).epsilon(1e-13));
    CHECK(moment(exp1, 4) == Approx(24.0).epsilon(1e-13));

    CHECK(moment(Weight::power(2, 0, 1), 0) == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(moment(Weight::exp_affine(0, -1, 0, 2), 0) ==
          Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("moment table invariant for power weights") {
    double s = 3.0;
    int n = 4;
    MomentTable t = MomentTable::compute(Weight::power(n, s, s + 1), 6);
    for (int k = 0; k <= 6; ++k) {
        double expect = (std::pow(s + 1, n + k + 1) - std::pow(s, n + k + 1)) / (n + k + 1);
        CHECK(t.moments[k] == Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("moment recursion stays stable up to k = 24") {
    Weight w = Weight::exp_affine(0.3, -1.7, 0.5, 4.0);
    for (int k = 0; k <= 24; ++k) {
        double exact = moment(w, k);
        double ref = oracle::weight_integral(w, [&](double t) { return std::pow(t, k); });
        CHECK(exact == Approx(ref).epsilon(1e-8));
    }
    Weight wneg = Weight::exp_affine(-0.2, 0.9, -2.0, 1.5);
    for (int k = 0; k <= 24; ++k) {
        double exact = moment(wneg, k);
        double ref = oracle::weight_integral(wneg, [&](double t) { return std::pow(t, k); });
        CHECK(exact == Approx(ref).margin(1e-8 * (1 + std::abs(ref))));
    }
}

TEST_CASE("stats of canonical examples") {
    WeightedStats u = stats(Weight::power(0, 0, 1));
    CHECK(u.mass == Approx(1.0));
    CHECK(u.mean == Approx(0.5));
    CHECK(u.variance == Approx(1.0 / 12.0));

    WeightedStats e = stats(Weight::exp_affine(0, -1, 0, kInf));
    CHECK(e.mass == Approx(1.0));
    CHECK(e.mean == Approx(1.0));
    CHECK(e.variance == Approx(1.0));

    Weight p3 = Weight::power(3, 5, 6);
    WeightedStats s = stats(p3);
    double m0 = oracle::weight_integral(p3, [](double) { return 1.0; });
    double m1 = oracle::weight_integral(p3, [](double t) { return t; });
    double m2 = oracle::weight_integral(p3, [](double t) { return t * t; });
    CHECK(s.mass == Approx(m0).epsilon(1e-8));
    CHECK(s.mean == Approx(m1 / m0).epsilon(1e-8));
    CHECK(s.variance == Approx(m2 / m0 - (m1 / m0) * (m1 / m0)).epsilon(1e-6));
}

TEST_CASE("c1_inf behaviour") {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i);
    CHECK(c1_inf(0, grid) == Approx(1.0 / 12.0));

    double v1 = c1_inf(1, grid);
    CHECK(v1 > 0);
    CHECK(v1 < 1.0 / 12.0);
    CHECK(v1 == Approx(stats(Weight::power(1, 0, 1)).variance).epsilon(1e-12));

    double v5 = c1_inf(5, {0.0});
    CHECK(v5 == Approx(stats(Weight::power(5, 0, 1)).variance).epsilon(1e-12));
}

TEST_CASE("integrate_poly closed forms and oracle agreement") {
    CHECK(integrate_poly(Weight::uniform(0, 1), UniPoly({0, 0, 1})) ==
          Approx(1.0 / 3.0).epsilon(1e-14));
    // E (T-1)^2 for Exp(1)
    CHECK(integrate_poly(Weight::exp_affine(0, -1, 0, kInf), UniPoly({1, -2, 1})) ==
          Approx(1.0).epsilon(1e-13));

    Rng rng(404, 0);
    for (int trial = 0; trial < 60; ++trial) {
        Weight w = oracle::random_weight(rng);
        auto fp = oracle::random_factored(rng, 5, -3, 3, 0.05);
        double exact = integrate_poly(w, fp.poly);
        double ref = oracle::weight_integral(w, [&](double t) { return fp.poly(t); }, 400000);
        double floor = 1e-9 * oracle::weight_integral(
                                  w, [&](double t) { return std::abs(fp.poly(t)); }, 10000);
        CHECK(std::abs(exact - ref) <= 1e-8 * std::max({std::abs(exact), std::abs(ref), floor}));
    }
}

TEST_CASE("integrate_indicator closed forms") {
    CHECK(integrate_indicator(Weight::uniform(0, 1), IntervalUnion::single(0, 0.5)) ==
          Approx(0.5));
    // Lemma 2.4 proof tail mass: int_tau^inf e^{-t} dt = e^{-tau}
    CHECK(integrate_indicator(Weight::exp_affine(0, -1, 0, kInf),
                              IntervalUnion::single(1.0, kInf)) ==
          Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(integrate_indicator(Weight::power(2, 0, 2), IntervalUnion::single(1, 2)) ==
          Approx(7.0 / 3.0).epsilon(1e-13));
    CHECK_THROWS_AS(
        integrate_indicator(Weight::uniform(0, 1), IntervalUnion::single(-1.0, 0.5)),
        validation_error);
}

TEST_CASE("integrate_abs_poly closed forms and oracle agreement") {
    CHECK(integrate_abs_poly(Weight::uniform(-1, 1), UniPoly({0, 1}), 0) ==
          Approx(1.0).epsilon(1e-13));
    CHECK(integrate_abs_poly(Weight::exp_affine(0, -1, 0, kInf), UniPoly({-1, 1}), 0) ==
          Approx(2.0 * std::exp(-1.0)).epsilon(1e-13));

    Rng rng(505, 0);
    for (int trial = 0; trial < 60; ++trial) {
        Weight w = oracle::random_weight(rng);
        auto fp = oracle::random_factored(rng, 5, -3, 3, 0.05);
        double r = rng.uniform(-2, 2);
        double exact = integrate_abs_poly(w, fp.poly, r);
        double ref = oracle::weight_integral(
            w, [&](double t) { return std::abs(fp.poly(t) - r); }, 400000);
        CHECK(exact == Approx(ref).epsilon(1e-7));
    }
}

TEST_CASE("integrate_abs_poly dominates the centered integral (triangle inequality)") {
    Rng rng(606, 0);
    for (int trial = 0; trial < 100; ++trial) {
        Weight w = oracle::random_weight(rng);
        auto fp = oracle::random_factored(rng, 4, -2, 2, 0.05);
        double r = rng.uniform(-1, 1);
        double lhs = integrate_abs_poly(w, fp.poly, r);
        double rhs = std::abs(integrate_poly(w, fp.poly) - r * moment(w, 0));
        CHECK(lhs >= rhs - 1e-10 * (1 + std::abs(rhs)));
    }
}

TEST_CASE("canonicalize maps the named examples") {
    SECTION("exp-affine") {
        Canonicalized c = canonicalize(Weight::exp_affine(3, -2, 1, 4));
        CHECK(c.weight.kind == WeightKind::ExpAffine);
        CHECK(c.weight.c0 == 0.0);
        CHECK(c.weight.c1 == -1.0);
        CHECK(c.weight.lo == Approx(0.0));
        CHECK(c.weight.hi == Approx(6.0));
        CHECK(c.map_a == Approx(2.0));
        CHECK(c.map_b == Approx(-2.0));
        // substitution oracle: jacobian equals the ratio of masses
        double mass_orig = oracle::weight_integral(Weight::exp_affine(3, -2, 1, 4),
                                                   [](double) { return 1.0; }, 200000);
        double mass_canon = oracle::weight_integral(c.weight, [](double) { return 1.0; }, 200000);
        CHECK(c.jacobian == Approx(mass_orig / mass_canon).epsilon(1e-9));
        CHECK(c.jacobian == Approx(std::exp(1.0) / 2.0).epsilon(1e-12));
    }
    SECTION("affine-power to power") {
        Canonicalized c = canonicalize(Weight::affine_power(2, 0, 4, 1, 2));
        CHECK(c.weight.kind == WeightKind::Power);
        CHECK(c.weight.n == 3);
        CHECK(c.weight.lo == Approx(2.0));
        CHECK(c.weight.hi == Approx(4.0));
        CHECK(c.map_a == Approx(2.0));
        CHECK(c.map_b == Approx(0.0));
        double mass_orig = oracle::weight_integral(Weight::affine_power(2, 0, 4, 1, 2),
                                                   [](double) { return 1.0; }, 200000);
        double mass_canon = oracle::weight_integral(c.weight, [](double) { return 1.0; }, 200000);
        CHECK(c.jacobian == Approx(mass_orig / mass_canon).epsilon(1e-9));
    }
    SECTION("lebesgue fixed point") {
        Canonicalized c = canonicalize(Weight::uniform(0, 1));
        CHECK(c.map_a == 1.0);
        CHECK(c.map_b == 0.0);
        CHECK(c.jacobian == 1.0);
        CHECK(c.weight.lo == 0.0);
        CHECK(c.weight.hi == 1.0);
    }
}

TEST_CASE("canonicalize preserves integrals through the substitution") {
    Rng rng(707, 0);
    for (int trial = 0; trial < 50; ++trial) {
        Weight w = oracle::random_weight(rng);
        Canonicalized c = canonicalize(w);
        auto fp = oracle::random_factored(rng, 4, -2, 2, 0.1);
        // f composed with the inverse map evaluated under the canonical weight
        UniPoly fc = fp.poly.compose_affine(1.0 / c.map_a, -c.map_b / c.map_a);
        double orig = integrate_poly(w, fp.poly);
        double sub = c.jacobian * integrate_poly(c.weight, fc);
        CHECK(orig == Approx(sub).margin(1e-9 * (1 + std::abs(orig))));
    }
}

TEST_CASE("divergent weights are rejected") {
    CHECK_THROWS_AS(Weight::exp_affine(0, 0.5, 0, kInf), numeric_error);
    CHECK_THROWS_AS(Weight::power(-1, 0, 1), validation_error);
    CHECK_THROWS_AS(Weight::power(2, -1, 1), validation_error);
}

TEST_CASE("log_mass agrees with linear masses and survives far tails") {
    Weight w = Weight::exp_affine(0, -1, 0, 2000);
    CHECK(log_mass(w, 0, 1) == Approx(std::log(1 - std::exp(-1.0))).epsilon(1e-12));
    // far tail: linear mass underflows, log stays exact
    double l = log_mass(w, 1000, 2000);
    CHECK(l == Approx(-1000.0).margin(1e-9));
    double li = log_integrate_indicator(
        w, IntervalUnion::single(1000, 1100).unite(IntervalUnion::single(1200, 1300)));
    CHECK(li == Approx(-1000.0 + std::log1p(std::exp(-200.0))).margin(1e-9));
}

TEST_CASE("truncation rule bounds the weighted tail") {
    Weight w = Weight::exp_affine(0, -1, 0, kInf);
    for (int d : {1, 3, 6}) {
        double T = truncation_point(w, d);
        double tail = oracle::weight_integral(
            Weight::exp_affine(0, -1, T, kInf),
            [&](double t) { return std::pow(1.0 + t, 2 * d); }, 400000);
        CHECK(tail <= 1.2e-12);
        // smallest such T: a slightly smaller cut leaves too much mass
        double tail2 = oracle::weight_integral(
            Weight::exp_affine(0, -1, T - 0.5, kInf),
            [&](double t) { return std::pow(1.0 + t, 2 * d); }, 400000);
        CHECK(tail2 > 1e-12);
    }
}
