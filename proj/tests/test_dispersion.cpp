// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "kppfront/dispersion.hpp"

using namespace kppfront;

TEST_CASE("constant case: k(lambda) = lambda^2 + 0.75", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model();
    for (double lam : {0.0, 0.3, 1.0, 2.5})
        CHECK(k_of_lambda(m, lam) == Catch::Approx(lam * lam + 0.75).margin(1e-12));
    CHECK(k_of_lambda(m, 0.0) == Catch::Approx(-mu(m, 0.0)).margin(1e-14));
}

TEST_CASE("constant case: closed-form minimal speed", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model();
    const MinimalSpeed ms = minimal_speed(m);
    CHECK(ms.c_star == Catch::Approx(2.0 * std::sqrt(0.75)).margin(1e-8));
    CHECK(ms.lambda_star == Catch::Approx(std::sqrt(0.75)).margin(1e-8));
}

TEST_CASE("nearly adiabatic loss: c* = 2 sqrt(1 - 1e-3)", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model(1.0, 1e-3);
    const MinimalSpeed ms = minimal_speed(m);
    CHECK(ms.c_star == Catch::Approx(2.0 * std::sqrt(1.0 - 1e-3)).margin(1e-8));
}

TEST_CASE("minimal speed requires mu(0) < 0", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model(1.0, 1.5);
    CHECK_THROWS_MATCHES(minimal_speed(m), Error, Catch::Matchers::Predicate<Error>(
        [](const Error& e) { return e.code() == errc::precondition_mu0; }));
}

TEST_CASE("constant case: quadratic roots for c = 2", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model();
    const auto [l1, l2] = roots_for_speed(m, 2.0);
    CHECK(l1 == Catch::Approx(0.5).margin(1e-9));
    CHECK(l2 == Catch::Approx(1.5).margin(1e-9));
    const MinimalSpeed ms = minimal_speed(m);
    CHECK(l1 < ms.lambda_star);
    CHECK(l2 > ms.lambda_star);
}

TEST_CASE("roots collapse to lambda* at the minimal speed", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model();
    const MinimalSpeed ms = minimal_speed(m);
    const auto [l1, l2] = roots_for_speed(m, ms.c_star);
    CHECK(l1 == Catch::Approx(ms.lambda_star).margin(1e-4));
    CHECK(l2 == Catch::Approx(ms.lambda_star).margin(1e-4));
    CHECK_THROWS_MATCHES(roots_for_speed(m, ms.c_star - 1e-3), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::speed_below_minimal;
                         }));
}

TEST_CASE("shear case: c* matches a brute-force grid search", "[dispersion]") {
    const CrossSectionModel m = helpers::shear_model(33);
    const MinimalSpeed ms = minimal_speed(m);
    // independent oracle: minimize k/lambda on a lambda-grid of step 1e-4
    double best = std::numeric_limits<double>::infinity();
    for (double lam = 1e-4; lam <= 3.0; lam += 1e-4)
        best = std::min(best, k_of_lambda(m, lam) / lam);
    CHECK(ms.c_star == Catch::Approx(best).margin(1e-3));
}

TEST_CASE("shear case: roots bracket lambda* and satisfy k = c lambda", "[dispersion]") {
    const CrossSectionModel m = helpers::shear_model(33);
    const MinimalSpeed ms = minimal_speed(m);
    const double c = ms.c_star + 0.5;
    const auto [l1, l2] = roots_for_speed(m, c);
    CHECK(l1 < ms.lambda_star);
    CHECK(l2 > ms.lambda_star);
    CHECK(std::abs(k_of_lambda(m, l1) - c * l1) <= 1e-9);
    CHECK(std::abs(k_of_lambda(m, l2) - c * l2) <= 1e-9);
    // sampled sign-change oracle around each root
    CHECK((k_of_lambda(m, l1 - 1e-3) - c * (l1 - 1e-3)) > 0.0);
    CHECK((k_of_lambda(m, l1 + 1e-3) - c * (l1 + 1e-3)) < 0.0);
    CHECK((k_of_lambda(m, l2 - 1e-3) - c * (l2 - 1e-3)) < 0.0);
    CHECK((k_of_lambda(m, l2 + 1e-3) - c * (l2 + 1e-3)) > 0.0);
}

TEST_CASE("c* equals the root-collapse speed", "[dispersion]") {
    const CrossSectionModel m = helpers::shear_model(33);
    const MinimalSpeed ms = minimal_speed(m);
    double lo = ms.c_star, hi = ms.c_star + 1.0;
    // bisect on the gap lambda2 - lambda1 <= 1e-4
    for (int it = 0; it < 60; ++it) {
        const double c = 0.5 * (lo + hi);
        bool has_gap;
        double gap = 0.0;
        try {
            const auto [l1, l2] = roots_for_speed(m, c);
            gap = l2 - l1;
            has_gap = true;
        } catch (const Error&) {
            has_gap = false;
        }
        if (has_gap && gap > 1e-4) hi = c;
        else lo = c;
        if (hi - lo < 1e-12) break;
    }
    CHECK(0.5 * (lo + hi) == Catch::Approx(ms.c_star).margin(1e-6));
}

TEST_CASE("k is convex along sampled grids", "[dispersion]") {
    const CrossSectionModel m = helpers::shear_model(33);
    std::vector<double> ks;
    for (int i = 0; i <= 40; ++i) ks.push_back(k_of_lambda(m, -2.0 + 0.1 * i));
    for (std::size_t i = 1; i + 1 < ks.size(); ++i)
        CHECK(ks[i - 1] - 2.0 * ks[i] + ks[i + 1] >= -1e-8);
}

TEST_CASE("condition (42) implies a positive minimal speed", "[dispersion]") {
    const CrossSectionModel m = helpers::shear_model(33);
    REQUIRE(sup_condition_holds(m));
    CHECK(minimal_speed(m).c_star > 0.0);
}

TEST_CASE("classifier: propagation for small decay rates", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model();
    const RegimeVerdict v = classify_regime(m, 0.5);
    CHECK(v.kind == RegimeVerdict::Kind::Propagation);
    CHECK(v.speed == Catch::Approx(2.0).margin(1e-9));
    CHECK_FALSE(v.blowoff.has_value());
}

TEST_CASE("classifier: extinction wins over blow-off, certificate attached", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model(1.0, 1.5);
    const RegimeVerdict v = classify_regime(m, 0.5);
    CHECK(v.kind == RegimeVerdict::Kind::Extinction);
    CHECK(v.extinction_rate == Catch::Approx(0.5).margin(1e-10));
    REQUIRE(v.blowoff.has_value());
    // margin mu(eta) - eta^2 = 0.5 - eta^2 is maximal as eta -> 0; at eta = 0.5
    // it equals 0.25; the scan maximizes so margin >= 0.25
    CHECK(v.blowoff->margin >= 0.25 - 1e-9);
    CHECK(v.blowoff->eta <= 0.5 + 1e-12);
}

TEST_CASE("classifier: open conjecture beyond lambda*", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model();
    const RegimeVerdict v = classify_regime(m, 1.2);
    CHECK(v.kind == RegimeVerdict::Kind::OpenConjectured);
    CHECK(v.speed == Catch::Approx(2.0 * std::sqrt(0.75)).margin(1e-7));
}

TEST_CASE("classifier refuses the open boundary case mu(0) = 0", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model(1.0, 1.0); // mu(0) = 0
    CHECK_THROWS_MATCHES(classify_regime(m, 0.5), Error, Catch::Matchers::Predicate<Error>(
        [](const Error& e) { return e.code() == errc::degenerate_mu_zero; }));
}

TEST_CASE("classifier is total away from the degenerate boundary", "[dispersion]") {
    for (double q : {0.1, 0.4, 0.8, 1.2, 2.0}) {
        const CrossSectionModel m = helpers::constant_model(1.0, q);
        for (double lam : {0.05, 0.3, 0.9, 1.7})
            CHECK_NOTHROW(classify_regime(m, lam));
    }
}

TEST_CASE("speed analysis record is consistent", "[dispersion]") {
    const CrossSectionModel m = helpers::constant_model();
    const SpeedAnalysis a = analyze_speed(m, 0.1, 2.0, 39);
    CHECK(a.mu0 == Catch::Approx(-0.75).margin(1e-12));
    REQUIRE(a.c_star.has_value());
    REQUIRE(a.lambda_star.has_value());
    CHECK(a.sup_condition_holds);
    CHECK(a.k_samples.size() == 39);
    // k(lambda*) = c* lambda* and k'(lambda*) = c* (first-order optimality)
    CHECK(k_of_lambda(m, *a.lambda_star) ==
          Catch::Approx(*a.c_star * *a.lambda_star).margin(1e-9));
    const double eps = 1e-6;
    const double kprime =
        (k_of_lambda(m, *a.lambda_star + eps) - k_of_lambda(m, *a.lambda_star - eps)) / (2 * eps);
    CHECK(kprime == Catch::Approx(*a.c_star).margin(1e-6));
}
