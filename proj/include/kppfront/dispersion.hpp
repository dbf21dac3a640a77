// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kppfront/eigen.hpp"
#include "kppfront/numerics.hpp"

namespace kppfront {

/// Dispersion relation k(lambda) = lambda^2 - mu_{h,f}(lambda), linking the
/// exponential decay rate of the front tail to the admissible speed
/// c = k(lambda)/lambda.
inline double k_of_lambda(const CrossSectionModel& m, double lambda) {
    return lambda * lambda - mu(m, lambda);
}

struct MinimalSpeed {
    double c_star = 0.0;
    double lambda_star = 0.0;
};

/// Minimal front speed c* = min_{lambda>0} k(lambda)/lambda. Golden-section
/// on a doubling bracket, then a bisection polish on the first-order
/// optimality condition k'(lambda)*lambda = k(lambda).
inline MinimalSpeed minimal_speed(const CrossSectionModel& m) {
    const double mu0 = mu(m, 0.0);
    if (!(mu0 < 0.0))
        raise(errc::precondition_mu0,
              "minimal_speed requires mu_{h,f}(0) < 0, got " + std::to_string(mu0));

    auto g = [&](double lam) { return k_of_lambda(m, lam) / lam; };
    // k(0) = -mu0 > 0 makes g blow up at 0+; k ~ lambda^2 makes it blow up at
    // infinity, so a minimizer exists. Expand until the middle sample wins.
    double lo = 1e-6, hi = 1.0;
    double glo = g(lo), ghi = g(hi);
    int guard = 0;
    while (ghi < g(0.5 * (lo + hi)) && hi < 1e6) {
        hi *= 2.0;
        ghi = g(hi);
        if (++guard > 60) break;
    }
    (void)glo;
    double lam = golden_minimize(g, lo, hi, 1e-10);

    // Optimality polish: G(l) = k'(l)*l - k(l) with k' = 2l - mu'(l).
    auto G = [&](double l) {
        return (2.0 * l - mu_derivative(m, l)) * l - k_of_lambda(m, l);
    };
    double bl = std::max(lo, 0.5 * lam), bh = std::min(hi, 2.0 * lam);
    if (G(bl) < 0.0 && G(bh) > 0.0)
        lam = bisect_root(G, bl, bh, 1e-14);
    const double gprime = G(lam) / (lam * lam);
    if (std::abs(gprime) > 1e-8)
        raise(errc::bracket_not_found,
              "minimal_speed: optimality residual " + std::to_string(gprime) +
                  " above 1e-8 on search range [1e-6, " + std::to_string(hi) + "]");
    return {g(lam), lam};
}

/// Both positive roots of k(lambda) = c*lambda for c > c*; they bracket
/// lambda* from below and above. |c - c*| <= 1e-9 returns the degenerate
/// pair (lambda*, lambda*).
inline std::pair<double, double> roots_for_speed(const CrossSectionModel& m, double c) {
    const MinimalSpeed ms = minimal_speed(m); // also enforces mu(0) < 0
    if (c < ms.c_star - 1e-9)
        raise(errc::speed_below_minimal,
              "roots_for_speed: c=" + std::to_string(c) + " below c*=" +
                  std::to_string(ms.c_star));
    if (std::abs(c - ms.c_star) <= 1e-9)
        return {ms.lambda_star, ms.lambda_star};

    auto F = [&](double lam) { return k_of_lambda(m, lam) - c * lam; };
    // F(0+) = k(0) > 0 and F(lambda*) = lambda*(c* - c) < 0.
    const double lam1 = bisect_root(F, 1e-9, ms.lambda_star, 1e-14);
    double hi = ms.lambda_star;
    const double hi_max = 50.0 * std::max(1.0, ms.lambda_star);
    while (F(hi) < 0.0) {
        hi *= 2.0;
        if (hi > hi_max)
            raise(errc::upper_bracket_not_found,
                  "roots_for_speed: no sign change of k - c*lambda on [" +
                      std::to_string(ms.lambda_star) + ", " + std::to_string(hi_max) + "]");
    }
    const double lam2 = bisect_root(F, ms.lambda_star, hi, 1e-14);
    return {lam1, lam2};
}

/// Condition (42): sup over lambda of mu(lambda) - lambda^2 is negative.
/// The objective is concave, so a doubling bracket plus golden section finds
/// the supremum.
inline double sup_mu_minus_lambda_sq(const CrossSectionModel& m) {
    auto s = [&](double lam) { return mu(m, lam) - lam * lam; };
    double lo = -1.0, hi = 1.0;
    // Expand until the endpoint values drop below the center value.
    const double center0 = s(0.0);
    int guard = 0;
    while (s(lo) >= center0 && guard++ < 60) lo *= 2.0;
    guard = 0;
    while (s(hi) >= center0 && guard++ < 60) hi *= 2.0;
    const double lam = golden_minimize([&](double l) { return -s(l); }, lo, hi, 1e-10);
    return s(lam);
}

inline bool sup_condition_holds(const CrossSectionModel& m) {
    return sup_mu_minus_lambda_sq(m) < 0.0;
}

struct SpeedAnalysis {
    double mu0 = 0.0;
    std::optional<double> c_star;
    std::optional<double> lambda_star;
    bool sup_condition_holds = false;
    std::vector<std::pair<double, double>> k_samples;
};

inline SpeedAnalysis analyze_speed(const CrossSectionModel& m, double lambda_min,
                                   double lambda_max, int samples) {
    SpeedAnalysis a;
    a.mu0 = mu(m, 0.0);
    a.sup_condition_holds = sup_condition_holds(m);
    if (a.mu0 < 0.0) {
        const MinimalSpeed ms = minimal_speed(m);
        a.c_star = ms.c_star;
        a.lambda_star = ms.lambda_star;
    }
    a.k_samples.reserve(std::size_t(samples));
    for (int i = 0; i < samples; ++i) {
        const double lam =
            lambda_min + (lambda_max - lambda_min) * double(i) / double(samples - 1);
        a.k_samples.emplace_back(lam, k_of_lambda(m, lam));
    }
    return a;
}

struct BlowOffCertificate {
    double eta = 0.0;
    double margin = 0.0;    // mu(eta) - eta^2 > 0
    double gamma_max = 0.0; // certified drift (mu(eta) - eta^2)/eta; not claimed sharp
};

struct RegimeVerdict {
    enum class Kind { Extinction, BlowOff, Propagation, OpenConjectured };
    Kind kind = Kind::Propagation;
    double lambda_decay = 0.0;           // echoed input
    double mu0 = 0.0;                    // echoed mu_{h,f}(0)
    double extinction_rate = 0.0;        // gamma = mu(0), Extinction only
    double speed = 0.0;                  // Propagation: k/lambda; OpenConjectured: c*
    std::optional<BlowOffCertificate> blowoff; // attached even under Extinction
};

inline const char* regime_name(RegimeVerdict::Kind k) {
    switch (k) {
    case RegimeVerdict::Kind::Extinction: return "Extinction";
    case RegimeVerdict::Kind::BlowOff: return "BlowOff";
    case RegimeVerdict::Kind::Propagation: return "Propagation";
    case RegimeVerdict::Kind::OpenConjectured: return "OpenConjectured";
    }
    return "?";
}

namespace detail {

// Blow-off scan over eta in (0, lambda]: 200 log-spaced samples plus local
// refinement. When the endpoint eta = lambda itself qualifies, the
// certificate is issued there (the strongest spatial decay the data permits);
// otherwise at the best-margin sample.
inline std::optional<BlowOffCertificate> blowoff_scan(const CrossSectionModel& m,
                                                      double lambda_decay) {
    auto margin = [&](double eta) { return mu(m, eta) - eta * eta; };
    const double at_endpoint = margin(lambda_decay);
    if (at_endpoint > 0.0)
        return BlowOffCertificate{lambda_decay, at_endpoint, at_endpoint / lambda_decay};
    const int n = 200;
    double best_eta = 0.0, best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double eta = lambda_decay * std::pow(10.0, -4.0 * (1.0 - double(i) / (n - 1)));
        const double v = margin(eta);
        if (v > best) { best = v; best_eta = eta; }
    }
    if (best_eta > 0.0) {
        const double lo = best_eta * std::pow(10.0, -4.0 / (n - 1));
        const double hi = std::min(lambda_decay, best_eta * std::pow(10.0, 4.0 / (n - 1)));
        const double eta = golden_minimize([&](double e) { return -margin(e); }, lo, hi, 1e-10);
        const double v = margin(eta);
        if (v > best) { best = v; best_eta = eta; }
    }
    if (best > 0.0)
        return BlowOffCertificate{best_eta, best, best / best_eta};
    return std::nullopt;
}

} // namespace detail

/// Theorem-3 classification for initial data with right decay rate
/// lambda_decay. Extinction takes precedence over blow-off (the sup-norm
/// decay bound is the stronger statement); the blow-off certificate is
/// attached as auxiliary data whenever it exists.
inline RegimeVerdict classify_regime(const CrossSectionModel& m, double lambda_decay) {
    if (!(lambda_decay > 0.0))
        raise(errc::degenerate_boundary, "classify_regime: lambda_decay must be positive");
    RegimeVerdict v;
    v.lambda_decay = lambda_decay;
    v.mu0 = mu(m, 0.0);
    if (std::abs(v.mu0) <= 1e-10)
        raise(errc::degenerate_mu_zero,
              "classify_regime: |mu(0)| <= 1e-10; this boundary case is open");

    v.blowoff = detail::blowoff_scan(m, lambda_decay);

    if (v.mu0 > 0.0) {
        v.kind = RegimeVerdict::Kind::Extinction;
        v.extinction_rate = v.mu0;
        return v;
    }
    if (v.blowoff) {
        v.kind = RegimeVerdict::Kind::BlowOff;
        return v;
    }
    const MinimalSpeed ms = minimal_speed(m);
    if (lambda_decay < ms.lambda_star) {
        const double k = k_of_lambda(m, lambda_decay);
        if (mu(m, lambda_decay) - lambda_decay * lambda_decay < 0.0) {
            v.kind = RegimeVerdict::Kind::Propagation;
            v.speed = k / lambda_decay;
            return v;
        }
        raise(errc::degenerate_boundary,
              "classify_regime: lambda_decay sits on the root boundary of k(lambda)=0");
    }
    v.kind = RegimeVerdict::Kind::OpenConjectured;
    v.speed = ms.c_star;
    return v;
}

} // namespace kppfront
