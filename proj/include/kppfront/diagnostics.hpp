// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kppfront/field.hpp"
#include "kppfront/numerics.hpp"

namespace kppfront {

/// Largest x where the y-averaged field crosses the threshold, with linear
/// interpolation between nodes. Temperature crosses downward (hot behind,
/// cold ahead), the reactant crosses upward (burnt behind, fresh ahead).
inline double front_position(const FieldState& s, const CylinderGrid& g,
                             const CrossSectionModel& m, Field f, double threshold) {
    const int n = g.n_x;
    std::vector<double> prof(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) prof[std::size_t(i)] = y_average(s, m, f, i);
    for (int i = n - 2; i >= 0; --i) {
        const double a = prof[std::size_t(i)], b = prof[std::size_t(i + 1)];
        const bool crosses = (f == Field::Temperature) ? (a >= threshold && b < threshold)
                                                       : (a <= threshold && b > threshold);
        if (crosses) {
            const double frac = (b == a) ? 0.0 : (threshold - a) / (b - a);
            return g.x(i) + frac * g.dx();
        }
    }
    raise(errc::no_crossing, "front_position: y-averaged field never crosses threshold");
}

/// Time series of front positions plus the regression window policy.
struct FrontTrack {
    std::vector<std::pair<double, double>> samples; // (t, x_front)
    double fit_window_frac = 0.5;                   // trailing fraction used for the speed fit
};

struct SpeedFit {
    double speed = 0.0;
    double r2 = 0.0;
    std::size_t n_used = 0;
    bool reliable = false; // >= 10 samples in window and r2 >= 0.99
};

inline SpeedFit speed_estimate(const FrontTrack& track) {
    const std::size_t n = track.samples.size();
    const std::size_t first = std::size_t(double(n) * (1.0 - track.fit_window_frac));
    if (n - first < 10)
        raise(errc::too_few_samples, "speed_estimate needs >= 10 samples in the fit window");
    std::vector<double> t, x;
    for (std::size_t i = first; i < n; ++i) {
        t.push_back(track.samples[i].first);
        x.push_back(track.samples[i].second);
    }
    const LinearFit f = fit_line(t, x);
    SpeedFit out;
    out.speed = f.slope;
    out.r2 = f.r2;
    out.n_used = f.n;
    out.reliable = f.n >= 10 && f.r2 >= 0.99;
    return out;
}

namespace detail {

inline double log_slope_over_window(const FieldState& s, const CylinderGrid& g,
                                    const CrossSectionModel& m, double x_lo, double x_hi) {
    if (x_lo < g.x_min || x_hi > g.x_max)
        raise(errc::region_outside_grid, "decay-rate window outside the grid");
    std::vector<double> xs, ls;
    for (int i = 0; i < g.n_x; ++i) {
        const double x = g.x(i);
        if (x < x_lo || x > x_hi) continue;
        const double v = y_average(s, m, Field::Temperature, i);
        if (v < 1e-280)
            raise(errc::underflow_region, "temperature below 1e-280 in decay window");
        xs.push_back(x);
        ls.push_back(std::log(v));
    }
    if (xs.size() < 4)
        raise(errc::region_outside_grid, "decay-rate window holds fewer than 4 nodes");
    return fit_line(xs, ls).slope;
}

} // namespace detail

/// Estimate of the right decay rate: slope of -log of the y-averaged
/// temperature over [front+5, front+15]. Estimates the paper's right decay
/// exponent of the front tail.
inline double right_decay_rate(const FieldState& s, const CylinderGrid& g,
                               const CrossSectionModel& m) {
    double sup = 0.0;
    for (int i = 0; i < g.n_x; ++i)
        sup = std::max(sup, y_average(s, m, Field::Temperature, i));
    const double front = front_position(s, g, m, Field::Temperature, 0.5 * sup);
    return -detail::log_slope_over_window(s, g, m, front + 5.0, front + 15.0);
}

/// Left decay rate of a traveling-front state: slope of +log T over an
/// explicit window behind the front (T grows like e^{beta x} rightward there).
inline double left_decay_rate(const FieldState& s, const CylinderGrid& g,
                              const CrossSectionModel& m, double x_lo, double x_hi) {
    return detail::log_slope_over_window(s, g, m, x_lo, x_hi);
}

/// Average of Y over the left 10% strip of the domain. The strip must be
/// front-free.
inline double left_plateau_Y(const FieldState& s, const CylinderGrid& g,
                             const CrossSectionModel& m) {
    const double strip_hi = g.x_min + 0.1 * (g.x_max - g.x_min);
    double acc = 0.0, cnt = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < g.n_x; ++i) {
        if (g.x(i) > strip_hi) break;
        const double v = y_average(s, m, Field::Reactant, i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        acc += v;
        cnt += 1.0;
    }
    if (hi - lo > 0.05)
        raise(errc::front_in_strip, "left 10% strip is not front-free (Y varies by " +
                                        std::to_string(hi - lo) + ")");
    return acc / cnt;
}

/// Decay rate of a sup-T time series: slope of -log(sup T) over the trailing
/// half of the series.
inline double extinction_rate(std::span<const std::pair<double, double>> sup_series) {
    const std::size_t n = sup_series.size();
    if (n < 4) raise(errc::too_few_samples, "extinction_rate needs >= 4 samples");
    std::vector<double> t, l;
    for (std::size_t i = n / 2; i < n; ++i) {
        t.push_back(sup_series[i].first);
        l.push_back(std::log(sup_series[i].second));
    }
    return -fit_line(t, l).slope;
}

} // namespace kppfront
