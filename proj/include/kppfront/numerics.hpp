// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kppfront/errors.hpp"

namespace kppfront {

/// Thomas algorithm for a diagonally dominant tridiagonal system.
/// lo[0] and up[n-1] are ignored. Overwrites nothing; returns x.
inline std::vector<double> solve_tridiagonal(std::span<const double> lo,
                                             std::span<const double> di,
                                             std::span<const double> up,
                                             std::span<const double> rhs) {
    const std::size_t n = di.size();
    std::vector<double> c(n), d(n), x(n);
    double m = di[0];
    if (m == 0.0) raise(errc::linear_solve_failed, "zero pivot in tridiagonal solve");
    c[0] = up[0] / m;
    d[0] = rhs[0] / m;
    for (std::size_t i = 1; i < n; ++i) {
        m = di[i] - lo[i] * c[i - 1];
        if (m == 0.0) raise(errc::linear_solve_failed, "zero pivot in tridiagonal solve");
        c[i] = up[i] / m;
        d[i] = (rhs[i] - lo[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    std::size_t n = 0;
};

/// Ordinary least squares y ~ slope*x + intercept. For a perfectly flat or
/// perfectly fitted series r2 is reported as 1.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    LinearFit f;
    f.n = x.size();
    if (f.n < 2) return f;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < f.n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / double(f.n), my = sy / double(f.n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < f.n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    f.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < f.n; ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
    }
    f.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return f;
}

/// Golden-section minimization of a unimodal function on [a, b].
inline double golden_minimize(const std::function<double(double)>& f, double a, double b,
                              double xtol = 1e-12, int max_iter = 400) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Bisection for f(x)=0 on a sign-changing bracket [a, b].
inline double bisect_root(const std::function<double(double)>& f, double a, double b,
                          double xtol = 1e-13, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        raise(errc::bracket_not_found, "bisection bracket does not change sign");
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        const double m = 0.5 * (a + b), fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) { a = m; fa = fm; }
        else { b = m; }
    }
    return 0.5 * (a + b);
}

/// Maximizer of f over a uniform scan of [a, b] (n samples), no refinement.
inline double scan_argmax(const std::function<double(double)>& f, double a, double b, int n) {
    double best_x = a, best = f(a);
    for (int i = 1; i < n; ++i) {
        const double x = a + (b - a) * double(i) / double(n - 1);
        const double v = f(x);
        if (v > best) { best = v; best_x = x; }
    }
    return best_x;
}

} // namespace kppfront
