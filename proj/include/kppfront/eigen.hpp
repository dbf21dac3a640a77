// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kppfront/cross_section.hpp"
#include "kppfront/errors.hpp"

namespace kppfront {

/// Principal eigenpair of the cross-sectional operator
///   -d2/dy2 - lambda*u(y) + V(y)
/// with homogeneous Neumann conditions, discretized with second-order ghost
/// points. `value` is the smallest eigenvalue, `phi` the positive
/// eigenfunction with unit L2 quadrature norm.
struct PrincipalEigenpair {
    double lambda = 0.0;
    double value = 0.0;
    std::vector<double> phi;
};

struct EigenOptions {
    double bisect_tol = 1e-12;   // absolute tolerance of the Sturm bisection
    double shift_offset = 1e-10; // inverse-iteration shift = eigenvalue - offset
    double residual_tol = 1e-10; // ||A phi - value phi||_inf <= tol*(1+|value|)
    int max_refine = 6;
};

namespace detail {

// Symmetric-similarity tridiagonal form of the Neumann operator. With the
// half-weight trapezoid weights W the nodal matrix A is W-self-adjoint;
// B = W^(1/2) A W^(-1/2) is plainly symmetric: the ghost-point boundary rows
// only change the two extreme off-diagonal entries to -sqrt(2)/dy^2.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off; // size n-1
};

inline SymTridiag assemble_cross_section_operator(const CrossSectionModel& m, double lambda,
                                                  std::span<const double> potential) {
    const int n = m.n_y;
    const double idy2 = 1.0 / (m.dy() * m.dy());
    SymTridiag t;
    t.diag.resize(std::size_t(n));
    t.off.assign(std::size_t(n - 1), -idy2);
    for (int j = 0; j < n; ++j)
        t.diag[std::size_t(j)] =
            2.0 * idy2 - lambda * m.flow[std::size_t(j)] + potential[std::size_t(j)];
    t.off.front() = -std::sqrt(2.0) * idy2;
    t.off.back() = -std::sqrt(2.0) * idy2;
    return t;
}

// Number of eigenvalues of the symmetric tridiagonal matrix below x
// (Sturm sequence via the LDL^T pivots).
inline int sturm_count(const SymTridiag& t, double x) {
    const std::size_t n = t.diag.size();
    int count = 0;
    double q = t.diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        if (q == 0.0) q = 1e-300;
        q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

inline double smallest_eigenvalue_bisect(const SymTridiag& t, double tol) {
    const std::size_t n = t.diag.size();
    double lo = t.diag[0], hi = t.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                         (i + 1 < n ? std::abs(t.off[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    for (int it = 0; it < 220 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(t, mid) >= 1) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Unpivoted LDL^T solve of (B - sigma I) x = b, in place. Valid because
// sigma sits strictly below the smallest eigenvalue, making the shifted
// matrix SPD. Returns false when a pivot is not positive (shift too high).
inline bool solve_shifted(const SymTridiag& t, double sigma, std::vector<double>& x) {
    const std::size_t n = t.diag.size();
    std::vector<double> d(n), l(n, 0.0);
    d[0] = t.diag[0] - sigma;
    if (!(d[0] > 0.0)) return false;
    for (std::size_t i = 1; i < n; ++i) {
        l[i] = t.off[i - 1] / d[i - 1];
        d[i] = t.diag[i] - sigma - l[i] * t.off[i - 1];
        if (!(d[i] > 0.0)) return false;
    }
    for (std::size_t i = 1; i < n; ++i) x[i] -= l[i] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= l[i + 1] * x[i + 1];
    return true;
}

inline void normalize_l2(std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    s = std::sqrt(s);
    for (double& a : v) a /= s;
}

} // namespace detail

/// Computes the principal eigenpair of -d2/dy2 - lambda*u + V on the model's
/// grid: Sturm-sequence bisection for the smallest eigenvalue, inverse
/// iteration for the eigenvector, Rayleigh quotient as the returned value.
inline PrincipalEigenpair principal_eigenpair(const CrossSectionModel& m, double lambda,
                                              std::span<const double> potential,
                                              const EigenOptions& opt = {}) {
    const int n = m.n_y;
    if (int(potential.size()) != n)
        raise(errc::bad_grid, "principal_eigenpair: potential length must match grid");

    const auto t = detail::assemble_cross_section_operator(m, lambda, potential);
    const double lam_bis = detail::smallest_eigenvalue_bisect(t, opt.bisect_tol);

    // Inverse iteration in the similarity basis, started from the constant
    // vector (never orthogonal to the positive principal eigenvector).
    std::vector<double> psi(std::size_t(n), 1.0);
    detail::normalize_l2(psi);
    double shift = lam_bis - opt.shift_offset;
    bool solved = false;
    for (int attempt = 0; attempt < 8 && !solved; ++attempt) {
        std::vector<double> trial = psi;
        if (detail::solve_shifted(t, shift, trial)) {
            psi = trial;
            detail::normalize_l2(psi);
            solved = true;
        } else {
            shift -= opt.shift_offset * std::pow(10.0, attempt + 1);
        }
    }
    if (!solved)
        raise(errc::eigen_no_convergence, "inverse iteration: no valid SPD shift found");

    // Nodal eigenvector, quadrature-normalized, with the Rayleigh quotient of
    // the discrete form as the reported eigenvalue. The ghost-point scheme
    // makes the discrete identity exact: <A phi, phi>_w equals the midpoint
    // Dirichlet form plus the weighted potential term.
    auto nodal_pair = [&](const std::vector<double>& sim) {
        PrincipalEigenpair p;
        p.lambda = lambda;
        p.phi.resize(std::size_t(n));
        for (int j = 0; j < n; ++j)
            p.phi[std::size_t(j)] = sim[std::size_t(j)] / std::sqrt(m.weight(j));
        double rq = 0.0;
        const double dy = m.dy();
        for (int j = 0; j + 1 < n; ++j) {
            const double g = p.phi[std::size_t(j + 1)] - p.phi[std::size_t(j)];
            rq += g * g / dy;
        }
        for (int j = 0; j < n; ++j) {
            const double v = -lambda * m.flow[std::size_t(j)] + potential[std::size_t(j)];
            rq += m.weight(j) * v * p.phi[std::size_t(j)] * p.phi[std::size_t(j)];
        }
        p.value = rq; // ||phi||_w = 1 by the l2 normalization of sim
        return p;
    };

    auto residual_ok = [&](const PrincipalEigenpair& p) {
        // Long-double accumulation: the row combinations cancel to ~1e-12 of
        // their terms, which double precision cannot certify on fine grids.
        const long double idy2 = 1.0L / ((long double)m.dy() * (long double)m.dy());
        long double worst = 0.0L;
        for (int j = 0; j < n; ++j) {
            long double row;
            const long double pj = p.phi[std::size_t(j)];
            if (j == 0)
                row = (2.0L * pj - 2.0L * p.phi[1]) * idy2;
            else if (j == n - 1)
                row = (2.0L * pj - 2.0L * p.phi[std::size_t(n - 2)]) * idy2;
            else
                row = (2.0L * pj - p.phi[std::size_t(j - 1)] - p.phi[std::size_t(j + 1)]) * idy2;
            row += ((long double)potential[std::size_t(j)] -
                    (long double)lambda * (long double)m.flow[std::size_t(j)]) * pj;
            row -= (long double)p.value * pj;
            worst = std::max(worst, std::abs(row));
        }
        return double(worst) <= opt.residual_tol * (1.0 + std::abs(p.value));
    };

    PrincipalEigenpair pair = nodal_pair(psi);
    for (int r = 0; r < opt.max_refine && !residual_ok(pair); ++r) {
        if (!detail::solve_shifted(t, pair.value - opt.shift_offset, psi))
            break;
        detail::normalize_l2(psi);
        pair = nodal_pair(psi);
    }
    if (!residual_ok(pair))
        raise(errc::eigen_no_convergence,
              "eigen residual above tolerance at lambda=" + std::to_string(lambda));

    // Positivity: fix the sign by the max-magnitude entry, then insist on a
    // strictly positive vector (discrete Perron-Frobenius).
    double amax = 0.0;
    for (double v : pair.phi) if (std::abs(v) > std::abs(amax)) amax = v;
    if (amax < 0.0)
        for (double& v : pair.phi) v = -v;
    auto all_positive = [&] {
        for (double v : pair.phi)
            if (!(v > 0.0)) return false;
        return true;
    };
    if (!all_positive()) {
        if (detail::solve_shifted(t, pair.value - opt.shift_offset, psi)) {
            detail::normalize_l2(psi);
            pair = nodal_pair(psi);
            amax = 0.0;
            for (double v : pair.phi) if (std::abs(v) > std::abs(amax)) amax = v;
            if (amax < 0.0)
                for (double& v : pair.phi) v = -v;
        }
        if (!all_positive())
            raise(errc::sign_ambiguity, "principal eigenvector not positive after refinement");
    }
    return pair;
}

/// Potential of problem (9) with a scaled reaction term:
/// V = dh/dT(y,0) - scale * df/dT(y,0). scale=1 gives mu_{h,f},
/// scale=0 gives mu_{h,0}, scale=Y_inf gives mu_{h,Y_inf f}.
inline std::vector<double> scaled_potential(const CrossSectionModel& m, double scale) {
    std::vector<double> v(std::size_t(m.n_y));
    for (int j = 0; j < m.n_y; ++j)
        v[std::size_t(j)] =
            m.loss.rate[std::size_t(j)] - scale * m.reaction.amplitude[std::size_t(j)];
    return v;
}

inline PrincipalEigenpair mu_eigenpair(const CrossSectionModel& m, double lambda,
                                       const EigenOptions& opt = {}) {
    return principal_eigenpair(m, lambda, scaled_potential(m, 1.0), opt);
}

inline double mu(const CrossSectionModel& m, double lambda, const EigenOptions& opt = {}) {
    return mu_eigenpair(m, lambda, opt).value;
}

inline double mu_scaled(const CrossSectionModel& m, double lambda, double scale,
                        const EigenOptions& opt = {}) {
    return principal_eigenpair(m, lambda, scaled_potential(m, scale), opt).value;
}

inline PrincipalEigenpair nu_eigenpair(const CrossSectionModel& m, double lambda,
                                       const EigenOptions& opt = {}) {
    const std::vector<double> zero(std::size_t(m.n_y), 0.0);
    return principal_eigenpair(m, lambda, zero, opt);
}

inline double nu(const CrossSectionModel& m, double lambda, const EigenOptions& opt = {}) {
    return nu_eigenpair(m, lambda, opt).value;
}

/// Derivative identity (Hellmann-Feynman): mu'(lambda) = -int u phi^2.
inline double mu_derivative(const CrossSectionModel& m, double lambda,
                            const EigenOptions& opt = {}) {
    const auto p = mu_eigenpair(m, lambda, opt);
    double s = 0.0;
    for (int j = 0; j < m.n_y; ++j)
        s += m.weight(j) * m.flow[std::size_t(j)] * p.phi[std::size_t(j)] * p.phi[std::size_t(j)];
    return -s;
}

} // namespace kppfront
