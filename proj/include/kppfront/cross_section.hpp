// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kppfront/errors.hpp"
#include "kppfront/numerics.hpp"

namespace kppfront {

enum class ReactionKind { Linear, LogKpp };
enum class LossKind { Linear, Saturating };

/// Reaction family f(y,T). `amplitude[j]` is the linearization slope
/// df/dT(y_j, 0); the KPP hypothesis forces 0 < f <= amplitude*T.
/// `quad_bound` is the constant M of the lower quadratic bound
/// f(y,s) >= amplitude(y)*s - M*s^(1+holder_alpha) on [0, s0].
struct ReactionModel {
    ReactionKind kind = ReactionKind::Linear;
    std::vector<double> amplitude;
    double holder_alpha = 1.0;
    double s0 = 1.0;
    double quad_bound = 0.0;
};

/// Heat-loss family h(y,T). `rate[j]` is dh/dT(y_j, 0) and
/// rate*T <= h <= global_bound*T must hold for all T >= 0.
struct LossModel {
    LossKind kind = LossKind::Linear;
    std::vector<double> rate;
    double global_bound = 0.0;
    double quad_bound = 0.0;
    double holder_alpha = 1.0;
    double s0 = 1.0;
};

/// Cross-section of the cylinder: the interval [0, L] with n_y grid nodes,
/// a zero-mean shear flow u(y), the nonlinear models and the Lewis number.
/// Immutable after build_model(); safe to share across threads.
struct CrossSectionModel {
    double length = 1.0;
    int n_y = 0;
    std::vector<double> flow;
    double lewis = 1.0;
    ReactionModel reaction;
    LossModel loss;

    double dy() const { return length / double(n_y - 1); }
    double y(int j) const { return dy() * double(j); }

    /// Trapezoid quadrature weight (half weight at the two boundary nodes).
    double weight(int j) const {
        const double h = dy();
        return (j == 0 || j == n_y - 1) ? 0.5 * h : h;
    }

    double quadrature(std::span<const double> v) const {
        double s = 0.0;
        for (int j = 0; j < n_y; ++j) s += weight(j) * v[j];
        return s;
    }

    double max_flow_magnitude() const {
        double m = 0.0;
        for (double u : flow) m = std::max(m, std::abs(u));
        return m;
    }
};

inline double eval_reaction(const CrossSectionModel& model, int j, double T) {
    if (T < 0.0) raise(errc::negative_temperature, "eval_reaction: T < 0");
    const double a = model.reaction.amplitude[std::size_t(j)];
    switch (model.reaction.kind) {
    case ReactionKind::Linear: return a * T;
    case ReactionKind::LogKpp: return a * std::log1p(T);
    }
    return 0.0;
}

inline double eval_loss(const CrossSectionModel& model, int j, double T) {
    if (T < 0.0) raise(errc::negative_temperature, "eval_loss: T < 0");
    const double q = model.loss.rate[std::size_t(j)];
    switch (model.loss.kind) {
    case LossKind::Linear: return q * T;
    case LossKind::Saturating: return q * T * (2.0 - 1.0 / (1.0 + T));
    }
    return 0.0;
}

namespace detail {

// Scalar shapes with unit slope at 0; amplitude/rate scale them per node.
inline double reaction_shape(ReactionKind kind, double s) {
    return kind == ReactionKind::Linear ? s : std::log1p(s);
}
inline double loss_shape(LossKind kind, double s) {
    return kind == LossKind::Linear ? s : s * (2.0 - 1.0 / (1.0 + s));
}

// One-dimensional maximization oracle for the quadratic-bound constant M of
// (34): coarse scan over (0, s0] followed by a golden-section polish.
inline double quad_bound_oracle(const std::function<double(double)>& deficit, double s0) {
    const int n = 2001;
    double best_s = s0, best = deficit(s0);
    for (int i = 1; i < n; ++i) {
        const double s = s0 * double(i) / double(n - 1);
        const double v = deficit(s);
        if (v > best) { best = v; best_s = s; }
    }
    const double lo = std::max(best_s - s0 / double(n - 1), s0 * 1e-12);
    const double hi = std::min(best_s + s0 / double(n - 1), s0);
    const double s_ref = golden_minimize([&](double s) { return -deficit(s); }, lo, hi);
    return std::max({best, deficit(s_ref), 0.0});
}

} // namespace detail

/// Builds and validates the cross-section model. The flow is projected to
/// zero quadrature mean; every standing hypothesis on f and h is checked and
/// a failure is an error, never a warning.
inline CrossSectionModel build_model(double L, int n_y, std::vector<double> flow,
                                     ReactionModel reaction, LossModel loss, double lewis) {
    if (!(L > 0.0) || !(lewis > 0.0) || n_y < 3)
        raise(errc::bad_grid, "build_model: need L > 0, Le > 0, n_y >= 3");
    if (int(flow.size()) != n_y || int(reaction.amplitude.size()) != n_y ||
        int(loss.rate.size()) != n_y)
        raise(errc::bad_grid, "build_model: coefficient arrays must have n_y entries");
    if (!(reaction.s0 > 0.0) || !(reaction.holder_alpha > 0.0) || reaction.holder_alpha > 1.0)
        raise(errc::hypothesis_violation, "build_model: need s0 > 0 and alpha in (0,1]");

    CrossSectionModel m;
    m.length = L;
    m.n_y = n_y;
    m.lewis = lewis;
    m.flow = std::move(flow);
    m.reaction = std::move(reaction);
    m.loss = std::move(loss);
    m.loss.holder_alpha = m.reaction.holder_alpha;
    m.loss.s0 = m.reaction.s0;

    // Zero-mean projection (2): subtract the trapezoid-quadrature mean.
    const double mean = m.quadrature(m.flow) / m.length;
    for (double& u : m.flow) u -= mean;

    double max_a = 0.0, max_q = 0.0;
    for (int j = 0; j < n_y; ++j) {
        const double a = m.reaction.amplitude[std::size_t(j)];
        const double q = m.loss.rate[std::size_t(j)];
        if (!(a > 0.0))
            raise(errc::hypothesis_violation,
                  "reaction amplitude must be positive at every node (f(y,+inf)=+inf "
                  "uniformly in y); offending node j=" + std::to_string(j));
        if (q < 0.0)
            raise(errc::hypothesis_violation,
                  "loss rate must be nonnegative; offending node j=" + std::to_string(j));
        max_a = std::max(max_a, a);
        max_q = std::max(max_q, q);
    }

    // (5): the loss must be nontrivial in the cross-section.
    if (!(m.quadrature(m.loss.rate) > 0.0))
        raise(errc::hypothesis_violation,
              "loss hypothesis (5) violated: quadrature of dh/dT(.,0) over omega is not positive");

    // Global bound K with h(y,T) <= K*T, from the family structure.
    m.loss.global_bound = (m.loss.kind == LossKind::Linear) ? max_q : 2.0 * max_q;

    // Sampled hypothesis checks on T in (0, 10*s0].
    const double s0 = m.reaction.s0;
    std::vector<double> samples;
    for (int i = 0; i < 60; ++i)
        samples.push_back(10.0 * s0 * std::pow(10.0, -6.0 * (1.0 - double(i) / 59.0)));
    for (int j = 0; j < n_y; ++j) {
        const double a = m.reaction.amplitude[std::size_t(j)];
        const double q = m.loss.rate[std::size_t(j)];
        double f_prev = 0.0;
        for (double T : samples) {
            const double f = eval_reaction(m, j, T);
            const double h = eval_loss(m, j, T);
            const double tol = 1e-12 * (1.0 + a * T);
            if (!(f > 0.0) || f > a * T + tol)
                raise(errc::hypothesis_violation,
                      "KPP hypothesis 0 < f <= df/dT(y,0)*T violated at y=" +
                          std::to_string(m.y(j)) + ", T=" + std::to_string(T));
            if (f < f_prev - tol)
                raise(errc::hypothesis_violation,
                      "reaction monotonicity df/dT >= 0 violated at y=" +
                          std::to_string(m.y(j)) + ", T=" + std::to_string(T));
            f_prev = f;
            const double htol = 1e-12 * (1.0 + m.loss.global_bound * T);
            if (h < q * T - htol || h > m.loss.global_bound * T + htol)
                raise(errc::hypothesis_violation,
                      "loss hypothesis (5) q*T <= h <= K*T violated at y=" +
                          std::to_string(m.y(j)) + ", T=" + std::to_string(T));
        }
    }

    // Quadratic-bound constant M of (34), shared between f and h.
    const double alpha = m.reaction.holder_alpha;
    double M = 0.0;
    for (int j = 0; j < n_y; ++j) {
        const double a = m.reaction.amplitude[std::size_t(j)];
        const double q = m.loss.rate[std::size_t(j)];
        if (m.reaction.kind != ReactionKind::Linear) {
            auto deficit = [&](double s) {
                return (a * s - a * detail::reaction_shape(m.reaction.kind, s)) /
                       std::pow(s, 1.0 + alpha);
            };
            M = std::max(M, detail::quad_bound_oracle(deficit, s0));
        }
        if (m.loss.kind != LossKind::Linear) {
            auto excess = [&](double s) {
                return (q * detail::loss_shape(m.loss.kind, s) - q * s) /
                       std::pow(s, 1.0 + alpha);
            };
            M = std::max(M, detail::quad_bound_oracle(excess, s0));
        }
    }
    m.reaction.quad_bound = M * (1.0 + 1e-9);
    m.loss.quad_bound = m.reaction.quad_bound;

    // Projection invariant: residual mean below 1e-14 * max|u|.
    const double resid = std::abs(m.quadrature(m.flow) / m.length);
    if (resid > 1e-14 * std::max(1.0, m.max_flow_magnitude()))
        raise(errc::hypothesis_violation, "zero-mean projection failed");

    return m;
}

} // namespace kppfront
