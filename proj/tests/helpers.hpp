// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "kppfront/cross_section.hpp"

namespace helpers {

using kppfront::CrossSectionModel;
using kppfront::LossKind;
using kppfront::LossModel;
using kppfront::ReactionKind;
using kppfront::ReactionModel;

inline std::vector<double> sample(const std::function<double(double)>& f, double L, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[std::size_t(j)] = f(L * double(j) / double(n - 1));
    return v;
}

struct ModelSpec {
    double L = 1.0;
    int n_y = 33;
    double lewis = 1.0;
    std::function<double(double)> flow = [](double) { return 0.0; };
    std::function<double(double)> amplitude = [](double) { return 1.0; };
    std::function<double(double)> rate = [](double) { return 0.25; };
    ReactionKind reaction_kind = ReactionKind::Linear;
    LossKind loss_kind = LossKind::Linear;
    double holder_alpha = 1.0;
    double s0 = 1.0;
};

inline CrossSectionModel make_model(const ModelSpec& s) {
    ReactionModel r;
    r.kind = s.reaction_kind;
    r.amplitude = sample(s.amplitude, s.L, s.n_y);
    r.holder_alpha = s.holder_alpha;
    r.s0 = s.s0;
    LossModel l;
    l.kind = s.loss_kind;
    l.rate = sample(s.rate, s.L, s.n_y);
    return kppfront::build_model(s.L, s.n_y, sample(s.flow, s.L, s.n_y), std::move(r),
                                 std::move(l), s.lewis);
}

/// a = 1, q = 0.25, u = 0, Le = 1: every spectral object is in closed form.
inline CrossSectionModel constant_model(double a = 1.0, double q = 0.25, int n_y = 33,
                                        double lewis = 1.0) {
    ModelSpec s;
    s.n_y = n_y;
    s.lewis = lewis;
    s.amplitude = [a](double) { return a; };
    s.rate = [q](double) { return q; };
    return make_model(s);
}

/// u = A cos(2 pi y), a = 1, q = 0.25 (1 + cos(2 pi y)).
inline CrossSectionModel shear_model(int n_y = 33, double flow_amp = 2.0) {
    ModelSpec s;
    s.n_y = n_y;
    s.flow = [flow_amp](double y) { return flow_amp * std::cos(2.0 * M_PI * y); };
    s.rate = [](double y) { return 0.25 * (1.0 + std::cos(2.0 * M_PI * y)); };
    return make_model(s);
}

/// Shear flow with constant reaction/loss slopes (for the Remark-2 identity).
inline CrossSectionModel shear_constant_coeff_model(int n_y = 33, double flow_amp = 2.0,
                                                    double a = 1.0, double q = 0.25) {
    ModelSpec s;
    s.n_y = n_y;
    s.flow = [flow_amp](double y) { return flow_amp * std::cos(2.0 * M_PI * y); };
    s.amplitude = [a](double) { return a; };
    s.rate = [q](double) { return q; };
    return make_model(s);
}

} // namespace helpers
