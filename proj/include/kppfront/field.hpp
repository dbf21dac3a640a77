// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "kppfront/cross_section.hpp"
#include "kppfront/errors.hpp"

namespace kppfront {

/// Truncation of the infinite cylinder R x omega to [x_min, x_max], sharing
/// the cross-section grid of the model.
struct CylinderGrid {
    double x_min = -20.0;
    double x_max = 80.0;
    int n_x = 2001;

    double dx() const { return (x_max - x_min) / double(n_x - 1); }
    double x(int i) const { return x_min + dx() * double(i); }
};

inline CylinderGrid make_grid(double x_min, double x_max, int n_x) {
    if (!(x_max - x_min >= 40.0) || n_x < 3)
        raise(errc::bad_grid, "cylinder grid needs x_max - x_min >= 40 and n_x >= 3");
    return {x_min, x_max, n_x};
}

/// Temperature and reactant fields at one time, row-major over x then y.
struct FieldState {
    double t = 0.0;
    int n_x = 0;
    int n_y = 0;
    std::vector<double> T;
    std::vector<double> Y;

    double& temp(int i, int j) { return T[std::size_t(i) * std::size_t(n_y) + std::size_t(j)]; }
    double temp(int i, int j) const { return T[std::size_t(i) * std::size_t(n_y) + std::size_t(j)]; }
    double& reac(int i, int j) { return Y[std::size_t(i) * std::size_t(n_y) + std::size_t(j)]; }
    double reac(int i, int j) const { return Y[std::size_t(i) * std::size_t(n_y) + std::size_t(j)]; }

    double sup_T() const {
        double s = 0.0;
        for (double v : T) s = std::max(s, v);
        return s;
    }
};

enum class Field { Temperature, Reactant };

/// Quadrature average of one x-slice of the chosen field over omega.
inline double y_average(const FieldState& s, const CrossSectionModel& m, Field f, int i) {
    double acc = 0.0;
    for (int j = 0; j < m.n_y; ++j)
        acc += m.weight(j) * (f == Field::Temperature ? s.temp(i, j) : s.reac(i, j));
    return acc / m.length;
}

} // namespace kppfront
