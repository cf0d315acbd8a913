#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hlog/grid.hpp"

namespace hlog {

/// Euclidean ball in the computational box.  Membership is |x - center| < r
/// on cell centers, with the periodic metric deliberately disabled: balls
/// must not wrap the torus, and operations that dilate a ball check the
/// dilate against the box.
struct Ball {
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double radius = 0.0;

    Ball() = default;
    Ball(std::array<double, 3> c, double r) : center(c), radius(r) {}

    Ball dilated(double factor) const { return Ball{center, radius * factor}; }

    /// True if the (closed) ball lies inside [-L, L] on every axis.
    bool fits(const Grid& grid) const {
        for (int a = 0; a < grid.dim(); ++a) {
            if (center[a] - radius < -grid.half_length()) return false;
            if (center[a] + radius > grid.half_length()) return false;
        }
        return true;
    }

    bool contains(const std::array<double, 3>& x, int n) const {
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
            const double d = x[a] - center[a];
            s += d * d;
        }
        return s < radius * radius;
    }
};

/// Flat indices of all cells with center strictly inside the ball.
std::vector<std::size_t> cells_in_ball(const Grid& grid, const Ball& ball);

/// Discrete measure of the ball: (#cells) * h^n.
double ball_measure(const Grid& grid, const Ball& ball);

/// Characteristic function of the ball as a scalar grid field.
std::vector<double> chi_ball(const Grid& grid, const Ball& ball);

} // namespace hlog
