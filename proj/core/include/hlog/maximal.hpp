#pragma once

#include "hlog/growth.hpp"
#include "hlog/mollifier.hpp"
#include "hlog/norms.hpp"

namespace hlog {

/// Dyadic levels 2^k with k from log2(2L/N) - 1 up to log2(L/2): below-grid
/// scales carry no samples and above-half-box scales would wrap.
std::vector<double> maximal_levels(const Grid& grid);

/// Dyadic levels clipped to t <= t_max.
std::vector<double> maximal_levels(const Grid& grid, double t_max);

/// Values F(x, t) on grid x dyadic levels; one form slice per level.
struct SpaceTimeField {
    Grid grid;
    int degree = 0;
    std::vector<double> levels;
    std::vector<DiscreteForm> slices;

    SpaceTimeField(const Grid& g, int deg, std::vector<double> lv)
        : grid(g), degree(deg), levels(std::move(lv)) {
        for (std::size_t k = 0; k < levels.size(); ++k) slices.emplace_back(grid, degree);
        if (!levels.empty() && levels.back() > grid.half_length() / 2.0 + 1e-12)
            throw config_error("space-time field: t_max must not exceed L/2");
    }
};

/// Build F(x,t) = f * phi_t on the given levels.
SpaceTimeField mollified_stack(const DiscreteForm& f, const Mollifier& m,
                               const std::vector<double>& levels);

/// f+ = max over the level grid of |f * phi_t| (Euclidean norm across
/// components), for a unit-mass profile.
std::vector<double> plus_maximal(const DiscreteForm& f, const Mollifier& m);
std::vector<double> plus_maximal(const DiscreteForm& f, const Mollifier& m,
                                 const std::vector<double>& levels);

/// Discrete Lusin area function: cone sums over Gamma(x) = {|x-y| < t} with
/// measure weights (cell volume) (level log-spacing) t^{-n}.
std::vector<double> area_function(const SpaceTimeField& F);

/// Tent-space (quasi-)norm ||S(F)||_{L^p}.
double tent_norm(const GrowthFunction& gf, const SpaceTimeField& F, double tol = 1e-8);

/// Hardy (quasi-)norm ||f+||_{L^p}.
double hardy_norm(const GrowthFunction& gf, const DiscreteForm& f, const Mollifier& m,
                  double tol = 1e-8);

/// H^1 norm: the theta = t specialization.
double h1_norm(const DiscreteForm& f, const Mollifier& m, double tol = 1e-8);

/// H^log norm: the theta specialization.
double hlog_norm(const DiscreteForm& f, const Mollifier& m, double tol = 1e-8);

} // namespace hlog
