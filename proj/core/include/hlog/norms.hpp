#pragma once

#include <vector>

#include "hlog/ball.hpp"
#include "hlog/form.hpp"
#include "hlog/growth.hpp"

namespace hlog {

/// Dyadic level grid 2^k, k in [-K, K], used for the sup over t in the
/// L^q_p(B) functional.
std::vector<double> dyadic_levels(int K);

/// Luxembourg norm inf{ lambda > 0 : integral p(x, |f|/lambda) dx <= 1 } by
/// bisection on the monotone defining integral (midpoint quadrature).
/// Returns 0 for f == 0; throws numeric_error on non-finite samples.
double luxembourg_norm(const GrowthFunction& gf, const Grid& grid,
                       const std::vector<double>& abs_f, double tol = 1e-8);
double luxembourg_norm(const GrowthFunction& gf, const DiscreteForm& f, double tol = 1e-8);

/// p(B, t) = integral_B p(x, t) dx by midpoint quadrature.  Errors on an
/// empty discrete ball.
double wp_ball_mass(const GrowthFunction& gf, const Grid& grid, const Ball& ball, double t);
double wp_ball_mass(const GrowthFunction& gf, const Grid& grid,
                    const std::vector<std::size_t>& ball_cells, double t);

/// L^q_p(B) norm: sup over the dyadic level grid of
/// (p(B,t)^{-1} integral |f|^q p(x,t) dx)^{1/q}.  The support of f must lie
/// in B up to `leak_tol` (relative L2 mass outside the ball).
double lq_wp_ball_norm(const AdmissibleTriple& triple, const DiscreteForm& f, const Ball& ball,
                       int level_K = 20, double leak_tol = 1e-6);

/// Relative L2 mass of f outside the ball.
double support_leak(const DiscreteForm& f, const Ball& ball);

/// Luxembourg norm of the ball indicator; results are cached per
/// (growth, grid, ball, tol).
double chi_ball_norm(const GrowthFunction& gf, const Grid& grid, const Ball& ball,
                     double tol = 1e-8);

/// Uniform Muckenhoupt certificate: max over balls and levels of
/// (avg_B p) (avg_B p^{-1/(q-1)})^{q-1}.  Throws if p vanishes on a cell at
/// some positive level.
double check_muckenhoupt(const GrowthFunction& gf, const Grid& grid, double q,
                         const std::vector<Ball>& balls, const std::vector<double>& levels);

/// Measured class certificates for a growth function: Orlicz monotonicity on
/// a sample lattice and fitted uniform-type constants.
struct GrowthClassReport {
    bool orlicz_ok = false;
    double lower_type_constant = 0.0; ///< sup p(x,st)/(s^p p(x,t)), s in (0,1]
    double upper_type_constant = 0.0; ///< sup p(x,st)/(s   p(x,t)), s >= 1
};

GrowthClassReport check_growth_class(const GrowthFunction& gf, const Grid& grid,
                                     double lower_type_p);

} // namespace hlog
