#pragma once

#include <optional>

#include "hlog/norms.hpp"

namespace hlog {

/// Dyadic ball family for the BMO-type suprema: centers on the 2^-m refined
/// lattice, radii 2^-m L for m = 0 .. log2(N/4), restricted to balls that do
/// not wrap the torus.  One-cell balls are excluded.
std::vector<Ball> dyadic_ball_family(const Grid& grid);

struct BmoReport {
    double bmo_wp = 0.0;
    double bmo_plus = 0.0;
    double jn_value = 0.0;
    Ball worst_ball;
};

/// sup_B ||chi_B||^-1_{L^p} integral_B |g - g_B| dx over the ball family;
/// g_B is the componentwise grid mean and |.| the Euclidean norm.
double bmo_wp_norm(const DiscreteForm& g, const GrowthFunction& gf,
                   const std::vector<Ball>& family, Ball* worst = nullptr);

/// Unit-cube L1 term plus the classical BMO seminorm over the family.
/// Requires (0,1)^n inside the box.
double bmo_plus_norm(const DiscreteForm& g, const std::vector<Ball>& family);
double bmo_plus_norm(const DiscreteForm& g);

/// Duality pairing L_g(f) = integral f ^ g (an n-form integral).  If a
/// support ball is given, f must be concentrated in it.
double pairing(const DiscreteForm& g, const DiscreteForm& f,
               const std::optional<Ball>& f_support = std::nullopt,
               double support_tol = 1e-6);

/// John-Nirenberg-type certificate:
/// sup_B ||chi_B||^-1 integral_B |g - g_B|^q' p(x, ||chi_B||^-1)^{1-q'} dx.
double john_nirenberg_certificate(const DiscreteForm& g, const GrowthFunction& gf, double q_prime,
                                  const std::vector<Ball>& family);

} // namespace hlog
