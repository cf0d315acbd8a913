#pragma once

#include <cstdint>

#include "hlog/atoms.hpp"
#include "hlog/ball.hpp"
#include "hlog/form.hpp"
#include "hlog/rng.hpp"

namespace hlog {

/// Add a raised-cosine-power window cos^m(pi r / 2) of radius rho at center.
/// Hard compact support; the power adapts to the resolved width so that
/// spectral-derivative tails stay orders of magnitude below the classic exp
/// bump (about 1e-6 at eight cells radius).
void add_window_bump(const Grid& grid, std::vector<double>& field,
                     const std::array<double, 3>& center, double rho, double amplitude,
                     int power = 0); // 0: adapt to rho/h

/// Random (l-1)-form of window bumps hard-supported in factor * B.
DiscreteForm window_bump_form(const Grid& grid, int degree, const Ball& ball, double factor,
                              Rng& rng, int bumps = 2);

/// Deterministic fixture family used by the CLI and the acceptance suite.
/// Every fixture is a pure function of (grid, seed).

/// Closed-form fixture: a weighted sum of `atoms` closed window atoms with
/// balls inside the centrally located `support` ball; grid-exactly closed,
/// zero mean, unit H-norm not enforced.
DiscreteForm closed_field_fixture(const Grid& grid, int degree, std::uint64_t seed,
                                  const Ball& support, int atoms = 3);

/// Ball placed uniformly so that dilate * B stays inside the box.
Ball random_ball(const Grid& grid, Rng& rng, double r_lo, double r_hi, double dilate = 2.0);

/// Case-I ball for the factorization: every axis satisfies
/// r <= min(1, |c_axis| / 2), and 2B stays inside the box.
Ball random_case1_ball(const Grid& grid, Rng& rng);

/// Case-II ball: centered near the origin with r >= min(1, |c|/2).
Ball random_case2_ball(const Grid& grid, Rng& rng);

/// BMO-flavored fixture: a closed form with a capped-log scalar profile.
DiscreteForm bmo_field_fixture(const Grid& grid, int degree, std::uint64_t seed);

} // namespace hlog
