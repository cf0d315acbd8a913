#pragma once

#include <cstdint>
#include <utility>

#include "hlog/ball.hpp"
#include "hlog/growth.hpp"
#include "hlog/norms.hpp"

namespace hlog {

struct AtomTolerances {
    double support = 2.5e-2;  ///< relative L2 mass outside the ball (resolution-limited)
    double size_slack = 1e-6; ///< size ratio may exceed 1 by this much
    double moment = 1e-8;     ///< normalized moment residual, |gamma| <= s
    double d_res = 1e-10;     ///< closedness residual for closed atoms
};

struct AtomValidation {
    double support_leak = 0.0;
    double size_ratio = 0.0;        ///< lq_wp_ball_norm * chi_ball_norm
    double max_moment_residual = 0.0;
    double d_residual = 0.0;
    bool checked = false;

    bool pass(const AtomTolerances& tol = {}) const {
        return checked && support_leak <= tol.support && size_ratio <= 1.0 + tol.size_slack &&
               max_moment_residual <= tol.moment && d_residual <= tol.d_res;
    }
};

/// A (p,q,s)-atom candidate: form + ball + admissibility parameters + the
/// latest validation report.
struct Atom {
    DiscreteForm form;
    Ball ball;
    AdmissibleTriple triple;
    bool closed = false;
    AtomValidation validation;

    Atom(DiscreteForm f, Ball b, AdmissibleTriple t, bool closed_flag)
        : form(std::move(f)), ball(b), triple(std::move(t)), closed(closed_flag) {}
};

/// Test-fixture generator honoring the atom conditions.  Closed atoms are
/// built as d(bump (l-1)-form) with hard support inside the ball, which makes
/// them grid-exactly closed, zero-mean, and locally integrable by the
/// primitive solver.  For s >= 1 the primitive's moments through s-1 are
/// corrected cell-exactly before differentiating.
struct AtomRecipe {
    std::uint64_t seed = 1;
    int bumps = 2;                ///< superposition count in the primitive
    double support_factor = 0.85; ///< primitive lives in support_factor * B
};

Atom make_atom(const Grid& grid, const Ball& ball, const AdmissibleTriple& triple, int degree,
               bool closed, const AtomRecipe& recipe = {});

/// Recompute all four residuals of the atom definition; failures are report
/// entries, never exceptions.
AtomValidation validate_atom(const Atom& atom, int level_K = 20);

/// Weighted atom family with its size functional.
struct AtomicDecomposition {
    std::vector<double> weights;
    std::vector<Atom> atoms;
    double nq_value = 0.0;
    double reconstruction_error = 0.0;
    std::vector<double> renormalization; ///< min/median/max of the level-grid symbol
};

/// N_q({lambda_j a_j}) = inf{ lam > 0 : sum_j p(B_j, ||lambda_j a_j|| / lam) <= 1 }
/// by bisection on the monotone sum.  Empty or all-zero input gives 0.
double nq_functional(const std::vector<std::pair<double, const Atom*>>& items,
                     double tol = 1e-8, int level_K = 20);
double nq_functional(const AtomicDecomposition& decomp, double tol = 1e-8, int level_K = 20);

/// Pointwise weighted sum of the atoms.
DiscreteForm synthesize(const AtomicDecomposition& decomp);

} // namespace hlog
