#pragma once

#include "hlog/atoms.hpp"
#include "hlog/maximal.hpp"

namespace hlog {

/// One piece of the stopping-time partition: the cells it owns (space-time),
/// the values of the normalized atom there, and the ball whose tent contains
/// every owned cell.
struct TentAtom {
    Ball ball;
    bool tilde_fits = true; ///< whether the doubled ball stays inside the box
    struct Entry {
        int level = 0;
        std::size_t cell = 0;
        std::vector<double> values; ///< one value per form component
    };
    std::vector<Entry> entries;

    /// Dense space-time view of the atom (transient, for norms and mapping).
    SpaceTimeField dense(const Grid& grid, int degree, const std::vector<double>& levels) const;
};

struct TentDecomposition {
    int degree = 0;
    std::vector<double> levels;
    std::vector<double> weights;
    std::vector<TentAtom> atoms;
    double weight_functional = 0.0; ///< inf{lam : sum_j p(B_j, |l_j|/(lam ||chi_Bj||)) <= 1}
};

struct TentOptions {
    std::vector<double> size_exponents{2.0, 4.0}; ///< tested p for the (p,inf)-atom bound
    double tol = 1e-8;          ///< bisection tolerance of the weight functional
    int max_level_sets = 160;   ///< guard on the stopping-time sweep
    double drop_threshold = 0.0; ///< stop sweeping below this fraction of sup S
                                 ///< and discard the (negligible) remainder
    int side_cap_cells = 0;      ///< Whitney cube side cap; 0: t_max / h
    double min_piece_mass = 0.0; ///< drop pieces below this fraction of ||F||_2
};

/// Stopping-time atomic decomposition of a space-time field: level sets
/// O_k = {S(F) > 2^k}, a Whitney cover of each O_k by dyadic cubes (side
/// comparable to the distance to the complement, factor 1/4, capped so the
/// emitted balls and their doubles stay inside the box), pieces cut from the
/// tent differences T(O_k) \ T(O_{k+1}).  The pieces partition the support
/// of F exactly, so sum_j lambda_j A_j = F holds cell by cell.
TentDecomposition tent_decompose(const SpaceTimeField& F, const GrowthFunction& gf,
                                 const TentOptions& opts = {});

/// Exact re-summation of the pieces (for the partition test).
SpaceTimeField tent_reassemble(const TentDecomposition& td, const Grid& grid);

/// The averaging map a(x) = integral (A(., t) * phi_t)(x) dt/t as a
/// log-trapezoid level sum; the output is supported in the atom's ball by
/// the tent geometry.
DiscreteForm pi_phi_form(const Grid& grid, const TentAtom& atom, int degree,
                         const std::vector<double>& levels, const Mollifier& m);

/// pi_phi packaged as a validated atom related to the doubled ball (or the
/// ball itself when the double would wrap).
Atom pi_phi(const Grid& grid, const TentAtom& atom, int degree,
            const std::vector<double>& levels, const Mollifier& m,
            const AdmissibleTriple& triple);

/// Squared-distance transform to the complement of a cell mask (periodic,
/// exact Euclidean); +inf entries mean the mask covers everything.
std::vector<double> periodic_distance_sq(const Grid& grid, const std::vector<char>& mask);

} // namespace hlog
