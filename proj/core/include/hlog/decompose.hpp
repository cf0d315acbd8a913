#pragma once

#include "hlog/tent.hpp"

namespace hlog {

struct DecomposeOptions {
    double t_max = 0.0;           ///< 0: derive from the input's support geometry
    double closedness_tol = 1e-8;
    double tail_threshold = 3e-4; ///< cells of F below this fraction of max are dropped
    TentOptions tent{ {2.0, 4.0}, 1e-8, 160, 1e-7, 0, 1e-4 };
};

/// Closed atomic decomposition of a closed l-form through the tent-space
/// route: build F(x,t) = t (delta f * phi_t) / c on the dyadic level grid,
/// take the stopping-time decomposition of F, and map every tent atom through
/// a_j = -sum_k w_k t_k d(A_j(., t_k) * phi_{t_k}).
///
/// The truncated dyadic grid resolves only the finest scales: the pipeline
/// reproduces IFFT[S f^]/c with the level-grid symbol
/// S(xi) = -sum_k w_k t_k^2 |xi|^2 (h^n K_k(xi))^2 and the recorded
/// renormalization constant c = max|S|; the complement f - IFFT[S f^]/c is
/// emitted as one explicit coarse-scale atom (it is compactly supported
/// because the symbol's kernel is).  Reconstruction is then grid-exact up to
/// the tail threshold on F.
AtomicDecomposition closed_atomic_decompose(const DiscreteForm& f, const GrowthFunction& gf,
                                            const Mollifier& m,
                                            const DecomposeOptions& opts = {});

/// The level-grid symbol of the decompose-reconstruct composition.
std::vector<double> decompose_symbol(const Grid& grid, const Mollifier& m,
                                     const std::vector<double>& levels);

/// Geometry-derived level cap: the largest dyadic t_max such that every
/// Whitney ball the pipeline can emit, dilated by two, stays inside the box.
double derive_t_max(const Grid& grid, const DiscreteForm& f);

} // namespace hlog
