#pragma once

#include <functional>

#include "hlog/ball.hpp"
#include "hlog/exterior.hpp"

namespace hlog {

/// Conjugate gradient on the normal equations of A y = b.  Starting from
/// y = 0 on a consistent system this converges to the minimum-norm solution;
/// a warm start shifts the solution inside the affine solution set.
struct CglsResult {
    double residual_rel = 0.0; ///< ||b - A y|| / ||b||
    int iterations = 0;
    bool stagnated = false;
};

CglsResult cgls(const std::function<std::vector<double>(const std::vector<double>&)>& apply_A,
                const std::function<std::vector<double>(const std::vector<double>&)>& apply_At,
                const std::vector<double>& b, std::vector<double>& y, double tol_rel,
                int max_iterations);

struct LocalPrimitiveOptions {
    double mask_dilate = 2.0;     ///< unknowns live on mask_dilate * B
    double tol = 1e-9;            ///< relative residual target (CG path)
    int max_iterations = 6000;    ///< CG path cap
    double closedness_tol = 1e-8; ///< input d-residual gate
    double q_norm = 2.0;          ///< exponent for the norm certificates
    std::size_t dense_limit = 3000; ///< direct normal-equations solve up to this many unknowns
};

struct LocalPrimitiveResult {
    DiscreteForm primitive;   ///< (l-1)-form b with d b = a, zero outside the mask
    double residual = 0.0;    ///< ||d b - a||_2 / ||a||_2
    int iterations = 0;       ///< 0 for the dense path
    bool used_fallback = false;
    double input_support_leak = 0.0;
    double b_norm_q = 0.0;
    double db_norm_q = 0.0;
    double norm_ratio = 0.0;  ///< ||b||_q / (r_B ||a||_q)
};

/// Locally supported primitive of a closed l-form supported in B: the
/// minimum-norm solution of d b = a with b hard-zero outside the dilated
/// ball.  Small systems are solved directly through the eigendecomposition
/// of the assembled normal matrix (the assembly uses translation-invariant
/// derivative-correlation kernels); larger ones fall back to CGLS with a
/// smoothly cut off global primitive delta {Delta}^-1 a as a warm start.
///
/// Solvability on the grid requires a to be the discrete d of some field
/// supported in the mask; closed-atom generators and the decomposition
/// pipeline construct their inputs that way.  For top-degree a the zero-mean
/// condition is required (and checked); for l < n it follows from closedness.
LocalPrimitiveResult local_primitive(const DiscreteForm& a, const Ball& ball,
                                     const LocalPrimitiveOptions& opts = {});

/// L^q norm of the pointwise Euclidean norm over the whole box.
double lq_norm(const DiscreteForm& f, double q);

/// Smooth taper profile on the mask ball: (1 - rho^2)^3 inside, 0 outside.
std::vector<double> taper_profile(const Grid& grid, const Ball& mask);

/// Minimum-norm least-squares solve of W(xi) d(masked b) = a restricted to
/// the given cells, shared by the factorization and the decomposition
/// prefilter.  W is a real spectral weight (empty: W = 1).  Returns the
/// coefficient vector ordered component-major (component index slowest, mask
/// cell order fastest).
std::vector<double> masked_primitive_dense(const DiscreteForm& a,
                                           const std::vector<std::size_t>& mask_cells,
                                           int primitive_degree, double pinv_cutoff = 1e-14,
                                           const std::vector<double>& spectral_weight = {});

} // namespace hlog
