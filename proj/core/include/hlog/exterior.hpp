#pragma once

#include "hlog/form.hpp"

namespace hlog {

/// Pointwise alternating product of an l-form and an m-form.  Terms whose
/// merged index tuple repeats an index vanish by alternation.  Inputs used
/// inside derivative identities should be dealiased to bandwidth N/4 first
/// (pointwise products double bandwidth).
DiscreteForm wedge(const DiscreteForm& f, const DiscreteForm& g);

/// Exterior derivative d f = sum_I sum_j d_j f_I e^j ^ e^I with spectral
/// partial derivatives.  Errors on top-degree input.
DiscreteForm exterior_derivative(const DiscreteForm& f);

/// Formal adjoint of d with respect to the grid inner product,
/// <delta f, g> = <f, d g>.  Errors on 0-forms.
DiscreteForm codifferential(const DiscreteForm& f);

/// Hodge Laplacian d delta + delta d, assembled from the two compositions.
/// Positive semidefinite: componentwise it equals -sum_j d_j^2 (multiplier
/// +|xi|^2), i.e. the ordinary Laplacian up to one global sign.
DiscreteForm hodge_laplacian(const DiscreteForm& f);

/// Componentwise positive scalar Laplacian (single multiplier pass); the
/// independent route against which hodge_laplacian is checked.
DiscreteForm scalar_laplacian(const DiscreteForm& f);

/// Componentwise inverse Laplacian, power 1 or 1/2.  Requires every
/// component to have zero mean (the zero mode is ill-posed).
DiscreteForm inv_laplacian(const DiscreteForm& f, double power, double mean_tol = 1e-12);

/// Componentwise Riesz transform along an axis (zero-frequency convention:
/// the mean maps to 0).
std::vector<double> riesz_transform(const Grid& grid, const std::vector<double>& f, int axis);

/// Result of the Hodge splitting f = d delta G + delta d G + mean,
/// G = inv_laplacian(f - mean).
struct HodgeSplit {
    DiscreteForm closed;    ///< d delta {Delta}^-1 f: exact, hence closed
    DiscreteForm coclosed;  ///< delta d {Delta}^-1 f: co-exact, hence co-closed
    std::vector<double> mean; ///< componentwise means
    DiscreteForm reconstruct() const;
};

HodgeSplit hodge_split(const DiscreteForm& f);

/// Truncate every component to the given bandwidth.
DiscreteForm dealias(const DiscreteForm& f, int bandwidth);

/// Largest per-axis bandwidth closed under pointwise products: N/4 - 1
/// (a product of two such fields stays strictly below the Nyquist mode).
int quarter_band(const Grid& grid);

/// || d f ||_2 / (||f||_2 * xi_max): dimensionless closedness residual.
/// Top-degree forms are closed by convention (residual 0).
double d_residual(const DiscreteForm& f);

} // namespace hlog
