#pragma once

#include "hlog/form.hpp"
#include "hlog/rng.hpp"

namespace hlog {

/// Random real band-limited scalar field: independent Gaussian spectral
/// coefficients on modes with every |m_axis| <= bandwidth (Nyquist excluded),
/// Hermitian-symmetrized, optional Gaussian spectral envelope, then rescaled
/// to unit L2 norm.  zero_mean kills the m=0 coefficient.
std::vector<double> random_band_limited(const Grid& grid, Rng& rng, int bandwidth,
                                        bool zero_mean = true, double envelope = 0.0);

/// Form with random band-limited components, unit L2 norm.
DiscreteForm random_form(const Grid& grid, int degree, Rng& rng, int bandwidth,
                         bool zero_mean = true);

/// Random closed form: the exterior derivative of a random (l-1)-form
/// (exact, hence closed to machine precision).  Unit L2 norm.
DiscreteForm random_closed_form(const Grid& grid, int degree, Rng& rng, int bandwidth);

} // namespace hlog
