#pragma once

#include <string>
#include <vector>

#include "hlog/form.hpp"
#include "hlog/spectral.hpp"

namespace hlog {

/// Compactly supported smooth profiles on the unit ball:
///   bump        exp(-1/(1-|z|^2)), used mass-normalized for f+
///   dbump:k     d_k of the bump (zero mass)
///   lapbump     Laplacian of the bump (radial, zero mass and first moments)
///   autocorr    self-convolution of the corrected lapbump: kernel support
///               2t and an exactly nonnegative transform, which keeps the
///               level-grid symbol of the decomposition away from ring dips;
///               the default profile for the Calderon-type decomposition
enum class ProfileKind { bump, dbump, lapbump, autocorr };

/// A mollifier profile plus its discrete normalization contract.  Sampled
/// kernels are corrected cell-exactly: a unit-mass profile has discrete mass
/// exactly 1 at every level t, and a zero-moment profile has discrete moments
/// through `moment_order` exactly 0 (the correction is a same-support
/// projection, so kernel support stays inside the ball of radius t).
struct Mollifier {
    ProfileKind kind = ProfileKind::bump;
    int axis = 0;          // for dbump
    int moment_order = -1; // -1: unit mass; s >= 0: vanishing moments through s
    std::string name = "bump";

    static Mollifier unit_bump();
    static Mollifier dbump(int axis);
    static Mollifier zero_moment(int order);      // lapbump base, support t
    static Mollifier zero_moment_wide(int order); // autocorrelation, support 2t

    static Mollifier parse(const std::string& spec);
};

/// Kernel of phi_t = t^{-n} phi(./t) sampled on the displacement grid,
/// moment-corrected, together with its DFT.  Cached per (profile, t, grid).
struct SampledKernel {
    std::vector<double> values;
    spectral::Spectrum dft;
};

const SampledKernel& sampled_kernel(const Grid& grid, const Mollifier& m, double t);

/// Periodic convolution f * phi_t via spectral multiplication.  Requires
/// t <= L/2 (larger kernels wrap the torus).
DiscreteForm mollify(const DiscreteForm& f, double t, const Mollifier& m);
std::vector<double> mollify_scalar(const Grid& grid, const std::vector<double>& f, double t,
                                   const Mollifier& m);

} // namespace hlog
