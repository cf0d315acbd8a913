#pragma once

#include <complex>
#include <vector>

#include "hlog/grid.hpp"

namespace hlog::spectral {

using Spectrum = std::vector<std::complex<double>>;

/// Unnormalized forward DFT of a real field (row-major, axis 0 slowest).
Spectrum forward(const Grid& grid, const std::vector<double>& field);

/// Inverse DFT with 1/N^n normalization; returns the real part.
std::vector<double> backward(const Grid& grid, Spectrum spec);

/// Spectral partial derivative along one axis (exact Fourier multiplier
/// i xi_axis, Nyquist zeroed).
std::vector<double> derivative(const Grid& grid, const std::vector<double>& field, int axis);

/// All n partial derivatives from a single forward transform.
std::vector<std::vector<double>> gradient(const Grid& grid, const std::vector<double>& field);

/// |xi|^2 at flat spectral index (sum of squared derivative multipliers).
const std::vector<double>& xi_squared(const Grid& grid);

/// Positive scalar Laplacian -sum_j d_j^2, i.e. multiplier +|xi|^2.
std::vector<double> minus_laplacian(const Grid& grid, const std::vector<double>& field);

/// Inverse of the positive Laplacian on nonzero modes: multiplier |xi|^(-2p)
/// with p = 1 or 1/2; the zero mode (and Nyquist-degenerate modes) map to 0.
std::vector<double> inverse_laplacian(const Grid& grid, const std::vector<double>& field,
                                      double power);

/// Riesz transform R_j: multiplier -i xi_j / |xi|, zero where |xi| = 0.
std::vector<double> riesz(const Grid& grid, const std::vector<double>& field, int axis);

/// Zero every mode with any |m_axis| > bandwidth (Nyquist included).
std::vector<double> dealias(const Grid& grid, const std::vector<double>& field, int bandwidth);

/// Periodic convolution with a sampled kernel: h^n * circular_conv(field, kernel).
/// The kernel is sampled on the displacement grid (index j <-> offset j*h,
/// wrapped to [-L, L)).
std::vector<double> convolve(const Grid& grid, const std::vector<double>& field,
                             const Spectrum& kernel_dft);

/// Forward DFT of a kernel given on the displacement grid.
Spectrum kernel_dft(const Grid& grid, const std::vector<double>& kernel);

} // namespace hlog::spectral
