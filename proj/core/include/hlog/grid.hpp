#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hlog/errors.hpp"

namespace hlog {

/// Uniform periodic grid on the box [-L, L)^n, n in {2,3}, N points per axis.
///
/// Grid points sit at cell centers, x_i = -L + (i + 1/2) h with h = 2L/N,
/// so midpoint-rule sums with weight h^n are the canonical quadrature and the
/// coordinate origin is never a sample point (weights like |x|^alpha stay
/// finite on the lattice).
///
/// Spectral convention: the basis is exp(i pi m x / L) with integer m in
/// [-N/2, N/2); the derivative multiplier on mode m is exactly i (pi m / L),
/// with the unpaired Nyquist mode m = -N/2 mapped to zero so that every
/// operator built from the tables below maps real fields to real fields.
class Grid {
public:
    Grid(int n, int N, double L) : n_(n), N_(N), L_(L) {
        if (n != 2 && n != 3) throw config_error("grid: dimension must be 2 or 3");
        if (N < 4 || N % 2 != 0) throw config_error("grid: N must be even and >= 4");
        if (!(L > 0.0)) throw config_error("grid: L must be positive");
    }

    int dim() const { return n_; }
    int points_per_axis() const { return N_; }
    double half_length() const { return L_; }
    double spacing() const { return 2.0 * L_ / N_; }

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < n_; ++a) s *= static_cast<std::size_t>(N_);
        return s;
    }

    /// Midpoint-rule cell volume h^n.
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < n_; ++a) v *= spacing();
        return v;
    }

    /// Physical coordinate of index i along one axis (cell center).
    double coord(int i) const { return -L_ + (i + 0.5) * spacing(); }

    /// Row-major flat index; axis 0 is the slowest.
    std::size_t flat(const std::array<int, 3>& idx) const {
        std::size_t f = 0;
        for (int a = 0; a < n_; ++a) f = f * N_ + static_cast<std::size_t>(idx[a]);
        return f;
    }

    std::array<int, 3> unflat(std::size_t f) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = n_ - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(f % N_);
            f /= N_;
        }
        return idx;
    }

    std::array<double, 3> point(std::size_t f) const {
        auto idx = unflat(f);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < n_; ++a) x[a] = coord(idx[a]);
        return x;
    }

    /// Signed integer mode for FFT index k, with the Nyquist mode zeroed.
    int mode(int k) const {
        if (k < N_ / 2) return k;
        if (k == N_ / 2) return 0; // Nyquist: unpaired for real fields
        return k - N_;
    }

    /// Derivative wavenumber xi = pi m / L for FFT index k.
    double freq(int k) const { return M_PI * mode(k) / L_; }

    /// Largest derivative wavenumber on the grid (used to normalize residuals).
    double freq_max() const { return M_PI * (N_ / 2 - 1) / L_; }

    /// Min-image displacement on the torus, result in [-L, L).
    double wrap(double d) const {
        const double period = 2.0 * L_;
        d = std::remainder(d, period);
        if (d < -L_) d += period;
        if (d >= L_) d -= period;
        return d;
    }

    /// Min-image Euclidean distance between two points.
    double dist(const std::array<double, 3>& a, const std::array<double, 3>& b) const {
        double s = 0.0;
        for (int ax = 0; ax < n_; ++ax) {
            const double d = wrap(a[ax] - b[ax]);
            s += d * d;
        }
        return std::sqrt(s);
    }

    bool operator==(const Grid& o) const { return n_ == o.n_ && N_ == o.N_ && L_ == o.L_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int n_;
    int N_;
    double L_;
};

} // namespace hlog
