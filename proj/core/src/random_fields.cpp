#include "hlog/random_fields.hpp"

#include <cmath>
#include <complex>

#include "hlog/exterior.hpp"
#include "hlog/spectral.hpp"

namespace hlog {

std::vector<double> random_band_limited(const Grid& grid, Rng& rng, int bandwidth,
                                        bool zero_mean, double envelope) {
    const int n = grid.dim();
    const int N = grid.points_per_axis();
    spectral::Spectrum spec(grid.size(), {0.0, 0.0});

    auto conj_index = [&](const std::array<int, 3>& idx) {
        std::array<int, 3> c{0, 0, 0};
        for (int a = 0; a < n; ++a) c[a] = (N - idx[a]) % N;
        return grid.flat(c);
    };

    // fill modes in index order; Hermitian partner gets the conjugate, so the
    // resulting field is exactly real
    for (std::size_t f = 0; f < grid.size(); ++f) {
        auto idx = grid.unflat(f);
        bool in_band = true;
        for (int a = 0; a < n; ++a) {
            const int k = idx[a];
            const int m = (k <= N / 2) ? k : k - N;
            if (std::abs(m) > bandwidth || k == N / 2) {
                in_band = false;
                break;
            }
        }
        if (!in_band) continue;
        const std::size_t g = conj_index(idx);
        if (g < f) continue; // already assigned via partner
        double w = 1.0;
        if (envelope > 0.0) {
            double m2 = 0.0;
            for (int a = 0; a < n; ++a) {
                const int k = idx[a];
                const int m = (k <= N / 2) ? k : k - N;
                m2 += static_cast<double>(m) * m;
            }
            w = std::exp(-m2 / (2.0 * envelope * envelope));
        }
        const double re = rng.normal() * w;
        const double im = rng.normal() * w;
        if (g == f) {
            spec[f] = {re, 0.0}; // self-conjugate mode must be real
        } else {
            spec[f] = {re, im};
            spec[g] = {re, -im};
        }
    }
    if (zero_mean) spec[0] = {0.0, 0.0};

    auto field = spectral::backward(grid, std::move(spec));
    double s2 = 0.0;
    for (double v : field) s2 += v * v;
    s2 = std::sqrt(s2 * grid.cell_volume());
    if (s2 > 0.0)
        for (auto& v : field) v /= s2;
    return field;
}

DiscreteForm random_form(const Grid& grid, int degree, Rng& rng, int bandwidth, bool zero_mean) {
    DiscreteForm f(grid, degree);
    for (int c = 0; c < f.component_count(); ++c)
        f.comp(c) = random_band_limited(grid, rng, bandwidth, zero_mean);
    const double s = l2_norm(f);
    if (s > 0.0) f *= 1.0 / s;
    return f;
}

DiscreteForm random_closed_form(const Grid& grid, int degree, Rng& rng, int bandwidth) {
    if (degree < 1) throw std::invalid_argument("random_closed_form: degree must be >= 1");
    DiscreteForm w = random_form(grid, degree - 1, rng, bandwidth, true);
    DiscreteForm f = exterior_derivative(w);
    const double s = l2_norm(f);
    if (s > 0.0) f *= 1.0 / s;
    return f;
}

} // namespace hlog
