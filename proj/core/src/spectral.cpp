#include "hlog/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace hlog::spectral {

namespace {

// Plan creation is not thread-safe in FFTW; execution with the new-array
// interface is.  Plans are cached per (rank, N) and created with
// FFTW_UNALIGNED so they accept any buffer at execute time.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

const PlanPair& plans_for(const Grid& grid) {
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto key = std::make_pair(grid.dim(), grid.points_per_axis());
    auto it = cache.find(key);
    if (it == cache.end()) {
        const int n = grid.dim();
        const int N = grid.points_per_axis();
        int dims[3] = {N, N, N};
        std::vector<std::complex<double>> buf(grid.size());
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        PlanPair pp;
        pp.fwd = fftw_plan_dft(n, dims, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        pp.bwd = fftw_plan_dft(n, dims, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        it = cache.emplace(key, pp).first;
    }
    return it->second;
}

void execute(const fftw_plan& plan, Spectrum& data) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

struct GridTables {
    std::vector<double> xi_axis[3]; // per-axis derivative wavenumber by FFT index
    std::vector<double> xi2;        // |xi|^2 by flat spectral index
};

const GridTables& tables_for(const Grid& grid) {
    static std::mutex mtx;
    static std::map<std::tuple<int, int, double>, GridTables> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(grid.dim(), grid.points_per_axis(), grid.half_length());
    auto it = cache.find(key);
    if (it == cache.end()) {
        GridTables t;
        const int N = grid.points_per_axis();
        for (int a = 0; a < grid.dim(); ++a) {
            t.xi_axis[a].resize(static_cast<std::size_t>(N));
            for (int k = 0; k < N; ++k) t.xi_axis[a][static_cast<std::size_t>(k)] = grid.freq(k);
        }
        t.xi2.assign(grid.size(), 0.0);
        for (std::size_t f = 0; f < grid.size(); ++f) {
            auto idx = grid.unflat(f);
            double s = 0.0;
            for (int a = 0; a < grid.dim(); ++a) {
                const double xi = t.xi_axis[a][static_cast<std::size_t>(idx[a])];
                s += xi * xi;
            }
            t.xi2[f] = s;
        }
        it = cache.emplace(key, std::move(t)).first;
    }
    return it->second;
}

} // namespace

Spectrum forward(const Grid& grid, const std::vector<double>& field) {
    Spectrum spec(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) spec[i] = field[i];
    execute(plans_for(grid).fwd, spec);
    return spec;
}

std::vector<double> backward(const Grid& grid, Spectrum spec) {
    execute(plans_for(grid).bwd, spec);
    const double inv = 1.0 / static_cast<double>(grid.size());
    std::vector<double> out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real() * inv;
    return out;
}

std::vector<double> derivative(const Grid& grid, const std::vector<double>& field, int axis) {
    const auto& t = tables_for(grid);
    Spectrum spec = forward(grid, field);
    for (std::size_t f = 0; f < spec.size(); ++f) {
        auto idx = grid.unflat(f);
        const double xi = t.xi_axis[axis][static_cast<std::size_t>(idx[axis])];
        spec[f] *= std::complex<double>(0.0, xi);
    }
    return backward(grid, std::move(spec));
}

std::vector<std::vector<double>> gradient(const Grid& grid, const std::vector<double>& field) {
    const auto& t = tables_for(grid);
    Spectrum spec = forward(grid, field);
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(grid.dim()));
    for (int a = 0; a < grid.dim(); ++a) {
        Spectrum s = spec;
        for (std::size_t f = 0; f < s.size(); ++f) {
            auto idx = grid.unflat(f);
            const double xi = t.xi_axis[a][static_cast<std::size_t>(idx[a])];
            s[f] *= std::complex<double>(0.0, xi);
        }
        out.push_back(backward(grid, std::move(s)));
    }
    return out;
}

const std::vector<double>& xi_squared(const Grid& grid) { return tables_for(grid).xi2; }

std::vector<double> minus_laplacian(const Grid& grid, const std::vector<double>& field) {
    const auto& t = tables_for(grid);
    Spectrum spec = forward(grid, field);
    for (std::size_t f = 0; f < spec.size(); ++f) spec[f] *= t.xi2[f];
    return backward(grid, std::move(spec));
}

std::vector<double> inverse_laplacian(const Grid& grid, const std::vector<double>& field,
                                      double power) {
    const auto& t = tables_for(grid);
    Spectrum spec = forward(grid, field);
    for (std::size_t f = 0; f < spec.size(); ++f) {
        if (t.xi2[f] > 0.0)
            spec[f] *= std::pow(t.xi2[f], -power);
        else
            spec[f] = 0.0;
    }
    return backward(grid, std::move(spec));
}

std::vector<double> riesz(const Grid& grid, const std::vector<double>& field, int axis) {
    const auto& t = tables_for(grid);
    Spectrum spec = forward(grid, field);
    for (std::size_t f = 0; f < spec.size(); ++f) {
        if (t.xi2[f] > 0.0) {
            auto idx = grid.unflat(f);
            const double xi = t.xi_axis[axis][static_cast<std::size_t>(idx[axis])];
            spec[f] *= std::complex<double>(0.0, -xi / std::sqrt(t.xi2[f]));
        } else {
            spec[f] = 0.0;
        }
    }
    return backward(grid, std::move(spec));
}

std::vector<double> dealias(const Grid& grid, const std::vector<double>& field, int bandwidth) {
    Spectrum spec = forward(grid, field);
    const int N = grid.points_per_axis();
    for (std::size_t f = 0; f < spec.size(); ++f) {
        auto idx = grid.unflat(f);
        bool keep = true;
        for (int a = 0; a < grid.dim(); ++a) {
            const int k = idx[a];
            const int m = (k <= N / 2) ? k : k - N; // Nyquist counted as +N/2: dropped
            if (std::abs(m) > bandwidth) {
                keep = false;
                break;
            }
        }
        if (!keep) spec[f] = 0.0;
    }
    return backward(grid, std::move(spec));
}

std::vector<double> convolve(const Grid& grid, const std::vector<double>& field,
                             const Spectrum& kernel_dft) {
    Spectrum spec = forward(grid, field);
    for (std::size_t f = 0; f < spec.size(); ++f) spec[f] *= kernel_dft[f];
    auto out = backward(grid, std::move(spec));
    const double hv = grid.cell_volume();
    for (auto& v : out) v *= hv;
    return out;
}

Spectrum kernel_dft(const Grid& grid, const std::vector<double>& kernel) {
    return forward(grid, kernel);
}

} // namespace hlog::spectral
