#include "hlog/maximal.hpp"

#include <cmath>

namespace hlog {

std::vector<double> maximal_levels(const Grid& grid) {
    return maximal_levels(grid, grid.half_length() / 2.0);
}

std::vector<double> maximal_levels(const Grid& grid, double t_max) {
    // lowest level h/2 for power-of-two spacings
    std::vector<double> out;
    int k = static_cast<int>(std::floor(std::log2(grid.spacing()))) - 1;
    for (; std::ldexp(1.0, k) <= t_max * (1.0 + 1e-12); ++k)
        out.push_back(std::ldexp(1.0, k));
    if (out.empty()) throw config_error("maximal_levels: empty level grid");
    return out;
}

SpaceTimeField mollified_stack(const DiscreteForm& f, const Mollifier& m,
                               const std::vector<double>& levels) {
    SpaceTimeField F(f.grid(), f.degree(), levels);
    for (std::size_t k = 0; k < levels.size(); ++k) F.slices[k] = mollify(f, levels[k], m);
    return F;
}

std::vector<double> plus_maximal(const DiscreteForm& f, const Mollifier& m) {
    return plus_maximal(f, m, maximal_levels(f.grid()));
}

std::vector<double> plus_maximal(const DiscreteForm& f, const Mollifier& m,
                                 const std::vector<double>& levels) {
    const Grid& grid = f.grid();
    std::vector<double> out(grid.size(), 0.0);
    for (double t : levels) {
        DiscreteForm ft = mollify(f, t, m);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], ft.norm_at(i));
    }
    return out;
}

namespace {

// log-trapezoid weights for a positive level grid
std::vector<double> log_weights(const std::vector<double>& levels) {
    std::vector<double> w(levels.size(), 0.0);
    if (levels.size() == 1) {
        w[0] = std::log(2.0);
        return w;
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
        double left = (k == 0) ? std::log(levels[1] / levels[0])
                               : std::log(levels[k] / levels[k - 1]);
        double right = (k + 1 == levels.size()) ? std::log(levels[k] / levels[k - 1])
                                                : std::log(levels[k + 1] / levels[k]);
        w[k] = 0.5 * (left + right);
    }
    return w;
}

// index offsets of the cone ball |d| < t around a cell
std::vector<std::array<int, 3>> cone_offsets(const Grid& grid, double t) {
    std::vector<std::array<int, 3>> out;
    const int n = grid.dim();
    const double h = grid.spacing();
    const int reach = static_cast<int>(std::ceil(t / h)) + 1;
    std::array<int, 3> d{0, 0, 0};
    const int lo2 = (n == 3) ? -reach : 0;
    const int hi2 = (n == 3) ? reach : 0;
    for (int d0 = -reach; d0 <= reach; ++d0)
        for (int d1 = -reach; d1 <= reach; ++d1)
            for (int d2 = lo2; d2 <= hi2; ++d2) {
                const double r2 = (static_cast<double>(d0) * d0 + static_cast<double>(d1) * d1 +
                                   static_cast<double>(d2) * d2) * h * h;
                if (r2 < t * t) {
                    d[0] = d0;
                    d[1] = d1;
                    d[2] = d2;
                    out.push_back(d);
                }
            }
    return out;
}

} // namespace

std::vector<double> area_function(const SpaceTimeField& F) {
    // direct scatter sums: exactly nonnegative (a cancellation-free sum of
    // squares), and cheap on sparse pieces
    const Grid& grid = F.grid;
    const int n = grid.dim();
    const int N = grid.points_per_axis();
    std::vector<double> s2(grid.size(), 0.0);
    const auto w = log_weights(F.levels);
    for (std::size_t k = 0; k < F.levels.size(); ++k) {
        const double t = F.levels[k];
        const double scale = w[k] * std::pow(t, -n) * grid.cell_volume();
        const auto offsets = cone_offsets(grid, t);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = F.slices[k].norm_at(i);
            if (v == 0.0) continue;
            const double contrib = scale * v * v;
            auto yi = grid.unflat(i);
            std::array<int, 3> xi{0, 0, 0};
            for (const auto& d : offsets) {
                for (int a = 0; a < n; ++a) xi[a] = ((yi[a] + d[a]) % N + N) % N;
                s2[grid.flat(xi)] += contrib;
            }
        }
    }
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(s2[i]);
    return out;
}

double tent_norm(const GrowthFunction& gf, const SpaceTimeField& F, double tol) {
    return luxembourg_norm(gf, F.grid, area_function(F), tol);
}

double hardy_norm(const GrowthFunction& gf, const DiscreteForm& f, const Mollifier& m,
                  double tol) {
    return luxembourg_norm(gf, f.grid(), plus_maximal(f, m), tol);
}

double h1_norm(const DiscreteForm& f, const Mollifier& m, double tol) {
    return hardy_norm(GrowthFunction::power(1.0), f, m, tol);
}

double hlog_norm(const DiscreteForm& f, const Mollifier& m, double tol) {
    return hardy_norm(GrowthFunction::theta(), f, m, tol);
}

} // namespace hlog
