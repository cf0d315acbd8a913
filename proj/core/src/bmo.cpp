#include "hlog/bmo.hpp"

#include <cmath>

#include "hlog/exterior.hpp"

namespace hlog {

std::vector<Ball> dyadic_ball_family(const Grid& grid) {
    std::vector<Ball> out;
    const int n = grid.dim();
    const double L = grid.half_length();
    const int m_max = static_cast<int>(std::floor(std::log2(grid.points_per_axis() / 4.0)));
    for (int m = 0; m <= m_max; ++m) {
        const double r = std::ldexp(L, -m);
        if (r <= grid.spacing()) break; // one-cell balls excluded
        const double step = std::ldexp(2.0 * L, -m) * 0.5; // lattice spacing r
        const int count = static_cast<int>(std::round(2.0 * L / step));
        std::array<int, 3> idx{0, 0, 0};
        const int lim2 = (n == 3) ? count : 1;
        for (int i0 = 0; i0 < count; ++i0)
            for (int i1 = 0; i1 < count; ++i1)
                for (int i2 = 0; i2 < lim2; ++i2) {
                    idx = {i0, i1, i2};
                    std::array<double, 3> c{0.0, 0.0, 0.0};
                    for (int a = 0; a < n; ++a) c[a] = -L + (idx[a] + 0.5) * step;
                    Ball b(c, r);
                    if (b.fits(grid)) out.push_back(b);
                }
    }
    return out;
}

namespace {

// integral over the ball of |g - g_B| (Euclidean across components)
double oscillation_l1(const DiscreteForm& g, const std::vector<std::size_t>& cells) {
    const int nc = g.component_count();
    std::vector<double> mean(static_cast<std::size_t>(nc), 0.0);
    for (int c = 0; c < nc; ++c) {
        double s = 0.0;
        for (std::size_t i : cells) s += g.comp(c)[i];
        mean[static_cast<std::size_t>(c)] = s / static_cast<double>(cells.size());
    }
    double acc = 0.0;
    for (std::size_t i : cells) {
        double v2 = 0.0;
        for (int c = 0; c < nc; ++c) {
            const double d = g.comp(c)[i] - mean[static_cast<std::size_t>(c)];
            v2 += d * d;
        }
        acc += std::sqrt(v2);
    }
    return acc * g.grid().cell_volume();
}

} // namespace

double bmo_wp_norm(const DiscreteForm& g, const GrowthFunction& gf,
                   const std::vector<Ball>& family, Ball* worst) {
    if (family.empty()) throw config_error("bmo_wp_norm: empty ball family");
    if (!all_finite(g)) throw numeric_error("bmo_wp_norm: non-finite field");
    const Grid& grid = g.grid();
    double sup = 0.0;
    for (const Ball& b : family) {
        const auto cells = cells_in_ball(grid, b);
        if (cells.size() < 2) continue;
        const double osc = oscillation_l1(g, cells);
        const double v = osc / chi_ball_norm(gf, grid, b);
        if (v > sup) {
            sup = v;
            if (worst) *worst = b;
        }
    }
    return sup;
}

double bmo_plus_norm(const DiscreteForm& g, const std::vector<Ball>& family) {
    const Grid& grid = g.grid();
    if (grid.half_length() < 1.0)
        throw config_error("bmo_plus_norm: the unit cube does not fit the box");
    // unit-cube L1 term
    double cube = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto x = grid.point(i);
        bool inside = true;
        for (int a = 0; a < grid.dim(); ++a)
            if (!(x[a] > 0.0 && x[a] < 1.0)) { inside = false; break; }
        if (inside) cube += g.norm_at(i);
    }
    cube *= grid.cell_volume();
    // classical seminorm: the p(x,t) = t specialization has ||chi_B|| = |B|
    return cube + bmo_wp_norm(g, GrowthFunction::power(1.0), family);
}

double bmo_plus_norm(const DiscreteForm& g) {
    return bmo_plus_norm(g, dyadic_ball_family(g.grid()));
}

double pairing(const DiscreteForm& g, const DiscreteForm& f,
               const std::optional<Ball>& f_support, double support_tol) {
    if (f.degree() + g.degree() != f.grid().dim())
        throw std::invalid_argument("pairing: degrees must sum to n");
    if (f_support && support_leak(f, *f_support) > support_tol)
        throw numeric_error("pairing: f leaks outside its declared support ball");
    DiscreteForm top = wedge(f, g);
    double s = 0.0;
    for (double v : top.comp(0)) s += v;
    return s * f.grid().cell_volume();
}

double john_nirenberg_certificate(const DiscreteForm& g, const GrowthFunction& gf, double q_prime,
                                  const std::vector<Ball>& family) {
    if (!(q_prime > 1.0)) throw config_error("john_nirenberg_certificate: q' must exceed 1");
    const Grid& grid = g.grid();
    const int n = grid.dim();
    const int nc = g.component_count();
    double sup = 0.0;
    for (const Ball& b : family) {
        const auto cells = cells_in_ball(grid, b);
        if (cells.size() < 2) continue;
        const double chi = chi_ball_norm(gf, grid, b);
        const double tau = 1.0 / chi;
        std::vector<double> mean(static_cast<std::size_t>(nc), 0.0);
        for (int c = 0; c < nc; ++c) {
            double s = 0.0;
            for (std::size_t i : cells) s += g.comp(c)[i];
            mean[static_cast<std::size_t>(c)] = s / static_cast<double>(cells.size());
        }
        double acc = 0.0;
        for (std::size_t i : cells) {
            double v2 = 0.0;
            for (int c = 0; c < nc; ++c) {
                const double d = g.comp(c)[i] - mean[static_cast<std::size_t>(c)];
                v2 += d * d;
            }
            const double w = eval_growth(gf, grid.point(i), n, tau);
            acc += std::pow(std::sqrt(v2), q_prime) * std::pow(w, 1.0 - q_prime);
        }
        acc *= grid.cell_volume();
        sup = std::max(sup, acc / chi);
    }
    return sup;
}

} // namespace hlog
