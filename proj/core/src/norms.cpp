#include "hlog/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <string>

namespace hlog {

std::vector<double> dyadic_levels(int K) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * K + 1));
    for (int k = -K; k <= K; ++k) out.push_back(std::ldexp(1.0, k));
    return out;
}

namespace {

double lux_integral(const GrowthFunction& gf, const Grid& grid, const std::vector<double>& abs_f,
                    double lambda) {
    const int n = grid.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < abs_f.size(); ++i) {
        const double v = abs_f[i];
        if (v == 0.0) continue; // p(x,0) = 0
        s += eval_growth(gf, grid.point(i), n, v / lambda);
    }
    return s * grid.cell_volume();
}

} // namespace

double luxembourg_norm(const GrowthFunction& gf, const Grid& grid,
                       const std::vector<double>& abs_f, double tol) {
    if (!(tol > 0.0)) throw config_error("luxembourg_norm: tol must be positive");
    double vmax = 0.0;
    for (double v : abs_f) {
        if (!std::isfinite(v)) throw numeric_error("luxembourg_norm: non-finite sample");
        vmax = std::max(vmax, std::abs(v));
    }
    if (vmax == 0.0) return 0.0;

    // bracket by doubling/halving around max|f|
    double hi = vmax;
    int guard = 0;
    while (lux_integral(gf, grid, abs_f, hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 2000) throw numeric_error("luxembourg_norm: no upper bracket");
    }
    double lo = hi;
    guard = 0;
    while (lux_integral(gf, grid, abs_f, lo * 0.5) <= 1.0) {
        lo *= 0.5;
        if (++guard > 2000) { lo = 0.0; break; }
    }
    if (lo > 0.0) lo *= 0.5;

    // lo has integral > 1 (or is 0), hi has integral <= 1
    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (lux_integral(gf, grid, abs_f, mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double luxembourg_norm(const GrowthFunction& gf, const DiscreteForm& f, double tol) {
    return luxembourg_norm(gf, f.grid(), f.pointwise_norm(), tol);
}

double wp_ball_mass(const GrowthFunction& gf, const Grid& grid,
                    const std::vector<std::size_t>& ball_cells, double t) {
    if (ball_cells.empty()) throw numeric_error("wp_ball_mass: empty discrete ball");
    if (t == 0.0) return 0.0;
    const int n = grid.dim();
    double s = 0.0;
    for (std::size_t f : ball_cells) s += eval_growth(gf, grid.point(f), n, t);
    return s * grid.cell_volume();
}

double wp_ball_mass(const GrowthFunction& gf, const Grid& grid, const Ball& ball, double t) {
    return wp_ball_mass(gf, grid, cells_in_ball(grid, ball), t);
}

double support_leak(const DiscreteForm& f, const Ball& ball) {
    const Grid& grid = f.grid();
    std::vector<char> inside(grid.size(), 0);
    for (std::size_t c : cells_in_ball(grid, ball)) inside[c] = 1;
    double out = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v2 = f.norm_at(i) * f.norm_at(i);
        tot += v2;
        if (!inside[i]) out += v2;
    }
    if (tot == 0.0) return 0.0;
    return std::sqrt(out / tot);
}

double lq_wp_ball_norm(const AdmissibleTriple& triple, const DiscreteForm& f, const Ball& ball,
                       int level_K, double leak_tol) {
    const Grid& grid = f.grid();
    const double leak = support_leak(f, ball);
    if (leak > leak_tol)
        throw numeric_error("lq_wp_ball_norm: support leaks outside the ball");
    const auto cells = cells_in_ball(grid, ball);
    if (cells.empty()) throw numeric_error("lq_wp_ball_norm: empty discrete ball");

    const auto& gf = triple.growth;
    const double q = triple.q;
    const int n = grid.dim();
    const auto abs_f = f.pointwise_norm();

    double sup = 0.0;
    for (double t : dyadic_levels(level_K)) {
        const double mass = wp_ball_mass(gf, grid, cells, t);
        if (!(mass > 0.0)) continue;
        double num = 0.0;
        for (std::size_t i = 0; i < abs_f.size(); ++i) {
            if (abs_f[i] == 0.0) continue;
            num += std::pow(abs_f[i], q) * eval_growth(gf, grid.point(i), n, t);
        }
        num *= grid.cell_volume();
        sup = std::max(sup, std::pow(num / mass, 1.0 / q));
    }
    return sup;
}

namespace {

std::string cache_key(const GrowthFunction& gf, const Grid& grid, const Ball& ball, double tol) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s|%d|%d|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g",
                  gf.name.c_str(), grid.dim(), grid.points_per_axis(), grid.half_length(),
                  ball.center[0], ball.center[1], ball.center[2], ball.radius, tol);
    return std::string(buf);
}

} // namespace

double chi_ball_norm(const GrowthFunction& gf, const Grid& grid, const Ball& ball, double tol) {
    static std::mutex mtx;
    static std::map<std::string, double> cache; // idempotent entries, last writer wins
    const std::string key = cache_key(gf, grid, ball, tol);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double value = luxembourg_norm(gf, grid, chi_ball(grid, ball), tol);
    {
        std::lock_guard<std::mutex> lock(mtx);
        cache[key] = value;
    }
    return value;
}

double check_muckenhoupt(const GrowthFunction& gf, const Grid& grid, double q,
                         const std::vector<Ball>& balls, const std::vector<double>& levels) {
    if (!(q > 1.0)) throw config_error("check_muckenhoupt: q must exceed 1");
    const int n = grid.dim();
    double sup = 0.0;
    for (const Ball& ball : balls) {
        const auto cells = cells_in_ball(grid, ball);
        if (cells.empty()) continue;
        const double inv_count = 1.0 / static_cast<double>(cells.size());
        for (double t : levels) {
            if (!(t > 0.0)) throw config_error("check_muckenhoupt: levels must be positive");
            double avg = 0.0, avg_dual = 0.0;
            for (std::size_t c : cells) {
                const double w = eval_growth(gf, grid.point(c), n, t);
                if (w == 0.0)
                    throw numeric_error("check_muckenhoupt: weight vanishes on a cell");
                avg += w;
                avg_dual += std::pow(w, -1.0 / (q - 1.0));
            }
            avg *= inv_count;
            avg_dual *= inv_count;
            sup = std::max(sup, avg * std::pow(avg_dual, q - 1.0));
        }
    }
    return sup;
}

GrowthClassReport check_growth_class(const GrowthFunction& gf, const Grid& grid,
                                     double lower_type_p) {
    GrowthClassReport rep;
    const int n = grid.dim();

    // sample lattice: a few points across the box, log-spaced levels and scales
    std::vector<std::array<double, 3>> xs;
    for (double c : {0.03, 0.8, 2.5, -3.1}) {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < n; ++a) x[a] = c * (a % 2 == 0 ? 1.0 : -0.6);
        xs.push_back(x);
    }
    std::vector<double> ts, ss_low, ss_high;
    for (int k = -12; k <= 12; ++k) ts.push_back(std::ldexp(1.0, k));
    for (int k = -12; k <= 0; ++k) ss_low.push_back(std::ldexp(1.0, k));
    for (int k = 0; k <= 12; ++k) ss_high.push_back(std::ldexp(1.0, k));

    rep.orlicz_ok = true;
    for (const auto& x : xs) {
        if (eval_growth(gf, x, n, 0.0) != 0.0) rep.orlicz_ok = false;
        double prev = 0.0;
        for (double t : ts) {
            const double v = eval_growth(gf, x, n, t);
            if (!(v > 0.0) || v + 1e-15 < prev) rep.orlicz_ok = false;
            prev = v;
        }
        if (eval_growth(gf, x, n, 1e9) < 1e3 * eval_growth(gf, x, n, 1.0)) rep.orlicz_ok = false;
    }

    for (const auto& x : xs) {
        for (double t : ts) {
            const double base = eval_growth(gf, x, n, t);
            if (!(base > 0.0)) continue;
            for (double s : ss_low)
                rep.lower_type_constant = std::max(
                    rep.lower_type_constant,
                    eval_growth(gf, x, n, s * t) / (std::pow(s, lower_type_p) * base));
            for (double s : ss_high)
                rep.upper_type_constant = std::max(
                    rep.upper_type_constant, eval_growth(gf, x, n, s * t) / (s * base));
        }
    }
    return rep;
}

} // namespace hlog
