#include "hlog/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "hlog/exterior.hpp"

namespace hlog {

void add_window_bump(const Grid& grid, std::vector<double>& field,
                     const std::array<double, 3>& center, double rho, double amplitude,
                     int power) {
    if (power <= 0) {
        // adapt smoothness to the resolved width: high powers concentrate the
        // window and alias badly below ~6 cells
        const double cells = rho / grid.spacing();
        if (cells < 4.5) power = 4;
        else if (cells < 5.5) power = 6;
        else if (cells < 8.5) power = 8;
        else power = 10;
    }
    for (std::size_t i : cells_in_ball(grid, Ball(center, rho))) {
        auto x = grid.point(i);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double d = x[a] - center[a];
            r2 += d * d;
        }
        const double r = std::sqrt(r2) / rho;
        if (r < 1.0) field[i] += amplitude * std::pow(std::cos(M_PI * r / 2.0), power);
    }
}

DiscreteForm window_bump_form(const Grid& grid, int degree, const Ball& ball, double factor,
                              Rng& rng, int bumps) {
    DiscreteForm w(grid, degree);
    const double inner = factor * ball.radius;
    for (int c = 0; c < w.component_count(); ++c) {
        for (int b = 0; b < bumps; ++b) {
            const double rho = inner * rng.uniform(0.75, 0.95);
            std::array<double, 3> ctr{0.0, 0.0, 0.0};
            for (int a = 0; a < grid.dim(); ++a)
                ctr[a] = ball.center[a] + rng.uniform(-0.7, 0.7) * (inner - rho);
            const double amp = rng.uniform(0.4, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            add_window_bump(grid, w.comp(c), ctr, rho, amp);
        }
    }
    return w;
}

DiscreteForm closed_field_fixture(const Grid& grid, int degree, std::uint64_t seed,
                                  const Ball& support, int atoms) {
    Rng rng(seed ^ hash_label("closed_field"));
    DiscreteForm out(grid, degree);
    // sub-atoms must stay well resolved (window radius of several cells) or
    // their derivative tails dominate the field's effective support
    const double r_min = std::max(0.55 * support.radius, 6.0 * grid.spacing());
    const double r_max = std::max(0.75 * support.radius, r_min);
    for (int a = 0; a < atoms; ++a) {
        const double r = std::min(rng.uniform(r_min, r_max), support.radius);
        std::array<double, 3> c{0.0, 0.0, 0.0};
        for (int ax = 0; ax < grid.dim(); ++ax)
            c[ax] = support.center[ax] + rng.uniform(-1.0, 1.0) * std::max(0.0, support.radius - r);
        DiscreteForm w = window_bump_form(grid, degree - 1, Ball(c, r), 0.85, rng);
        DiscreteForm da = exterior_derivative(w);
        const double nrm = l2_norm(da);
        if (nrm > 0.0) {
            da *= rng.uniform(0.5, 1.5) / nrm;
            out += da;
        }
    }
    return out;
}

Ball random_ball(const Grid& grid, Rng& rng, double r_lo, double r_hi, double dilate) {
    const double L = grid.half_length();
    for (int tries = 0; tries < 256; ++tries) {
        const double r = rng.uniform(r_lo, r_hi);
        std::array<double, 3> c{0.0, 0.0, 0.0};
        bool ok = true;
        for (int a = 0; a < grid.dim(); ++a) {
            const double margin = dilate * r + 2.0 * grid.spacing();
            if (margin >= L) { ok = false; break; }
            c[a] = rng.uniform(-(L - margin), L - margin);
        }
        if (!ok) continue;
        Ball b(c, r);
        if (b.dilated(dilate).fits(grid)) return b;
    }
    throw numeric_error("random_ball: cannot place a ball with the given dilate");
}

Ball random_case1_ball(const Grid& grid, Rng& rng) {
    const double L = grid.half_length();
    for (int tries = 0; tries < 512; ++tries) {
        const double r = rng.uniform(0.35, 0.7);
        std::array<double, 3> c{0.0, 0.0, 0.0};
        bool ok = true;
        for (int a = 0; a < grid.dim(); ++a) {
            const double lo = 2.0 * r;                      // case-I condition per axis
            const double hi = L - 2.0 * r - 2.0 * grid.spacing(); // 2B inside the box
            if (lo >= hi) { ok = false; break; }
            const double mag = rng.uniform(lo, hi);
            c[a] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * mag;
        }
        if (!ok) continue;
        Ball b(c, r);
        bool case1 = true;
        for (int a = 0; a < grid.dim(); ++a)
            if (!(r <= std::min(1.0, std::abs(c[a]) / 2.0))) case1 = false;
        if (case1 && b.dilated(2.0).fits(grid)) return b;
    }
    throw numeric_error("random_case1_ball: cannot place a case-I ball");
}

Ball random_case2_ball(const Grid& grid, Rng& rng) {
    const double L = grid.half_length();
    for (int tries = 0; tries < 512; ++tries) {
        const double r = rng.uniform(0.8, 0.22 * L);
        std::array<double, 3> c{0.0, 0.0, 0.0};
        for (int a = 0; a < grid.dim(); ++a) c[a] = rng.uniform(-0.4, 0.4);
        Ball b(c, r);
        bool case2 = true;
        for (int a = 0; a < grid.dim(); ++a)
            if (r < std::min(1.0, std::abs(c[a]) / 2.0)) case2 = false;
        if (case2 && b.dilated(2.0).fits(grid)) return b;
    }
    throw numeric_error("random_case2_ball: cannot place a case-II ball");
}

DiscreteForm bmo_field_fixture(const Grid& grid, int degree, std::uint64_t seed) {
    Rng rng(seed ^ hash_label("bmo_field"));
    const int n = grid.dim();
    DiscreteForm out(grid, degree);
    // capped log profile along one axis wedged into a closed form, plus a
    // small exact part
    const int axis = rng.uniform_int(0, n - 1);
    const double cap = rng.uniform(4.0, 16.0);
    if (degree >= 1) {
        // G(x_axis) dx_axis is closed; embed it in the first component that
        // contains the axis
        const auto& tuples = form_tuples(n, degree);
        int target = 0;
        for (std::size_t c = 0; c < tuples.size(); ++c) {
            // closedness needs the axis inside the tuple: dx_axis ^ dx_I = 0
            if (std::find(tuples[c].begin(), tuples[c].end(), axis) != tuples[c].end()) {
                target = static_cast<int>(c);
                break;
            }
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto x = grid.point(i);
            out.comp(target)[i] =
                std::min(std::log(M_E + 2.0 * std::abs(x[axis])), std::log(M_E + cap));
        }
    }
    Ball support({0.0, 0.0, 0.0}, 0.45 * grid.half_length());
    DiscreteForm exact = closed_field_fixture(grid, degree, seed ^ 0x9e37ULL, support, 2);
    const double nrm = l2_norm(exact);
    if (nrm > 0.0) {
        exact *= rng.uniform(0.2, 0.8) / nrm;
        out += exact;
    }
    return out;
}

} // namespace hlog
