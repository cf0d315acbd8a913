#include "hlog/ball.hpp"

namespace hlog {

std::vector<std::size_t> cells_in_ball(const Grid& grid, const Ball& ball) {
    std::vector<std::size_t> out;
    const int n = grid.dim();
    const int N = grid.points_per_axis();
    // bounding box scan keeps this cheap for small balls
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < n; ++a) {
        const double h = grid.spacing();
        int l = static_cast<int>(std::floor((ball.center[a] - ball.radius + grid.half_length()) / h)) - 1;
        int u = static_cast<int>(std::ceil((ball.center[a] + ball.radius + grid.half_length()) / h)) + 1;
        lo[a] = std::max(0, l);
        hi[a] = std::min(N - 1, u);
        if (lo[a] > hi[a]) return out;
    }
    std::array<int, 3> idx = lo;
    while (true) {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < n; ++a) x[a] = grid.coord(idx[a]);
        if (ball.contains(x, n)) out.push_back(grid.flat(idx));
        int a = n - 1;
        while (a >= 0) {
            if (++idx[a] <= hi[a]) break;
            idx[a] = lo[a];
            --a;
        }
        if (a < 0) break;
    }
    return out;
}

double ball_measure(const Grid& grid, const Ball& ball) {
    return static_cast<double>(cells_in_ball(grid, ball).size()) * grid.cell_volume();
}

std::vector<double> chi_ball(const Grid& grid, const Ball& ball) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t f : cells_in_ball(grid, ball)) out[f] = 1.0;
    return out;
}

} // namespace hlog
