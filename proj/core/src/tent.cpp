#include "hlog/tent.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hlog {

namespace {

constexpr double kFar = 1e30;

} // namespace

std::vector<double> periodic_distance_sq(const Grid& grid, const std::vector<char>& mask) {
    // squared Euclidean distance (periodic, cell centers) to the nearest cell
    // outside the mask; separable min-convolution with per-axis wrapped
    // squared distances, brute per line (desk-scale grids)
    const int n = grid.dim();
    const int N = grid.points_per_axis();
    const double h = grid.spacing();

    std::vector<double> dist(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) dist[i] = mask[i] ? kFar : 0.0;

    std::vector<double> w2(static_cast<std::size_t>(N), 0.0);
    for (int d = 0; d < N; ++d) {
        const int wrapped = std::min(d, N - d);
        w2[static_cast<std::size_t>(d)] = static_cast<double>(wrapped) * wrapped * h * h;
    }

    std::vector<double> line(static_cast<std::size_t>(N), 0.0);
    std::vector<double> out_line(static_cast<std::size_t>(N), 0.0);
    for (int axis = 0; axis < n; ++axis) {
        const std::size_t lines = grid.size() / static_cast<std::size_t>(N);
        for (std::size_t ln = 0; ln < lines; ++ln) {
            std::array<int, 3> idx{0, 0, 0};
            std::size_t rem = ln;
            for (int a = n - 1; a >= 0; --a) {
                if (a == axis) continue;
                idx[a] = static_cast<int>(rem % N);
                rem /= N;
            }
            for (int j = 0; j < N; ++j) {
                idx[axis] = j;
                line[static_cast<std::size_t>(j)] = dist[grid.flat(idx)];
            }
            for (int i = 0; i < N; ++i) {
                double best = kFar;
                for (int j = 0; j < N; ++j) {
                    const double v = line[static_cast<std::size_t>(j)];
                    if (v >= kFar) continue;
                    best = std::min(best, v + w2[static_cast<std::size_t>(std::abs(i - j))]);
                }
                out_line[static_cast<std::size_t>(i)] = best;
            }
            for (int j = 0; j < N; ++j) {
                idx[axis] = j;
                dist[grid.flat(idx)] = out_line[static_cast<std::size_t>(j)];
            }
        }
    }
    return dist;
}

SpaceTimeField TentAtom::dense(const Grid& grid, int degree,
                               const std::vector<double>& levels) const {
    SpaceTimeField out(grid, degree, levels);
    for (const auto& e : entries)
        for (std::size_t c = 0; c < e.values.size(); ++c)
            out.slices[static_cast<std::size_t>(e.level)].comp(static_cast<int>(c))[e.cell] =
                e.values[c];
    return out;
}

TentDecomposition tent_decompose(const SpaceTimeField& F, const GrowthFunction& gf,
                                 const TentOptions& opts) {
    const Grid& grid = F.grid;
    const int n = grid.dim();
    const int N = grid.points_per_axis();
    const double h = grid.spacing();
    const double t_max = F.levels.empty() ? 0.0 : F.levels.back();

    TentDecomposition out;
    out.degree = F.degree;
    out.levels = F.levels;

    auto S = area_function(F);
    double sup_S = 0.0;
    for (double v : S) {
        if (!std::isfinite(v)) throw numeric_error("tent_decompose: unbounded area function");
        sup_S = std::max(sup_S, v);
    }
    if (sup_S == 0.0) return out;

    struct STCell {
        int level;
        std::size_t cell;
    };
    double fmax = 0.0;
    for (std::size_t k = 0; k < F.levels.size(); ++k)
        for (std::size_t i = 0; i < grid.size(); ++i)
            fmax = std::max(fmax, F.slices[k].norm_at(i));
    // cells at the machine-noise floor are treated as empty: their cone
    // values underflow in the area function and could never be covered
    const double noise_floor = 1e-14 * fmax;
    std::vector<STCell> todo;
    double f_mass2 = 0.0;
    for (std::size_t k = 0; k < F.levels.size(); ++k)
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (F.slices[k].norm_at(i) > noise_floor) {
                todo.push_back({static_cast<int>(k), i});
                f_mass2 += F.slices[k].norm_at(i) * F.slices[k].norm_at(i);
            }
    if (todo.empty()) return out;

    std::vector<char> assigned(todo.size(), 0);
    std::size_t unassigned = todo.size();

    // cube side cap keeps the emitted balls (and their doubles, when the
    // geometry allows) inside the box
    int side_cap = opts.side_cap_cells;
    if (side_cap <= 0) side_cap = static_cast<int>(std::floor(t_max / h));
    side_cap = std::max(1, std::min(N / 8, side_cap));
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    const int k_max = static_cast<int>(std::ceil(std::log2(sup_S)));

    struct Piece {
        Ball ball;
        std::vector<TentAtom::Entry> entries;
    };

    int k = k_max - 1;
    for (int sweep = 0; sweep < opts.max_level_sets && unassigned > 0; ++sweep, --k) {
        const double threshold = std::ldexp(1.0, k);
        if (opts.drop_threshold > 0.0 && threshold < opts.drop_threshold * sup_S) {
            unassigned = 0; // remainder is negligible by the stopping rule
            break;
        }
        std::vector<char> O(grid.size(), 0);
        bool any = false;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            O[i] = S[i] > threshold ? 1 : 0;
            any = any || O[i];
        }
        if (!any) continue;

        auto dist2 = periodic_distance_sq(grid, O);

        // conservative Chebyshev distance (cells) from the Euclidean one
        auto cheb_of = [&](std::size_t cell) {
            const double d = std::sqrt(std::max(0.0, std::min(dist2[cell], 1e28)));
            return static_cast<int>(std::floor(d / (h * sqrt_n)));
        };

        std::map<std::pair<int, std::size_t>, Piece> pieces; // (side, corner) -> piece
        auto cube_of = [&](std::size_t cell) {
            int side = 1;
            const int dinf = cheb_of(cell);
            while (2 * side * 4 <= dinf && 2 * side <= side_cap) side *= 2;
            auto idx = grid.unflat(cell);
            std::array<int, 3> corner{0, 0, 0};
            for (int a = 0; a < n; ++a) corner[a] = (idx[a] / side) * side;
            return std::make_pair(side, grid.flat(corner));
        };

        for (std::size_t q = 0; q < todo.size(); ++q) {
            if (assigned[q]) continue;
            const auto [lvl, cell] = todo[q];
            const double t = F.levels[static_cast<std::size_t>(lvl)];
            if (!(t * t <= dist2[cell])) continue; // outside T(O_k)
            auto& piece = pieces[cube_of(cell)];
            TentAtom::Entry e;
            e.level = lvl;
            e.cell = cell;
            const auto& slice = F.slices[static_cast<std::size_t>(lvl)];
            e.values.resize(static_cast<std::size_t>(slice.component_count()));
            for (int c = 0; c < slice.component_count(); ++c)
                e.values[static_cast<std::size_t>(c)] = slice.comp(c)[cell];
            piece.entries.push_back(std::move(e));
            assigned[q] = 1;
            --unassigned;
        }

        for (auto& [key, piece] : pieces) {
            const int side = key.first;
            auto corner = grid.unflat(key.second);
            std::array<double, 3> center{0.0, 0.0, 0.0};
            for (int a = 0; a < n; ++a)
                center[a] = grid.coord(corner[a]) + 0.5 * (side - 1) * h;
            double R = 0.0;
            for (const auto& e : piece.entries) {
                auto y = grid.point(e.cell);
                double dy = 0.0;
                for (int a = 0; a < n; ++a) {
                    const double dd = grid.wrap(y[a] - center[a]);
                    dy += dd * dd;
                }
                const double reach = std::min(std::sqrt(std::max(0.0, std::min(dist2[e.cell], 1e28))),
                                              t_max * (1.0 + 1e-12));
                R = std::max(R, std::sqrt(dy) + reach);
            }
            R = std::max(R, 2.0 * h); // keep the discrete ball nonempty
            piece.ball = Ball(center, R * (1.0 + 1e-12));
        }

        // deterministic emission: larger cubes first, then corner order
        std::vector<const std::pair<const std::pair<int, std::size_t>, Piece>*> order;
        order.reserve(pieces.size());
        for (const auto& kv : pieces) order.push_back(&kv);
        std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
            if (a->first.first != b->first.first) return a->first.first > b->first.first;
            return a->first.second < b->first.second;
        });
        for (const auto* kv : order) {
            const Piece& piece = kv->second;
            if (piece.entries.empty()) continue;
            if (opts.min_piece_mass > 0.0) {
                double p2 = 0.0;
                for (const auto& e : piece.entries)
                    for (double v : e.values) p2 += v * v;
                if (p2 <= opts.min_piece_mass * opts.min_piece_mass * f_mass2) continue;
            }
            TentAtom atom;
            atom.ball = piece.ball;
            atom.tilde_fits = piece.ball.dilated(2.0).fits(grid);
            atom.entries = piece.entries;

            const double chi = chi_ball_norm(gf, grid, atom.ball);
            double lambda = 0.0;
            SpaceTimeField dense = atom.dense(grid, F.degree, F.levels);
            auto SA = area_function(dense);
            const double measure = ball_measure(grid, atom.ball);
            for (double p : opts.size_exponents) {
                double lp = 0.0;
                for (double v : SA) lp += std::pow(v, p);
                lp = std::pow(lp * grid.cell_volume(), 1.0 / p);
                lambda = std::max(lambda, lp * chi / std::pow(measure, 1.0 / p));
            }
            if (lambda == 0.0) continue;
            for (auto& e : atom.entries)
                for (auto& v : e.values) v /= lambda;
            out.weights.push_back(lambda);
            out.atoms.push_back(std::move(atom));
        }
    }

    if (unassigned > 0)
        throw numeric_error("tent_decompose: stopping-time sweep did not cover the support");

    if (!out.atoms.empty()) {
        std::vector<double> sizes;
        for (std::size_t j = 0; j < out.atoms.size(); ++j)
            sizes.push_back(std::abs(out.weights[j]) /
                            chi_ball_norm(gf, grid, out.atoms[j].ball));
        auto total = [&](double lam) {
            double s = 0.0;
            for (std::size_t j = 0; j < out.atoms.size(); ++j)
                s += wp_ball_mass(gf, grid, out.atoms[j].ball, sizes[j] / lam);
            return s;
        };
        double hi = *std::max_element(sizes.begin(), sizes.end());
        if (hi > 0.0) {
            int guard = 0;
            while (total(hi) > 1.0 && ++guard < 2000) hi *= 2.0;
            double lo = hi;
            guard = 0;
            while (total(lo * 0.5) <= 1.0 && ++guard < 2000) lo *= 0.5;
            lo *= 0.5;
            while (hi - lo > opts.tol * hi) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (total(mid) <= 1.0 ? hi : lo) = mid;
            }
            out.weight_functional = hi;
        }
    }
    return out;
}

SpaceTimeField tent_reassemble(const TentDecomposition& td, const Grid& grid) {
    SpaceTimeField out(grid, td.degree, td.levels);
    for (std::size_t j = 0; j < td.atoms.size(); ++j) {
        const double w = td.weights[j];
        for (const auto& e : td.atoms[j].entries)
            for (std::size_t c = 0; c < e.values.size(); ++c)
                out.slices[static_cast<std::size_t>(e.level)].comp(static_cast<int>(c))[e.cell] +=
                    w * e.values[c];
    }
    return out;
}

DiscreteForm pi_phi_form(const Grid& grid, const TentAtom& atom, int degree,
                         const std::vector<double>& levels, const Mollifier& m) {
    std::vector<double> w(levels.size(), std::log(2.0));
    if (levels.size() > 1) {
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const double left = (k == 0) ? std::log(levels[1] / levels[0])
                                         : std::log(levels[k] / levels[k - 1]);
            const double right = (k + 1 == levels.size())
                                     ? std::log(levels[k] / levels[k - 1])
                                     : std::log(levels[k + 1] / levels[k]);
            w[k] = 0.5 * (left + right);
        }
    }
    SpaceTimeField dense = atom.dense(grid, degree, levels);
    DiscreteForm out(grid, degree);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        bool empty = true;
        for (int c = 0; c < dense.slices[k].component_count() && empty; ++c)
            for (double v : dense.slices[k].comp(c))
                if (v != 0.0) { empty = false; break; }
        if (empty) continue;
        DiscreteForm conv = mollify(dense.slices[k], levels[k], m);
        conv *= w[k];
        out += conv;
    }
    return out;
}

Atom pi_phi(const Grid& grid, const TentAtom& atom, int degree,
            const std::vector<double>& levels, const Mollifier& m,
            const AdmissibleTriple& triple) {
    DiscreteForm form = pi_phi_form(grid, atom, degree, levels, m);
    const Ball related = atom.tilde_fits ? atom.ball.dilated(2.0) : atom.ball;
    Atom a(std::move(form), related, triple, false);
    a.validation = validate_atom(a);
    return a;
}

} // namespace hlog
