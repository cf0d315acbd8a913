#include "hlog/atoms.hpp"

#include <cmath>
#include <limits>

#include "hlog/exterior.hpp"
#include "hlog/fixtures.hpp"
#include "hlog/rng.hpp"

namespace hlog {

namespace {

// smooth bump of radius rho at center c, sampled with hard compact support
void add_bump(const Grid& grid, std::vector<double>& field, const std::array<double, 3>& c,
              double rho, double amplitude) {
    Ball b(c, rho);
    for (std::size_t i : cells_in_ball(grid, b)) {
        auto x = grid.point(i);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double d = x[a] - c[a];
            r2 += d * d;
        }
        r2 /= rho * rho;
        if (r2 < 1.0) field[i] += amplitude * std::exp(-1.0 / (1.0 - r2));
    }
}

// enumerate multi-indices |gamma| <= s
std::vector<std::array<int, 3>> monomials_through(int n, int s) {
    std::vector<std::array<int, 3>> out;
    for (int total = 0; total <= s; ++total) {
        std::array<int, 3> g{0, 0, 0};
        if (n == 2) {
            for (int a = 0; a <= total; ++a) {
                g[0] = a;
                g[1] = total - a;
                out.push_back(g);
            }
        } else {
            for (int a = 0; a <= total; ++a)
                for (int b = 0; a + b <= total; ++b) {
                    g[0] = a;
                    g[1] = b;
                    g[2] = total - a - b;
                    out.push_back(g);
                }
        }
    }
    return out;
}

// subtract a same-support combination of monomial-weighted windows so that
// the discrete moments of `field` through order s vanish exactly (moments
// taken about `center`)
void correct_moments_in_place(const Grid& grid, std::vector<double>& field,
                              const std::array<double, 3>& center, double window_radius, int s) {
    if (s < 0) return;
    const int n = grid.dim();
    Ball wb(center, window_radius);
    const auto cells = cells_in_ball(grid, wb);
    if (cells.empty()) return;

    std::vector<double> window(cells.size(), 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto x = grid.point(cells[i]);
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            const double d = x[a] - center[a];
            r2 += d * d;
        }
        r2 /= window_radius * window_radius;
        if (r2 < 1.0) window[i] = std::exp(-1.0 / (1.0 - r2));
    }

    const auto monos = monomials_through(n, s);
    const std::size_t M = monos.size();
    auto mono_at = [&](std::size_t cell, const std::array<int, 3>& gmm) {
        auto x = grid.point(cell);
        double v = 1.0;
        for (int a = 0; a < n; ++a) v *= std::pow(x[a] - center[a], gmm[a]);
        return v;
    };

    std::vector<std::vector<double>> A(M, std::vector<double>(M, 0.0));
    std::vector<double> rhs(M, 0.0);
    for (std::size_t q = 0; q < M; ++q) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double mq = mono_at(cells[i], monos[q]);
            for (std::size_t p = 0; p < M; ++p)
                A[q][p] += window[i] * mono_at(cells[i], monos[p]) * mq;
        }
        // the field may extend beyond the window: full moments on the right
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (field[i] == 0.0) continue;
            rhs[q] += field[i] * mono_at(i, monos[q]);
        }
    }

    std::vector<double> c(M, 0.0);
    for (std::size_t col = 0; col < M; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < M; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (std::abs(A[col][col]) < 1e-300) continue;
        for (std::size_t r = col + 1; r < M; ++r) {
            const double f = A[r][col] / A[col][col];
            for (std::size_t cc = col; cc < M; ++cc) A[r][cc] -= f * A[col][cc];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t col = M; col-- > 0;) {
        double sum = rhs[col];
        for (std::size_t cc = col + 1; cc < M; ++cc) sum -= A[col][cc] * c[cc];
        c[col] = std::abs(A[col][col]) < 1e-300 ? 0.0 : sum / A[col][col];
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        double corr = 0.0;
        for (std::size_t q = 0; q < M; ++q) corr += c[q] * mono_at(cells[i], monos[q]) * window[i];
        field[cells[i]] -= corr;
    }
}

// Exact-moment correction for closed atoms: subtract a combination of d of
// auxiliary window (l-1)-forms so the discrete moments of orders 1..s vanish
// exactly (order 0 is exact already).  The correction stays closed by
// construction and supported in the inner ball.
void cancel_closed_moments(const Grid& grid, DiscreteForm& form, const Ball& ball,
                           double inner_r, int s, Rng& rng) {
    const int n = grid.dim();
    const int degree = form.degree();

    std::vector<std::array<int, 3>> monos;
    for (const auto& g : monomials_through(n, s))
        if (g[0] + g[1] + g[2] >= 1) monos.push_back(g);

    auto moments_of = [&](const DiscreteForm& f) {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(f.component_count()) * monos.size());
        for (int c = 0; c < f.component_count(); ++c) {
            for (const auto& gmm : monos) {
                double m = 0.0;
                const auto& comp = f.comp(c);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    if (comp[i] == 0.0) continue;
                    auto x = grid.point(i);
                    double v = comp[i];
                    for (int a = 0; a < n; ++a)
                        v *= std::pow(x[a] - ball.center[a], gmm[a]);
                    m += v;
                }
                out.push_back(m * grid.cell_volume());
            }
        }
        return out;
    };

    const std::size_t constraints = moments_of(form).size();
    const std::size_t nbasis = 2 * constraints + 4;
    std::vector<DiscreteForm> basis;
    std::vector<std::vector<double>> basis_moments;
    for (std::size_t q = 0; q < nbasis; ++q) {
        DiscreteForm wq(grid, degree - 1);
        const int comp = rng.uniform_int(0, wq.component_count() - 1);
        const double rho = inner_r * rng.uniform(0.35, 0.55);
        std::array<double, 3> ctr{0.0, 0.0, 0.0};
        for (int a = 0; a < n; ++a)
            ctr[a] = ball.center[a] + rng.uniform(-0.8, 0.8) * (inner_r - rho);
        add_window_bump(grid, wq.comp(comp), ctr, rho, 1.0);
        basis.push_back(exterior_derivative(wq));
        basis_moments.push_back(moments_of(basis.back()));
    }

    // least squares for the correction coefficients (normal equations of the
    // tall moment matrix, tiny system)
    const auto target = moments_of(form);
    const std::size_t M = nbasis;
    std::vector<std::vector<double>> A(M, std::vector<double>(M, 0.0));
    std::vector<double> rhs(M, 0.0);
    for (std::size_t p = 0; p < M; ++p) {
        for (std::size_t q = 0; q < M; ++q)
            for (std::size_t r = 0; r < constraints; ++r)
                A[p][q] += basis_moments[p][r] * basis_moments[q][r];
        for (std::size_t r = 0; r < constraints; ++r) rhs[p] += basis_moments[p][r] * target[r];
        A[p][p] += 1e-12 * (A[p][p] + 1.0);
    }
    std::vector<double> c(M, 0.0);
    for (std::size_t col = 0; col < M; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < M; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (std::abs(A[col][col]) < 1e-300) continue;
        for (std::size_t r = col + 1; r < M; ++r) {
            const double f = A[r][col] / A[col][col];
            for (std::size_t cc = col; cc < M; ++cc) A[r][cc] -= f * A[col][cc];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t col = M; col-- > 0;) {
        double sum = rhs[col];
        for (std::size_t cc = col + 1; cc < M; ++cc) sum -= A[col][cc] * c[cc];
        c[col] = std::abs(A[col][col]) < 1e-300 ? 0.0 : sum / A[col][col];
    }
    for (std::size_t q = 0; q < M; ++q) {
        if (c[q] == 0.0) continue;
        DiscreteForm term = basis[q];
        term *= c[q];
        form -= term;
    }
}

} // namespace

Atom make_atom(const Grid& grid, const Ball& ball, const AdmissibleTriple& triple, int degree,
               bool closed, const AtomRecipe& recipe) {
    const int n = grid.dim();
    if (!ball.fits(grid)) throw numeric_error("make_atom: ball outside the box");
    if (degree < 1 || degree > n) throw config_error("make_atom: degree out of range");
    const double inner_r = recipe.support_factor * ball.radius;
    if (inner_r < 3.0 * grid.spacing())
        throw numeric_error("make_atom: infeasible size/support combination (ball too small)");

    Rng rng(recipe.seed);
    const int s = triple.s;

    DiscreteForm form(grid, degree);
    if (closed) {
        // d of a hard-supported primitive: grid-exactly closed and zero-mean
        DiscreteForm w(grid, degree - 1);
        for (int c = 0; c < w.component_count(); ++c) {
            for (int b = 0; b < recipe.bumps; ++b) {
                std::array<double, 3> ctr{0.0, 0.0, 0.0};
                const double rho = inner_r * rng.uniform(0.75, 0.95);
                for (int a = 0; a < n; ++a)
                    ctr[a] = ball.center[a] + rng.uniform(-1.0, 1.0) * (inner_r - rho);
                add_window_bump(grid, w.comp(c), ctr, rho,
                                rng.uniform(0.4, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0));
            }
        }
        form = exterior_derivative(w);
        if (s >= 1) cancel_closed_moments(grid, form, ball, inner_r, s, rng);
    } else {
        for (int c = 0; c < form.component_count(); ++c) {
            for (int b = 0; b < recipe.bumps; ++b) {
                std::array<double, 3> ctr{0.0, 0.0, 0.0};
                const double rho = inner_r * rng.uniform(0.7, 0.95);
                for (int a = 0; a < n; ++a)
                    ctr[a] = ball.center[a] + rng.uniform(-1.0, 1.0) * (inner_r - rho);
                add_window_bump(grid, form.comp(c), ctr, rho,
                                rng.uniform(0.4, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0));
            }
            correct_moments_in_place(grid, form.comp(c), ball.center, inner_r, s);
        }
    }

    Atom atom(std::move(form), ball, triple, closed);
    // saturate the size bound: the L^q_p(B) norm is 1-homogeneous
    const double ratio = lq_wp_ball_norm(triple, atom.form, ball, 20, 1.0) *
                         chi_ball_norm(triple.growth, grid, ball);
    if (!(ratio > 0.0)) throw numeric_error("make_atom: degenerate atom (zero norm)");
    atom.form *= 1.0 / ratio;
    atom.validation = validate_atom(atom);
    return atom;
}

AtomValidation validate_atom(const Atom& atom, int level_K) {
    AtomValidation v;
    const Grid& grid = atom.form.grid();
    const int n = grid.dim();

    v.support_leak = support_leak(atom.form, atom.ball);
    try {
        v.size_ratio = lq_wp_ball_norm(atom.triple, atom.form, atom.ball, level_K, 1.0) *
                       chi_ball_norm(atom.triple.growth, grid, atom.ball);
    } catch (const numeric_error&) {
        v.size_ratio = std::numeric_limits<double>::infinity();
    }

    // moment residuals about the ball center, normalized by the L1 mass and
    // the ball radius to the moment order
    double l1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) l1 += atom.form.norm_at(i);
    l1 *= grid.cell_volume();
    const auto monos = monomials_through(n, atom.triple.s);
    for (int c = 0; c < atom.form.component_count(); ++c) {
        const auto& comp = atom.form.comp(c);
        for (const auto& gmm : monos) {
            double m = 0.0;
            int order = gmm[0] + gmm[1] + gmm[2];
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (comp[i] == 0.0) continue;
                auto x = grid.point(i);
                double v2 = comp[i];
                for (int a = 0; a < n; ++a)
                    v2 *= std::pow(x[a] - atom.ball.center[a], gmm[a]);
                m += v2;
            }
            m *= grid.cell_volume();
            const double scale = l1 * std::pow(atom.ball.radius, order);
            if (scale > 0.0)
                v.max_moment_residual = std::max(v.max_moment_residual, std::abs(m) / scale);
        }
    }

    v.d_residual = atom.closed ? d_residual(atom.form) : 0.0;
    v.checked = true;
    return v;
}

double nq_functional(const std::vector<std::pair<double, const Atom*>>& items, double tol,
                     int level_K) {
    std::vector<double> sizes;
    std::vector<const Atom*> atoms;
    for (const auto& [w, a] : items) {
        if (w == 0.0) continue;
        sizes.push_back(std::abs(w) * lq_wp_ball_norm(a->triple, a->form, a->ball, level_K, 1.0));
        atoms.push_back(a);
    }
    if (sizes.empty()) return 0.0;

    auto total = [&](double lam) {
        double s = 0.0;
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            if (sizes[j] == 0.0) continue;
            s += wp_ball_mass(atoms[j]->triple.growth, atoms[j]->form.grid(), atoms[j]->ball,
                              sizes[j] / lam);
        }
        return s;
    };

    double hi = 0.0;
    for (double s : sizes) hi = std::max(hi, s);
    if (hi == 0.0) return 0.0;
    int guard = 0;
    while (total(hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 2000) throw numeric_error("nq_functional: no upper bracket");
    }
    double lo = hi;
    guard = 0;
    while (total(lo * 0.5) <= 1.0) {
        lo *= 0.5;
        if (++guard > 2000) { lo = 0.0; break; }
    }
    if (lo > 0.0) lo *= 0.5;
    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (total(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double nq_functional(const AtomicDecomposition& decomp, double tol, int level_K) {
    std::vector<std::pair<double, const Atom*>> items;
    for (std::size_t j = 0; j < decomp.atoms.size(); ++j)
        items.emplace_back(decomp.weights[j], &decomp.atoms[j]);
    return nq_functional(items, tol, level_K);
}

DiscreteForm synthesize(const AtomicDecomposition& decomp) {
    if (decomp.atoms.empty()) throw numeric_error("synthesize: empty decomposition");
    DiscreteForm out(decomp.atoms.front().form.grid(), decomp.atoms.front().form.degree());
    for (std::size_t j = 0; j < decomp.atoms.size(); ++j) {
        if (decomp.atoms[j].form.grid() != out.grid())
            throw std::invalid_argument("synthesize: grid mismatch");
        DiscreteForm term = decomp.atoms[j].form;
        term *= decomp.weights[j];
        out += term;
    }
    return out;
}

} // namespace hlog
