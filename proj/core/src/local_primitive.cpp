#include "hlog/local_primitive.hpp"

#include <lapacke.h>

#include <cmath>
#include <map>
#include <mutex>

#include "hlog/norms.hpp"
#include "hlog/spectral.hpp"

namespace hlog {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// C_jk(d) = sum_z (d_j delta_0)(z) (d_k delta_0)(z - d): the correlation of
// spectral derivative stencils, i.e. IDFT of xi_j xi_k.  Cached per grid.
const std::vector<std::vector<double>>& deriv_correlations(const Grid& grid) {
    static std::mutex mtx;
    static std::map<std::tuple<int, int, double>, std::vector<std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(grid.dim(), grid.points_per_axis(), grid.half_length());
    auto it = cache.find(key);
    if (it == cache.end()) {
        const int n = grid.dim();
        std::vector<std::vector<double>> tables(static_cast<std::size_t>(n * n));
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                spectral::Spectrum spec(grid.size());
                for (std::size_t f = 0; f < grid.size(); ++f) {
                    auto idx = grid.unflat(f);
                    spec[f] = grid.freq(idx[j]) * grid.freq(idx[k]);
                }
                tables[static_cast<std::size_t>(j * n + k)] =
                    spectral::backward(grid, std::move(spec));
            }
        }
        it = cache.emplace(key, std::move(tables)).first;
    }
    return it->second;
}

// wrapped displacement index x' - x
std::size_t displacement_index(const Grid& grid, std::size_t from, std::size_t to) {
    auto a = grid.unflat(from);
    auto b = grid.unflat(to);
    const int N = grid.points_per_axis();
    std::array<int, 3> d{0, 0, 0};
    for (int ax = 0; ax < grid.dim(); ++ax) d[ax] = ((b[ax] - a[ax]) % N + N) % N;
    return grid.flat(d);
}

} // namespace

CglsResult cgls(const std::function<std::vector<double>(const std::vector<double>&)>& apply_A,
                const std::function<std::vector<double>(const std::vector<double>&)>& apply_At,
                const std::vector<double>& b, std::vector<double>& y, double tol_rel,
                int max_iterations) {
    const double b_norm = std::sqrt(dot(b, b));
    CglsResult res;
    if (b_norm == 0.0) {
        std::fill(y.begin(), y.end(), 0.0);
        return res;
    }

    std::vector<double> r = b;
    {
        bool y_zero = true;
        for (double v : y)
            if (v != 0.0) { y_zero = false; break; }
        if (!y_zero) {
            auto ay = apply_A(y);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= ay[i];
        }
    }
    std::vector<double> s = apply_At(r);
    std::vector<double> p = s;
    double gamma = dot(s, s);
    double r_norm = std::sqrt(dot(r, r));
    double best = r_norm;
    int since_best = 0;

    for (int it = 0; it < max_iterations; ++it) {
        if (r_norm / b_norm <= tol_rel) break;
        if (gamma == 0.0) break; // stationary point of the normal equations
        auto q = apply_A(p);
        const double qq = dot(q, q);
        if (qq == 0.0) break;
        const double alpha = gamma / qq;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * p[i];
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha * q[i];
        s = apply_At(r);
        const double gamma_new = dot(s, s);
        const double beta = gamma_new / gamma;
        gamma = gamma_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = s[i] + beta * p[i];
        r_norm = std::sqrt(dot(r, r));
        res.iterations = it + 1;
        if (r_norm < best * 0.9999) {
            best = r_norm;
            since_best = 0;
        } else if (++since_best > 80) {
            res.stagnated = true;
            break;
        }
    }
    res.residual_rel = r_norm / b_norm;
    return res;
}

double lq_norm(const DiscreteForm& f, double q) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.grid().size(); ++i) s += std::pow(f.norm_at(i), q);
    return std::pow(s * f.grid().cell_volume(), 1.0 / q);
}

std::vector<double> taper_profile(const Grid& grid, const Ball& mask) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t c : cells_in_ball(grid, mask)) {
        auto x = grid.point(c);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double d = x[a] - mask.center[a];
            r2 += d * d;
        }
        const double rho2 = r2 / (mask.radius * mask.radius);
        const double t = 1.0 - rho2;
        out[c] = t * t * t;
    }
    return out;
}

std::vector<double> masked_primitive_dense(const DiscreteForm& a,
                                           const std::vector<std::size_t>& mask_cells,
                                           int primitive_degree, double pinv_cutoff,
                                           const std::vector<double>& spectral_weight) {
    const Grid& grid = a.grid();
    const int n = grid.dim();
    const auto& tuples_b = form_tuples(n, primitive_degree);
    const int ncomp_b = static_cast<int>(tuples_b.size());
    const std::size_t m = mask_cells.size();
    const std::size_t u = m * static_cast<std::size_t>(ncomp_b);

    // correlation tables, optionally weighted by W^2 in the spectrum
    std::vector<std::vector<double>> corr_local;
    const std::vector<std::vector<double>>* corr_ptr = nullptr;
    if (spectral_weight.empty()) {
        corr_ptr = &deriv_correlations(grid);
    } else {
        corr_local.resize(static_cast<std::size_t>(n * n));
        for (int j = 0; j < n; ++j)
            for (int k2 = 0; k2 < n; ++k2) {
                spectral::Spectrum spec(grid.size());
                for (std::size_t f = 0; f < grid.size(); ++f) {
                    auto idx = grid.unflat(f);
                    const double w2 = spectral_weight[f] * spectral_weight[f];
                    spec[f] = grid.freq(idx[j]) * grid.freq(idx[k2]) * w2;
                }
                corr_local[static_cast<std::size_t>(j * n + k2)] =
                    spectral::backward(grid, std::move(spec));
            }
        corr_ptr = &corr_local;
    }
    const auto& corr = *corr_ptr;

    // normal matrix in the coordinate inner product
    std::vector<double> M(u * u, 0.0);
    for (int c = 0; c < ncomp_b; ++c) {
        const auto& I = tuples_b[static_cast<std::size_t>(c)];
        for (int c2 = c; c2 < ncomp_b; ++c2) {
            const auto& I2 = tuples_b[static_cast<std::size_t>(c2)];
            // coupling structure between tuples
            double sign = 0.0;
            int j = -1, k = -1;
            std::vector<int> diag_axes;
            if (c == c2) {
                for (int ax = 0; ax < n; ++ax)
                    if (insertion_sign(ax, I) != 0) diag_axes.push_back(ax);
            } else {
                std::vector<int> only1, only2;
                for (int v : I)
                    if (std::find(I2.begin(), I2.end(), v) == I2.end()) only1.push_back(v);
                for (int v : I2)
                    if (std::find(I.begin(), I.end(), v) == I.end()) only2.push_back(v);
                if (only1.size() != 1 || only2.size() != 1) continue; // no shared output tuple
                j = only2[0]; // inserted into I
                k = only1[0]; // inserted into I2
                sign = static_cast<double>(insertion_sign(j, I) * insertion_sign(k, I2));
            }
            for (std::size_t p = 0; p < m; ++p) {
                for (std::size_t q2 = 0; q2 < m; ++q2) {
                    const std::size_t d = displacement_index(grid, mask_cells[p], mask_cells[q2]);
                    double v = 0.0;
                    if (c == c2) {
                        for (int ax : diag_axes)
                            v += corr[static_cast<std::size_t>(ax * n + ax)][d];
                    } else {
                        v = sign * corr[static_cast<std::size_t>(j * n + k)][d];
                    }
                    const std::size_t row = static_cast<std::size_t>(c) * m + p;
                    const std::size_t col = static_cast<std::size_t>(c2) * m + q2;
                    M[row * u + col] = v;
                    M[col * u + row] = v;
                }
            }
        }
    }

    // rhs = (delta W a) restricted to the mask (adjoint of d in the
    // coordinate product coincides with the codifferential)
    DiscreteForm weighted = a;
    if (!spectral_weight.empty()) {
        for (int c = 0; c < weighted.component_count(); ++c) {
            auto spec = spectral::forward(grid, weighted.comp(c));
            for (std::size_t f = 0; f < spec.size(); ++f) spec[f] *= spectral_weight[f];
            weighted.comp(c) = spectral::backward(grid, std::move(spec));
        }
    }
    DiscreteForm da = codifferential(weighted);
    std::vector<double> rhs(u, 0.0);
    {
        std::size_t w = 0;
        for (int c = 0; c < ncomp_b; ++c)
            for (std::size_t cell : mask_cells) rhs[w++] = da.comp(c)[cell];
    }

    // min-norm least squares through the eigendecomposition of M
    std::vector<double> evals(u, 0.0);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(u),
                                           M.data(), static_cast<lapack_int>(u), evals.data());
    if (info != 0) throw numeric_error("local_primitive: eigensolver failed");
    double lmax = 0.0;
    for (double l : evals) lmax = std::max(lmax, std::abs(l));
    const double cutoff = lmax * pinv_cutoff;
    // y = V f(L) V^T rhs with f = 1/l above the cutoff
    std::vector<double> vt_rhs(u, 0.0);
    for (std::size_t col = 0; col < u; ++col) {
        double s = 0.0;
        for (std::size_t row = 0; row < u; ++row) s += M[row * u + col] * rhs[row];
        vt_rhs[col] = (evals[col] > cutoff) ? s / evals[col] : 0.0;
    }
    std::vector<double> y(u, 0.0);
    for (std::size_t row = 0; row < u; ++row) {
        double s = 0.0;
        for (std::size_t col = 0; col < u; ++col) s += M[row * u + col] * vt_rhs[col];
        y[row] = s;
    }
    return y;
}

LocalPrimitiveResult local_primitive(const DiscreteForm& a, const Ball& ball,
                                     const LocalPrimitiveOptions& opts) {
    const Grid& grid = a.grid();
    const int n = grid.dim();
    const int deg = a.degree();
    if (deg < 1) throw std::invalid_argument("local_primitive: degree must be >= 1");

    const Ball mask = ball.dilated(opts.mask_dilate);
    if (!mask.fits(grid))
        throw numeric_error("local_primitive: dilated ball wraps the torus");

    const double a_norm = l2_norm(a);
    LocalPrimitiveResult out{DiscreteForm(grid, deg - 1), 0.0, 0, false, 0.0, 0.0, 0.0, 0.0};
    if (a_norm == 0.0) return out;

    if (d_residual(a) > opts.closedness_tol)
        throw numeric_error("local_primitive: input is not closed");
    out.input_support_leak = support_leak(a, ball);
    if (out.input_support_leak > 0.5)
        throw numeric_error("local_primitive: input is not concentrated in the ball");
    if (deg == n) {
        const auto means = component_means(a);
        double scale = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) scale = std::max(scale, a.norm_at(i));
        for (double mn : means)
            if (std::abs(mn) > 1e-10 * scale)
                throw numeric_error("local_primitive: top-degree input must have zero mean");
    }

    const auto mask_cells = cells_in_ball(grid, mask);
    if (mask_cells.empty()) throw numeric_error("local_primitive: empty discrete mask");
    const int ncomp_b = form_component_count(n, deg - 1);
    const int ncomp_a = form_component_count(n, deg);
    const std::size_t unknowns = mask_cells.size() * static_cast<std::size_t>(ncomp_b);

    auto unknowns_to_form = [&](const std::vector<double>& y) {
        DiscreteForm b(grid, deg - 1);
        std::size_t k = 0;
        for (int c = 0; c < ncomp_b; ++c)
            for (std::size_t cell : mask_cells) b.comp(c)[cell] = y[k++];
        return b;
    };

    std::vector<double> y;
    if (unknowns <= opts.dense_limit) {
        y = masked_primitive_dense(a, mask_cells, deg - 1);
    } else {
        auto apply_A = [&](const std::vector<double>& yy) {
            DiscreteForm db = exterior_derivative(unknowns_to_form(yy));
            std::vector<double> v;
            v.reserve(grid.size() * static_cast<std::size_t>(ncomp_a));
            for (int c = 0; c < ncomp_a; ++c)
                v.insert(v.end(), db.comp(c).begin(), db.comp(c).end());
            return v;
        };
        auto apply_At = [&](const std::vector<double>& r) {
            DiscreteForm rf(grid, deg);
            std::size_t k = 0;
            for (int c = 0; c < ncomp_a; ++c) {
                auto& comp = rf.comp(c);
                for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = r[k++];
            }
            DiscreteForm dr = codifferential(rf);
            std::vector<double> yy(unknowns, 0.0);
            k = 0;
            for (int c = 0; c < ncomp_b; ++c)
                for (std::size_t cell : mask_cells) yy[k++] = dr.comp(c)[cell];
            return yy;
        };
        std::vector<double> rhs;
        rhs.reserve(grid.size() * static_cast<std::size_t>(ncomp_a));
        for (int c = 0; c < ncomp_a; ++c)
            rhs.insert(rhs.end(), a.comp(c).begin(), a.comp(c).end());

        y.assign(unknowns, 0.0);
        CglsResult cg = cgls(apply_A, apply_At, rhs, y, opts.tol, opts.max_iterations);
        out.iterations = cg.iterations;

        if (cg.stagnated && cg.residual_rel > opts.tol) {
            // smoothly cut off global primitive as a warm start, then one
            // more CG pass to absorb the cutoff commutator
            DiscreteForm centered = a;
            const auto means = component_means(a);
            for (int c = 0; c < centered.component_count(); ++c)
                for (auto& v : centered.comp(c)) v -= means[static_cast<std::size_t>(c)];
            DiscreteForm g = codifferential(inv_laplacian(centered, 1.0, 1e-6));
            const auto taper = taper_profile(grid, mask);
            std::vector<double> y_fb(unknowns, 0.0);
            std::size_t k = 0;
            for (int c = 0; c < ncomp_b; ++c)
                for (std::size_t cell : mask_cells) y_fb[k++] = taper[cell] * g.comp(c)[cell];
            CglsResult cg2 = cgls(apply_A, apply_At, rhs, y_fb, opts.tol, opts.max_iterations);
            if (cg2.residual_rel < cg.residual_rel) {
                y = std::move(y_fb);
                out.iterations += cg2.iterations;
            }
            out.used_fallback = true;
        }
    }

    out.primitive = unknowns_to_form(y);
    DiscreteForm db = exterior_derivative(out.primitive);
    DiscreteForm diff = db;
    diff -= a;
    out.residual = l2_norm(diff) / a_norm;
    out.b_norm_q = lq_norm(out.primitive, opts.q_norm);
    out.db_norm_q = lq_norm(db, opts.q_norm);
    const double a_q = lq_norm(a, opts.q_norm);
    if (a_q > 0.0 && ball.radius > 0.0)
        out.norm_ratio = out.b_norm_q / (ball.radius * a_q);
    return out;
}

} // namespace hlog
