#include "hlog/decompose.hpp"

#include <cmath>

#include "hlog/exterior.hpp"
#include "hlog/spectral.hpp"

namespace hlog {

namespace {

// support box of |f| above rel_threshold * max; spectral tails of d-derived
// fields sit around 1e-3, so thresholds below that see the whole box
struct SupportBox {
    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
    double scale = 0.0;
};

SupportBox support_box(const DiscreteForm& f, double rel_threshold) {
    const Grid& grid = f.grid();
    const int n = grid.dim();
    const double L = grid.half_length();
    SupportBox box;
    for (int a = 0; a < n; ++a) {
        box.lo[a] = L;
        box.hi[a] = -L;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) box.scale = std::max(box.scale, f.norm_at(i));
    if (box.scale == 0.0) return box;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (f.norm_at(i) <= rel_threshold * box.scale) continue;
        auto x = grid.point(i);
        for (int a = 0; a < n; ++a) {
            box.lo[a] = std::min(box.lo[a], x[a]);
            box.hi[a] = std::max(box.hi[a], x[a]);
        }
    }
    return box;
}

std::vector<double> log_trapezoid_weights(const std::vector<double>& levels) {
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
    return w;
}

} // namespace

std::vector<double> decompose_symbol(const Grid& grid, const Mollifier& m,
                                     const std::vector<double>& levels) {
    const auto w = log_trapezoid_weights(levels);
    const auto& xi2 = spectral::xi_squared(grid);
    const double hv = grid.cell_volume();
    std::vector<double> symbol(grid.size(), 0.0);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double t = levels[k];
        const auto& kd = sampled_kernel(grid, m, t).dft;
        for (std::size_t f = 0; f < grid.size(); ++f) {
            const double mult = hv * kd[f].real(); // kernels are even: real DFT
            symbol[f] += -w[k] * t * t * xi2[f] * mult * mult;
        }
    }
    return symbol;
}

double derive_t_max(const Grid& grid, const DiscreteForm& f) {
    const int n = grid.dim();
    const double L = grid.half_length();
    const double h = grid.spacing();

    const auto box = support_box(f, 1e-2);
    if (box.scale == 0.0) return L / 8.0;
    double max_abs_coord = 0.0;
    for (int a = 0; a < n; ++a)
        max_abs_coord = std::max({max_abs_coord, std::abs(box.lo[a]), std::abs(box.hi[a])});

    // the coarse atom needs supp f + 4t inside the box with margin
    const double budget = L - 3.0 * h - max_abs_coord;
    double t = (budget > 0.0) ? budget / 4.5 : 0.0;
    t = std::min(t, L / 8.0);
    if (t < 2.0 * h) t = 2.0 * h; // keep at least one live level
    return std::ldexp(1.0, static_cast<int>(std::floor(std::log2(t * (1.0 + 1e-12)))));
}

AtomicDecomposition closed_atomic_decompose(const DiscreteForm& f, const GrowthFunction& gf,
                                            const Mollifier& m, const DecomposeOptions& opts) {
    const Grid& grid = f.grid();
    const int n = grid.dim();
    const int deg = f.degree();
    const double L = grid.half_length();
    const double h = grid.spacing();
    if (deg < 1) throw std::invalid_argument("closed_atomic_decompose: degree must be >= 1");
    if (m.moment_order < 0)
        throw config_error("closed_atomic_decompose: needs a zero-moment profile");

    AtomicDecomposition out;
    const double f_norm = l2_norm(f);
    if (f_norm == 0.0) return out;

    if (d_residual(f) > opts.closedness_tol)
        throw numeric_error("closed_atomic_decompose: input is not closed");
    {
        const auto means = component_means(f);
        double scale = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) scale = std::max(scale, f.norm_at(i));
        for (double mn : means)
            if (std::abs(mn) > 1e-10 * scale)
                throw numeric_error("closed_atomic_decompose: input must have zero mean");
    }

    const int s = moment_order_bound(gf, n);
    if (m.moment_order < s)
        throw config_error("closed_atomic_decompose: profile moment order below N_p");
    AdmissibleTriple triple(gf, std::max(2.0, gf.muckenhoupt_inf + 1.0), s, n);

    const double t_cap = (opts.t_max > 0.0) ? opts.t_max : derive_t_max(grid, f);
    const auto levels = maximal_levels(grid, t_cap);
    const auto weights = log_trapezoid_weights(levels);
    const double T = levels.back();

    // The dyadic range [h/2, T] resolves only the finest scales, so the
    // pipeline carries IFFT[S f^]/c with the single recorded constant
    // c = max|S|, and the complement f - IFFT[S f^]/c goes into one
    // coarse-scale atom.  The complement is (essentially) compactly
    // supported because the symbol's kernel is built from kernels of
    // support 2t and two spectral derivatives.
    const auto symbol = decompose_symbol(grid, m, levels);
    double c_norm = 0.0;
    for (double sv : symbol) c_norm = std::max(c_norm, std::abs(sv));
    if (c_norm == 0.0) throw numeric_error("closed_atomic_decompose: degenerate level grid");
    out.renormalization = {c_norm};

    DiscreteForm pipeline_part(grid, deg); // IFFT[S f^] / c
    for (int c = 0; c < f.component_count(); ++c) {
        auto spec = spectral::forward(grid, f.comp(c));
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= symbol[i] / c_norm;
        pipeline_part.comp(c) = spectral::backward(grid, std::move(spec));
    }
    DiscreteForm coarse = f;
    coarse -= pipeline_part;

    // ---- coarse-scale complement atom
    if (l2_norm(coarse) > 1e-14 * f_norm) {
        const auto box = support_box(f, 1e-2);
        std::array<double, 3> center{0.0, 0.0, 0.0};
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            center[a] = 0.5 * (box.lo[a] + box.hi[a]);
            r2 += 0.25 * (box.hi[a] - box.lo[a]) * (box.hi[a] - box.lo[a]);
        }
        Ball cball(center, std::sqrt(r2) + 4.0 * T + 2.0 * h);
        if (!cball.fits(grid))
            throw numeric_error("closed_atomic_decompose: coarse-scale ball wraps the torus");
        const double lambda_co = lq_wp_ball_norm(triple, coarse, cball, 20, 1.0) *
                                 chi_ball_norm(gf, grid, cball);
        if (lambda_co > 0.0) {
            DiscreteForm aform = coarse;
            aform *= 1.0 / lambda_co;
            const Ball related = cball.dilated(2.0).fits(grid) ? cball.dilated(2.0) : cball;
            Atom atom(std::move(aform), related, triple, true);
            atom.validation = validate_atom(atom);
            out.atoms.push_back(std::move(atom));
            out.weights.push_back(lambda_co);
        }
    }

    // ---- fine scales through the tent-space pipeline: F = t (delta f * phi_t) / c
    DiscreteForm delta_f = codifferential(f);
    SpaceTimeField F(grid, deg - 1, levels);
    double fmax = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        F.slices[k] = mollify(delta_f, levels[k], m);
        F.slices[k] *= levels[k] / c_norm;
        for (std::size_t i = 0; i < grid.size(); ++i)
            fmax = std::max(fmax, F.slices[k].norm_at(i));
    }
    // threshold away the spectral-delta tails so that the stopping-time cover
    // stays near the input's support and every emitted ball fits the box
    const double floor_F = opts.tail_threshold * fmax;
    DecomposeOptions topts = opts;
    topts.tent.side_cap_cells = std::max(1, static_cast<int>(std::floor(T / (2.0 * h))));
    const double sigma = topts.tent.side_cap_cells * h;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double safe = L - 3.0 * h - (sigma + 0.5 * sigma * sqrt_n + 2.0 * T);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            bool keep = F.slices[k].norm_at(i) > floor_F;
            if (keep) {
                auto x = grid.point(i);
                for (int a = 0; a < n; ++a)
                    if (std::abs(x[a]) > safe) { keep = false; break; }
            }
            if (!keep)
                for (int c = 0; c < F.slices[k].component_count(); ++c)
                    F.slices[k].comp(c)[i] = 0.0;
        }
    }

    TentDecomposition tents = tent_decompose(F, gf, topts.tent);

    // a_j = -sum_k w_k t_k d(A_j(., t_k) * phi_{t_k})
    for (std::size_t j = 0; j < tents.atoms.size(); ++j) {
        const TentAtom& A = tents.atoms[j];
        SpaceTimeField dense = A.dense(grid, deg - 1, levels);
        DiscreteForm psi(grid, deg - 1);
        for (std::size_t k = 0; k < levels.size(); ++k) {
            bool empty = true;
            for (int c = 0; c < dense.slices[k].component_count() && empty; ++c)
                for (double v : dense.slices[k].comp(c))
                    if (v != 0.0) { empty = false; break; }
            if (empty) continue;
            DiscreteForm conv = mollify(dense.slices[k], levels[k], m);
            conv *= weights[k] * levels[k];
            psi += conv;
        }
        DiscreteForm aj = exterior_derivative(psi);
        aj *= -1.0;
        if (l2_norm(aj) <= 1e-14 * f_norm) continue; // nothing to carry

        const double cover = A.ball.radius + T + 2.0 * h; // kernel reach t + 2h
        Ball related(A.ball.center, std::max(2.0 * A.ball.radius, cover));
        if (!related.fits(grid)) related = Ball(A.ball.center, cover);
        if (!related.fits(grid))
            throw numeric_error("closed_atomic_decompose: emitted ball wraps the torus");
        Atom atom(std::move(aj), related, triple, true);
        atom.validation = validate_atom(atom);
        out.atoms.push_back(std::move(atom));
        out.weights.push_back(tents.weights[j]);
    }

    if (!out.atoms.empty()) {
        DiscreteForm sum = synthesize(out);
        DiscreteForm diff = sum;
        diff -= f;
        out.reconstruction_error = l2_norm(diff) / f_norm;
        out.nq_value = nq_functional(out);
    }
    return out;
}

} // namespace hlog
