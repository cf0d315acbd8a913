#include "hlog/exterior.hpp"

#include <algorithm>
#include <cmath>

#include "hlog/spectral.hpp"

namespace hlog {

DiscreteForm wedge(const DiscreteForm& f, const DiscreteForm& g) {
    if (f.grid() != g.grid()) throw std::invalid_argument("wedge: grid mismatch");
    const int n = f.grid().dim();
    const int deg = f.degree() + g.degree();
    if (deg > n) throw std::invalid_argument("wedge: degree overflow");
    DiscreteForm out(f.grid(), deg);
    const auto& fi = f.tuples();
    const auto& gi = g.tuples();
    IndexTuple merged;
    for (int a = 0; a < f.component_count(); ++a) {
        for (int b = 0; b < g.component_count(); ++b) {
            const int sign = merge_tuples(fi[static_cast<std::size_t>(a)],
                                          gi[static_cast<std::size_t>(b)], merged);
            if (sign == 0) continue;
            const int c = form_tuple_index(n, merged);
            const auto& fa = f.comp(a);
            const auto& gb = g.comp(b);
            auto& oc = out.comp(c);
            const double s = static_cast<double>(sign);
            for (std::size_t i = 0; i < oc.size(); ++i) oc[i] += s * fa[i] * gb[i];
        }
    }
    return out;
}

DiscreteForm exterior_derivative(const DiscreteForm& f) {
    const Grid& grid = f.grid();
    const int n = grid.dim();
    if (f.degree() >= n) throw std::invalid_argument("exterior_derivative: top-degree input");
    DiscreteForm out(grid, f.degree() + 1);
    const auto& tuples = f.tuples();
    IndexTuple merged;
    for (int c = 0; c < f.component_count(); ++c) {
        const auto grads = spectral::gradient(grid, f.comp(c));
        const auto& I = tuples[static_cast<std::size_t>(c)];
        for (int j = 0; j < n; ++j) {
            const int sign = insertion_sign(j, I);
            if (sign == 0) continue;
            merged = I;
            merged.insert(std::lower_bound(merged.begin(), merged.end(), j), j);
            auto& oc = out.comp(form_tuple_index(n, merged));
            const auto& dj = grads[static_cast<std::size_t>(j)];
            const double s = static_cast<double>(sign);
            for (std::size_t i = 0; i < oc.size(); ++i) oc[i] += s * dj[i];
        }
    }
    return out;
}

DiscreteForm codifferential(const DiscreteForm& f) {
    const Grid& grid = f.grid();
    const int n = grid.dim();
    if (f.degree() < 1) throw std::invalid_argument("codifferential: 0-form input");
    DiscreteForm out(grid, f.degree() - 1);
    IndexTuple merged;
    // (delta f)_J = -sum_{j not in J} sign(j, J) d_j f_{merge(j, J)}
    for (int c = 0; c < f.component_count(); ++c) {
        const auto grads = spectral::gradient(grid, f.comp(c));
        const auto& K = f.tuples()[static_cast<std::size_t>(c)];
        // every way of removing one index j from K produces a target tuple J
        for (std::size_t pos = 0; pos < K.size(); ++pos) {
            const int j = K[pos];
            merged.assign(K.begin(), K.end());
            merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(pos));
            const int sign = insertion_sign(j, merged);
            auto& oc = out.comp(form_tuple_index(n, merged));
            const auto& dj = grads[static_cast<std::size_t>(j)];
            const double s = -static_cast<double>(sign);
            for (std::size_t i = 0; i < oc.size(); ++i) oc[i] += s * dj[i];
        }
    }
    return out;
}

DiscreteForm hodge_laplacian(const DiscreteForm& f) {
    const int n = f.grid().dim();
    if (f.degree() == 0) return codifferential(exterior_derivative(f));
    if (f.degree() == n) return exterior_derivative(codifferential(f));
    DiscreteForm out = exterior_derivative(codifferential(f));
    out += codifferential(exterior_derivative(f));
    return out;
}

DiscreteForm scalar_laplacian(const DiscreteForm& f) {
    DiscreteForm out(f.grid(), f.degree());
    for (int c = 0; c < f.component_count(); ++c)
        out.comp(c) = spectral::minus_laplacian(f.grid(), f.comp(c));
    return out;
}

DiscreteForm inv_laplacian(const DiscreteForm& f, double power, double mean_tol) {
    if (power != 1.0 && power != 0.5)
        throw std::invalid_argument("inv_laplacian: power must be 1 or 1/2");
    const auto means = component_means(f);
    double scale = 0.0;
    for (int c = 0; c < f.component_count(); ++c)
        for (double v : f.comp(c)) scale = std::max(scale, std::abs(v));
    for (double m : means)
        if (std::abs(m) > mean_tol * std::max(1.0, scale))
            throw std::invalid_argument("inv_laplacian: input component has nonzero mean");
    DiscreteForm out(f.grid(), f.degree());
    for (int c = 0; c < f.component_count(); ++c)
        out.comp(c) = spectral::inverse_laplacian(f.grid(), f.comp(c), power);
    return out;
}

std::vector<double> riesz_transform(const Grid& grid, const std::vector<double>& f, int axis) {
    return spectral::riesz(grid, f, axis);
}

DiscreteForm HodgeSplit::reconstruct() const {
    DiscreteForm out = closed;
    out += coclosed;
    for (int c = 0; c < out.component_count(); ++c) {
        auto& comp = out.comp(c);
        const double m = mean[static_cast<std::size_t>(c)];
        for (auto& v : comp) v += m;
    }
    return out;
}

HodgeSplit hodge_split(const DiscreteForm& f) {
    const int n = f.grid().dim();
    const auto means = component_means(f);
    DiscreteForm centered = f;
    for (int c = 0; c < centered.component_count(); ++c) {
        auto& comp = centered.comp(c);
        const double m = means[static_cast<std::size_t>(c)];
        for (auto& v : comp) v -= m;
    }
    DiscreteForm closed(f.grid(), f.degree());
    DiscreteForm coclosed(f.grid(), f.degree());
    if (f.degree() == 0) {
        // delta d {Delta}^-1 = Id on zero-mean 0-forms
        coclosed = std::move(centered);
    } else if (f.degree() == n) {
        // d delta {Delta}^-1 = Id on zero-mean top forms
        closed = std::move(centered);
    } else {
        DiscreteForm g = inv_laplacian(centered, 1.0, 1e-9);
        closed = exterior_derivative(codifferential(g));
        coclosed = codifferential(exterior_derivative(g));
    }
    return HodgeSplit{std::move(closed), std::move(coclosed), means};
}

DiscreteForm dealias(const DiscreteForm& f, int bandwidth) {
    DiscreteForm out(f.grid(), f.degree());
    for (int c = 0; c < f.component_count(); ++c)
        out.comp(c) = spectral::dealias(f.grid(), f.comp(c), bandwidth);
    return out;
}

int quarter_band(const Grid& grid) { return grid.points_per_axis() / 4 - 1; }

double d_residual(const DiscreteForm& f) {
    if (f.degree() >= f.grid().dim()) return 0.0;
    const double nf = l2_norm(f);
    if (nf == 0.0) return 0.0;
    return l2_norm(exterior_derivative(f)) / (nf * f.grid().freq_max());
}

} // namespace hlog
