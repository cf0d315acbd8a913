#include "hlog/mollifier.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "hlog/errors.hpp"

namespace hlog {

namespace {

// base bump b(z) = exp(-1/(1-|z|^2)) on |z| < 1
double bump_val(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

// d_k b = -2 z_k u^2 b with u = 1/(1-|z|^2)
double dbump_val(const std::array<double, 3>& z, int n, int axis) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += z[a] * z[a];
    if (r2 >= 1.0) return 0.0;
    const double u = 1.0 / (1.0 - r2);
    return -2.0 * z[axis] * u * u * bump_val(r2);
}

// Laplacian of the bump: b [4 r^2 u^4 - 2 n u^2 - 8 r^2 u^3]
double lapbump_val(double r2, int n) {
    if (r2 >= 1.0) return 0.0;
    const double u = 1.0 / (1.0 - r2);
    return bump_val(r2) * (4.0 * r2 * u * u * u * u - 2.0 * n * u * u - 8.0 * r2 * u * u * u);
}

double profile_value(const Mollifier& m, const std::array<double, 3>& z, int n) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += z[a] * z[a];
    switch (m.kind) {
    case ProfileKind::bump: return bump_val(r2);
    case ProfileKind::dbump: return dbump_val(z, n, m.axis);
    case ProfileKind::lapbump: return lapbump_val(r2, n);
    }
    return 0.0;
}

// monomial z^gamma over all |gamma| <= s, enumerated deterministically
std::vector<std::array<int, 3>> monomials_through(int n, int s) {
    std::vector<std::array<int, 3>> out;
    for (int total = 0; total <= s; ++total) {
        std::array<int, 3> g{0, 0, 0};
        // enumerate all compositions of `total` into n parts
        std::function<void(int, int)> rec = [&](int axis, int left) {
            if (axis == n - 1) {
                g[axis] = left;
                out.push_back(g);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                g[axis] = v;
                rec(axis + 1, left - v);
            }
        };
        rec(0, total);
    }
    return out;
}

} // namespace

Mollifier Mollifier::unit_bump() {
    Mollifier m;
    m.kind = ProfileKind::bump;
    m.moment_order = -1;
    m.name = "bump";
    return m;
}

Mollifier Mollifier::dbump(int axis) {
    Mollifier m;
    m.kind = ProfileKind::dbump;
    m.axis = axis;
    m.moment_order = 0;
    std::ostringstream os;
    os << "dbump:" << axis;
    m.name = os.str();
    return m;
}

Mollifier Mollifier::zero_moment(int order) {
    Mollifier m;
    m.kind = ProfileKind::lapbump;
    m.moment_order = order;
    std::ostringstream os;
    os << "lapbump:s" << order;
    m.name = os.str();
    return m;
}

Mollifier Mollifier::zero_moment_wide(int order) {
    Mollifier m;
    m.kind = ProfileKind::autocorr;
    m.moment_order = order;
    std::ostringstream os;
    os << "autocorr:s" << order;
    m.name = os.str();
    return m;
}

Mollifier Mollifier::parse(const std::string& spec) {
    if (spec == "bump") return unit_bump();
    if (spec == "autocorr") return zero_moment_wide(0);
    if (spec.rfind("autocorr:", 0) == 0) return zero_moment_wide(std::stoi(spec.substr(9)));
    if (spec.rfind("dbump:", 0) == 0) {
        const int axis = std::stoi(spec.substr(6));
        if (axis < 0 || axis > 2) throw config_error("mollifier: dbump axis out of range");
        return dbump(axis);
    }
    if (spec == "lapbump") return zero_moment(0);
    if (spec.rfind("lapbump:", 0) == 0) return zero_moment(std::stoi(spec.substr(8)));
    throw config_error("mollifier: unknown spec '" + spec + "'");
}

const SampledKernel& sampled_kernel(const Grid& grid, const Mollifier& m, double t) {
    static std::mutex mtx;
    static std::map<std::string, SampledKernel> cache;

    char key[160];
    std::snprintf(key, sizeof(key), "%s|%d|%d|%.17g|%.17g", m.name.c_str(), grid.dim(),
                  grid.points_per_axis(), grid.half_length(), t);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    if (!(t > 0.0) || t > grid.half_length() / 2.0 + 1e-12)
        throw numeric_error("mollifier: level t out of (0, L/2]");
    if (m.kind == ProfileKind::autocorr && t > grid.half_length() / 4.0 + 1e-12)
        throw numeric_error("mollifier: autocorrelation level t out of (0, L/4]");

    if (m.kind == ProfileKind::autocorr) {
        // K = h^n (v (*) v) with v the stencil Laplacian of a narrow truncated
        // Gaussian.  The transform factors as (positive stencil symbol) x
        // (near-positive Gaussian DFT), so (v^)^2 has no deep ring dips and
        // the level-grid symbol of the decomposition stays usable across the
        // whole band.  Hard support: t/2 + h for v, hence < 2t for K.
        const int nn = grid.dim();
        const int N = grid.points_per_axis();
        const double h = grid.spacing();
        const double hv = grid.cell_volume();

        std::vector<double> u(grid.size(), 0.0);
        const double sigma = t / 3.5;
        SampledKernel sk_dead;
        if (sigma < 0.9 * h) {
            // resolution gate: a level whose Gaussian core is narrower than a
            // cell cannot be sampled smoothly, and the spectral derivative of
            // anything it mollifies would ring globally.  The level stays in
            // the grid but contributes nothing.
            sk_dead.values.assign(grid.size(), 0.0);
            sk_dead.dft.assign(grid.size(), {0.0, 0.0});
            std::lock_guard<std::mutex> lock(mtx);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, std::move(sk_dead)).first;
            return it->second;
        }
        auto disp = [&](int j) {
            double d = j * h;
            if (d >= grid.half_length()) d -= 2.0 * grid.half_length();
            return d;
        };
        double mass = 0.0;
        for (std::size_t f = 0; f < grid.size(); ++f) {
            auto idx = grid.unflat(f);
            double r2 = 0.0;
            for (int a = 0; a < nn; ++a) {
                const double d = disp(idx[a]);
                r2 += d * d;
            }
            if (r2 < t * t) { // truncate at 3.5 sigma
                u[f] = std::exp(-r2 / (2.0 * sigma * sigma));
                mass += u[f];
            }
        }
        if (mass <= 0.0) throw numeric_error("mollifier: autocorrelation level has no samples");
        for (auto& v : u) v /= mass * hv;

        // discrete Laplacian by direct differencing keeps hard support
        std::vector<double> v(grid.size(), 0.0);
        for (std::size_t f = 0; f < grid.size(); ++f) {
            auto idx = grid.unflat(f);
            double acc = -2.0 * nn * u[f];
            for (int a = 0; a < nn; ++a) {
                auto p = idx, q = idx;
                p[a] = (idx[a] + 1) % N;
                q[a] = (idx[a] - 1 + N) % N;
                acc += u[grid.flat(p)] + u[grid.flat(q)];
            }
            // sigma^2-scaled so the kernel keeps a t-independent L1 scale,
            // like the classical dilation t^{-n} phi(x/t)
            v[f] = acc * sigma * sigma / (h * h);
        }

        SampledKernel sk;
        auto vdft = spectral::kernel_dft(grid, v);
        sk.dft.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double re = vdft[i].real();
            sk.dft[i] = hv * re * re; // discrete self-convolution: imaginary part is 0
        }
        {
            spectral::Spectrum tmp = sk.dft;
            sk.values = spectral::backward(grid, std::move(tmp));
        }
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, std::move(sk)).first;
        return it->second;
    }

    const int n = grid.dim();
    const int N = grid.points_per_axis();
    const double h = grid.spacing();
    const double inv_tn = std::pow(t, -n);

    SampledKernel sk;
    sk.values.assign(grid.size(), 0.0);

    // displacement of index j along an axis, wrapped to [-L, L)
    auto disp = [&](int j) {
        double d = j * h;
        if (d >= grid.half_length()) d -= 2.0 * grid.half_length();
        return d;
    };

    for (std::size_t f = 0; f < grid.size(); ++f) {
        auto idx = grid.unflat(f);
        std::array<double, 3> z{0.0, 0.0, 0.0};
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            z[a] = disp(idx[a]) / t;
            r2 += z[a] * z[a];
        }
        if (r2 >= 1.0) continue;
        sk.values[f] = inv_tn * profile_value(m, z, n);
    }

    const double hv = grid.cell_volume();
    if (m.moment_order < 0) {
        // unit mass: normalize the discrete mass to exactly 1
        double mass = 0.0;
        for (double v : sk.values) mass += v;
        mass *= hv;
        if (std::abs(mass) < 1e-300)
            throw numeric_error("mollifier: kernel has no samples at this level");
        for (auto& v : sk.values) v /= mass;
    } else {
        // vanishing moments through s, corrected exactly within the kernel's
        // own support using the positive bump as correction window
        const auto monos = monomials_through(n, m.moment_order);
        std::vector<std::size_t> supp;
        std::vector<double> window; // positive bump samples on the same support
        for (std::size_t f = 0; f < grid.size(); ++f) {
            auto idx = grid.unflat(f);
            double r2 = 0.0;
            std::array<double, 3> z{0.0, 0.0, 0.0};
            for (int a = 0; a < n; ++a) {
                z[a] = disp(idx[a]) / t;
                r2 += z[a] * z[a];
            }
            if (r2 >= 1.0) continue;
            supp.push_back(f);
            window.push_back(inv_tn * bump_val(r2));
        }
        if (supp.empty()) {
            // sub-grid level: nothing representable, kernel stays zero
        } else {
            const std::size_t M = monos.size();
            // basis functions e_m = z^gamma * window on the support
            std::vector<std::vector<double>> basis(M, std::vector<double>(supp.size(), 0.0));
            for (std::size_t q = 0; q < M; ++q) {
                for (std::size_t s = 0; s < supp.size(); ++s) {
                    auto idx = grid.unflat(supp[s]);
                    double mono = 1.0;
                    for (int a = 0; a < n; ++a)
                        mono *= std::pow(disp(idx[a]) / t, monos[q][a]);
                    basis[q][s] = mono * window[s];
                }
            }
            // Gram system: moments of (K - sum c_q e_q) vanish for all monomials
            std::vector<std::vector<double>> A(M, std::vector<double>(M, 0.0));
            std::vector<double> rhs(M, 0.0);
            auto moment = [&](const std::vector<double>& vals, std::size_t q) {
                double s = 0.0;
                for (std::size_t i = 0; i < supp.size(); ++i) {
                    auto idx = grid.unflat(supp[i]);
                    double mono = 1.0;
                    for (int a = 0; a < n; ++a)
                        mono *= std::pow(disp(idx[a]) / t, monos[q][a]);
                    s += vals[i] * mono;
                }
                return s * hv;
            };
            std::vector<double> kvals(supp.size());
            for (std::size_t i = 0; i < supp.size(); ++i) kvals[i] = sk.values[supp[i]];
            for (std::size_t q = 0; q < M; ++q) {
                rhs[q] = moment(kvals, q);
                for (std::size_t p = 0; p < M; ++p) A[q][p] = moment(basis[p], q);
            }
            // Gaussian elimination with partial pivoting (tiny M)
            std::vector<double> c(M, 0.0);
            {
                for (std::size_t col = 0; col < M; ++col) {
                    std::size_t piv = col;
                    for (std::size_t r = col + 1; r < M; ++r)
                        if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
                    std::swap(A[col], A[piv]);
                    std::swap(rhs[col], rhs[piv]);
                    if (std::abs(A[col][col]) < 1e-300) continue; // degenerate: skip
                    for (std::size_t r = col + 1; r < M; ++r) {
                        const double f = A[r][col] / A[col][col];
                        for (std::size_t cc = col; cc < M; ++cc) A[r][cc] -= f * A[col][cc];
                        rhs[r] -= f * rhs[col];
                    }
                }
                for (std::size_t col = M; col-- > 0;) {
                    double s = rhs[col];
                    for (std::size_t cc = col + 1; cc < M; ++cc) s -= A[col][cc] * c[cc];
                    c[col] = std::abs(A[col][col]) < 1e-300 ? 0.0 : s / A[col][col];
                }
            }
            for (std::size_t i = 0; i < supp.size(); ++i) {
                double corr = 0.0;
                for (std::size_t q = 0; q < M; ++q) corr += c[q] * basis[q][i];
                sk.values[supp[i]] -= corr;
            }
        }
    }

    sk.dft = spectral::kernel_dft(grid, sk.values);
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, std::move(sk)).first;
        return it->second;
    }
}

std::vector<double> mollify_scalar(const Grid& grid, const std::vector<double>& f, double t,
                                   const Mollifier& m) {
    const auto& sk = sampled_kernel(grid, m, t);
    return spectral::convolve(grid, f, sk.dft);
}

DiscreteForm mollify(const DiscreteForm& f, double t, const Mollifier& m) {
    const auto& sk = sampled_kernel(f.grid(), m, t);
    DiscreteForm out(f.grid(), f.degree());
    for (int c = 0; c < f.component_count(); ++c)
        out.comp(c) = spectral::convolve(f.grid(), f.comp(c), sk.dft);
    return out;
}

} // namespace hlog
