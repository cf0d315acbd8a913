#include "doctest.h"

#include <cmath>

#include "hlog/ball.hpp"
#include "hlog/exterior.hpp"
#include "hlog/maximal.hpp"
#include "hlog/random_fields.hpp"

using namespace hlog;

namespace {

// direct-sum convolution at one grid point (independent of the FFT path)
double direct_convolution_at(const Grid& g, const std::vector<double>& f,
                             const std::vector<double>& kernel, std::size_t at) {
    const int n = g.dim();
    const int N = g.points_per_axis();
    auto ai = g.unflat(at);
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        auto bj = g.unflat(j);
        std::array<int, 3> d{0, 0, 0};
        for (int a = 0; a < n; ++a) d[a] = ((ai[a] - bj[a]) % N + N) % N;
        s += f[j] * kernel[g.flat(d)];
    }
    return s * g.cell_volume();
}

} // namespace

TEST_CASE("level grids") {
    Grid g(2, 64, 4.0);
    auto lv = maximal_levels(g);
    CHECK(lv.front() == doctest::Approx(0.0625)); // h/2
    CHECK(lv.back() == doctest::Approx(2.0));     // L/2
    CHECK(lv.size() == 6);
    auto clipped = maximal_levels(g, 0.5);
    CHECK(clipped.back() == doctest::Approx(0.5));
}

TEST_CASE("mollify: mass normalization and zero-moment kill constants") {
    Grid g(2, 64, 4.0);
    DiscreteForm c(g, 1);
    for (auto& v : c.comp(0)) v = 2.5;
    for (auto& v : c.comp(1)) v = -1.25;

    auto unit = Mollifier::unit_bump();
    for (double t : {0.125, 0.5, 2.0}) {
        DiscreteForm out = mollify(c, t, unit);
        for (std::size_t i = 0; i < g.size(); i += 97) {
            CHECK(out.comp(0)[i] == doctest::Approx(2.5).epsilon(1e-12));
            CHECK(out.comp(1)[i] == doctest::Approx(-1.25).epsilon(1e-12));
        }
    }

    auto zm = Mollifier::zero_moment(0);
    DiscreteForm killed = mollify(c, 0.5, zm);
    for (std::size_t i = 0; i < g.size(); i += 97)
        CHECK(std::abs(killed.comp(0)[i]) < 1e-12);

    // dbump has exactly zero discrete mass too
    auto db = Mollifier::dbump(0);
    DiscreteForm killed2 = mollify(c, 0.5, db);
    for (std::size_t i = 0; i < g.size(); i += 97)
        CHECK(std::abs(killed2.comp(0)[i]) < 1e-11);

    CHECK_THROWS_AS(mollify(c, 3.9, unit), numeric_error);
}

TEST_CASE("mollify matches direct quadrature at probe points") {
    Grid g(2, 32, 4.0);
    Rng rng(3);
    DiscreteForm f(g, 0);
    f.comp(0) = random_band_limited(g, rng, 6);
    auto unit = Mollifier::unit_bump();
    const double t = 0.5;
    DiscreteForm out = mollify(f, t, unit);
    const auto& kernel = sampled_kernel(g, unit, t).values;
    for (std::size_t probe : {std::size_t(0), std::size_t(317), std::size_t(801)}) {
        const double direct = direct_convolution_at(g, f.comp(0), kernel, probe);
        CHECK(out.comp(0)[probe] == doctest::Approx(direct).epsilon(1e-11));
    }
}

TEST_CASE("exact discrete moments of zero-moment kernels") {
    Grid g(2, 64, 4.0);
    for (int s : {0, 1}) {
        auto m = Mollifier::zero_moment(s);
        for (double t : {0.25, 1.0}) {
            const auto& k = sampled_kernel(g, m, t).values;
            for (int gx = 0; gx + 0 <= s; ++gx) {
                for (int gy = 0; gx + gy <= s; ++gy) {
                    double mom = 0.0;
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        if (k[i] == 0.0) continue;
                        auto idx = g.unflat(i);
                        double d0 = idx[0] * g.spacing();
                        double d1 = idx[1] * g.spacing();
                        if (d0 >= g.half_length()) d0 -= 2.0 * g.half_length();
                        if (d1 >= g.half_length()) d1 -= 2.0 * g.half_length();
                        mom += k[i] * std::pow(d0, gx) * std::pow(d1, gy);
                    }
                    mom *= g.cell_volume();
                    CHECK(std::abs(mom) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("plus_maximal") {
    Grid g(2, 64, 4.0);
    auto unit = Mollifier::unit_bump();

    SUBCASE("constant field") {
        DiscreteForm c(g, 0);
        for (auto& v : c.comp(0)) v = 3.0;
        auto fp = plus_maximal(c, unit);
        for (double v : fp) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
    }

    SUBCASE("homogeneity and domination of every level") {
        Rng rng(9);
        DiscreteForm f(g, 0);
        f.comp(0) = random_band_limited(g, rng, 10);
        auto fp = plus_maximal(f, unit);
        DiscreteForm f2 = f;
        f2 *= -2.0;
        auto fp2 = plus_maximal(f2, unit);
        for (std::size_t i = 0; i < g.size(); i += 53)
            CHECK(fp2[i] == doctest::Approx(2.0 * fp[i]).epsilon(1e-12));
        for (double t : maximal_levels(g)) {
            DiscreteForm ft = mollify(f, t, unit);
            for (std::size_t i = 0; i < g.size(); i += 53)
                CHECK(ft.norm_at(i) <= fp[i] * (1.0 + 1e-12) + 1e-15);
        }
    }

    SUBCASE("tight bump: probes match a 10x finer level grid within 2%") {
        DiscreteForm f(g, 0);
        const Ball B({0.0, 0.0, 0.0}, 0.4);
        for (std::size_t i : cells_in_ball(g, B)) {
            auto x = g.point(i);
            const double r2 = (x[0] * x[0] + x[1] * x[1]) / (B.radius * B.radius);
            f.comp(0)[i] = std::exp(-1.0 / (1.0 - std::min(r2, 1.0 - 1e-12)));
        }
        auto fp = plus_maximal(f, unit);

        // decays away from the bump
        auto at = [&](double x0, double x1) {
            std::array<int, 3> idx{0, 0, 0};
            idx[0] = static_cast<int>((x0 + g.half_length()) / g.spacing());
            idx[1] = static_cast<int>((x1 + g.half_length()) / g.spacing());
            return g.flat(idx);
        };
        CHECK(fp[at(0.0, 0.0)] > fp[at(1.5, 0.0)]);
        CHECK(fp[at(1.5, 0.0)] > fp[at(3.0, 0.0)]);

        // brute-force sup over a 10x finer t-grid at probe points
        for (auto probe : {at(0.1, 0.1), at(0.9, -0.3), at(1.8, 1.2)}) {
            double sup = 0.0;
            const double lo = std::log2(maximal_levels(g).front());
            const double hi = std::log2(maximal_levels(g).back());
            for (double lk = lo; lk <= hi + 1e-9; lk += (hi - lo) / (10.0 * 5.0)) {
                const double t = std::pow(2.0, lk);
                const auto& kernel = sampled_kernel(g, unit, t).values;
                sup = std::max(sup, std::abs(direct_convolution_at(g, f.comp(0), kernel, probe)));
            }
            CHECK(fp[probe] == doctest::Approx(sup).epsilon(0.02));
        }
    }
}

TEST_CASE("area function") {
    Grid g(2, 64, 4.0);
    auto levels = maximal_levels(g);

    SUBCASE("zero and homogeneity") {
        SpaceTimeField F(g, 0, levels);
        auto s = area_function(F);
        for (double v : s) CHECK(v == 0.0);

        Rng rng(21);
        SpaceTimeField G(g, 0, levels);
        for (auto& slice : G.slices) slice.comp(0) = random_band_limited(g, rng, 8);
        auto s1 = area_function(G);
        for (auto& slice : G.slices) slice *= -3.0;
        auto s3 = area_function(G);
        for (std::size_t i = 0; i < g.size(); i += 71)
            CHECK(s3[i] == doctest::Approx(3.0 * s1[i]).epsilon(1e-10));
    }

    SUBCASE("single space-time cell matches the one-term formula") {
        SpaceTimeField F(g, 0, levels);
        const std::size_t k = 3; // t = 0.5
        const double t = levels[k];
        std::array<int, 3> yi{20, 40, 0};
        const std::size_t y0 = g.flat(yi);
        const double value = 1.7;
        F.slices[k].comp(0)[y0] = value;

        auto s = area_function(F);
        const double w = std::log(2.0); // interior dyadic level
        const double expected =
            std::sqrt(w * std::pow(t, -2.0) * g.cell_volume()) * value;
        auto ypt = g.point(y0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double dist = g.dist(g.point(i), ypt);
            if (dist < t) {
                CHECK(s[i] == doctest::Approx(expected).epsilon(1e-10));
            } else {
                // roundoff in S^2 appears as its square root here
                CHECK(std::abs(s[i]) < 1e-7 * expected);
            }
        }
    }
}

TEST_CASE("tent norm composes with the area function") {
    Grid g(2, 64, 4.0);
    auto levels = maximal_levels(g);
    SpaceTimeField F(g, 0, levels);
    Rng rng(33);
    for (auto& slice : F.slices) slice.comp(0) = random_band_limited(g, rng, 8);

    // p(x,t) = t: the tent norm is the L1 norm of S(F)
    auto s = area_function(F);
    double l1 = 0.0;
    for (double v : s) l1 += v;
    l1 *= g.cell_volume();
    CHECK(tent_norm(GrowthFunction::power(1.0), F) == doctest::Approx(l1).epsilon(1e-7));

    SpaceTimeField Z(g, 0, levels);
    CHECK(tent_norm(GrowthFunction::theta(), Z) == 0.0);
}

TEST_CASE("hardy norms") {
    Grid g(2, 64, 4.0);
    auto unit = Mollifier::unit_bump();

    DiscreteForm z(g, 1);
    CHECK(hardy_norm(GrowthFunction::theta(), z, unit) == 0.0);

    Rng rng(41);
    DiscreteForm f = random_closed_form(g, 1, rng, 8);
    double prev = 0.0;
    for (double c : {0.5, 1.0, 2.0}) {
        DiscreteForm cf = f;
        cf *= c;
        const double v = hlog_norm(cf, unit);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(h1_norm(f, unit) > 0.0);
}

TEST_CASE("support propagation of the Lusin function") {
    Grid g(2, 64, 4.0);
    // f supported in B; with levels capped at r_B/2 the area function of
    // f * phi_t is exactly supported in 2B
    const Ball B({0.5, -0.25, 0.0}, 1.0);
    DiscreteForm f(g, 0);
    for (std::size_t i : cells_in_ball(g, B)) {
        auto x = g.point(i);
        double r2 = 0.0;
        for (int a = 0; a < 2; ++a) {
            const double d = x[a] - B.center[a];
            r2 += d * d;
        }
        r2 /= B.radius * B.radius;
        if (r2 < 1.0) f.comp(0)[i] = std::exp(-1.0 / (1.0 - r2));
    }
    auto zm = Mollifier::zero_moment(0);
    auto levels = maximal_levels(g, B.radius / 2.0);
    SpaceTimeField F = mollified_stack(f, zm, levels);
    auto s = area_function(F);

    const Ball twoB = B.dilated(2.0);
    double inside_mass = 0.0, outside_mass = 0.0;
    std::vector<char> in(g.size(), 0);
    for (std::size_t c : cells_in_ball(g, twoB)) in[c] = 1;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (in[i]) inside_mass += s[i] * s[i];
        else outside_mass += s[i] * s[i];
    }
    CHECK(inside_mass > 0.0);
    CHECK(outside_mass <= 1e-10 * inside_mass); // relative L2 leak
}

TEST_CASE("tent norm of the mollified stack is controlled by the hardy norm") {
    Grid g(2, 64, 4.0);
    auto zm = Mollifier::zero_moment(0);
    auto unit = Mollifier::unit_bump();
    auto theta = GrowthFunction::theta();
    Rng rng(55);

    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        DiscreteForm f = random_closed_form(g, 1, rng, 10);
        SpaceTimeField F = mollified_stack(f, zm, maximal_levels(g));
        const double tn = tent_norm(theta, F);
        const double hn = hardy_norm(theta, f, unit);
        worst = std::max(worst, tn / hn);
    }
    CHECK(worst < 12.0); // frozen regression bound
}
