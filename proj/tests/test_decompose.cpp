#include "doctest.h"

#include <cmath>

#include "hlog/decompose.hpp"
#include "hlog/exterior.hpp"
#include "hlog/fixtures.hpp"
#include "hlog/maximal.hpp"

using namespace hlog;

namespace {

double rel_l2(const DiscreteForm& a, const DiscreteForm& b) {
    DiscreteForm d = a;
    d -= b;
    const double nb = l2_norm(b);
    return nb > 0.0 ? l2_norm(d) / nb : l2_norm(d);
}

} // namespace

TEST_CASE("periodic distance transform") {
    Grid g(2, 32, 4.0);
    // mask: disc of radius 1 at (0.5, -0.5)
    const Ball B({0.5, -0.5, 0.0}, 1.0);
    std::vector<char> mask(g.size(), 0);
    for (std::size_t c : cells_in_ball(g, B)) mask[c] = 1;
    auto dist2 = periodic_distance_sq(g, mask);

    // brute-force check on a sample of cells
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t i = static_cast<std::size_t>(rng.next_u64() % g.size());
        double best = 1e30;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (mask[j]) continue;
            const double d = g.dist(g.point(i), g.point(j));
            best = std::min(best, d * d);
        }
        if (!mask[i]) best = 0.0;
        CHECK(dist2[i] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("tent decomposition partitions the field exactly") {
    Grid g(2, 64, 4.0);
    auto theta = GrowthFunction::theta();
    auto zm = Mollifier::zero_moment(0);

    // F from a mollified closed field with decompose-compatible geometry
    const Ball support({0.1, -0.2, 0.0}, 0.6);
    DiscreteForm f = closed_field_fixture(g, 2, 42, support, 3);
    auto levels = maximal_levels(g, 0.5);
    DiscreteForm df = codifferential(f);
    SpaceTimeField F(g, 1, levels);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        F.slices[k] = mollify(df, levels[k], zm);
        F.slices[k] *= levels[k];
    }

    auto td = tent_decompose(F, theta);
    CHECK(td.atoms.size() > 0);
    CHECK(td.weight_functional > 0.0);

    // exact re-summation
    SpaceTimeField R = tent_reassemble(td, g);
    for (std::size_t k = 0; k < levels.size(); ++k)
        CHECK(rel_l2(R.slices[k], F.slices[k]) < 1e-12);

    // every entry lies in the tent over its ball, and the size bound is
    // saturated within roundoff for the tested exponents
    for (std::size_t j = 0; j < td.atoms.size(); ++j) {
        const auto& A = td.atoms[j];
        for (const auto& e : A.entries) {
            const double t = levels[static_cast<std::size_t>(e.level)];
            double dy = 0.0;
            auto y = g.point(e.cell);
            for (int a = 0; a < 2; ++a) {
                const double d = y[a] - A.ball.center[a];
                dy += d * d;
            }
            CHECK(std::sqrt(dy) + t <= A.ball.radius * (1.0 + 1e-9));
        }
        SpaceTimeField dense = A.dense(g, 1, levels);
        auto SA = area_function(dense);
        const double chi = chi_ball_norm(theta, g, A.ball);
        const double measure = ball_measure(g, A.ball);
        for (double p : {2.0, 4.0}) {
            double lp = 0.0;
            for (double v : SA) lp += std::pow(v, p);
            lp = std::pow(lp * g.cell_volume(), 1.0 / p);
            CHECK(lp <= std::pow(measure, 1.0 / p) / chi * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("tent decomposition of zero is empty") {
    Grid g(2, 32, 4.0);
    SpaceTimeField F(g, 0, maximal_levels(g, 0.5));
    auto td = tent_decompose(F, GrowthFunction::theta());
    CHECK(td.atoms.empty());
    CHECK(td.weight_functional == 0.0);
}

TEST_CASE("pi_phi") {
    Grid g(2, 64, 4.0);
    auto zm = Mollifier::zero_moment(0);
    auto levels = maximal_levels(g, 0.5);
    AdmissibleTriple triple(GrowthFunction::theta(), 2.0, 0, 2);

    SUBCASE("single-cell atom matches the one-term formula") {
        TentAtom A;
        const std::size_t k = levels.size() - 1; // t = 0.5
        const double t = levels[k];
        std::array<int, 3> yi{20, 40, 0};
        A.ball = Ball({g.coord(20), g.coord(40), 0.0}, t * 1.5);
        A.entries.push_back({static_cast<int>(k), g.flat(yi), {1.3}});

        DiscreteForm out = pi_phi_form(g, A, 0, levels, zm);

        // hand evaluation: w_k h^n v phi_t(x - y0), right-edge trapezoid weight
        const double w = 0.5 * (std::log(levels[k] / levels[k - 1]) +
                                std::log(levels[k] / levels[k - 1]));
        const auto& kernel = sampled_kernel(g, zm, t).values;
        for (std::size_t probe : {std::size_t(20 * 64 + 40), std::size_t(22 * 64 + 44),
                                  std::size_t(5 * 64 + 9)}) {
            auto pi = g.unflat(probe);
            std::array<int, 3> d{((pi[0] - 20) % 64 + 64) % 64, ((pi[1] - 40) % 64 + 64) % 64, 0};
            const double expected = w * g.cell_volume() * 1.3 * kernel[g.flat(d)];
            CHECK(out.comp(0)[probe] == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    SUBCASE("zero atom maps to zero") {
        TentAtom A;
        A.ball = Ball({0, 0, 0}, 1.0);
        DiscreteForm out = pi_phi_form(g, A, 0, levels, zm);
        CHECK(l2_norm(out) == 0.0);
    }

    SUBCASE("pipeline tent atoms map to validated atoms on the doubled ball") {
        auto theta = GrowthFunction::theta();
        const Ball support({0.0, 0.0, 0.0}, 1.25);
        DiscreteForm f = closed_field_fixture(g, 1, 7, support, 2);
        DiscreteForm df = codifferential(f); // 0-form
        SpaceTimeField F(g, 0, levels);
        for (std::size_t k = 0; k < levels.size(); ++k) {
            F.slices[k] = mollify(df, levels[k], zm);
            F.slices[k] *= levels[k];
        }
        TentOptions topts;
        topts.min_piece_mass = 1e-9; // machine-noise pieces carry no content
        // drop the spectral tails like the decomposition pipeline does, so
        // that the cover stays central and every ball fits the box
        double fmax = 0.0;
        for (auto& slice : F.slices)
            for (std::size_t i = 0; i < g.size(); ++i) fmax = std::max(fmax, slice.norm_at(i));
        for (auto& slice : F.slices)
            for (std::size_t i = 0; i < g.size(); ++i)
                if (slice.norm_at(i) <= 1e-3 * fmax)
                    for (int c = 0; c < slice.component_count(); ++c) slice.comp(c)[i] = 0.0;
        auto td = tent_decompose(F, theta, topts);
        REQUIRE(td.atoms.size() > 0);
        double worst_size = 0.0, worst_moment = 0.0, worst_leak = 0.0;
        for (const auto& A : td.atoms) {
            Atom a = pi_phi(g, A, 0, levels, zm, triple);
            if (l2_norm(a.form) == 0.0) continue;
            worst_size = std::max(worst_size, a.validation.size_ratio);
            worst_moment = std::max(worst_moment, a.validation.max_moment_residual);
            worst_leak = std::max(worst_leak, a.validation.support_leak);
        }
        CHECK(worst_moment <= 1e-8);   // exact-moment kernels
        CHECK(worst_leak <= 1e-10);    // tent geometry gives hard support
        CHECK(worst_size < 4.0);       // frozen size slack for pipeline atoms
    }
}

TEST_CASE("closed atomic decomposition") {
    Grid g(2, 64, 4.0);
    auto theta = GrowthFunction::theta();
    auto zm = Mollifier::zero_moment(0);

    SUBCASE("zero input gives an empty decomposition") {
        DiscreteForm z(g, 1);
        auto d = closed_atomic_decompose(z, theta, Mollifier::zero_moment_wide(0));
        CHECK(d.atoms.empty());
    }

    SUBCASE("non-closed input is rejected") {
        DiscreteForm bad(g, 1);
        add_window_bump(g, bad.comp(0), {0.0, 0.0, 0.0}, 0.8, 1.0);
        CHECK_THROWS_AS(closed_atomic_decompose(bad, theta, Mollifier::zero_moment_wide(0)), numeric_error);
    }

    SUBCASE("single closed atom round-trips") {
        AdmissibleTriple triple(theta, 2.0, 0, 2);
        Atom a = make_atom(g, Ball({0.2, -0.1, 0.0}, 0.9), triple, 2, true, {5, 2, 0.85});
        auto d = closed_atomic_decompose(a.form, theta, Mollifier::zero_moment_wide(0));
        REQUIRE(d.atoms.size() > 0);
        CHECK(d.reconstruction_error <= 1e-3);
        for (const auto& atom : d.atoms) {
            CHECK(atom.validation.d_residual <= 1e-10);
            CHECK(atom.validation.support_leak <= 2.5e-2);
            CHECK(atom.validation.size_ratio <= 1.1); // frozen pipeline slack
            CHECK(atom.ball.fits(g));
        }
        CHECK(d.nq_value > 0.0);
        CHECK(d.renormalization.size() == 1); // the recorded constant
    }

    SUBCASE("three-atom field round-trips and stays closed") {
        const Ball support({0.0, 0.0, 0.0}, 1.25);
        DiscreteForm f = closed_field_fixture(g, 2, 19, support, 3);
        auto d = closed_atomic_decompose(f, theta, Mollifier::zero_moment_wide(0));
        REQUIRE(d.atoms.size() > 0);
        CHECK(d.reconstruction_error <= 1e-3);
        DiscreteForm sum = synthesize(d);
        CHECK(d_residual(sum) <= 1e-10);
    }

    SUBCASE("degree-1 input works through the scalar slices") {
        const Ball support({0.1, 0.1, 0.0}, 1.25);
        DiscreteForm f = closed_field_fixture(g, 1, 23, support, 2);
        auto d = closed_atomic_decompose(f, theta, Mollifier::zero_moment_wide(0));
        REQUIRE(d.atoms.size() > 0);
        CHECK(d.reconstruction_error <= 1e-3);
        for (const auto& atom : d.atoms) CHECK(atom.validation.d_residual <= 1e-10);
    }
}
