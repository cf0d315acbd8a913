#include "doctest.h"

#include <cmath>

#include "hlog/bmo.hpp"
#include "hlog/exterior.hpp"
#include "hlog/fixtures.hpp"
#include "hlog/local_primitive.hpp"
#include "hlog/random_fields.hpp"

using namespace hlog;

TEST_CASE("dyadic ball family") {
    Grid g(2, 64, 4.0);
    auto family = dyadic_ball_family(g);
    CHECK(family.size() > 100);
    for (const auto& b : family) {
        CHECK(b.fits(g));
        CHECK(b.radius > g.spacing());
    }
}

TEST_CASE("bmo_wp_norm") {
    Grid g(2, 64, 4.0);
    auto family = dyadic_ball_family(g);
    auto theta = GrowthFunction::theta();

    SUBCASE("constants have zero seminorm") {
        DiscreteForm c(g, 0);
        for (auto& v : c.comp(0)) v = 7.5;
        CHECK(bmo_wp_norm(c, theta, family) == 0.0);
    }

    SUBCASE("mean-shift invariance") {
        Rng rng(3);
        DiscreteForm f(g, 0);
        f.comp(0) = random_band_limited(g, rng, 8);
        const double base = bmo_wp_norm(f, theta, family);
        DiscreteForm shifted = f;
        for (auto& v : shifted.comp(0)) v += 42.0;
        CHECK(bmo_wp_norm(shifted, theta, family) == doctest::Approx(base).epsilon(1e-9));
    }

    SUBCASE("log-type fixture is finite and regression-pinned") {
        DiscreteForm gfield(g, 0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto x = g.point(i);
            const double ax = std::sqrt(x[0] * x[0] + x[1] * x[1]);
            gfield.comp(0)[i] = std::min(std::log(M_E + 2.0 * ax), std::log(M_E + 10.0));
        }
        const double v = bmo_wp_norm(gfield, theta, family);
        CHECK(v > 0.0);
        CHECK(v < 2.0); // frozen
    }
}

TEST_CASE("bmo_plus_norm") {
    Grid g(2, 64, 4.0);

    SUBCASE("constant form") {
        DiscreteForm c(g, 0);
        for (auto& v : c.comp(0)) v = -3.0;
        CHECK(bmo_plus_norm(c) == doctest::Approx(3.0).epsilon(1e-12));
    }

    SUBCASE("capped log profile") {
        DiscreteForm gfield(g, 0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto x = g.point(i);
            const double ax = std::sqrt(x[0] * x[0] + x[1] * x[1]);
            gfield.comp(0)[i] = std::min(std::log(M_E + 2.0 * ax), std::log(M_E + 10.0));
        }
        const double v = bmo_plus_norm(gfield);
        CHECK(v > 0.0);
        CHECK(v < 4.0); // frozen: Lemma-type fixtures stay uniformly bounded
    }

    SUBCASE("homogeneity") {
        Rng rng(11);
        DiscreteForm f(g, 1);
        f.comp(0) = random_band_limited(g, rng, 8);
        const double base = bmo_plus_norm(f);
        DiscreteForm f2 = f;
        f2 *= -2.5;
        CHECK(bmo_plus_norm(f2) == doctest::Approx(2.5 * base).epsilon(1e-10));
    }

    SUBCASE("min of two nonnegative fixtures is controlled by the max") {
        DiscreteForm a(g, 0), b(g, 0), mn(g, 0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto x = g.point(i);
            a.comp(0)[i] = std::log(M_E + 2.0 * std::abs(x[0]));
            b.comp(0)[i] = std::log(M_E + 1.0 / std::max(0.05, std::abs(x[1])));
            mn.comp(0)[i] = std::min(a.comp(0)[i], b.comp(0)[i]);
        }
        const double vmax = std::max(bmo_plus_norm(a), bmo_plus_norm(b));
        CHECK(bmo_plus_norm(mn) <= 3.0 * vmax); // frozen multiple
    }
}

TEST_CASE("pairing") {
    Grid g(2, 64, 4.0);
    auto theta = GrowthFunction::theta();
    AdmissibleTriple triple(theta, 2.0, 0, 2);

    SUBCASE("constant against a zero-mean atom vanishes") {
        Atom a = make_atom(g, Ball({0.3, -0.2, 0.0}, 1.0), triple, 2, true, {3, 2, 0.85});
        DiscreteForm c(g, 0);
        for (auto& v : c.comp(0)) v = 2.0;
        CHECK(std::abs(pairing(c, a.form, a.ball, 2.5e-2)) <= 1e-10 * l2_norm(a.form));
    }

    SUBCASE("closed g annihilates closed atoms of degree < n") {
        Rng rng(7);
        Atom a = make_atom(g, Ball({0.0, 0.4, 0.0}, 1.0), triple, 1, true, {5, 2, 0.85});
        // closed 1-form: d of a random band-limited scalar plus a constant
        DiscreteForm w = random_form(g, 0, rng, 6);
        DiscreteForm gform = exterior_derivative(w);
        for (auto& v : gform.comp(0)) v += 0.7;
        for (auto& v : gform.comp(1)) v -= 0.3;
        const double p = pairing(gform, a.form, a.ball, 2.5e-2);
        CHECK(std::abs(p) <= 1e-8 * l2_norm(a.form) * l2_norm(gform));
    }

    SUBCASE("bilinearity") {
        Rng rng(13);
        DiscreteForm f1 = random_form(g, 1, rng, 6);
        DiscreteForm f2 = random_form(g, 1, rng, 6);
        DiscreteForm gg = random_form(g, 1, rng, 6);
        DiscreteForm combo = f1;
        {
            DiscreteForm t = f2;
            t *= 2.0;
            combo += t;
        }
        CHECK(pairing(gg, combo) ==
              doctest::Approx(pairing(gg, f1) + 2.0 * pairing(gg, f2)).epsilon(1e-12));
    }

    SUBCASE("degree mismatch is rejected") {
        DiscreteForm f(g, 1), gg(g, 0);
        CHECK_THROWS_AS(pairing(gg, f), std::invalid_argument);
    }
}

TEST_CASE("john-nirenberg certificate") {
    Grid g(2, 64, 4.0);
    auto family = dyadic_ball_family(g);
    auto theta = GrowthFunction::theta();

    DiscreteForm c(g, 0);
    for (auto& v : c.comp(0)) v = 5.0;
    CHECK(john_nirenberg_certificate(c, theta, 2.0, family) == 0.0);

    DiscreteForm gfield(g, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = g.point(i);
        const double ax = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        gfield.comp(0)[i] = std::min(std::log(M_E + 2.0 * ax), std::log(M_E + 16.0));
    }
    const double jn = john_nirenberg_certificate(gfield, theta, 2.0, family);
    const double semi = bmo_wp_norm(gfield, theta, family);
    CHECK(jn > 0.0);
    CHECK(jn <= 40.0 * std::pow(semi, 2.0)); // frozen C for the log fixture family

    // translation invariance
    DiscreteForm shifted = gfield;
    for (auto& v : shifted.comp(0)) v += 9.0;
    CHECK(john_nirenberg_certificate(shifted, theta, 2.0, family) ==
          doctest::Approx(jn).epsilon(1e-9));

    CHECK_THROWS_AS(john_nirenberg_certificate(gfield, theta, 1.0, family), config_error);
}

TEST_CASE("bmo seminorm properties") {
    Grid g(2, 64, 4.0);
    auto family = dyadic_ball_family(g);
    auto theta = GrowthFunction::theta();
    Rng rng(29);

    DiscreteForm a(g, 0), b(g, 0);
    a.comp(0) = random_band_limited(g, rng, 8);
    b.comp(0) = random_band_limited(g, rng, 8);

    // absolute homogeneity
    DiscreteForm a3 = a;
    a3 *= -3.0;
    CHECK(bmo_wp_norm(a3, theta, family) ==
          doctest::Approx(3.0 * bmo_wp_norm(a, theta, family)).epsilon(1e-10));

    // triangle inequality on the discrete functional
    DiscreteForm sum = a;
    sum += b;
    CHECK(bmo_wp_norm(sum, theta, family) <=
          bmo_wp_norm(a, theta, family) + bmo_wp_norm(b, theta, family) + 1e-12);
}
