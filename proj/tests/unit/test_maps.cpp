#include <cmath>
#include <optional>
#include <random>

#include "confdim/maps.hpp"
#include "doctest.h"

using namespace confdim;

namespace {

// Direct rational evaluation in extended precision.
long double mobius_ld(long double p, long double q, long double r, long double s, long double x) {
    return (p * x + q) / (r * x + s);
}

ConformalMap random_moebius(std::mt19937_64& rng) {
    // Pole kept at distance >= 1 from [0,1].
    std::uniform_real_distribution<double> u(-1.0, 1.0), pole(2.0, 4.0);
    double r = u(rng) > 0 ? 1.0 : -1.0;
    double s = r > 0 ? pole(rng) : -pole(rng);   // pole -s/r outside [-1, 2]
    double p = u(rng), q = u(rng);
    if (std::fabs(p * s - q * r) < 0.1) q += 0.5;
    return ConformalMap::moebius(p, q, r, s, {0.0, 1.0});
}

}  // namespace

TEST_CASE("affine and Moebius evaluation") {
    auto f = ConformalMap::affine(0.25, 0.5);
    CHECK(f.evaluate(0.4) == doctest::Approx(0.6));
    CHECK(f.derivative(0.9) == doctest::Approx(0.25));
    CHECK(f.orientation() == 1);
    CHECK_FALSE(f.pole().has_value());

    auto g = ConformalMap::moebius(0, 1, 1, 2);
    CHECK(g.evaluate(0.5) == doctest::Approx(0.4));
    CHECK(g.derivative(0.5) == doctest::Approx(-1.0 / 6.25));
    CHECK(g.orientation() == -1);
    REQUIRE(g.pole().has_value());
    CHECK(*g.pole() == doctest::Approx(-2.0));
}

TEST_CASE("canonical form has unit determinant and positive leading entry") {
    auto g = ConformalMap::moebius(0, -2, -2, -4);
    auto c = g.matrix();
    CHECK(std::fabs(c.det()) == doctest::Approx(1.0));
    CHECK(c.q > 0.0);
    CHECK(g.approx_equal(ConformalMap::moebius(0, 1, 1, 2), 1e-14));
    CHECK(ConformalMap::affine(0.5, 0.25).approx_equal(ConformalMap::moebius(2, 1, 0, 4), 1e-14));
}

TEST_CASE("domain and pole errors") {
    auto f = ConformalMap::affine(0.5, 0.0);
    CHECK_THROWS_AS(f.evaluate(1.5), Error);
    try {
        f.evaluate(-3.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DomainViolation);
    }
    try {
        ConformalMap::moebius(1, 0, 1, -0.5);
        FAIL("pole at 0.5 accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PoleInDomain);
    }
    auto near = ConformalMap::moebius(1, 0, 1, 1.0000001, {0.0, 1.0});
    CHECK_NOTHROW(near.evaluate(0.5));
    try {
        compose(ConformalMap::moebius(1, 0, 1, 1.5, {-1.0, 1.0}), ConformalMap::affine(-2.0, 0.0, {-1.0, 1.0}));
        FAIL("composite pole accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PoleEntersDomain);
    }
}

TEST_CASE("matrix composition matches sequential evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> x01(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        auto f = random_moebius(rng);
        auto g = random_moebius(rng);
        std::optional<ConformalMap> h;
        try {
            h = compose(f.with_domain({-10.0, 10.0}), g);
        } catch (const Error&) {
            continue;   // composite pole near [0,1]
        }
        auto a = f.matrix(), b = g.matrix();
        for (int k = 0; k < 5; ++k) {
            double x = x01(rng);
            long double inner = mobius_ld(b.p, b.q, b.r, b.s, x);
            long double want = mobius_ld(a.p, a.q, a.r, a.s, inner);
            if (std::fabs(static_cast<double>(a.r * inner + a.s)) < 1e-3) continue;
            CHECK(std::fabs(h->value(x) - static_cast<double>(want)) <= 1e-12 * std::max(1.0, std::fabs((double)want)));
        }
    }
}

TEST_CASE("inverse round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x01(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        auto f = random_moebius(rng);
        auto inv = f.inverse();
        for (int k = 0; k < 5; ++k) {
            double x = x01(rng);
            CHECK(inv.value(f.value(x)) == doctest::Approx(x).epsilon(1e-10));
        }
    }
}

TEST_CASE("extended inverse is C1 across the junctions") {
    auto f = ConformalMap::moebius(1, 0, 1, 3, {0.0, 1.0});   // x / (x + 3), increasing
    double top = f.value(1.0), bottom = f.value(0.0);
    CHECK(invert_extended(f, 0.5 * (top + bottom)) == doctest::Approx(f.inverse().value(0.5 * (top + bottom))));
    const double h = 1e-7;
    CHECK(invert_extended(f, top) == doctest::Approx(1.0));
    double slope_out = (invert_extended(f, top + h) - invert_extended(f, top)) / h;
    double slope_in = (invert_extended(f, top) - invert_extended(f, top - h)) / h;
    CHECK(slope_out == doctest::Approx(1.0 / f.deriv_value(1.0)).epsilon(1e-6));
    CHECK(slope_in == doctest::Approx(slope_out).epsilon(1e-4));
    CHECK(slope_out > 1.0);   // repelling beyond f(J)
    CHECK(invert_extended(f, bottom - 0.1) == doctest::Approx(0.0 - 0.1 / f.deriv_value(0.0)));

    auto d = ConformalMap::affine(-0.5, 1.0);   // decreasing: f(0) = 1 is the top
    CHECK(invert_extended(d, 1.2) == doctest::Approx(-0.4));
    CHECK(invert_extended(d, 0.3) == doctest::Approx(1.4));
}

TEST_CASE("sup distance to identity never undercounts") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        auto f = random_moebius(rng);
        auto d = sup_distance_to_identity(f, {0.0, 1.0});
        double sampled = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            double x = k / 1000.0;
            sampled = std::max(sampled, std::fabs(f.value(x) - x));
        }
        CHECK(d.value >= sampled - 1e-15);
        CHECK(d.value <= sampled + 1e-3);
        CHECK(std::fabs(f.value(d.argmax) - d.argmax) == doctest::Approx(d.value));
    }
    auto shift = ConformalMap::affine(1.0, 0.01, {-0.05, 1.05});
    CHECK(sup_distance_to_identity(shift, {-0.05, 1.05}).value == doctest::Approx(0.01));
}

TEST_CASE("normalize sends the neighbourhood endpoints to 0 and 1") {
    auto g = ConformalMap::moebius(0, 1, 1, 2, {-0.05, 1.05});
    auto n = normalize(g, -0.05, 1.05);
    CHECK(n.value(-0.05) == doctest::Approx(0.0));
    CHECK(n.value(1.05) == doctest::Approx(1.0));
}
