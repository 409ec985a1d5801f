#include <cmath>

#include "confdim/distortion.hpp"
#include "confdim/separation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace confdim;

namespace {

// Exact distortion ratio over words up to depth: |Df_w| is monotone on J for a
// pole-free Moebius map, so the extremes sit at the endpoints of J.
double endpoint_distortion(const IfsSystem& sys, int depth) {
    double worst = 1.0;
    std::vector<Mat2<long double>> level{Mat2<long double>{}};
    for (int k = 1; k <= depth; ++k) {
        std::vector<Mat2<long double>> next;
        for (const auto& m : level)
            for (std::size_t s = 0; s < sys.size(); ++s) next.push_back(m * Mat2<long double>::from(sys.map(s).matrix()));
        for (const auto& m : next) {
            const long double lo = sys.j().lo, hi = sys.j().hi;
            long double diam = std::fabs(m(1.0L) - m(0.0L));
            for (long double x : {lo, hi}) {
                long double d = std::fabs(m.deriv(x));
                worst = std::max(worst, static_cast<double>(std::max(d / diam, diam / d)));
            }
        }
        level = std::move(next);
    }
    return worst;
}

}  // namespace

TEST_CASE("Chebyshev grid") {
    auto g = chebyshev_grid({0.0, 1.0}, 8);
    REQUIRE(g.size() == 8);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i - 1] < g[i]);
    CHECK(g.front() > 0.0);
    CHECK(g.back() < 1.0);
    CHECK(g.front() == doctest::Approx(0.5 - 0.5 * std::cos(M_PI / 16.0)));
}

TEST_CASE("affine systems have no distortion") {
    auto rep = estimate_distortion_constant(test_support::load("overlap_pi"), 5);
    CHECK(rep.K == doctest::Approx(kSafetyFactor));
}

TEST_CASE("Moebius distortion bounds the endpoint oracle") {
    auto sys = test_support::load("moebius_cf");
    for (int depth : {2, 4, 6}) {
        auto rep = estimate_distortion_constant(sys, depth);
        double oracle = endpoint_distortion(sys, depth);
        CHECK(rep.K >= oracle);
        CHECK(rep.K <= kSafetyFactor * oracle * (1 + 1e-12));
        CHECK(rep.ratio_histogram.size() == static_cast<std::size_t>(depth));
    }
}

TEST_CASE("composition Hoelder fit passes its own check") {
    auto sys = test_support::load("moebius_cf");
    auto K = estimate_distortion_constant(sys, 6).K;
    auto fit = fit_composition_holder(sys, 6, 1.0, K);
    CHECK(fit.C_hat > 0.0);
    CHECK(fit.C_tilde == doctest::Approx(2.0 * K * K * fit.C_hat * kSafetyFactor));
    auto chk = check_composition_holder(sys, 6, 1.0, fit.C_hat);
    CHECK(chk.pass);
    CHECK(chk.violations == 0);
    auto tight = check_composition_holder(sys, 6, 1.0, 0.5 * fit.C_hat / kSafetyFactor);
    CHECK_FALSE(tight.pass);
    CHECK(tight.violations > 0);
}

TEST_CASE("inverse composition Hoelder on an affine pair is trivially satisfied") {
    auto sys = test_support::load("overlap_pi");
    auto near = nearest_identity_distance(sys, 6).back();
    REQUIRE(near.distance < sys.eps_neighbourhood());
    auto chk = check_inverse_composition_holder(sys, near.v, near.w, 1.0, 1.0);
    CHECK(chk.pass);
    CHECK(chk.max_ratio == doctest::Approx(0.0));
    CHECK_THROWS_AS(check_inverse_composition_holder(sys, Word{0, 2, 2}, Word{1, 0, 0}, 1.0, 1.0), Error);
}
