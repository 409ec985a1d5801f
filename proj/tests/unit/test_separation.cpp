#include <cmath>
#include <random>

#include "confdim/separation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace confdim;

namespace {

// Exact affine search: for equal-ratio maps f_v^-1 f_w is a translation by (b_w - b_v) / a.
struct Aff {
    long double a, b;
};

long double brute_force_affine(const IfsSystem& sys, int len) {
    std::vector<Aff> words{{1.0L, 0.0L}};
    for (int k = 0; k < len; ++k) {
        std::vector<Aff> next;
        for (const auto& w : words)
            for (std::size_t s = 0; s < sys.size(); ++s) {
                auto m = sys.map(s).matrix();
                next.push_back({w.a * m.p, w.a * m.q + w.b});
            }
        words = std::move(next);
    }
    long double best = INFINITY;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) {
            long double d = std::fabs(words[j].b - words[i].b) / words[i].a;
            if (d > 1e-13L) best = std::min(best, d);
        }
    return best;
}

}  // namespace

TEST_CASE("scale grid") {
    auto g = scale_grid(test_support::load("cantor3"), 4);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == doctest::Approx(1.0 / 3.0));
    CHECK(g[3] == doctest::Approx(1.0 / 81.0));
}

TEST_CASE("max stabbing against a brute-force count") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<ConformalMap> maps;
        for (int k = 0; k < 12; ++k) {
            double a = 0.05 + 0.2 * u(rng);
            maps.push_back(ConformalMap::affine(a, u(rng) * (1 - a)));
        }
        auto got = max_stabbing(maps);
        int want = 0;
        for (const auto& m : maps)
            for (double x : {m.image({0, 1}).lo, m.image({0, 1}).hi}) {
                int c = 0;
                for (const auto& n : maps) c += n.image({0, 1}).lo <= x && x <= n.image({0, 1}).hi;
                want = std::max(want, c);
            }
        CHECK(got.max_count == want);
    }
}

TEST_CASE("measure_pair on a translation") {
    auto sys = test_support::load("overlap_pi");
    auto p = measure_pair(sys, Word{0, 2}, Word{1, 0});
    double delta = (1.0 / M_PI - 2.0 / 9.0) * 9.0;   // (b_w - b_v) / a with a = 1/9
    CHECK(p.distance == doctest::Approx(std::fabs(delta)).epsilon(1e-12));
    CHECK(p.gap_at_x1 == doctest::Approx(delta).epsilon(1e-12));
    CHECK(p.orientation == 1);
}

TEST_CASE("nearest identity distance matches the affine brute force") {
    auto sys = test_support::load("overlap_pi");
    auto found = nearest_identity_distance(sys, 6);
    REQUIRE(found.size() == 6);
    for (int len = 1; len <= 6; ++len) {
        const auto& p = found[len - 1];
        CHECK(p.depth == len);
        CHECK(p.v.size() == static_cast<std::size_t>(len));
        CHECK(p.distance == doctest::Approx(static_cast<double>(brute_force_affine(sys, len))).epsilon(1e-12));
        CHECK(p.v < p.w);
    }
}

TEST_CASE("Cantor has multiplicity one and a large identity-limit distance") {
    auto sys = test_support::load("cantor3");
    SeparationParams p;
    p.depth = 8;
    auto rep = separation_verdict(sys, p);
    for (const auto& m : rep.multiplicities) CHECK(m.max_count == 1);
    CHECK(rep.verdict == Verdict::WspConsistent);
    CHECK(rep.ilc_decay.back() >= 1.0);
    CHECK(rep.exact_overlaps.empty());
}

TEST_CASE("overlap family fails separation") {
    auto rep = separation_verdict(test_support::load("overlap_golden"));
    CHECK(rep.verdict == Verdict::WspFailing);
    CHECK(rep.ilc_decay.back() < 1e-4);
    for (std::size_t k = 1; k < rep.ilc_decay.size(); ++k) CHECK(rep.ilc_decay[k] <= rep.ilc_decay[k - 1]);
}

TEST_CASE("exact overlaps are reported, not used as near-identity pairs") {
    auto sys = load_system("map affine 0.5 0\nmap affine 0.5 0.5\nmap affine 0.25 0\n");
    auto set = stopping_set(sys, 0.25);
    auto s = search_near_identity(sys, set);
    REQUIRE(s.exact_overlaps.size() == 1);
    CHECK(s.exact_overlaps[0].first == Word{0, 0});
    CHECK(s.exact_overlaps[0].second == Word{2});
    REQUIRE(s.best.has_value());
    CHECK(s.best->distance > 1e-13);
}

TEST_CASE("verdict rule") {
    SeparationParams p;
    auto mk = [](std::initializer_list<int> c) {
        std::vector<MultiplicityResult> out;
        for (int v : c) out.push_back({v, 0.0});
        return out;
    };
    CHECK(decide_verdict(mk({1, 1, 1, 1}), {2, 2, 2, 2}, p) == Verdict::WspConsistent);
    CHECK(decide_verdict(mk({2, 3, 4, 5}), {0.5, 0.1, 1e-3, 1e-5}, p) == Verdict::WspFailing);
    CHECK(decide_verdict(mk({2, 3, 3, 3}), {0.5, 0.1, 1e-3, 1e-5}, p) == Verdict::Inconclusive);
    CHECK(decide_verdict(mk({1, 1, 1}), {2, 2, 2}, p) == Verdict::Inconclusive);
    CHECK(decide_verdict(mk({1, 1, 1, 1}), {1, 0.5, 0.1, 0.05}, p) == Verdict::Inconclusive);
}

TEST_CASE("epsilon separation bound") {
    // a = ceil(diam / r) with r = eps / (K' - 1/K'); the bound is C(2a, a).
    CHECK(epsilon_separation_bound(1.0, 1.0, 1.1) == 6);       // r = 2/3, a = 2
    CHECK(epsilon_separation_bound(0.5, 2.0, 1.0) == 20);      // r = 1/3, a = 3
    CHECK(epsilon_separation_bound(0.75, 2.0, 1.1) == 20);     // r = 1/2, a = 3
    CHECK(epsilon_separation_bound(1e-9, 2.0, 1.0) == UINT64_MAX);
    CHECK_THROWS_AS(epsilon_separation_bound(0.0, 2.0, 1.0), Error);
}
