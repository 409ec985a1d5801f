#include <cmath>
#include <functional>
#include <random>

#include "confdim/dimension.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace confdim;

namespace {

// Exhaustive search over box placements on an integer lattice. `covered` is the
// right end of the last box; every box start is tried for the leftmost uncovered point.
std::size_t brute_force_cover(const std::vector<Interval>& ivs, int rho) {
    std::function<std::size_t(double)> rec = [&](double covered) -> std::size_t {
        std::optional<double> u;
        bool just_after = false;
        for (const auto& iv : ivs) {
            if (iv.hi <= covered) continue;
            if (iv.lo <= covered) {
                u = covered;
                just_after = true;
            } else {
                u = iv.lo;
            }
            break;
        }
        if (!u) return 0;
        std::size_t best = SIZE_MAX;
        int first = just_after ? static_cast<int>(*u) - rho + 1 : static_cast<int>(*u) - rho;
        for (int s = first; s <= static_cast<int>(*u); ++s) best = std::min(best, 1 + rec(s + rho));
        return best;
    };
    return rec(-1e9);
}

std::vector<Interval> random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(0, 4), gap(1, 5), count(1, 6);
    std::vector<Interval> out;
    int x = 0, n = count(rng);
    for (int k = 0; k < n; ++k) {
        x += gap(rng);
        int l = len(rng);
        out.push_back({static_cast<double>(x), static_cast<double>(x + l)});
        x += l;
    }
    return out;
}

}  // namespace

TEST_CASE("greedy cover count equals exhaustive search") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> rho_d(1, 6);
    for (int t = 0; t < 200; ++t) {
        auto ivs = random_instance(rng);
        int rho = rho_d(rng);
        CHECK(cover_count_all(ivs, rho) == brute_force_cover(ivs, rho));
        // Windowed count: clip to the open window (c - R, c + R) and compare with the clipped oracle.
        double c = ivs[ivs.size() / 2].lo, R = 4.0;
        std::vector<Interval> clipped;
        for (const auto& iv : ivs)
            if (iv.hi > c - R && iv.lo < c + R) clipped.push_back({std::max(iv.lo, c - R), std::min(iv.hi, c + R)});
        CHECK(cover_count(ivs, c, R, rho) == brute_force_cover(clipped, rho));
    }
}

TEST_CASE("cover count edge cases") {
    std::vector<Interval> one{{0.0, 1.0}};
    CHECK(cover_count_all(one, 1.0) == 1);
    CHECK(cover_count_all(one, 0.5) == 2);
    CHECK(cover_count_all(one, 0.3) == 4);
    std::vector<Interval> pts{{0.0, 0.0}, {0.1, 0.1}, {0.35, 0.35}};
    CHECK(cover_count_all(pts, 0.1) == 2);
    CHECK(cover_count_all(std::vector<Interval>{}, 0.1) == 0);
}

TEST_CASE("Bowen dimension of self-similar systems") {
    auto cantor = bowen_dimension(test_support::load("cantor3"), 8);
    CHECK(cantor.value == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-9));
    auto full = bowen_dimension(test_support::load("full_interval"), 8);
    CHECK(full.value == doctest::Approx(1.0).epsilon(1e-9));
    // 2^-s + 4^-s = 1 gives 2^-s = (sqrt 5 - 1) / 2.
    auto uneven = bowen_dimension(load_system("map affine 0.5 0\nmap affine 0.25 0.75\n"), 8);
    CHECK(uneven.value == doctest::Approx(std::log2(2.0 / (std::sqrt(5.0) - 1.0))).epsilon(1e-9));
    CHECK_THROWS_AS(bowen_dimension(test_support::load("cantor3"), 1), Error);
}

TEST_CASE("box dimension") {
    auto sys = test_support::load("cantor3");
    auto res = default_box_resolutions(sys);
    CHECK(res.size() == 7);
    CHECK(res.front() == doctest::Approx(1.0 / 27.0));
    auto box = box_dimension(sys, res);
    CHECK(box.value == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(0.01));
    std::vector<double> few{0.1, 0.01, 0.001};
    try {
        box_dimension(sys, few);
        FAIL("three resolutions accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientScales);
    }
}

TEST_CASE("Assouad estimate") {
    auto cantor = assouad_estimate(test_support::load("cantor3"));
    CHECK(std::fabs(cantor.value - std::log(2.0) / std::log(3.0)) <= 0.05);
    CHECK(cantor.fit_points.size() == 9);
    auto full = assouad_estimate(test_support::load("full_interval"));
    CHECK(full.value == doctest::Approx(1.0).epsilon(0.02));
    CHECK(full.value <= 1.0);
}

TEST_CASE("default Bowen depth respects the word cap") {
    CHECK(default_bowen_depth(test_support::load("cantor3")) == 12);
    CHECK(default_bowen_depth(test_support::load("overlap_pi")) == 12);
}

TEST_CASE("branch decision") {
    DichotomyParams p;
    CHECK(decide_branch(0.63, 0.65, Verdict::WspConsistent, p) == Branch::Agree);
    CHECK(decide_branch(0.63, 0.9, Verdict::WspConsistent, p) == Branch::Inconsistent);
    CHECK(decide_branch(0.9, 0.97, Verdict::WspFailing, p) == Branch::FullAssouad);
    CHECK(decide_branch(0.5, 0.8, Verdict::WspFailing, p) == Branch::Inconsistent);
    CHECK(decide_branch(0.5, 0.5, Verdict::Inconclusive, p) == Branch::Inconsistent);
}

TEST_CASE("dichotomy report on the Cantor set") {
    auto rep = dichotomy_report(test_support::load("cantor3"));
    CHECK(rep.branch == Branch::Agree);
    CHECK_FALSE(rep.dim_h_full);
    CHECK(rep.hausdorff == doctest::Approx(std::min(rep.bowen.value, rep.box.value)));
}
