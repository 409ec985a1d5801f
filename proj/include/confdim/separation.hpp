#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confdim/cylinders.hpp"

namespace confdim {

struct NearIdentityPair {
    Word v, w;
    double distance = 0.0;     // sup over J of |f_v^-1 o f_w (x) - x|
    double gap_at_x1 = 0.0;    // f_v^-1 o f_w (x1) - x1
    int orientation = 1;
    int depth = 0;             // index on the scale grid, 1-based
    double b = 0.0;
};

struct MultiplicityResult {
    int max_count = 0;
    double witness_x = 0.0;
};

// Outcome of the pair search inside one stopping set.
struct ScaleSearch {
    double b = 0.0;
    int depth = 0;
    std::size_t records = 0;
    std::optional<NearIdentityPair> best;
    std::vector<std::pair<Word, Word>> exact_overlaps;
};

enum class Verdict { WspConsistent, WspFailing, Inconclusive };
const char* verdict_name(Verdict v) noexcept;

struct SeparationParams {
    int depth = 13;
    double theta_fail = 1e-4;
    double theta_hold = 1e-2;
    int trend_window = 3;
    double dedup_tol = kDedupTol;
    double exact_tol = 1e-13;
};

struct SeparationReport {
    std::vector<double> b_grid;
    std::vector<MultiplicityResult> multiplicities;
    std::vector<double> ilc_decay;                        // running minimum of the best distance
    std::vector<std::optional<NearIdentityPair>> best_pairs;
    std::vector<std::pair<Word, Word>> exact_overlaps;
    Verdict verdict = Verdict::Inconclusive;
    int gamma_observed = 0;
};

// b_j = r^j for j = 1..depth with r the smallest contraction constant.
std::vector<double> scale_grid(const IfsSystem& sys, int depth);

// Maximal number of open images f((0,1)), f in M_b, containing a common point.
MultiplicityResult overlap_multiplicity(const IfsSystem& sys, double b, const ExecOptions& ex = {},
                                        double dedup_tol = kDedupTol);
MultiplicityResult max_stabbing(const std::vector<ConformalMap>& maps);

// Closest non-identity composite f_v^-1 o f_w over same-orientation pairs of a stopping set.
ScaleSearch search_near_identity(const IfsSystem& sys, const StoppingSet& set, int depth = 0,
                                 double exact_tol = 1e-13);

// Best pair per grid scale; scales without a candidate pair are skipped.
std::vector<NearIdentityPair> nearest_identity_distance(const IfsSystem& sys, int depth, const ExecOptions& ex = {});

// Exact measurement of one pair.
NearIdentityPair measure_pair(const IfsSystem& sys, const Word& v, const Word& w);

std::uint64_t epsilon_separation_bound(double epsilon, double K, double diamJ);

SeparationReport separation_verdict(const IfsSystem& sys, const SeparationParams& params = {},
                                    const ExecOptions& ex = {});

// The verdict rule on its own, for already computed series.
Verdict decide_verdict(const std::vector<MultiplicityResult>& mult, const std::vector<double>& ilc,
                       const SeparationParams& params);

}  // namespace confdim
