#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confdim/separation.hpp"

namespace confdim {

enum class Side { Below, Above };
const char* side_name(Side s) noexcept;

struct TangentPair {
    NearIdentityPair pair;
    Side side = Side::Below;
    double comparability = 1.0;   // |g(x1)| / ||g||
    int extension_m = 0;
};

struct GapProfile {
    double rho = 0.0;
    double xi = 0.0;   // min |g| on B_rho(x1) within J
    double Xi = 0.0;   // max |g| on the same set
};

// A letter of a word in the generators and their inverses.
struct Letter {
    int symbol = 0;
    bool inverse = false;
    friend bool operator==(const Letter&, const Letter&) = default;
};

// Letters l_1 ... l_n stand for f_{l_1} o ... o f_{l_n}.
class SignedWord {
public:
    SignedWord() = default;
    static SignedWord forward(const Word& w);
    static SignedWord inverse_of(const Word& w);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    SignedWord operator+(const SignedWord& o) const;
    // Free reduction: cancels adjacent x x^-1 pairs.
    SignedWord reduced() const;
    std::string to_string() const;
    friend bool operator==(const SignedWord&, const SignedWord&) = default;

private:
    std::vector<Letter> letters_;
};

// Sequential extended-precision evaluation of a signed word at x.
long double evaluate_signed(const IfsSystem& sys, const SignedWord& w, long double x);

struct TangentParams {
    double comparability_floor = 0.05;
    int m_max = 200;
    double window_lo = 0.25;          // lower window edge as a fraction of epsilon
    int step_cap_factor = 4;          // at most step_cap_factor * i steps
    double alpha_cap = 10.0;
    double sample_factor = 1e-4;      // sample resolution relative to the smallest step
    double norm_cap = 0.0;            // extended pairs must stay below this norm; 0 means eps of J
    std::uint64_t sample_budget = 4'000'000;
};

struct TangentStep {
    int n = 0;
    std::size_t pair_index = 0;
    int m = 0;
    double point = 0.0;
    double increment = 0.0;
};

struct TangentWitness {
    int i = 1;
    double epsilon = 1.0;
    double kappa = 4.0;               // points lie in [-kappa eps, 1 + kappa eps]
    Side side = Side::Below;
    std::vector<TangentPair> pairs;
    std::vector<TangentStep> steps;
    SignedWord T_word;                // recipe q of T_i
    std::vector<double> points;       // sorted, includes x1
    double left_gap = 1.0;
    double alpha = 1.0;
    std::size_t sample_size = 0;
    std::optional<int> failed_step;   // set when no pair fitted the window at that step
    int f1_ = 0;                      // symbol of f1

    int f1_symbol() const { return f1_; }

    // Word of psi_n and phi_n for a completed step n.
    Word psi_word(int n) const;
    SignedWord phi_word(int n) const;
    // u_l with T_word + forward(u_l) reducing to phi_l + psi_l.
    Word u_word(int l) const;
};

std::vector<TangentPair> select_tangent_pairs(const IfsSystem& sys, int depth, int count,
                                              const TangentParams& params = {}, const ExecOptions& ex = {});
// Same selection from an existing list of pairs.
std::vector<TangentPair> select_from_pairs(const IfsSystem& sys, const std::vector<NearIdentityPair>& found, int count,
                                           const TangentParams& params = {});

TangentPair make_tangent_pair(const IfsSystem& sys, const NearIdentityPair& p);
TangentPair extend_pair(const IfsSystem& sys, const TangentPair& pair, const TangentParams& params = {});
GapProfile gap_profile(const IfsSystem& sys, const TangentPair& pair, double rho);

// Runs the construction and reports a failed step instead of throwing.
TangentWitness build_tangent_attempt(const IfsSystem& sys, std::span<const TangentPair> pairs, int i,
                                     const TangentParams& params = {});
// Throws StepSelectionFailed(n) when the attempt stalls.
TangentWitness build_tangent_witness(const IfsSystem& sys, std::span<const TangentPair> pairs, int i,
                                     const TangentParams& params = {});

// sup over a of the distance to b; both sorted lists of closed intervals (points allowed).
double left_hausdorff_distance(std::span<const Interval> a, std::span<const Interval> b);

struct TransportCheck {
    bool pass = true;
    std::size_t source_count = 0;   // N_rho(A)
    std::size_t image_count = 0;    // N_{alpha rho}(T(A))
};

TransportCheck check_covering_transport(std::span<const double> points, const ConformalMap& T, double alpha, double rho);

}  // namespace confdim
