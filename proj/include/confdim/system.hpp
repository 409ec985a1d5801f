#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confdim/maps.hpp"

namespace confdim {

inline constexpr std::uint64_t kDefaultWordBudget = 10'000'000;

// Resource knobs shared by the enumerating operations.
struct ExecOptions {
    std::uint64_t word_budget = kDefaultWordBudget;
    unsigned threads = 1;
};

struct SystemOptions {
    double eps_neighbourhood = 0.05;   // J = [-eps, 1 + eps]
    double pole_margin_rel = kDefaultPoleMarginRel;
    double hull_tol = 1e-14;
    double snap_tol = 1e-12;           // hulls this close to [0,1] are not rescaled
    double tie_tol = 1e-12;            // fixed points closer than this are equal
};

// A generator before normalization.
struct MapSpec {
    MapKind kind = MapKind::Affine;
    std::array<double, 4> coeffs{};    // affine: a, b; moebius: p, q, r, s
};

struct ValidationReport {
    std::vector<double> contraction_constants;
    Interval hull_before;
    double rescale_scale = 1.0;        // x -> scale * x + shift
    double rescale_shift = 0.0;
    bool rescaled = false;
    std::vector<double> fixed_points;
    std::vector<int> orientation;
    std::vector<std::string> warnings;
};

class IfsSystem {
public:
    const std::vector<ConformalMap>& maps() const { return maps_; }
    const ConformalMap& map(std::size_t i) const { return maps_[i]; }
    std::size_t size() const { return maps_.size(); }

    Interval delta() const { return {0.0, 1.0}; }
    const Interval& j() const { return j_; }
    double eps_neighbourhood() const { return eps_; }

    double x0() const { return x0_; }
    double x1() const { return x1_; }
    std::size_t f1_index() const { return f1_; }
    std::size_t f0_index() const { return f0_; }

    const ValidationReport& validation() const { return report_; }
    bool all_affine() const { return all_affine_; }
    // min_i c_i with c_i = sup_J |Df_i|; also the geometric ratio of the scale grid.
    double min_contraction() const { return c_min_; }
    double max_contraction() const { return c_max_; }
    // min_i inf_Delta |Df_i|.
    double min_derivative() const { return d_min_; }

    friend IfsSystem build_system(const std::vector<MapSpec>& specs, std::optional<Interval> hint,
                                  const SystemOptions& opts);

private:
    std::vector<ConformalMap> maps_;
    Interval j_;
    double eps_ = 0.05;
    double x0_ = 0.0, x1_ = 1.0;
    std::size_t f1_ = 0, f0_ = 0;
    ValidationReport report_;
    bool all_affine_ = true;
    double c_min_ = 0.0, c_max_ = 0.0, d_min_ = 0.0;
};

struct ParsedConfig {
    std::vector<MapSpec> maps;
    std::optional<Interval> hint;
};

ParsedConfig parse_config(std::string_view text);

IfsSystem build_system(const std::vector<MapSpec>& specs, std::optional<Interval> hint = std::nullopt,
                       const SystemOptions& opts = {});

IfsSystem load_system(std::string_view config_text, const SystemOptions& opts = {});
IfsSystem load_system_file(const std::string& path, const SystemOptions& opts = {});

double fixed_point(const ConformalMap& map);

std::vector<Interval> attractor_sample(const IfsSystem& sys, double resolution, const ExecOptions& ex = {});

// Sorted closed intervals with overlapping or touching neighbours joined.
std::vector<Interval> merge_intervals(std::vector<Interval> v);

}  // namespace confdim
