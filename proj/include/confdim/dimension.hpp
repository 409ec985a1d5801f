#pragma once

#include <span>
#include <string>
#include <vector>

#include "confdim/separation.hpp"

namespace confdim {

enum class Method { Box, Bowen, Assouad };
const char* method_name(Method m) noexcept;

struct FitPoint {
    double x = 0.0;
    double y = 0.0;
};

struct DimensionEstimate {
    double value = 0.0;
    double raw_value = 0.0;         // before clamping to [0,1]
    Method method = Method::Box;
    std::vector<FitPoint> fit_points;
    double residual = 0.0;
    std::string scales_used;
    std::vector<std::string> warnings;
    // Assouad only: the window attaining the largest count at the finest ratio.
    double witness_center = 0.0;
    double witness_R = 0.0;
};

enum class Branch { Agree, FullAssouad, Inconsistent };
const char* branch_name(Branch b) noexcept;

struct DichotomyParams {
    SeparationParams separation;
    std::vector<double> box_resolutions;   // empty: default_box_resolutions
    int bowen_depth = 0;                   // 0: default_bowen_depth
    double bowen_tol = 1e-10;
    int window_decades = 2;
    int ratio_decades = 3;
    double tau_agree = 0.07;
    double tau_full = 0.07;
    double unit_tol = 0.02;                // dim_H within this of 1 raises the caveat flag
};

struct DichotomyReport {
    DimensionEstimate bowen;
    DimensionEstimate box;
    DimensionEstimate assouad;
    double hausdorff = 0.0;                // min(bowen, box)
    SeparationReport separation;
    Branch branch = Branch::Inconsistent;
    bool dim_h_full = false;
};

// Least number of closed length-rho intervals covering the sorted disjoint set
// intersected with the open window (center - R, center + R).
std::size_t cover_count(std::span<const Interval> intervals, double center, double R, double rho);
std::size_t cover_count_all(std::span<const Interval> intervals, double rho);

// r^j for seven consecutive j, starting at the first power below 0.04.
std::vector<double> default_box_resolutions(const IfsSystem& sys);
// Largest even k <= 12 with n^k <= 2e6.
int default_bowen_depth(const IfsSystem& sys);

DimensionEstimate box_dimension(const IfsSystem& sys, std::span<const double> resolutions, const ExecOptions& ex = {});
DimensionEstimate bowen_dimension(const IfsSystem& sys, int depth, double tol = 1e-10, const ExecOptions& ex = {});
DimensionEstimate assouad_estimate(const IfsSystem& sys, int window_decades = 2, int ratio_decades = 3,
                                   const ExecOptions& ex = {});

Branch decide_branch(double hausdorff, double assouad, Verdict verdict, const DichotomyParams& params);

DichotomyReport dichotomy_report(const IfsSystem& sys, const DichotomyParams& params = {}, const ExecOptions& ex = {});

}  // namespace confdim
