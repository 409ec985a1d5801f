#pragma once

#include <utility>
#include <vector>

#include "confdim/cylinders.hpp"

namespace confdim {

inline constexpr int kGridPoints = 64;
inline constexpr double kSafetyFactor = 1.05;

struct DistortionReport {
    double K = 1.0;
    int depth = 0;
    Word worst_word;
    std::vector<std::pair<int, double>> ratio_histogram;   // (length, max ratio before inflation)
};

struct HolderReport {
    double beta = 1.0;
    double C_hat = 0.0;
    double C_tilde = 0.0;   // 2 K^2 C_hat, inflated
    std::size_t samples = 0;
};

struct HolderCheck {
    bool pass = true;
    double max_ratio = 0.0;     // max lhs / rhs; pass iff no ratio exceeds 1
    std::size_t violations = 0;
    std::size_t samples = 0;
    Word witness_v, witness_w;
    double x = 0.0, y = 0.0;
};

// 64 Chebyshev nodes on the interval, ascending.
std::vector<double> chebyshev_grid(const Interval& iv, int n = kGridPoints);

DistortionReport estimate_distortion_constant(const IfsSystem& sys, int depth, const ExecOptions& ex = {});

// C_hat = max |Df_v(x) - Df_v(y)| / (|x - y|^beta diam f_v(J)) over words up to depth.
HolderReport fit_composition_holder(const IfsSystem& sys, int depth, double beta, double K, const ExecOptions& ex = {});

HolderCheck check_composition_holder(const IfsSystem& sys, int depth, double beta, double C_hat,
                                     const ExecOptions& ex = {});

// eps <= 0 means the system's neighbourhood width.
HolderCheck check_inverse_composition_holder(const IfsSystem& sys, const Word& v, const Word& w, double beta,
                                             double C_tilde, double eps = 0.0);

}  // namespace confdim
