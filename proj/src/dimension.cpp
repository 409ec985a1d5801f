#include "confdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "enumerate.hpp"

namespace confdim {

namespace {

constexpr double kCountTol = 1e-9;

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;   // root mean square
};

LineFit least_squares(const std::vector<FitPoint>& pts) {
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
    }
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
    }
    LineFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (const auto& p : pts) {
        double e = p.y - (f.intercept + f.slope * p.x);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

void clamp_unit(DimensionEstimate& est) {
    est.raw_value = est.value;
    if (est.value > 1.0 || est.value < 0.0) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "estimate %.6f clamped to [0,1]", est.value);
        est.warnings.emplace_back(buf);
        est.value = std::clamp(est.value, 0.0, 1.0);
    }
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// Log diameters of f_w(Delta) over all words of length k.
std::vector<double> log_diameters(const IfsSystem& sys, int k, const ExecOptions& ex) {
    double total = std::pow(static_cast<double>(sys.size()), k);
    if (total > static_cast<double>(ex.word_budget)) detail::throw_budget(ex.word_budget);
    auto gens = detail::generator_matrices(sys);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(total));
    auto rec = [&](auto&& self, const Mat2<double>& m, int level) -> void {
        if (level == k) {
            out.push_back(std::log(m.span(0.0, 1.0)));
            return;
        }
        for (const auto& g : gens) self(self, m * g, level + 1);
    };
    rec(rec, Mat2<double>{}, 0);
    return out;
}

double pressure(const std::vector<double>& logd, double s, int k) {
    double mx = -INFINITY;
    for (double l : logd) mx = std::max(mx, s * l);
    double acc = 0;
    for (double l : logd) acc += std::exp(s * l - mx);
    return (mx + std::log(acc)) / k;
}

}  // namespace

const char* method_name(Method m) noexcept {
    switch (m) {
        case Method::Box: return "box";
        case Method::Bowen: return "bowen";
        case Method::Assouad: return "assouad";
    }
    return "box";
}

const char* branch_name(Branch b) noexcept {
    switch (b) {
        case Branch::Agree: return "AGREE";
        case Branch::FullAssouad: return "FULL_ASSOUAD";
        case Branch::Inconsistent: return "INCONSISTENT";
    }
    return "INCONSISTENT";
}

std::size_t cover_count(std::span<const Interval> intervals, double center, double R, double rho) {
    const double wlo = center - R, whi = center + R;
    auto it = std::lower_bound(intervals.begin(), intervals.end(), wlo,
                               [](const Interval& iv, double x) { return iv.hi <= x; });
    std::size_t count = 0;
    double reach = -INFINITY;
    for (; it != intervals.end() && it->lo < whi; ++it) {
        double a = std::max(it->lo, wlo), b = std::min(it->hi, whi);
        if (b <= reach + kCountTol * rho) continue;
        double start = a > reach ? a : reach;
        double boxes = std::ceil((b - start) / rho - kCountTol);
        if (a > reach) boxes = std::max(1.0, boxes);
        count += static_cast<std::size_t>(boxes);
        reach = start + boxes * rho;
    }
    return count;
}

std::size_t cover_count_all(std::span<const Interval> intervals, double rho) {
    if (intervals.empty()) return 0;
    double lo = intervals.front().lo, hi = intervals.back().hi;
    double R = 0.5 * (hi - lo) + 1.0;
    return cover_count(intervals, 0.5 * (lo + hi), R, rho);
}

std::vector<double> default_box_resolutions(const IfsSystem& sys) {
    double r = sys.min_contraction();
    int j0 = static_cast<int>(std::ceil(std::log(0.04) / std::log(r)));
    std::vector<double> out;
    for (int j = j0; j < j0 + 7; ++j) out.push_back(std::pow(r, j));
    return out;
}

int default_bowen_depth(const IfsSystem& sys) {
    int k = 2;
    while (k + 2 <= 12 && std::pow(static_cast<double>(sys.size()), k + 2) <= 2e6) k += 2;
    return k;
}

DimensionEstimate box_dimension(const IfsSystem& sys, std::span<const double> resolutions, const ExecOptions& ex) {
    if (resolutions.size() < 4) throw Error(ErrorKind::InsufficientScales, "box counting needs at least 4 resolutions");
    DimensionEstimate est;
    est.method = Method::Box;
    for (double rho : resolutions) {
        auto sample = attractor_sample(sys, rho, ex);
        double n = static_cast<double>(cover_count_all(sample, rho));
        est.fit_points.push_back({std::log(1.0 / rho), std::log(n)});
    }
    LineFit f = least_squares(est.fit_points);
    est.value = f.slope;
    est.residual = f.residual;
    est.scales_used = fmt("rho from %.6g down to %.6g", resolutions.front(), resolutions.back());
    clamp_unit(est);
    return est;
}

DimensionEstimate bowen_dimension(const IfsSystem& sys, int depth, double tol, const ExecOptions& ex) {
    if (depth < 2) throw Error(ErrorKind::PreconditionNotMet, "bowen depth must be at least 2");
    DimensionEstimate est;
    est.method = Method::Bowen;
    for (int k = 2; k <= depth; k += 2) {
        auto logd = log_diameters(sys, k, ex);
        double lo = 0.0, hi = 1.5;
        if (!(pressure(logd, hi, k) < 0.0))
            throw Error(ErrorKind::NoRootInBracket, "pressure does not change sign on [0, 1.5]", k);
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            (pressure(logd, mid, k) > 0.0 ? lo : hi) = mid;
        }
        est.fit_points.push_back({static_cast<double>(k), 0.5 * (lo + hi)});
    }
    est.value = est.fit_points.back().y;
    est.residual = est.fit_points.size() > 1 ? std::fabs(est.value - est.fit_points[est.fit_points.size() - 2].y) : 0.0;
    est.scales_used = fmt("word lengths 2..%g, tol %.1g", static_cast<double>(est.fit_points.back().x), tol);
    clamp_unit(est);
    return est;
}

DimensionEstimate assouad_estimate(const IfsSystem& sys, int window_decades, int ratio_decades, const ExecOptions& ex) {
    if (window_decades < 2 || ratio_decades < 2)
        throw Error(ErrorKind::InsufficientScales, "assouad estimate needs at least 2 decades of each kind");
    DimensionEstimate est;
    est.method = Method::Assouad;
    std::map<int, std::vector<Interval>> samples;   // keyed by eighth-decade index of rho
    auto sample_at = [&](int eighth) -> const std::vector<Interval>& {
        auto it = samples.find(eighth);
        if (it == samples.end()) {
            double rho = std::pow(10.0, -0.125 * eighth);
            it = samples.emplace(eighth, attractor_sample(sys, rho / 4.0, ex)).first;
        }
        return it->second;
    };
    // For every ratio R/rho keep the largest count over all windows, then fit the slope.
    const int n_ratio = 4 * ratio_decades - 3;
    std::vector<std::size_t> top(n_ratio, 0);
    for (int h = 8; h <= 8 * window_decades; ++h) {
        double R = std::pow(10.0, -0.125 * h);
        auto centers_src = attractor_sample(sys, R, ex);
        for (int j = 4; j <= 4 * ratio_decades; ++j) {
            double rho = R / std::pow(10.0, 0.25 * j);
            const auto& s = sample_at(h + 2 * j);
            for (const auto& iv : centers_src) {
                std::size_t c = cover_count(s, iv.mid(), R, rho);
                if (c > top[j - 4]) {
                    top[j - 4] = c;
                    if (j == 4 * ratio_decades) {
                        est.witness_center = iv.mid();
                        est.witness_R = R;
                    }
                }
            }
        }
    }
    for (int j = 4; j <= 4 * ratio_decades; ++j)
        est.fit_points.push_back({0.25 * j * std::log(10.0), std::log(static_cast<double>(std::max<std::size_t>(top[j - 4], 1)))});
    LineFit f = least_squares(est.fit_points);
    double best = f.slope;
    est.residual = f.residual;
    est.value = best;
    est.scales_used = fmt("R from 1e-1 to %.3g, R/rho up to %.3g", std::pow(10.0, -window_decades),
                          std::pow(10.0, ratio_decades));
    clamp_unit(est);
    return est;
}

Branch decide_branch(double hausdorff, double assouad, Verdict verdict, const DichotomyParams& params) {
    if (verdict == Verdict::WspConsistent && std::fabs(assouad - hausdorff) <= params.tau_agree) return Branch::Agree;
    if (verdict == Verdict::WspFailing && assouad >= 1.0 - params.tau_full) return Branch::FullAssouad;
    return Branch::Inconsistent;
}

DichotomyReport dichotomy_report(const IfsSystem& sys, const DichotomyParams& params, const ExecOptions& ex) {
    DichotomyReport rep;
    rep.separation = separation_verdict(sys, params.separation, ex);
    auto res = params.box_resolutions.empty() ? default_box_resolutions(sys) : params.box_resolutions;
    rep.box = box_dimension(sys, res, ex);
    int depth = params.bowen_depth > 0 ? params.bowen_depth : default_bowen_depth(sys);
    rep.bowen = bowen_dimension(sys, depth, params.bowen_tol, ex);
    rep.assouad = assouad_estimate(sys, params.window_decades, params.ratio_decades, ex);
    rep.hausdorff = std::min(rep.bowen.value, rep.box.value);
    rep.dim_h_full = rep.hausdorff >= 1.0 - params.unit_tol;
    rep.branch = decide_branch(rep.hausdorff, rep.assouad.value, rep.separation.verdict, params);
    return rep;
}

}  // namespace confdim
