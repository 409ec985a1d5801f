#include "confdim/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "enumerate.hpp"

namespace confdim {

namespace {

inline constexpr double kCheckSlack = 1e-12;

// All words of length 1..depth with their composite matrices, in lexicographic order.
template <class Fn>
void for_each_word_upto(const IfsSystem& sys, int depth, const ExecOptions& ex, Fn&& fn) {
    double n = static_cast<double>(sys.size());
    double total = n * (std::pow(n, depth) - 1.0) / (n - 1.0);
    if (total > static_cast<double>(ex.word_budget)) detail::throw_budget(ex.word_budget);
    auto gens = detail::generator_matrices(sys);
    std::string w;
    auto rec = [&](auto&& self, const Mat2<double>& m) -> void {
        for (std::size_t i = 0; i < gens.size(); ++i) {
            Mat2<double> c = m * gens[i];
            w.push_back(static_cast<char>(i));
            fn(w, c);
            if (static_cast<int>(w.size()) < depth) self(self, c);
            w.pop_back();
        }
    };
    rec(rec, Mat2<double>{});
}

}  // namespace

std::vector<double> chebyshev_grid(const Interval& iv, int n) {
    std::vector<double> g(n);
    double mid = iv.mid(), half = 0.5 * iv.length();
    for (int k = 0; k < n; ++k) g[k] = mid - half * std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n));
    return g;
}

DistortionReport estimate_distortion_constant(const IfsSystem& sys, int depth, const ExecOptions& ex) {
    if (depth < 1) throw Error(ErrorKind::PreconditionNotMet, "depth must be at least 1");
    auto grid = chebyshev_grid(sys.j());
    DistortionReport rep;
    rep.depth = depth;
    std::vector<double> per_len(depth + 1, 1.0);
    double worst = 1.0;
    for_each_word_upto(sys, depth, ex, [&](const std::string& w, const Mat2<double>& m) {
        double diam = m.span(0.0, 1.0);
        double r = 1.0;
        for (double x : grid) {
            double d = std::fabs(m.deriv(x));
            r = std::max({r, d / diam, diam / d});
        }
        per_len[w.size()] = std::max(per_len[w.size()], r);
        if (r > worst) {
            worst = r;
            rep.worst_word = Word::from_bytes(w);
        }
    });
    for (int k = 1; k <= depth; ++k) rep.ratio_histogram.emplace_back(k, per_len[k]);
    if (rep.worst_word.empty()) rep.worst_word = Word{0};
    rep.K = kSafetyFactor * worst;
    return rep;
}

namespace {

// Scans lhs / rhs over words and grid pairs; C_hat = 0 returns the raw maximum.
HolderCheck scan_holder(const IfsSystem& sys, int depth, double beta, double C_hat, const ExecOptions& ex) {
    if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorKind::PreconditionNotMet, "beta must lie in (0, 1]");
    if (depth < 1) throw Error(ErrorKind::PreconditionNotMet, "depth must be at least 1");
    const Interval& J = sys.j();
    auto grid = chebyshev_grid(J);
    std::vector<std::vector<double>> dist(grid.size(), std::vector<double>(grid.size()));
    for (std::size_t a = 0; a < grid.size(); ++a)
        for (std::size_t b = 0; b < grid.size(); ++b) dist[a][b] = std::pow(std::fabs(grid[a] - grid[b]), beta);
    HolderCheck out;
    std::vector<double> d(grid.size());
    for_each_word_upto(sys, depth, ex, [&](const std::string& w, const Mat2<double>& m) {
        double diam = m.span(J.lo, J.hi);
        for (std::size_t a = 0; a < grid.size(); ++a) d[a] = m.deriv(grid[a]);
        for (std::size_t a = 0; a < grid.size(); ++a) {
            for (std::size_t b = a + 1; b < grid.size(); ++b) {
                double lhs = std::fabs(d[a] - d[b]);
                double rhs = dist[a][b] * diam;
                double ratio = C_hat > 0.0 ? lhs / (C_hat * rhs) : lhs / rhs;
                ++out.samples;
                if (C_hat > 0.0 && lhs > C_hat * rhs * (1.0 + kCheckSlack)) ++out.violations;
                if (ratio > out.max_ratio) {
                    out.max_ratio = ratio;
                    out.witness_v = Word::from_bytes(w);
                    out.x = grid[a];
                    out.y = grid[b];
                }
            }
        }
    });
    out.pass = out.violations == 0;
    return out;
}

}  // namespace

HolderReport fit_composition_holder(const IfsSystem& sys, int depth, double beta, double K, const ExecOptions& ex) {
    HolderCheck scan = scan_holder(sys, depth, beta, 0.0, ex);
    HolderReport rep;
    rep.beta = beta;
    rep.C_hat = scan.max_ratio;
    rep.C_tilde = 2.0 * K * K * rep.C_hat * kSafetyFactor;
    rep.samples = scan.samples;
    return rep;
}

HolderCheck check_composition_holder(const IfsSystem& sys, int depth, double beta, double C_hat,
                                     const ExecOptions& ex) {
    if (!(C_hat > 0.0)) throw Error(ErrorKind::PreconditionNotMet, "C_hat must be positive");
    return scan_holder(sys, depth, beta, C_hat, ex);
}

HolderCheck check_inverse_composition_holder(const IfsSystem& sys, const Word& v, const Word& w, double beta,
                                             double C_tilde, double eps) {
    if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorKind::PreconditionNotMet, "beta must lie in (0, 1]");
    if (eps <= 0.0) eps = sys.eps_neighbourhood();
    const Interval& J = sys.j();
    using LD = long double;
    Mat2<LD> g = word_matrix<LD>(sys, v).adj() * word_matrix<LD>(sys, w);
    if (g.r != 0.0L) {
        LD pole = -g.s / g.r;
        if (pole >= J.lo && pole <= J.hi)
            throw Error(ErrorKind::PreconditionNotMet, "composite has a pole in J");
    }
    double dist = sup_gap<LD>(g, J.lo, J.hi).value;
    if (!(dist < eps))
        throw Error(ErrorKind::PreconditionNotMet,
                    "pair is not near the identity: distance " + std::to_string(dist));
    auto grid = chebyshev_grid(J);
    std::vector<double> pts, der;
    for (double x : grid) {
        double y = static_cast<double>(g(x));
        if (J.contains(y)) {
            pts.push_back(x);
            der.push_back(static_cast<double>(g.deriv(x)));
        }
    }
    HolderCheck out;
    out.witness_v = v;
    out.witness_w = w;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            double lhs = std::fabs(der[a] - der[b]);
            double rhs = C_tilde * std::pow(std::fabs(pts[a] - pts[b]), beta);
            ++out.samples;
            if (lhs > rhs * (1.0 + kCheckSlack)) ++out.violations;
            double ratio = lhs / rhs;
            if (ratio > out.max_ratio) {
                out.max_ratio = ratio;
                out.x = pts[a];
                out.y = pts[b];
            }
        }
    }
    out.pass = out.violations == 0;
    return out;
}

}  // namespace confdim
