#include "confdim/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace confdim {

namespace {

using LD = long double;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct PairEval {
    double distance = kInf;
    double gap = 0.0;
};

PairEval evaluate_pair(const Mat2<LD>& mv, const Mat2<LD>& mw, const Interval& J, double x1) {
    Mat2<LD> g = mv.adj() * mw;
    if (g.r != 0.0L) {
        LD pole = -g.s / g.r;
        if (pole >= J.lo - 1e-9L && pole <= J.hi + 1e-9L) return {};
    }
    return {sup_gap<LD>(g, J.lo, J.hi).value, static_cast<double>(g.gap(x1))};
}

bool better(double d, const Word& v, const Word& w, const std::optional<NearIdentityPair>& best) {
    if (!best) return true;
    if (d != best->distance) return d < best->distance;
    if (v != best->v) return v < best->v;
    return w < best->w;
}

}  // namespace

const char* verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::WspConsistent: return "WSP_CONSISTENT";
        case Verdict::WspFailing: return "WSP_FAILING";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

std::vector<double> scale_grid(const IfsSystem& sys, int depth) {
    std::vector<double> g;
    for (int j = 1; j <= depth; ++j) g.push_back(std::pow(sys.min_contraction(), j));
    return g;
}

MultiplicityResult max_stabbing(const std::vector<ConformalMap>& maps) {
    // (coordinate, +1 start / -1 end); ends sort first at ties because the images are open.
    std::vector<std::pair<double, int>> ev;
    ev.reserve(2 * maps.size());
    for (const auto& f : maps) {
        Interval img = f.image({0.0, 1.0});
        ev.emplace_back(img.lo, 1);
        ev.emplace_back(img.hi, -1);
    }
    std::sort(ev.begin(), ev.end());
    MultiplicityResult res;
    int cur = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        cur += ev[i].second;
        if (cur > res.max_count) {
            res.max_count = cur;
            double next = i + 1 < ev.size() ? ev[i + 1].first : ev[i].first;
            res.witness_x = 0.5 * (ev[i].first + next);
        }
    }
    return res;
}

MultiplicityResult overlap_multiplicity(const IfsSystem& sys, double b, const ExecOptions& ex, double dedup_tol) {
    StoppingSet set = stopping_set(sys, b, ex, dedup_tol);
    return max_stabbing(set.distinct_maps);
}

NearIdentityPair measure_pair(const IfsSystem& sys, const Word& v, const Word& w) {
    auto mv = word_matrix<LD>(sys, v), mw = word_matrix<LD>(sys, w);
    PairEval e = evaluate_pair(mv, mw, sys.j(), sys.x1());
    NearIdentityPair p;
    p.v = v;
    p.w = w;
    p.distance = e.distance;
    p.gap_at_x1 = e.gap;
    p.orientation = (mv.det() > 0.0L) == (mw.det() > 0.0L) ? (mv.det() > 0.0L ? 1 : -1) : 0;
    return p;
}

ScaleSearch search_near_identity(const IfsSystem& sys, const StoppingSet& set, int depth, double exact_tol) {
    ScaleSearch out;
    out.b = set.b;
    out.depth = depth;
    out.records = set.records.size();
    const auto& recs = set.records;
    const Interval& J = sys.j();
    const double x1 = sys.x1();

    for (int orient : {1, -1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < recs.size(); ++i)
            if (recs[i].map.orientation() == orient) idx.push_back(i);
        if (idx.size() < 2) continue;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return recs[a].image.lo < recs[b].image.lo || (recs[a].image.lo == recs[b].image.lo && a < b);
        });
        // Gap bound: a pair at distance d has |lo_v - lo_w| <= sup |Df_v| near x0 times d.
        const double x0 = orient > 0 ? 0.0 : 1.0;
        double dx_max = 0.0, pole_min = kInf;
        std::vector<Mat2<LD>> mats(idx.size());
        std::vector<double> lo(idx.size());
        for (std::size_t t = 0; t < idx.size(); ++t) {
            const auto& r = recs[idx[t]];
            mats[t] = word_matrix<LD>(sys, r.word);
            lo[t] = r.image.lo;
            dx_max = std::max(dx_max, std::fabs(r.map.deriv_value(x0)));
            if (auto p = r.map.pole()) pole_min = std::min(pole_min, std::fabs(*p - x0));
        }
        auto bound = [&](double d) {
            if (!(d < pole_min)) return kInf;
            double k = pole_min == kInf ? 1.0 : pole_min / (pole_min - d);
            return dx_max * k * k * d * (1.0 + 1e-9);
        };

        std::optional<NearIdentityPair> best = out.best;
        auto consider = [&](std::size_t t, std::size_t u) {
            std::size_t a = idx[t], b = idx[u];
            const Word* v = &recs[a].word;
            const Word* w = &recs[b].word;
            const Mat2<LD>* mv = &mats[t];
            const Mat2<LD>* mw = &mats[u];
            if (*w < *v) {
                std::swap(v, w);
                std::swap(mv, mw);
            }
            PairEval e = evaluate_pair(*mv, *mw, J, x1);
            if (e.distance < exact_tol) {
                out.exact_overlaps.emplace_back(*v, *w);
                return;
            }
            if (better(e.distance, *v, *w, best)) {
                NearIdentityPair p;
                p.v = *v;
                p.w = *w;
                p.distance = e.distance;
                p.gap_at_x1 = e.gap;
                p.orientation = orient;
                p.depth = depth;
                p.b = set.b;
                best = p;
            }
        };
        for (std::size_t t = 0; t + 1 < idx.size(); ++t) consider(t, t + 1);
        double lim = bound(best ? best->distance : kInf);
        for (std::size_t t = 0; t < idx.size(); ++t) {
            for (std::size_t u = t + 1; u < idx.size(); ++u) {
                if (lo[u] - lo[t] > lim) break;
                if (u == t + 1) continue;   // seeded above
                consider(t, u);
                lim = bound(best ? best->distance : kInf);
            }
        }
        out.best = best;
    }
    std::sort(out.exact_overlaps.begin(), out.exact_overlaps.end());
    out.exact_overlaps.erase(std::unique(out.exact_overlaps.begin(), out.exact_overlaps.end()), out.exact_overlaps.end());
    return out;
}

std::vector<NearIdentityPair> nearest_identity_distance(const IfsSystem& sys, int depth, const ExecOptions& ex) {
    if (depth < 1) throw Error(ErrorKind::PreconditionNotMet, "depth must be at least 1");
    std::vector<NearIdentityPair> out;
    auto grid = scale_grid(sys, depth);
    for (int j = 1; j <= depth; ++j) {
        StoppingSet set = stopping_set(sys, grid[j - 1], ex);
        ScaleSearch s = search_near_identity(sys, set, j);
        if (s.best) out.push_back(*s.best);
    }
    return out;
}

std::uint64_t epsilon_separation_bound(double epsilon, double K, double diamJ) {
    if (!(epsilon > 0.0) || !(K >= 1.0)) throw Error(ErrorKind::PreconditionNotMet, "need epsilon > 0 and K >= 1");
    constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();
    double Kp = std::max(2.0, K);
    double r = epsilon / (Kp - 1.0 / Kp);
    double a_real = std::ceil(diamJ / r);
    if (a_real > 64.0) return kSat;
    auto a = static_cast<std::uint64_t>(a_real);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= a; ++i) {
        c = c * (a + i) / i;
        if (c > kSat) return kSat;
    }
    return static_cast<std::uint64_t>(c);
}

Verdict decide_verdict(const std::vector<MultiplicityResult>& mult, const std::vector<double>& ilc,
                       const SeparationParams& params) {
    const int n = static_cast<int>(std::min(mult.size(), ilc.size()));
    const int w = params.trend_window;
    if (w < 2 || n < w + 1) return Verdict::Inconclusive;

    bool mult_growing = mult[n - 1].max_count > mult[n - w].max_count;
    for (int k = n - w; k + 1 < n; ++k)
        if (mult[k + 1].max_count < mult[k].max_count) mult_growing = false;
    int earlier_max = 0, window_max = 0;
    for (int k = 0; k < n - w; ++k) earlier_max = std::max(earlier_max, mult[k].max_count);
    for (int k = n - w; k < n; ++k) window_max = std::max(window_max, mult[k].max_count);
    bool mult_bounded = window_max <= earlier_max;

    bool ilc_small = ilc[n - 1] < params.theta_fail;
    bool ilc_stable = true;
    for (int k = n - w; k < n; ++k)
        if (!(ilc[k] >= params.theta_hold)) ilc_stable = false;
    if (ilc_stable && ilc[n - 1] < 0.9 * ilc[n - w]) ilc_stable = false;

    if (ilc_small && mult_growing) return Verdict::WspFailing;
    if (ilc_stable && mult_bounded) return Verdict::WspConsistent;
    return Verdict::Inconclusive;
}

SeparationReport separation_verdict(const IfsSystem& sys, const SeparationParams& params, const ExecOptions& ex) {
    if (params.depth < 1) throw Error(ErrorKind::PreconditionNotMet, "depth must be at least 1");
    SeparationReport rep;
    rep.b_grid = scale_grid(sys, params.depth);
    double running = kInf;
    for (int j = 1; j <= params.depth; ++j) {
        StoppingSet set = stopping_set(sys, rep.b_grid[j - 1], ex, params.dedup_tol);
        rep.multiplicities.push_back(max_stabbing(set.distinct_maps));
        ScaleSearch s = search_near_identity(sys, set, j, params.exact_tol);
        if (s.best) running = std::min(running, s.best->distance);
        rep.ilc_decay.push_back(running);
        rep.best_pairs.push_back(s.best);
        rep.exact_overlaps.insert(rep.exact_overlaps.end(), s.exact_overlaps.begin(), s.exact_overlaps.end());
    }
    for (const auto& m : rep.multiplicities) rep.gamma_observed = std::max(rep.gamma_observed, m.max_count);
    rep.verdict = decide_verdict(rep.multiplicities, rep.ilc_decay, params);
    return rep;
}

}  // namespace confdim
