#include "confdim/tangents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confdim/dimension.hpp"

namespace confdim {

namespace {

using LD = long double;

Mat2<LD> gen(const IfsSystem& sys, int symbol) { return Mat2<LD>::from(sys.map(symbol).matrix()); }

Mat2<LD> letter_matrix(const IfsSystem& sys, const Letter& l) {
    Mat2<LD> g = gen(sys, l.symbol);
    return l.inverse ? g.adj() : g;
}

Mat2<LD> pair_composite(const IfsSystem& sys, const NearIdentityPair& p) {
    return word_matrix<LD>(sys, p.v).adj() * word_matrix<LD>(sys, p.w);
}

}  // namespace

const char* side_name(Side s) noexcept { return s == Side::Below ? "BELOW" : "ABOVE"; }

SignedWord SignedWord::forward(const Word& w) {
    SignedWord s;
    for (std::size_t i = 0; i < w.size(); ++i) s.letters_.push_back({w[i], false});
    return s;
}

SignedWord SignedWord::inverse_of(const Word& w) {
    SignedWord s;
    for (std::size_t i = w.size(); i-- > 0;) s.letters_.push_back({w[i], true});
    return s;
}

SignedWord SignedWord::operator+(const SignedWord& o) const {
    SignedWord s = *this;
    s.letters_.insert(s.letters_.end(), o.letters_.begin(), o.letters_.end());
    return s;
}

SignedWord SignedWord::reduced() const {
    SignedWord s;
    for (const auto& l : letters_) {
        if (!s.letters_.empty() && s.letters_.back().symbol == l.symbol && s.letters_.back().inverse != l.inverse)
            s.letters_.pop_back();
        else
            s.letters_.push_back(l);
    }
    return s;
}

std::string SignedWord::to_string() const {
    if (letters_.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i > 0) out.push_back('.');
        out += std::to_string(letters_[i].symbol);
        if (letters_[i].inverse) out += "^-1";
    }
    return out;
}

long double evaluate_signed(const IfsSystem& sys, const SignedWord& w, long double x) {
    const auto& ls = w.letters();
    for (std::size_t i = ls.size(); i-- > 0;) x = letter_matrix(sys, ls[i])(x);
    return x;
}

Word TangentWitness::psi_word(int n) const {
    Word out;
    for (int k = 0; k <= n; ++k) {
        const auto& st = steps[k];
        out = pairs[st.pair_index].pair.w.repeated_suffix(f1_symbol(), st.m) + out;
    }
    return out;
}

SignedWord TangentWitness::phi_word(int n) const {
    SignedWord out;
    for (int k = 0; k <= n; ++k) {
        const auto& st = steps[k];
        out = out + SignedWord::inverse_of(Word().repeated_suffix(f1_symbol(), st.m)) +
              SignedWord::inverse_of(pairs[st.pair_index].pair.v);
    }
    return out;
}

Word TangentWitness::u_word(int l) const {
    Word out = l >= 0 ? psi_word(l) : Word();
    for (int k = l + 1; k < static_cast<int>(steps.size()); ++k) {
        const auto& st = steps[k];
        out = pairs[st.pair_index].pair.v.repeated_suffix(f1_symbol(), st.m) + out;
    }
    return out;
}

TangentPair make_tangent_pair(const IfsSystem& sys, const NearIdentityPair& p) {
    (void)sys;
    TangentPair tp;
    tp.pair = p;
    tp.side = p.gap_at_x1 < 0.0 ? Side::Below : Side::Above;
    tp.comparability = p.distance > 0.0 ? std::min(1.0, std::fabs(p.gap_at_x1) / p.distance) : 0.0;
    return tp;
}

TangentPair extend_pair(const IfsSystem& sys, const TangentPair& pair, const TangentParams& params) {
    if (pair.comparability >= params.comparability_floor) return pair;
    const double cap = params.norm_cap > 0.0 ? params.norm_cap : sys.eps_neighbourhood();
    const int f1 = static_cast<int>(sys.f1_index());
    for (int m = 1; m <= params.m_max; ++m) {
        NearIdentityPair q = measure_pair(sys, pair.pair.v.repeated_suffix(f1, m), pair.pair.w.repeated_suffix(f1, m));
        if (!(q.distance < cap)) break;
        q.depth = pair.pair.depth;
        q.b = pair.pair.b;
        TangentPair t = make_tangent_pair(sys, q);
        if (t.side == pair.side && std::fabs(q.gap_at_x1) > 1e-13 && t.comparability >= params.comparability_floor) {
            t.extension_m = m;
            return t;
        }
    }
    throw Error(ErrorKind::ExtensionFailed, "no extension of (" + pair.pair.v.to_string() + ", " +
                                                pair.pair.w.to_string() + ") reaches the comparability floor");
}

GapProfile gap_profile(const IfsSystem& sys, const TangentPair& pair, double rho) {
    if (!(rho > 0.0)) throw Error(ErrorKind::PreconditionNotMet, "rho must be positive");
    const Interval& J = sys.j();
    LD lo = std::max<LD>(J.lo, sys.x1() - rho), hi = std::min<LD>(J.hi, sys.x1() + rho);
    Mat2<LD> g = pair_composite(sys, pair.pair);
    std::vector<LD> cand{lo, hi};
    LD det = g.det();
    if (g.r != 0.0L && det > 0.0L) {
        for (LD sgn : {1.0L, -1.0L}) {
            LD x = (sgn * std::sqrt(det) - g.s) / g.r;
            if (x > lo && x < hi) cand.push_back(x);
        }
    }
    GapProfile out;
    out.rho = rho;
    out.xi = std::numeric_limits<double>::infinity();
    bool pos = false, neg = false;
    for (LD x : cand) {
        LD v = g.gap(x);
        pos |= v > 0.0L;
        neg |= v < 0.0L;
        out.xi = std::min(out.xi, static_cast<double>(std::fabs(v)));
        out.Xi = std::max(out.Xi, static_cast<double>(std::fabs(v)));
    }
    if (pos && neg) out.xi = 0.0;
    return out;
}

std::vector<TangentPair> select_from_pairs(const IfsSystem& sys, const std::vector<NearIdentityPair>& found, int count,
                                           const TangentParams& params) {
    std::vector<TangentPair> cand;
    for (const auto& p : found) {
        NearIdentityPair swapped = measure_pair(sys, p.w, p.v);
        swapped.depth = p.depth;
        swapped.b = p.b;
        for (const auto& q : {p, swapped}) {
            if (!std::isfinite(q.distance) || std::fabs(q.gap_at_x1) <= 1e-13) continue;
            cand.push_back(make_tangent_pair(sys, q));
        }
    }
    std::size_t below = std::count_if(cand.begin(), cand.end(), [](const TangentPair& t) { return t.side == Side::Below; });
    Side side = below * 2 >= cand.size() ? Side::Below : Side::Above;
    std::vector<TangentPair> out;
    for (const auto& t : cand) {
        if (t.side != side) continue;
        if (t.comparability >= params.comparability_floor) {
            out.push_back(t);
            continue;
        }
        try {
            out.push_back(extend_pair(sys, t, params));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ExtensionFailed) throw;
        }
    }
    if (out.empty()) throw Error(ErrorKind::NoUsablePairs, "no near-identity pair moves x1");
    std::sort(out.begin(), out.end(), [](const TangentPair& a, const TangentPair& b) {
        if (a.pair.distance != b.pair.distance) return a.pair.distance > b.pair.distance;
        if (a.pair.v != b.pair.v) return a.pair.v < b.pair.v;
        return a.pair.w < b.pair.w;
    });
    if (count > 0 && out.size() > static_cast<std::size_t>(count)) out.erase(out.begin(), out.end() - count);
    return out;
}

std::vector<TangentPair> select_tangent_pairs(const IfsSystem& sys, int depth, int count, const TangentParams& params,
                                              const ExecOptions& ex) {
    return select_from_pairs(sys, nearest_identity_distance(sys, depth, ex), count, params);
}

TangentWitness build_tangent_attempt(const IfsSystem& sys, std::span<const TangentPair> pairs, int i,
                                     const TangentParams& params) {
    if (pairs.empty()) throw Error(ErrorKind::PreconditionNotMet, "no pairs supplied");
    if (i < 1) throw Error(ErrorKind::PreconditionNotMet, "i must be at least 1");
    TangentWitness wit;
    wit.i = i;
    wit.epsilon = 1.0 / i;
    wit.kappa = 1.0 / params.window_lo;
    wit.side = pairs.front().side;
    wit.pairs.assign(pairs.begin(), pairs.end());
    wit.f1_ = static_cast<int>(sys.f1_index());

    const LD sign = wit.side == Side::Below ? -1.0L : 1.0L;
    const LD eps = wit.epsilon, lo_edge = eps * params.window_lo;
    const Mat2<LD> F1 = gen(sys, wit.f1_), F1inv = F1.adj();
    std::vector<Mat2<LD>> G;
    for (const auto& p : pairs) G.push_back(pair_composite(sys, p.pair));

    std::vector<Mat2<LD>> phi;   // letters of phi, applied last to first
    LD y = sys.x1();             // psi_{n-1}(x1)
    LD P = sys.x1();             // phi_{n-1} psi_{n-1}(x1)
    const int cap = params.step_cap_factor * i;

    auto push_difference = [](const Mat2<LD>& M, LD& a, LD& d) {
        LD b = a - d;
        d = M.diff(a, b, d);
        a = M(a);
    };

    for (int n = 0; n < cap; ++n) {
        struct Pick {
            int growth;
            int m;
            std::size_t k;
            LD inc;
        };
        std::optional<Pick> pick;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            if (pairs[k].side != wit.side) continue;
            LD z = y;
            for (int m = 0; m <= params.m_max; ++m) {
                if (m > 0) z = F1(z);
                LD g = G[k].gap(z);
                LD a = z + g, d = g;
                for (int t = 0; t < m; ++t) push_difference(F1inv, a, d);
                for (std::size_t t = phi.size(); t-- > 0;) push_difference(phi[t], a, d);
                LD s = sign * d;
                if (!std::isfinite(static_cast<double>(d))) break;
                if (s >= lo_edge && s <= eps) {
                    int growth = static_cast<int>(pairs[k].pair.v.size()) + m;
                    if (!pick || growth < pick->growth || (growth == pick->growth && m < pick->m))
                        pick = Pick{growth, m, k, d};
                    break;
                }
                if (s > eps) break;
            }
        }
        if (!pick) {
            wit.failed_step = n;
            break;
        }
        P += pick->inc;
        for (int t = 0; t < pick->m; ++t) y = F1(y);
        y = word_matrix<LD>(sys, pairs[pick->k].pair.w)(y);
        for (int t = 0; t < pick->m; ++t) phi.push_back(F1inv);
        const Word& v = pairs[pick->k].pair.v;
        for (std::size_t t = v.size(); t-- > 0;) phi.push_back(gen(sys, v[t]).adj());
        wit.steps.push_back({n, pick->k, pick->m, static_cast<double>(P), static_cast<double>(pick->inc)});
        if (P < -1.0L || P > 2.0L) throw Error(ErrorKind::PointsDiverged, "construction point left [-1, 2]", n);
        if (P < 0.0L || P > 1.0L) break;
    }

    int last = static_cast<int>(wit.steps.size()) - 1;
    wit.T_word = last >= 0 ? wit.phi_word(last) : SignedWord();
    wit.points.push_back(sys.x1());
    for (const auto& st : wit.steps) wit.points.push_back(st.point);
    std::sort(wit.points.begin(), wit.points.end());

    // T and the window W = T^-1([0,1]) on which T(F) meets [0,1].
    Mat2<LD> T;
    for (const auto& m : phi) T = T * m;
    Mat2<LD> Tinv = T.adj();
    LD w0 = Tinv(0.0L), w1 = Tinv(1.0L);
    LD wlo = std::min(w0, w1), whi = std::max(w0, w1);
    LD da = std::fabs(T.deriv(wlo)), db = std::fabs(T.deriv(whi));
    wit.alpha = static_cast<double>(std::max(da, db) / std::min(da, db));

    double min_step = wit.epsilon;
    for (const auto& st : wit.steps) min_step = std::min(min_step, std::fabs(st.increment));
    const LD res = params.sample_factor * min_step;
    const LD x1 = sys.x1();
    const LD slack = (whi - wlo) * 1e-12L;
    std::vector<Interval> sample;
    for (double p : wit.points)
        if (p >= 0.0 && p <= 1.0) sample.push_back({p, p});
    std::vector<Mat2<LD>> gens;
    for (std::size_t s = 0; s < sys.size(); ++s) gens.push_back(gen(sys, static_cast<int>(s)));
    std::uint64_t visited = 0;
    auto dfs = [&](auto&& self, const Mat2<LD>& M, int level) -> void {
        for (const auto& g : gens) {
            Mat2<LD> C = M * g;
            LD a = C(0.0L), b = C(1.0L);
            if (std::max(a, b) < wlo - slack || std::min(a, b) > whi + slack) continue;
            if (++visited > params.sample_budget)
                throw Error(ErrorKind::BudgetExceeded, "tangent sample budget exceeded");
            Mat2<LD> TC = T * C;
            if (TC.span(0.0L, 1.0L) <= res || level > 400) {
                LD p = TC(x1);
                if (p >= 0.0L && p <= 1.0L) sample.push_back({static_cast<double>(p), static_cast<double>(p)});
            } else {
                self(self, C, level + 1);
            }
        }
    };
    dfs(dfs, Mat2<LD>{}, 0);
    wit.sample_size = sample.size();
    std::sort(sample.begin(), sample.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Interval unit{0.0, 1.0};
    wit.left_gap = sample.empty() ? 1.0 : left_hausdorff_distance(std::span<const Interval>(&unit, 1), sample);
    return wit;
}

TangentWitness build_tangent_witness(const IfsSystem& sys, std::span<const TangentPair> pairs, int i,
                                     const TangentParams& params) {
    TangentWitness w = build_tangent_attempt(sys, pairs, i, params);
    if (w.failed_step)
        throw Error(ErrorKind::StepSelectionFailed,
                    "no pair lands the increment in the window at step " + std::to_string(*w.failed_step),
                    *w.failed_step);
    return w;
}

double left_hausdorff_distance(std::span<const Interval> a, std::span<const Interval> b) {
    if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "left Hausdorff distance of an empty set");
    auto dist = [&](double x) {
        auto it = std::lower_bound(b.begin(), b.end(), x, [](const Interval& iv, double v) { return iv.hi < v; });
        double d = std::numeric_limits<double>::infinity();
        if (it != b.end()) d = std::max(0.0, it->lo - x);
        if (it != b.begin()) d = std::min(d, x - std::prev(it)->hi);
        return d;
    };
    double worst = 0.0;
    std::size_t g = 0;   // gap index: between b[g] and b[g+1]
    for (const auto& iv : a) {
        worst = std::max({worst, dist(iv.lo), dist(iv.hi)});
        while (g + 1 < b.size() && 0.5 * (b[g].hi + b[g + 1].lo) < iv.lo) ++g;
        for (std::size_t h = g; h + 1 < b.size(); ++h) {
            double mid = 0.5 * (b[h].hi + b[h + 1].lo);
            if (mid > iv.hi) break;
            if (mid >= iv.lo) worst = std::max(worst, dist(mid));
        }
    }
    return worst;
}

TransportCheck check_covering_transport(std::span<const double> points, const ConformalMap& T, double alpha, double rho) {
    if (!(alpha >= 1.0)) throw Error(ErrorKind::PreconditionNotMet, "alpha must be at least 1");
    std::vector<Interval> A, TA;
    for (double p : points) {
        A.push_back({p, p});
        double q = T.value(p);
        TA.push_back({q, q});
    }
    auto by_lo = [](const Interval& x, const Interval& y) { return x.lo < y.lo; };
    std::sort(A.begin(), A.end(), by_lo);
    std::sort(TA.begin(), TA.end(), by_lo);
    TransportCheck out;
    out.source_count = cover_count_all(A, rho);
    out.image_count = cover_count_all(TA, alpha * rho);
    out.pass = out.image_count <= out.source_count;
    return out;
}

}  // namespace confdim
