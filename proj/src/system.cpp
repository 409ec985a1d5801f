#include "confdim/system.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "enumerate.hpp"

namespace confdim {

namespace {

double parse_number(std::string_view tok, int line) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'", line);
    return v;
}

std::vector<std::string_view> tokenize(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

// Attracting fixed point of a raw generator, or nullopt.
std::optional<double> raw_fixed_point(const Mat2<double>& m) {
    if (m.r == 0.0) {
        if (m.s == m.p) return std::nullopt;
        return m.q / (m.s - m.p);
    }
    double A = m.r, B = m.s - m.p, C = -m.q;
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return std::nullopt;
    double sq = std::sqrt(disc);
    double qq = -0.5 * (B + (B >= 0.0 ? sq : -sq));
    std::optional<double> best;
    double best_d = 1.0;
    for (double x : {qq / A, qq != 0.0 ? C / qq : qq / A}) {
        double d = std::fabs(m.deriv(x));
        if (std::isfinite(x) && d < best_d) {
            best = x;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

ParsedConfig parse_config(std::string_view text) {
    ParsedConfig cfg;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        auto fail = [&](const std::string& why) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why, line_no);
        };
        if (tok[0] == "interval") {
            if (tok.size() != 3) fail("interval expects 2 numbers");
            Interval iv{parse_number(tok[1], line_no), parse_number(tok[2], line_no)};
            if (!(iv.lo < iv.hi)) fail("interval needs lo < hi");
            if (cfg.hint) fail("interval given twice");
            cfg.hint = iv;
        } else if (tok[0] == "map") {
            if (tok.size() < 2) fail("map needs a kind");
            MapSpec spec;
            if (tok[1] == "affine") {
                if (tok.size() != 4) fail("affine map expects 2 numbers");
                spec.kind = MapKind::Affine;
                spec.coeffs = {parse_number(tok[2], line_no), parse_number(tok[3], line_no), 0.0, 1.0};
            } else if (tok[1] == "moebius") {
                if (tok.size() != 6) fail("moebius map expects 4 numbers");
                spec.kind = MapKind::Moebius;
                for (int k = 0; k < 4; ++k) spec.coeffs[k] = parse_number(tok[2 + k], line_no);
            } else {
                fail("unknown map kind '" + std::string(tok[1]) + "'");
            }
            cfg.maps.push_back(spec);
        } else {
            fail("unknown keyword '" + std::string(tok[0]) + "'");
        }
    }
    return cfg;
}

IfsSystem build_system(const std::vector<MapSpec>& specs, std::optional<Interval> hint, const SystemOptions& opts) {
    const std::size_t n = specs.size();
    if (n < 2) throw Error(ErrorKind::TrivialSystem, "at least two maps are required");
    if (n > 255) throw Error(ErrorKind::ParseError, "at most 255 maps are supported");

    std::vector<Mat2<double>> raw(n);
    std::vector<double> raw_fp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = specs[i].coeffs;
        raw[i] = specs[i].kind == MapKind::Affine ? Mat2<double>{c[0], c[1], 0.0, 1.0}
                                                  : Mat2<double>{c[0], c[1], c[2], c[3]};
        long idx = static_cast<long>(i);
        if (raw[i].det() == 0.0) throw Error(ErrorKind::NotAContraction, "map " + std::to_string(i) + " is degenerate", idx);
        if (specs[i].kind == MapKind::Affine && std::fabs(c[0]) >= 1.0)
            throw Error(ErrorKind::NotAContraction, "map " + std::to_string(i) + " has |a| >= 1", idx);
        auto fp = raw_fixed_point(raw[i]);
        if (!fp) throw Error(ErrorKind::NotAContraction, "map " + std::to_string(i) + " has no attracting fixed point", idx);
        raw_fp[i] = *fp;
    }
    auto [fmin, fmax] = std::minmax_element(raw_fp.begin(), raw_fp.end());
    if (*fmax - *fmin <= opts.tie_tol * std::max(1.0, std::fabs(*fmax)))
        throw Error(ErrorKind::TrivialSystem, "all maps share the same fixed point");

    // Grow [lo, hi] from the fixed points until it is the hull of the attractor.
    double lo = *fmin, hi = *fmax;
    for (int it = 0;; ++it) {
        double nlo = lo, nhi = hi;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& m = raw[i];
            if (m.r != 0.0) {
                double pl = -m.s / m.r;
                if (pl >= lo && pl <= hi)
                    throw Error(ErrorKind::PoleInDomain, "pole of map " + std::to_string(i) + " lies in the hull",
                                static_cast<long>(i));
            }
            double a = m(lo), b = m(hi);
            nlo = std::min({nlo, a, b});
            nhi = std::max({nhi, a, b});
        }
        bool done = std::fabs(nlo - lo) <= opts.hull_tol * (hi - lo) && std::fabs(nhi - hi) <= opts.hull_tol * (hi - lo);
        lo = nlo;
        hi = nhi;
        if (!std::isfinite(lo) || !std::isfinite(hi) || it > 100000)
            throw Error(ErrorKind::NotAContraction, "hull iteration does not converge");
        if (done) break;
    }

    IfsSystem sys;
    ValidationReport& rep = sys.report_;
    rep.hull_before = {lo, hi};
    double span = hi - lo;
    bool snap = std::fabs(lo) <= opts.snap_tol && std::fabs(hi - 1.0) <= opts.snap_tol;
    rep.rescaled = !snap;
    rep.rescale_scale = snap ? 1.0 : 1.0 / span;
    rep.rescale_shift = snap ? 0.0 : -lo / span;
    if (hint && (lo < hint->lo - 1e-9 || hi > hint->hi + 1e-9))
        rep.warnings.push_back("attractor hull is not inside the interval hint");

    sys.eps_ = opts.eps_neighbourhood;
    sys.j_ = {-opts.eps_neighbourhood, 1.0 + opts.eps_neighbourhood};
    for (std::size_t i = 0; i < n; ++i) {
        long idx = static_cast<long>(i);
        Mat2<double> m = raw[i];
        if (!snap) {
            if (m.is_affine()) {
                m = {m.p, (m.p * lo + m.q - lo) / span, 0.0, 1.0};
            } else {
                Mat2<double> L{1.0 / span, -lo / span, 0.0, 1.0}, Linv{span, lo, 0.0, 1.0};
                m = L * m * Linv;
            }
        }
        try {
            if (specs[i].kind == MapKind::Affine)
                sys.maps_.push_back(ConformalMap::affine(m.p, m.q, sys.j_, opts.pole_margin_rel));
            else
                sys.maps_.push_back(ConformalMap::moebius(m.p, m.q, m.r, m.s, sys.j_, opts.pole_margin_rel));
        } catch (const Error& e) {
            throw Error(ErrorKind::PoleInDomain, "map " + std::to_string(i) + ": " + e.what(), idx);
        }
        const ConformalMap& f = sys.maps_.back();
        double c = f.sup_abs_derivative(sys.j_);
        if (!(c < 1.0))
            throw Error(ErrorKind::NotAContraction, "map " + std::to_string(i) + " has sup |Df| = " + std::to_string(c) + " on J", idx);
        Interval img = f.image(sys.j_);
        if (img.lo < sys.j_.lo - 1e-12 || img.hi > sys.j_.hi + 1e-12)
            throw Error(ErrorKind::NotAContraction, "map " + std::to_string(i) + " does not map J into itself", idx);
        rep.contraction_constants.push_back(c);
        rep.orientation.push_back(f.orientation());
        rep.fixed_points.push_back(fixed_point(f));
        if (!f.is_affine()) sys.all_affine_ = false;
    }

    const auto& fp = rep.fixed_points;
    sys.x1_ = *std::max_element(fp.begin(), fp.end());
    sys.x0_ = *std::min_element(fp.begin(), fp.end());
    for (std::size_t i = n; i-- > 0;) {
        if (fp[i] >= sys.x1_ - opts.tie_tol) sys.f1_ = i;
        if (fp[i] <= sys.x0_ + opts.tie_tol) sys.f0_ = i;
    }
    sys.c_min_ = *std::min_element(rep.contraction_constants.begin(), rep.contraction_constants.end());
    sys.c_max_ = *std::max_element(rep.contraction_constants.begin(), rep.contraction_constants.end());
    sys.d_min_ = 1.0;
    for (const auto& f : sys.maps_) sys.d_min_ = std::min(sys.d_min_, f.inf_abs_derivative({0.0, 1.0}));

    double ulo = 1.0, uhi = 0.0;
    for (const auto& f : sys.maps_) {
        Interval img = f.image({0.0, 1.0});
        ulo = std::min(ulo, img.lo);
        uhi = std::max(uhi, img.hi);
    }
    if (std::fabs(ulo) > 1e-9 || std::fabs(uhi - 1.0) > 1e-9)
        rep.warnings.push_back("normalized hull deviates from [0,1]");
    return sys;
}

IfsSystem load_system(std::string_view config_text, const SystemOptions& opts) {
    ParsedConfig cfg = parse_config(config_text);
    return build_system(cfg.maps, cfg.hint, opts);
}

IfsSystem load_system_file(const std::string& path, const SystemOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_system(ss.str(), opts);
}

double fixed_point(const ConformalMap& map) {
    const Interval& d = map.domain();
    Interval lim = d.inflated(map.margin());
    const Mat2<double>& m = map.matrix();
    std::vector<double> roots;
    if (m.r == 0.0) {
        if (m.s != m.p) roots.push_back(m.q / (m.s - m.p));
    } else {
        double A = m.r, B = m.s - m.p, C = -m.q;
        double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            double qq = -0.5 * (B + (B >= 0.0 ? sq : -sq));
            roots.push_back(qq / A);
            if (qq != 0.0) roots.push_back(C / qq);
        }
    }
    std::optional<double> best;
    for (double x : roots) {
        if (!lim.contains(x)) continue;
        if (!best || std::fabs(m.deriv(x)) < std::fabs(m.deriv(*best))) best = x;
    }
    if (!best) throw Error(ErrorKind::NoFixedPointInDomain, "no fixed point in the domain");
    return std::clamp(*best, d.lo, d.hi);
}

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

std::vector<Interval> attractor_sample(const IfsSystem& sys, double resolution, const ExecOptions& ex) {
    if (!(resolution > 0.0 && resolution <= 1.0))
        throw Error(ErrorKind::PreconditionNotMet, "resolution must lie in (0, 1]");
    auto pieces = detail::collect_stopping<Interval>(
        sys, resolution, ex, [](const std::string&, const Mat2<double>&, double lo, double hi) { return Interval{lo, hi}; });
    return merge_intervals(std::move(pieces));
}

}  // namespace confdim
