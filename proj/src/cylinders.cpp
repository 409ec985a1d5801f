#include "confdim/cylinders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enumerate.hpp"

namespace confdim {

Word::Word(std::initializer_list<int> symbols) {
    for (int s : symbols) push_back(s);
}

Word::Word(const std::vector<int>& symbols) {
    for (int s : symbols) push_back(s);
}

Word Word::parse(std::string_view text) {
    Word w;
    if (text == "e" || text.empty()) return w;
    if (text.find('.') == std::string_view::npos) {
        for (char c : text) {
            if (c < '0' || c > '9') throw Error(ErrorKind::ParseError, "bad word '" + std::string(text) + "'");
            w.push_back(c - '0');
        }
        return w;
    }
    int cur = 0;
    bool any = false;
    for (char c : text) {
        if (c == '.') {
            if (!any) throw Error(ErrorKind::ParseError, "bad word '" + std::string(text) + "'");
            w.push_back(cur);
            cur = 0;
            any = false;
        } else if (c >= '0' && c <= '9') {
            cur = cur * 10 + (c - '0');
            any = true;
            if (cur > 255) throw Error(ErrorKind::ParseError, "symbol out of range in '" + std::string(text) + "'");
        } else {
            throw Error(ErrorKind::ParseError, "bad word '" + std::string(text) + "'");
        }
    }
    if (!any) throw Error(ErrorKind::ParseError, "bad word '" + std::string(text) + "'");
    w.push_back(cur);
    return w;
}

std::vector<int> Word::symbols() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
    return out;
}

std::string Word::to_string() const {
    if (empty()) return "e";
    bool small = std::all_of(s_.begin(), s_.end(), [](char c) { return static_cast<unsigned char>(c) < 10; });
    std::string out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!small && i > 0) out.push_back('.');
        out += std::to_string((*this)[i]);
    }
    return out;
}

namespace {

CylinderRecord make_record(const IfsSystem& sys, std::string bytes, const Mat2<double>& m, double lo, double hi) {
    MapKind kind = m.is_affine() ? MapKind::Affine : MapKind::Moebius;
    ConformalMap f = ConformalMap::from_matrix(kind, m, sys.j(), sys.map(0).margin_rel());
    Interval delta{0.0, 1.0};
    return {Word::from_bytes(std::move(bytes)), f, {lo, hi}, m.span(0.0, 1.0), f.inf_abs_derivative(delta),
            f.sup_abs_derivative(delta)};
}

}  // namespace

CylinderRecord compose_word(const IfsSystem& sys, const Word& word) {
    if (word.empty()) throw Error(ErrorKind::PreconditionNotMet, "compose_word needs a nonempty word");
    for (std::size_t i = 0; i < word.size(); ++i)
        if (static_cast<std::size_t>(word[i]) >= sys.size())
            throw Error(ErrorKind::PreconditionNotMet, "symbol out of range in word " + word.to_string());
    ConformalMap f = sys.map(word[0]);
    for (std::size_t i = 1; i < word.size(); ++i) f = compose(f, sys.map(word[i]));
    Interval img = f.image({0.0, 1.0});
    return make_record(sys, word.bytes(), f.matrix(), img.lo, img.hi);
}

StoppingSet stopping_set(const IfsSystem& sys, double b, const ExecOptions& ex, double dedup_tol) {
    if (!(b > 0.0 && b <= 1.0)) throw Error(ErrorKind::PreconditionNotMet, "b must lie in (0, 1]");
    StoppingSet out;
    out.b = b;
    out.records = detail::collect_stopping<CylinderRecord>(
        sys, b, ex, [&sys](const std::string& w, const Mat2<double>& m, double lo, double hi) {
            return make_record(sys, w, m, lo, hi);
        });
    out.distinct_maps = distinct_maps(out.records, dedup_tol);
    return out;
}

std::vector<ConformalMap> distinct_maps(std::span<const CylinderRecord> records, double tol) {
    const std::size_t n = records.size();
    std::vector<std::array<double, 4>> key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = records[i].map.canonical();
    // Window on the entry with the widest spread; duplicates differ by at most tol
    // (relative) in every entry, so they stay inside that window after sorting.
    std::size_t dim = 0;
    double widest = -1.0;
    for (std::size_t e = 0; e < 4 && n > 0; ++e) {
        auto [mn, mx] = std::minmax_element(key.begin(), key.end(),
                                            [e](const auto& a, const auto& b) { return a[e] < b[e]; });
        if ((*mx)[e] - (*mn)[e] > widest) {
            widest = (*mx)[e] - (*mn)[e];
            dim = e;
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return key[a][dim] < key[b][dim] || (key[a][dim] == key[b][dim] && a < b);
    });
    std::vector<char> keep(n, 1);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t i = order[t];
        if (!keep[i]) continue;
        double scale0 = std::max(1.0, std::fabs(key[i][dim]));
        for (std::size_t u = t + 1; u < n; ++u) {
            std::size_t j = order[u];
            if (key[j][dim] - key[i][dim] > tol * std::max(scale0, std::fabs(key[j][dim]))) break;
            if (!keep[j]) continue;
            if (records[i].map.approx_equal(records[j].map, tol)) {
                // Keep the first occurrence in record order.
                if (j < i) {
                    keep[i] = 0;
                    break;
                }
                keep[j] = 0;
            }
        }
    }
    std::vector<ConformalMap> out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(records[i].map);
    return out;
}

std::vector<CylinderRecord> words_of_length(const IfsSystem& sys, std::size_t k, const ExecOptions& ex) {
    double total = std::pow(static_cast<double>(sys.size()), static_cast<double>(k));
    if (total > static_cast<double>(ex.word_budget)) detail::throw_budget(ex.word_budget);
    std::vector<CylinderRecord> out;
    out.reserve(static_cast<std::size_t>(total));
    std::string w;
    auto gens = detail::generator_matrices(sys);
    auto rec = [&](auto&& self, const Mat2<double>& m) -> void {
        if (w.size() == k) {
            double y0 = m(0.0), y1 = m(1.0);
            out.push_back(make_record(sys, w, m, std::min(y0, y1), std::max(y0, y1)));
            return;
        }
        for (std::size_t i = 0; i < gens.size(); ++i) {
            w.push_back(static_cast<char>(i));
            self(self, m * gens[i]);
            w.pop_back();
        }
    };
    rec(rec, Mat2<double>{});
    return out;
}

}  // namespace confdim
