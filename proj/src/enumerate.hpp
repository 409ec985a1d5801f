#pragma once

// Depth-first enumeration of the stopping set A_b, shared by attractor sampling
// and the cylinder module.

#include <atomic>
#include <string>
#include <vector>

#include "confdim/system.hpp"
#include "parallel.hpp"

namespace confdim::detail {

inline constexpr std::size_t kMaxWordLength = 400;
inline constexpr double kScaleSlack = 1e-12;

inline std::vector<Mat2<double>> generator_matrices(const IfsSystem& sys) {
    std::vector<Mat2<double>> g;
    for (const auto& m : sys.maps()) g.push_back(m.matrix());
    return g;
}

inline void throw_budget(std::uint64_t budget) {
    throw Error(ErrorKind::BudgetExceeded, "word budget of " + std::to_string(budget) + " exceeded");
}

template <class Out, class Make>
struct StoppingDfs {
    const std::vector<Mat2<double>>& gens;
    double bound;
    std::uint64_t budget;
    std::atomic<std::uint64_t>& count;
    Make& make;
    std::vector<Out>& out;
    std::string word;

    void visit(const Mat2<double>& m, double lo, double hi) {
        if (m.span(0.0, 1.0) <= bound) {
            if (count.fetch_add(1) + 1 > budget) throw_budget(budget);
            out.push_back(make(word, m, lo, hi));
            return;
        }
        if (word.size() >= kMaxWordLength) throw_budget(budget);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            Mat2<double> c = m * gens[i];
            double y0 = c(0.0), y1 = c(1.0);
            word.push_back(static_cast<char>(i));
            visit(c, std::min(y0, y1), std::max(y0, y1));
            word.pop_back();
        }
    }
};

// make(word_bytes, matrix, lo, hi) -> Out, called for each word of A_b in
// lexicographic order. The empty word is always expanded.
template <class Out, class Make>
std::vector<Out> collect_stopping(const IfsSystem& sys, double b, const ExecOptions& ex, Make make) {
    auto gens = generator_matrices(sys);
    double bound = b * (1.0 + kScaleSlack);
    std::atomic<std::uint64_t> count{0};
    std::vector<std::vector<Out>> parts(gens.size());
    parallel_for(gens.size(), ex.threads, [&](std::size_t i) {
        Make local = make;
        StoppingDfs<Out, Make> dfs{gens, bound, ex.word_budget, count, local, parts[i], std::string()};
        dfs.word.push_back(static_cast<char>(i));
        const auto& g = gens[i];
        double y0 = g(0.0), y1 = g(1.0);
        dfs.visit(g, std::min(y0, y1), std::max(y0, y1));
    });
    std::vector<Out> all;
    std::size_t total = 0;
    for (auto& p : parts) total += p.size();
    all.reserve(total);
    for (auto& p : parts) all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    return all;
}

}  // namespace confdim::detail
