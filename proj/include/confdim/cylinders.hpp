#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "confdim/system.hpp"

namespace confdim {

// Finite word over the alphabet {0..n-1}; the empty word is the identity.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<int> symbols);
    explicit Word(const std::vector<int>& symbols);
    static Word from_bytes(std::string bytes) {
        Word w;
        w.s_ = std::move(bytes);
        return w;
    }
    // Digits "0120", or dot-separated indices "10.3.11" for large alphabets; "e" is empty.
    static Word parse(std::string_view text);

    std::size_t size() const { return s_.size(); }
    bool empty() const { return s_.empty(); }
    int operator[](std::size_t i) const { return static_cast<unsigned char>(s_[i]); }
    void push_back(int symbol) { s_.push_back(static_cast<char>(symbol)); }
    Word operator+(const Word& o) const { return from_bytes(s_ + o.s_); }
    Word repeated_suffix(int symbol, std::size_t m) const { return from_bytes(s_ + std::string(m, static_cast<char>(symbol))); }
    std::vector<int> symbols() const;
    const std::string& bytes() const { return s_; }
    std::string to_string() const;

    // Lexicographic on symbol values, shorter prefix first.
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        int c = a.s_.compare(b.s_);
        return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend bool operator==(const Word&, const Word&) = default;

private:
    std::string s_;
};

struct CylinderRecord {
    Word word;
    ConformalMap map;
    Interval image;
    double diam = 0.0;
    double deriv_lo = 0.0;   // inf |Df_w| on Delta
    double deriv_hi = 0.0;   // sup |Df_w| on Delta
};

struct StoppingSet {
    double b = 0.0;
    std::vector<CylinderRecord> records;
    std::vector<ConformalMap> distinct_maps;
};

inline constexpr double kDedupTol = 1e-12;

// Raw composite matrix of f_w = f_{w_1} o ... o f_{w_k}, in any precision.
template <class T>
Mat2<T> word_matrix(const IfsSystem& sys, const Word& w) {
    Mat2<T> m;
    for (std::size_t i = 0; i < w.size(); ++i) m = m * Mat2<T>::from(sys.map(w[i]).matrix());
    return m;
}

CylinderRecord compose_word(const IfsSystem& sys, const Word& word);

StoppingSet stopping_set(const IfsSystem& sys, double b, const ExecOptions& ex = {}, double dedup_tol = kDedupTol);

std::vector<ConformalMap> distinct_maps(std::span<const CylinderRecord> records, double tol = kDedupTol);

// Every word of length k, lexicographic order; throws BudgetExceeded if n^k exceeds the budget.
std::vector<CylinderRecord> words_of_length(const IfsSystem& sys, std::size_t k, const ExecOptions& ex = {});

}  // namespace confdim
