#pragma once

#include <array>
#include <optional>

#include "confdim/error.hpp"
#include "confdim/mat2.hpp"

namespace confdim {

// Closed interval. Map domains require lo < hi; point sets may use lo == hi.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    Interval inflated(double m) const { return {lo - m, hi + m}; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class MapKind { Affine, Moebius };

inline constexpr double kDefaultPoleMarginRel = 1e-6;

// An affine or Moebius diffeomorphism on a closed domain interval.
// Moebius coefficients are kept canonical: det = +-1, first nonzero entry positive.
class ConformalMap {
public:
    static ConformalMap affine(double a, double b, Interval domain = {0.0, 1.0},
                               double pole_margin_rel = kDefaultPoleMarginRel);
    static ConformalMap moebius(double p, double q, double r, double s, Interval domain = {0.0, 1.0},
                                double pole_margin_rel = kDefaultPoleMarginRel);
    static ConformalMap identity(Interval domain = {0.0, 1.0});

    // Builds from a composite matrix; throws PoleEntersDomain if the pole is too close.
    static ConformalMap from_matrix(MapKind kind, const Mat2<double>& m, Interval domain,
                                    double pole_margin_rel = kDefaultPoleMarginRel);

    MapKind kind() const { return kind_; }
    bool is_affine() const { return kind_ == MapKind::Affine; }
    const Interval& domain() const { return domain_; }
    double margin() const { return margin_rel_ * domain_.length(); }
    double margin_rel() const { return margin_rel_; }

    // Affine: (a, b, 0, 1). Moebius: canonical matrix.
    const Mat2<double>& matrix() const { return m_; }
    std::array<double, 4> coefficients() const { return {m_.p, m_.q, m_.r, m_.s}; }
    // Canonical Moebius entries for comparison across kinds.
    std::array<double, 4> canonical() const;

    double evaluate(double x) const;
    double derivative(double x) const;
    // Unchecked formula evaluation.
    double value(double x) const { return m_(x); }
    double deriv_value(double x) const { return m_.deriv(x); }

    int orientation() const { return m_.det() > 0 ? 1 : -1; }
    std::optional<double> pole() const;

    Interval image(const Interval& iv) const;
    double sup_abs_derivative(const Interval& iv) const;
    double inf_abs_derivative(const Interval& iv) const;

    // Exact global inverse; its domain is the image of this domain.
    ConformalMap inverse() const;
    ConformalMap with_domain(Interval domain) const;

    bool approx_equal(const ConformalMap& other, double tol) const;

private:
    ConformalMap(MapKind kind, const Mat2<double>& m, Interval domain, double margin_rel);
    void check_point(double x) const;

    MapKind kind_ = MapKind::Affine;
    Mat2<double> m_;
    Interval domain_;
    double margin_rel_ = kDefaultPoleMarginRel;
};

struct MapDistance {
    double value = 0.0;
    double argmax = 0.0;
};

// outer o inner; the result lives on inner's domain.
ConformalMap compose(const ConformalMap& outer, const ConformalMap& inner);

// Inverse on f(J); C^1 linear continuation with slope 1/Df at the junctions beyond it.
double invert_extended(const ConformalMap& map, double x);

MapDistance sup_distance_to_identity(const ConformalMap& map, const Interval& window);

// L o f with L affine, sending f(j_minus) to 0 and f(j_plus) to 1.
ConformalMap normalize(const ConformalMap& map, double j_minus, double j_plus);

// Same computation on a bare matrix in any precision; window must avoid the pole.
template <class T>
MapDistance sup_gap(const Mat2<T>& m, T lo, T hi) {
    T cand[4] = {lo, hi, lo, lo};
    int n = 2;
    T det = m.det();
    if (m.r != T(0) && det > T(0)) {
        T root = std::sqrt(det);
        for (T sgn : {T(1), T(-1)}) {
            T x = (sgn * root - m.s) / m.r;
            if (x > lo && x < hi) cand[n++] = x;
        }
    }
    MapDistance best{-1.0, static_cast<double>(lo)};
    for (int i = 0; i < n; ++i) {
        double v = static_cast<double>(std::fabs(m.gap(cand[i])));
        if (v > best.value) best = {v, static_cast<double>(cand[i])};
    }
    return best;
}

}  // namespace confdim
