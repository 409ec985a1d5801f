#pragma once

// 2x2 matrix algebra for maps x -> (p x + q) / (r x + s).
// Affine maps are the case r = 0, s = 1.

#include <cmath>

namespace confdim {

template <class T>
struct Mat2 {
    T p{1}, q{0}, r{0}, s{1};

    template <class U>
    static Mat2 from(const Mat2<U>& m) {
        return {static_cast<T>(m.p), static_cast<T>(m.q), static_cast<T>(m.r), static_cast<T>(m.s)};
    }

    T det() const { return p * s - q * r; }

    T operator()(T x) const { return (p * x + q) / (r * x + s); }

    T deriv(T x) const {
        T d = r * x + s;
        return det() / (d * d);
    }

    // f(x) - x without subtracting two nearly equal values.
    T gap(T x) const { return (-r * x * x + (p - s) * x + q) / (r * x + s); }

    // f(a) - f(b) from a - b.
    T diff(T a, T b, T a_minus_b) const { return det() * a_minus_b / ((r * a + s) * (r * b + s)); }
    // Length of the image of [a, b], free of endpoint cancellation.
    T span(T a, T b) const {
        T d = diff(b, a, b - a);
        return d < T(0) ? -d : d;
    }

    Mat2 operator*(const Mat2& o) const {
        return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
    }

    // Adjugate; represents the inverse map.
    Mat2 adj() const { return {s, -q, -r, p}; }

    bool is_affine() const { return r == T(0); }
};

}  // namespace confdim
