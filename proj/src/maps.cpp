#include "confdim/maps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confdim {

namespace {

Mat2<double> canonicalize(Mat2<double> m) {
    double det = m.det();
    double k = 1.0 / std::sqrt(std::fabs(det));
    m = {m.p * k, m.q * k, m.r * k, m.s * k};
    double first = m.p != 0.0 ? m.p : (m.q != 0.0 ? m.q : (m.r != 0.0 ? m.r : m.s));
    if (first < 0.0) m = {-m.p, -m.q, -m.r, -m.s};
    return m;
}

void check_domain(const Interval& d) {
    if (!(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi))
        throw Error(ErrorKind::DomainViolation, "domain must be a finite interval with lo < hi");
}

bool pole_too_close(const Mat2<double>& m, const Interval& d, double margin) {
    if (m.r == 0.0) return false;
    double pole = -m.s / m.r;
    return pole >= d.lo - margin && pole <= d.hi + margin;
}

}  // namespace

ConformalMap::ConformalMap(MapKind kind, const Mat2<double>& m, Interval domain, double margin_rel)
    : kind_(kind), m_(m), domain_(domain), margin_rel_(margin_rel) {}

ConformalMap ConformalMap::affine(double a, double b, Interval domain, double pole_margin_rel) {
    check_domain(domain);
    if (!(std::isfinite(a) && std::isfinite(b)) || a == 0.0)
        throw Error(ErrorKind::DomainViolation, "affine map needs finite a != 0");
    return ConformalMap(MapKind::Affine, {a, b, 0.0, 1.0}, domain, pole_margin_rel);
}

ConformalMap ConformalMap::moebius(double p, double q, double r, double s, Interval domain,
                                   double pole_margin_rel) {
    check_domain(domain);
    Mat2<double> m{p, q, r, s};
    if (!(std::isfinite(p) && std::isfinite(q) && std::isfinite(r) && std::isfinite(s)) || m.det() == 0.0)
        throw Error(ErrorKind::DomainViolation, "moebius map needs finite entries and ps - qr != 0");
    m = canonicalize(m);
    if (pole_too_close(m, domain, pole_margin_rel * domain.length()))
        throw Error(ErrorKind::PoleInDomain, "pole " + std::to_string(-m.s / m.r) + " lies in the domain");
    return ConformalMap(MapKind::Moebius, m, domain, pole_margin_rel);
}

ConformalMap ConformalMap::identity(Interval domain) { return affine(1.0, 0.0, domain); }

ConformalMap ConformalMap::from_matrix(MapKind kind, const Mat2<double>& m, Interval domain,
                                       double pole_margin_rel) {
    if (kind == MapKind::Affine) {
        return ConformalMap(MapKind::Affine, {m.p / m.s, m.q / m.s, 0.0, 1.0}, domain, pole_margin_rel);
    }
    Mat2<double> c = canonicalize(m);
    if (pole_too_close(c, domain, pole_margin_rel * domain.length()))
        throw Error(ErrorKind::PoleEntersDomain,
                    "composite pole " + std::to_string(-c.s / c.r) + " enters the domain");
    return ConformalMap(MapKind::Moebius, c, domain, pole_margin_rel);
}

std::array<double, 4> ConformalMap::canonical() const {
    if (kind_ == MapKind::Moebius) return coefficients();
    Mat2<double> c = canonicalize(m_);
    return {c.p, c.q, c.r, c.s};
}

std::optional<double> ConformalMap::pole() const {
    if (m_.r == 0.0) return std::nullopt;
    return -m_.s / m_.r;
}

void ConformalMap::check_point(double x) const {
    double mg = margin();
    if (!(x >= domain_.lo - mg && x <= domain_.hi + mg))
        throw Error(ErrorKind::DomainViolation, "point " + std::to_string(x) + " outside the domain");
    if (auto pl = pole(); pl && std::fabs(x - *pl) < mg)
        throw Error(ErrorKind::PoleProximity, "point " + std::to_string(x) + " too close to the pole");
}

double ConformalMap::evaluate(double x) const {
    check_point(x);
    return m_(x);
}

double ConformalMap::derivative(double x) const {
    check_point(x);
    return m_.deriv(x);
}

Interval ConformalMap::image(const Interval& iv) const {
    double a = m_(iv.lo), b = m_(iv.hi);
    return a <= b ? Interval{a, b} : Interval{b, a};
}

// |Df| is monotone on any interval avoiding the pole, so endpoints suffice.
double ConformalMap::sup_abs_derivative(const Interval& iv) const {
    return std::max(std::fabs(m_.deriv(iv.lo)), std::fabs(m_.deriv(iv.hi)));
}

double ConformalMap::inf_abs_derivative(const Interval& iv) const {
    return std::min(std::fabs(m_.deriv(iv.lo)), std::fabs(m_.deriv(iv.hi)));
}

ConformalMap ConformalMap::inverse() const {
    Interval img = image(domain_);
    if (kind_ == MapKind::Affine) {
        double a = m_.p, b = m_.q;
        return ConformalMap(MapKind::Affine, {1.0 / a, -b / a, 0.0, 1.0}, img, margin_rel_);
    }
    return ConformalMap(MapKind::Moebius, canonicalize(m_.adj()), img, margin_rel_);
}

ConformalMap ConformalMap::with_domain(Interval domain) const {
    check_domain(domain);
    if (pole_too_close(m_, domain, margin_rel_ * domain.length()))
        throw Error(ErrorKind::PoleInDomain, "pole lies in the requested domain");
    return ConformalMap(kind_, m_, domain, margin_rel_);
}

bool ConformalMap::approx_equal(const ConformalMap& other, double tol) const {
    auto a = canonical(), b = other.canonical();
    for (int i = 0; i < 4; ++i) {
        double scale = std::max({1.0, std::fabs(a[i]), std::fabs(b[i])});
        if (std::fabs(a[i] - b[i]) > tol * scale) return false;
    }
    return true;
}

ConformalMap compose(const ConformalMap& outer, const ConformalMap& inner) {
    Mat2<double> m = outer.matrix() * inner.matrix();
    MapKind kind = outer.is_affine() && inner.is_affine() ? MapKind::Affine : MapKind::Moebius;
    return ConformalMap::from_matrix(kind, m, inner.domain(), inner.margin_rel());
}

double invert_extended(const ConformalMap& map, double x) {
    const Interval& d = map.domain();
    double at_lo = map.value(d.lo), at_hi = map.value(d.hi);
    // Junction on each side of f(J): which domain endpoint lands there.
    double top = std::max(at_lo, at_hi), bottom = std::min(at_lo, at_hi);
    double j_top = at_hi >= at_lo ? d.hi : d.lo;
    double j_bottom = at_hi >= at_lo ? d.lo : d.hi;
    if (x > top) return j_top + (x - top) / map.deriv_value(j_top);
    if (x < bottom) return j_bottom + (x - bottom) / map.deriv_value(j_bottom);
    Mat2<double> inv = map.matrix().adj();
    double y = inv(x);
    return std::clamp(y, d.lo, d.hi);
}

MapDistance sup_distance_to_identity(const ConformalMap& map, const Interval& window) {
    double mg = map.margin();
    const Interval& d = map.domain();
    if (window.lo < d.lo - mg || window.hi > d.hi + mg || window.lo > window.hi)
        throw Error(ErrorKind::DomainViolation, "window outside the inflated domain");
    if (auto pl = map.pole(); pl && *pl >= window.lo - mg && *pl <= window.hi + mg)
        throw Error(ErrorKind::PoleProximity, "window reaches the pole");
    return sup_gap(map.matrix(), window.lo, window.hi);
}

ConformalMap normalize(const ConformalMap& map, double j_minus, double j_plus) {
    double f_lo = map.value(j_minus), f_hi = map.value(j_plus);
    double span = f_hi - f_lo;
    Mat2<double> L{1.0 / span, -f_lo / span, 0.0, 1.0};
    Mat2<double> m = L * map.matrix();
    return ConformalMap::from_matrix(map.kind(), m, map.domain(), map.margin_rel());
}

}  // namespace confdim
