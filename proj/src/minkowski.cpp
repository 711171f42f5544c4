#include "stretchlab/minkowski.hpp"

#include <cmath>
#include <string>

#include "stretchlab/errors.hpp"

namespace stretchlab {

namespace {

bool all_finite(const MinkVec& v) { return v.allFinite(); }

}  // namespace

HPoint::HPoint(const MinkVec& v) : v_(v) {
    if (!all_finite(v)) throw ValidationError("HPoint: non-finite component");
    double q = mink_inner(v, v);
    if (std::abs(q + 1.0) > tol_H * v.squaredNorm() || v[2] < 1.0 - tol_H)
        throw ValidationError("HPoint: vector is not on the upper hyperboloid");
}

SkewMap SkewMap::from_matrix(const Mat3& m) { return raw(0.5 * (m - sharp_transpose(m))); }

Mat3 sharp_transpose(const Mat3& b) { return esharp() * b.transpose() * esharp(); }

SkewMap cross(const MinkVec& x, const MinkVec& y) {
    return SkewMap::raw(y * sharp(x) - x * sharp(y));
}

double dist(const HPoint& x, const HPoint& y) {
    double c = -mink_inner(x.v(), y.v());
    if (c < 1.0 - tol_H) throw NumericalError("dist: -(X,Y) below 1, points are not on H");
    return std::acosh(std::max(c, 1.0));
}

double delta(const MinkVec& x, const MinkVec& y) {
    MinkVec d = x - y;
    return mink_inner(d, d);
}

double omega(const MinkVec& x, const MinkVec& y) { return 1.0 + 0.5 * delta(x, y); }

MinkVec tangent_project(const HPoint& x, const MinkVec& w) {
    return w + mink_inner(w, x.v()) * x.v();
}

MinkVec alpha(const HPoint& x, const SkewMap& w) { return w.m() * x.v(); }

SkewMap beta(const HPoint& x, const MinkVec& v) { return cross(v, x.v()); }

HPoint exp_map(const HPoint& x, const MinkVec& v) {
    double slack = 1e-8 * (1.0 + v.norm() * x.v().norm());
    if (!all_finite(v) || std::abs(mink_inner(v, x.v())) > slack)
        throw ValidationError("exp_map: vector is not tangent at the base point");
    MinkVec t = tangent_project(x, v);
    double n2 = mink_inner(t, t);
    if (n2 <= 0.0) return x;
    double n = std::sqrt(n2);
    return retract(std::cosh(n) * x.v() + (std::sinh(n) / n) * t);
}

MinkVec log_map(const HPoint& x, const HPoint& y) {
    MinkVec w = tangent_project(x, y.v());
    double n2 = mink_inner(w, w);
    if (!(n2 >= 0.0) || !std::isfinite(n2)) throw NumericalError("log_map: degenerate configuration");
    if (n2 == 0.0) return MinkVec::Zero();
    double d = std::asinh(std::sqrt(n2));
    return (d / std::sqrt(n2)) * w;
}

HPoint retract(const MinkVec& v) {
    double q = mink_inner(v, v);
    if (!all_finite(v) || !(q < 0.0) || !(v[2] > 0.0))
        throw NumericalError("retract: vector is not future timelike");
    return HPoint::unchecked(v / std::sqrt(-q));
}

Mat3 bar_operator(const HPoint& x) { return Mat3::Identity() + 2.0 * x.v() * sharp(x.v()); }

double bar_metric(const HPoint& x, const MinkVec& w1, const MinkVec& w2) {
    return mink_inner(w1, w2) + 2.0 * mink_inner(w1, x.v()) * mink_inner(w2, x.v());
}

double bar_metric(const HPoint& x, const SkewMap& a, const SkewMap& b) {
    Mat3 o = bar_operator(x);
    return -(o * a.m() * o * b.m()).trace();
}

double killing(const SkewMap& a, const SkewMap& b) { return (a.m() * b.m()).trace(); }

Mat3 boost(double a) {
    Mat3 m = Mat3::Identity();
    double c = std::cosh(a), s = std::sinh(a);
    m(1, 1) = c;
    m(1, 2) = s;
    m(2, 1) = s;
    m(2, 2) = c;
    return m;
}

}  // namespace stretchlab
