#pragma once

#include <Eigen/Dense>

namespace stretchlab {

using MinkVec = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double tol_H = 1e-9;

// A point on the upper sheet of the unit hyperboloid (X,X) = -1.
class HPoint {
public:
    HPoint() : v_(0.0, 0.0, 1.0) {}
    // Validates membership; use retract() to normalize an approximate point.
    explicit HPoint(const MinkVec& v);

    static HPoint unchecked(const MinkVec& v) {
        HPoint x;
        x.v_ = v;
        return x;
    }

    const MinkVec& v() const { return v_; }
    double operator[](int i) const { return v_[i]; }

private:
    MinkVec v_;
};

// A 3x3 matrix with m^# = -m, i.e. an element of so(2,1).
class SkewMap {
public:
    SkewMap() : m_(Mat3::Zero()) {}
    // Projects onto the #-skew part; exact for inputs that are already skew.
    static SkewMap from_matrix(const Mat3& m);

    const Mat3& m() const { return m_; }

    SkewMap operator+(const SkewMap& o) const { return raw(m_ + o.m_); }
    SkewMap operator-(const SkewMap& o) const { return raw(m_ - o.m_); }
    SkewMap operator*(double c) const { return raw(c * m_); }
    SkewMap& operator+=(const SkewMap& o) {
        m_ += o.m_;
        return *this;
    }
    SkewMap operator-() const { return raw(-m_); }

    static SkewMap raw(const Mat3& m) {
        SkewMap s;
        s.m_ = m;
        return s;
    }

private:
    Mat3 m_;
};

inline const Mat3& esharp() {
    static const Mat3 e = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
    return e;
}

inline double mink_inner(const MinkVec& x, const MinkVec& y) {
    return x[0] * y[0] + x[1] * y[1] - x[2] * y[2];
}

// Row vector X^# = (e X)^T.
inline Eigen::RowVector3d sharp(const MinkVec& x) { return Eigen::RowVector3d(x[0], x[1], -x[2]); }

Mat3 sharp_transpose(const Mat3& b);

SkewMap cross(const MinkVec& x, const MinkVec& y);

double dist(const HPoint& x, const HPoint& y);
double delta(const MinkVec& x, const MinkVec& y);
double omega(const MinkVec& x, const MinkVec& y);

MinkVec tangent_project(const HPoint& x, const MinkVec& w);
MinkVec alpha(const HPoint& x, const SkewMap& w);
SkewMap beta(const HPoint& x, const MinkVec& v);

HPoint exp_map(const HPoint& x, const MinkVec& v);
// Inverse of exp_map: the tangent vector at x pointing to y with length dist(x, y).
MinkVec log_map(const HPoint& x, const HPoint& y);
HPoint retract(const MinkVec& v);

// O_X = I + 2 X X^#, flipping the normal direction.
Mat3 bar_operator(const HPoint& x);
double bar_metric(const HPoint& x, const MinkVec& w1, const MinkVec& w2);
// Positive Killing-type metric on so(2,1) twisted by O_X: -Tr(O A O B).
double bar_metric(const HPoint& x, const SkewMap& a, const SkewMap& b);

double killing(const SkewMap& a, const SkewMap& b);

// Hyperbolic translation of length a along the geodesic x1 = 0.
Mat3 boost(double a);

}  // namespace stretchlab
