#include "stretchlab/svnorm.hpp"

#include <algorithm>
#include <cmath>

#include "stretchlab/errors.hpp"

namespace stretchlab {

TangentMap::TangentMap(const HPoint& base, const MinkVec& c0, const MinkVec& c1)
    : base_(base), cols_{tangent_project(base, c0), tangent_project(base, c1)} {}

TangentMap TangentMap::unprojected(const HPoint& base, const MinkVec& c0, const MinkVec& c1) {
    TangentMap t;
    t.base_ = base;
    t.cols_ = {c0, c1};
    return t;
}

TangentMap TangentMap::operator+(const TangentMap& o) const {
    return unprojected(base_, cols_[0] + o.cols_[0], cols_[1] + o.cols_[1]);
}

TangentMap TangentMap::operator-(const TangentMap& o) const {
    return unprojected(base_, cols_[0] - o.cols_[0], cols_[1] - o.cols_[1]);
}

TangentMap TangentMap::operator*(double c) const { return unprojected(base_, c * cols_[0], c * cols_[1]); }

SymEig2 sym_eig2(const Eigen::Matrix2d& g) {
    SymEig2 r;
    double a = g(0, 0), b = 0.5 * (g(0, 1) + g(1, 0)), c = g(1, 1);
    double mean = 0.5 * (a + c);
    double half = std::hypot(0.5 * (a - c), b);
    r.l1 = mean + half;
    r.l2 = mean - half;
    if (2.0 * half <= 1e-12 * std::abs(r.l1)) {
        r.degenerate = true;
        r.vecs.setIdentity();
        return r;
    }
    // Eigenvector for l1, picking the better-conditioned of the two row formulas.
    Eigen::Vector2d v;
    if (a >= c)
        v = Eigen::Vector2d(r.l1 - c, b);
    else
        v = Eigen::Vector2d(b, r.l1 - a);
    v.normalize();
    r.vecs.col(0) = v;
    r.vecs.col(1) = Eigen::Vector2d(-v[1], v[0]);
    return r;
}

namespace {

double spow(double x, double e) {
    if (x <= 0.0) return e == 0.0 ? 1.0 : 0.0;
    return std::pow(x, e);
}

}  // namespace

Eigen::Matrix2d sym_pow(const Eigen::Matrix2d& g, double e) {
    SymEig2 eg = sym_eig2(g);
    if (eg.degenerate) {
        double f = spow(std::max(eg.l1, 0.0) * 0.5 + std::max(eg.l2, 0.0) * 0.5, e);
        return f * Eigen::Matrix2d::Identity();
    }
    double f1 = spow(std::max(eg.l1, 0.0), e), f2 = spow(std::max(eg.l2, 0.0), e);
    return f1 * eg.vecs.col(0) * eg.vecs.col(0).transpose() + f2 * eg.vecs.col(1) * eg.vecs.col(1).transpose();
}

Eigen::Matrix2d gram(const TangentMap& a) {
    Eigen::Matrix2d g;
    g(0, 0) = mink_inner(a.col(0), a.col(0));
    g(1, 1) = mink_inner(a.col(1), a.col(1));
    g(0, 1) = g(1, 0) = mink_inner(a.col(0), a.col(1));
    return g;
}

Spectrum singular_values(const TangentMap& a) { return singular_values(frame_matrix(a)); }

Spectrum singular_values(const Eigen::Matrix2d& m) {
    // s1 from the Gram eigenvalue; s2 = |det m| / s1 keeps rank-one maps accurate.
    SymEig2 e = sym_eig2(m.transpose() * m);
    double s1 = std::sqrt(std::max(e.l1, 0.0));
    if (s1 == 0.0) return {0.0, 0.0};
    double s2 = std::min(std::abs(m.determinant()) / s1, s1);
    return {s1, s2};
}

double sv_norm(const Spectrum& s, double p) {
    if (!(p >= 1.0)) throw ValidationError("sv_norm: p must be at least 1");
    if (std::isinf(p) || s.s1 == 0.0) return s.s1;
    double r = s.s2 / s.s1;
    return s.s1 * std::pow(1.0 + std::pow(r, p), 1.0 / p);
}

double sv_norm(const TangentMap& a, double p) { return sv_norm(singular_values(a), p); }
double sv_norm(const Eigen::Matrix2d& m, double p) { return sv_norm(singular_values(m), p); }

double trace_power(const TangentMap& a, double p) {
    Spectrum s = singular_values(a);
    return spow(s.s1, p) + spow(s.s2, p);
}

double hs_norm(const TangentMap& a) { return std::sqrt(std::max(pairing(a, a), 0.0)); }

TangentMap S_q(const TangentMap& a, double q) {
    if (!(q > 0.0)) throw ValidationError("S_q: q must be positive");
    // Q(A)^(q-1) as a function of the Gram matrix: G^((q-1)/2).
    Eigen::Matrix2d m = sym_pow(gram(a), 0.5 * (q - 1.0));
    if (q == 1.0) m.setIdentity();
    MinkVec c0 = m(0, 0) * a.col(0) + m(1, 0) * a.col(1);
    MinkVec c1 = m(0, 1) * a.col(0) + m(1, 1) * a.col(1);
    return TangentMap::unprojected(a.base(), c0, c1);
}

double pairing(const TangentMap& a, const TangentMap& c) {
    return mink_inner(a.col(0), c.col(0)) + mink_inner(a.col(1), c.col(1));
}

double first_variation_kernel(const TangentMap& a, const TangentMap& c, double p) {
    return p * pairing(S_q(a, p - 1.0), c);
}

bool check_convexity_subgradient(const TangentMap& a, const TangentMap& b, double p) {
    double lhs = first_variation_kernel(a, b - a, p);
    double rhs = trace_power(b, p) - trace_power(a, p);
    double scale = std::max({trace_power(a, p), trace_power(b, p), 1e-300});
    return (rhs - lhs) / scale >= -1e-12;
}

bool norm_equivalence_check(const TangentMap& a, double p) {
    double hs = hs_norm(a);
    double n = sv_norm(a, p);
    double tol = 1e-12 * std::max(hs, 1e-300);
    return hs / std::sqrt(2.0) <= n + tol && n <= hs + tol;
}

std::array<MinkVec, 2> tangent_frame(const HPoint& x) {
    // Boost-adapted frame; well conditioned for all points on H.
    const MinkVec& v = x.v();
    double c = v[2];
    double r = std::hypot(v[0], v[1]);
    MinkVec e1, e2;
    if (r < 1e-300) {
        e1 = MinkVec(1, 0, 0);
        e2 = MinkVec(0, 1, 0);
    } else {
        double ux = v[0] / r, uy = v[1] / r;
        e1 = MinkVec(c * ux, c * uy, r);  // radial direction
        e2 = MinkVec(-uy, ux, 0.0);       // angular direction
    }
    return {e1, e2};
}

Eigen::Matrix2d frame_matrix(const TangentMap& a) {
    auto f = tangent_frame(a.base());
    Eigen::Matrix2d m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = mink_inner(f[i], a.col(j));
    return m;
}

TangentMap from_frame_matrix(const HPoint& x, const Eigen::Matrix2d& m) {
    auto f = tangent_frame(x);
    return TangentMap::unprojected(x, m(0, 0) * f[0] + m(1, 0) * f[1], m(0, 1) * f[0] + m(1, 1) * f[1]);
}

}  // namespace stretchlab
