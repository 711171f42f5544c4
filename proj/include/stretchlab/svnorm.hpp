#pragma once

#include <array>
#include <limits>

#include <Eigen/Dense>

#include "stretchlab/minkowski.hpp"

namespace stretchlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear map from an orthonormal 2-frame (e_s, e_t) into the tangent plane at base.
class TangentMap {
public:
    TangentMap() = default;
    // Columns are tangent-projected at base.
    TangentMap(const HPoint& base, const MinkVec& c0, const MinkVec& c1);
    static TangentMap unprojected(const HPoint& base, const MinkVec& c0, const MinkVec& c1);
    static TangentMap zero(const HPoint& base) { return unprojected(base, MinkVec::Zero(), MinkVec::Zero()); }

    const HPoint& base() const { return base_; }
    const MinkVec& col(int a) const { return cols_[a]; }
    const std::array<MinkVec, 2>& cols() const { return cols_; }

    TangentMap operator+(const TangentMap& o) const;
    TangentMap operator-(const TangentMap& o) const;
    TangentMap operator*(double c) const;

private:
    HPoint base_;
    std::array<MinkVec, 2> cols_{MinkVec::Zero(), MinkVec::Zero()};
};

struct Spectrum {
    double s1 = 0.0;
    double s2 = 0.0;
};

struct SymEig2 {
    double l1 = 0.0;  // larger
    double l2 = 0.0;
    Eigen::Matrix2d vecs = Eigen::Matrix2d::Identity();  // columns match l1, l2
    bool degenerate = false;
};

SymEig2 sym_eig2(const Eigen::Matrix2d& g);

// Spectral power with the convention 0^e = 0; negative eigenvalues from rounding are clipped.
Eigen::Matrix2d sym_pow(const Eigen::Matrix2d& g, double e);

Eigen::Matrix2d gram(const TangentMap& a);
Spectrum singular_values(const TangentMap& a);
Spectrum singular_values(const Eigen::Matrix2d& m);

double sv_norm(const Spectrum& s, double p);
double sv_norm(const TangentMap& a, double p);
double sv_norm(const Eigen::Matrix2d& m, double p);
// Tr Q(A)^p = s1^p + s2^p.
double trace_power(const TangentMap& a, double p);
double hs_norm(const TangentMap& a);

TangentMap S_q(const TangentMap& a, double q);

// Sum over frame directions of (a_alpha, c_alpha)^#.
double pairing(const TangentMap& a, const TangentMap& c);
double first_variation_kernel(const TangentMap& a, const TangentMap& c, double p);
bool check_convexity_subgradient(const TangentMap& a, const TangentMap& b, double p);
bool norm_equivalence_check(const TangentMap& a, double p);

// Orthonormal basis of the tangent plane at x.
std::array<MinkVec, 2> tangent_frame(const HPoint& x);
// Coordinates of a in tangent_frame(a.base()): row i = target frame vector, column = domain direction.
Eigen::Matrix2d frame_matrix(const TangentMap& a);
TangentMap from_frame_matrix(const HPoint& x, const Eigen::Matrix2d& m);

}  // namespace stretchlab
