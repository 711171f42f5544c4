#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stretchlab/svnorm.hpp"

namespace stretchlab {

using Rng = std::mt19937_64;

// One named inequality. Margins are relative: (rhs - lhs) / max(|lhs|, |rhs|).
struct CheckOutcome {
    std::string name;
    bool asserted = true;  // false: diagnostic only, never fails the suite
    long count = 0;
    long violations = 0;
    double worst_margin = kInf;
    std::vector<double> argmin_instance;  // {p, trial, extra...}

    void record(double margin, const std::vector<double>& instance, double slack = -1e-12);
    bool pass() const { return !asserted || violations == 0; }
};

struct SuiteReport {
    std::vector<CheckOutcome> checks;
    bool all_pass() const;
    CheckOutcome& get(const std::string& name);
    const CheckOutcome* find(const std::string& name) const;
};

double relative_margin(double lhs, double rhs);

HPoint random_hpoint(Rng& rng, double radius);
// Random tangent map with log-uniform singular values; a share of near-coincident and rank-one cases.
TangentMap random_tangent_map(Rng& rng, const HPoint& x);
// A point at distance t from x, t log-uniform in [1e-3, t_max] with delta(x, y) < 1/10.
HPoint random_nearby(Rng& rng, const HPoint& x);

struct NamedMargin {
    std::string name;
    double margin;
};

// Scalar lemmas for x, y > 0 and z >= max(x, y), both sign choices.
std::vector<NamedMargin> check_scalar_lemmas(double x, double y, double z, double p);
// Same-base inequalities for A, B at one point.
std::vector<NamedMargin> check_same_base(const TangentMap& a, const TangentMap& b, double p);
// Cross-basepoint inequalities: a at X, bt tangent at Y, with B = bt reprojected at X.
// Gram-power non-negativity and the constant-8 inequality are reported as margins as well.
std::vector<NamedMargin> check_cross_base(const TangentMap& a, const TangentMap& bt, double p);

SuiteReport svnorm_property_suite(int trials, const std::vector<double>& p_list, std::uint64_t seed);
SuiteReport pointwise_suite(int trials, const std::vector<double>& p_list, std::uint64_t seed);

}  // namespace stretchlab
