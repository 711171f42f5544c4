#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stretchlab/errors.hpp"

namespace stretchlab {

// Node of an integrated trajectory in the sigma variable, d sigma / ds = cosh(s)^(-1/(p-1)).
struct SigmaNode {
    double sigma = 0.0;
    double s = 0.0;
    double R = 0.0;
    double Phi = 0.0;  // flux cosh(s) R'^(p-1) = (dR/dsigma)^(p-1)
};

// Radial profile R(s) sampled on a uniform grid of [0, h] (odd extension to [-h, 0]).
struct Profile {
    std::vector<double> s;
    std::vector<double> R;
    std::vector<double> Rp;
    std::vector<int> region;  // 0 unless the construction is piecewise

    std::string kind;         // "slope", "core", "trivial", "limit", "direct"
    double parameter = 0.0;   // slope0, departure point s0, or s*
    double p = 0.0;
    double L = 0.0;
    double h = 0.0;
    int steps = 0;            // sigma steps of the accepted integration
    double refinement_change = 0.0;
    double boundary_miss = 0.0;
    double match_point = -1.0;  // limit profiles: start of the R' = L cosh R / cosh s region, -1 if none
    std::vector<SigmaNode> trajectory;

    int K() const { return static_cast<int>(s.size()) - 1; }
    // Cubic Hermite evaluation at |x| <= h, odd in x.
    double eval(double x) const;
};

struct IvpOptions {
    int K = 2000;               // intervals of the output grid
    int initial_steps = 4096;
    int max_steps = 1 << 20;
    double refine_tol = 1e-8;   // sup-norm change between step doublings
};

double label_A_energy(const Profile& R, double p, double L, double h);
double label_A_integrand(double s, double R, double Rp, double p, double L);

double ode_rhs(double s, double R, double Rp, double p, double L);

// IVP from R(0) = 0, R'(0) = slope0, integrated in sigma with RK4.
Profile solve_ivp_sigma(double p, double L, double slope0, double h, const IvpOptions& opts = {});
// R = 0 on [0, s0], then the maximal solution departing from the trivial branch at s0.
Profile solve_ivp_core(double p, double L, double s0, double h, const IvpOptions& opts = {});

// Dirichlet profile with R(h) = R0. Targets above the zero-slope limit are reached by shooting on
// slope0 in [0, 10 L]; smaller targets by shooting on the departure point of a flat core.
Profile shoot_dirichlet(double p, double L, double h, double R0, const IvpOptions& opts = {});
// R(h) of the slope0 -> 0 limit, i.e. the core solution with departure point 0.
double zero_slope_limit(double p, double L, double h, const IvpOptions& opts = {});

struct MonotonicityReport {
    double odd_margin = 0.0;        // min over s >= 0 of R / scale; R(0) must vanish
    double rp_margin = 0.0;         // min of (R'_{k+1} - R'_k) / scale
    double flux_margin = 0.0;       // min of (Phi_{k+1} - Phi_k) / scale
    double step4_margin = 0.0;      // relative margins over random trajectory pairs
    double step5_margin = 0.0;
    int pairs = 0;
    bool pass(double slack = -1e-10) const;
};

MonotonicityReport check_profile_monotonicity(const Profile& prof, int pairs, std::uint64_t seed);

// Piecewise limit profile: 0 on [0, s*], slope L / cosh s* up to the matching point, then R' = L cosh R / cosh s.
Profile limit_profile(double s_star, double L, double h, int K = 2000);
// s* whose limit profile reaches R(h) = R0.
double limit_s_star_for_R0(double L, double h, double R0);

struct IdealMapParams {
    double h = 0.02;
    double h0 = 0.4;
    double L = 1.5;
    double K0 = 1.2;
    double K_star = -1.0;  // Lipschitz constant off the lamination; defaults to K0 when negative

    double k() const { return (h0 + 2.0 * h) / h0; }
    void validate() const;
};

struct RegionBound {
    char region = 'a';
    double lo = 0.0;
    double hi = 0.0;
    double max_eigen = 0.0;  // max over samples of both eigenvalues of dz
    double bound = 0.0;
    bool pass = true;
};

struct IdealMapReport {
    IdealMapParams params;
    double k = 0.0;
    std::vector<double> s, R, Rp, eig1, eig2;
    std::vector<char> region;
    std::vector<RegionBound> regions;   // b, c, d carry bounds; a is the collapsed collar
    double continuity_error = 0.0;      // max jump of R across region boundaries
    double K_h = 0.0;
    double K_star = 0.0;
    double kK0 = 0.0;
    double lipschitz_bound = 0.0;       // max{K_h, K*, k K0}
    bool lipschitz_pass = false;
    bool pass() const;
};

IdealMapReport ideal_map_profile(const IdealMapParams& params, int samples = 10000);

}  // namespace stretchlab
