#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stretchlab/cylinder.hpp"

namespace stretchlab {

enum class BoundaryKind { Neumann, Dirichlet };

struct SolverOptions {
    double p = 8.0;
    BoundaryKind bc = BoundaryKind::Neumann;  // Dirichlet pins rows 0 and Ns at their initial values
    int max_iters = 20000;
    double grad_tol = 1e-6;
    double initial_step = 0.05;
    double backtrack = 0.5;
    double armijo = 1e-4;
    bool bb_steps = true;       // Barzilai-Borwein trial step, always safeguarded by Armijo
    bool gauge_fix = true;      // Neumann only: rotate along the core so T(u(0, 0)) = 0
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Termination { Converged, MaxIters, LineSearchFailed };

struct SolveResult {
    GridMap u;
    double Jp = 0.0;
    double el_residual = 0.0;
    int iters = 0;
    bool converged = false;
    Termination termination = Termination::MaxIters;
    std::string message;
};

double J_p(const GridMap& u, const Cylinder& cyl, double p);

// Exact gradient of the discrete J_p in the # pairing, tangent-projected at each node.
struct EnergyGradient {
    double J = 0.0;
    std::vector<MinkVec> grad;  // indexed like GridMap::nodes()
};
EnergyGradient J_p_with_gradient(const GridMap& u, const Cylinder& cyl, double p);
std::vector<MinkVec> grad_Jp(const GridMap& u, const Cylinder& cyl, double p);

// Nodal quadrature weights: a quarter of each adjacent cell's area.
std::vector<double> nodal_weights(const Cylinder& cyl);

// RMS over free nodes of the gradient density |g_n|_+ / w_n, divided by p (J_p / area)^((p-1)/p).
double el_residual(const GridMap& u, const Cylinder& cyl, double p, BoundaryKind bc = BoundaryKind::Neumann);
double el_residual(const EnergyGradient& eg, const Cylinder& cyl, double p, BoundaryKind bc);

SolveResult minimize(const GridMap& init, const Cylinder& cyl, const SolverOptions& opts);

// Rotation along the core geodesic putting u(s = 0, t = 0) at T = 0.
void gauge_fix(GridMap& u, const Cylinder& cyl);

// Sup over nodes of |R| with R the first chart coordinate.
double sup_R(const GridMap& u);

struct NoetherCurrent {
    CellField<std::array<SkewMap, 2>> V;  // frame components (e_s, e_t) of *(S_{p-1}(kappa du) x u)
    CellField<HPoint> centers;
    CellField<double> loop;                // per interior node circulation density (rows 1..Ns-1 used)
    double closedness_defect = 0.0;
};

NoetherCurrent noether_current(const GridMap& u, const Cylinder& cyl, double p, double kappa);

struct DualStationarityReport {
    double q = 0.0;
    double Jq0 = 0.0;
    double eps = 0.0;
    double slack = 0.0;
    int trials = 0;
    int violations = 0;
    double worst_violation = 0.0;   // max of Jq0 - Jq(+-eps xi); positive means a decrease
    double max_first_variation = 0.0;
};

DualStationarityReport dual_stationarity_check(const GridMap& u, const Cylinder& cyl, double p, int trials,
                                               std::uint64_t seed, double eps = 1e-3);

struct ConvexityReport {
    std::vector<double> taus;
    std::vector<double> values;
    double worst_margin = kInf;   // min over midpoint triples of (J_a + J_b)/2 - J_mid, relative to max J
    double flatness = 0.0;        // (max - min) / max over the samples
    bool convex = true;
};

ConvexityReport convexity_check(const GridMap& u0, const GridMap& u1, const Cylinder& cyl, double p, int samples,
                                double slack = -1e-10);

}  // namespace stretchlab
