#pragma once

#include <string>
#include <vector>

#include "stretchlab/jp_solver.hpp"

namespace stretchlab {

struct SweepRecord {
    double p = 0.0;
    double kappa_p = 0.0;
    double Jp = 0.0;
    double Jp_root = 0.0;
    double lipschitz_est = 0.0;            // max over cells of s1(du)
    double el_residual = 0.0;
    std::vector<double> eps;
    std::vector<double> concentration;     // fraction of normalized density in |s_c| <= eps
    double density_integral = 0.0;         // integral of |S_{p-1}| after normalization
    double mass_S = 0.0;                   // integral of |S_{p-1}|_{sv^1}
    double mass_V = 0.0;                   // integral of the Killing sv^1 norm of V
    double closedness_defect = 0.0;
    double sqrt2_error = 0.0;              // max relative mismatch |V|_+ vs sqrt(2) |*S|
    int iters = 0;
    bool converged = false;
    bool failed = false;
    std::string message;
    CellField<double> density;
};

struct SweepOptions {
    SolverOptions solver;                  // p is overridden per record
    std::vector<double> eps_list{0.05, 0.1, 0.2};
    double init_amplitude = 0.05;
    double dirichlet_R0 = 0.3;
    std::uint64_t seed = 1;
    double fail_at_p = -1.0;               // fault injection for testing error propagation
};

double kappa(const GridMap& u, const Cylinder& cyl, double p);
CellField<double> density_S(const GridMap& u, const Cylinder& cyl, double p, double kappa);
double concentration(const CellField<double>& density, const Cylinder& cyl, double eps);

// Fills the per-p diagnostics of an already solved map.
SweepRecord diagnose(const GridMap& u, const Cylinder& cyl, double p, const std::vector<double>& eps_list,
                     BoundaryKind bc);

std::vector<SweepRecord> sweep(const std::vector<double>& p_list, const Cylinder& cyl, const SweepOptions& opts,
                               std::vector<GridMap>* solutions = nullptr);

struct PrimitiveSample {
    std::vector<double> s;                 // cell-centre s values of the s-axis path
    std::vector<SkewMap> v;                // v_q along the path, anchored at the cell nearest (0, 0)
    double total_variation = 0.0;          // sum of bar-metric increments along the s-axis path
    double max_loop_defect = 0.0;          // max |loop integral| over dual plaquettes
    double path_defect = 0.0;              // |difference| of two staircase paths to the far corner
    double t_variation = 0.0;              // max over rows of the change of v_q across one period in t
};

PrimitiveSample primitive_vq(const NoetherCurrent& V, const GridMap& u, const Cylinder& cyl, int column = 0);

}  // namespace stretchlab
