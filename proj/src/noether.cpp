#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "stretchlab/jp_solver.hpp"
#include "stretchlab/parallel.hpp"

namespace stretchlab {

namespace {

TangentMap cell_differential(const CellGeom& c) { return TangentMap(c.X, c.Ds, c.Dt); }

SkewMap adjoint(const Mat3& g, const Mat3& g_inv, const SkewMap& a) { return SkewMap::raw(g * a.m() * g_inv); }

}  // namespace

NoetherCurrent noether_current(const GridMap& u, const Cylinder& cyl, double p, double kappa) {
    const int Ns = cyl.Ns, Nt = cyl.Nt;
    NoetherCurrent nc;
    nc.V = CellField<std::array<SkewMap, 2>>(Ns, Nt);
    nc.centers = CellField<HPoint>(Ns, Nt);
    nc.loop = CellField<double>(Ns + 1, Nt, 0.0);
    parallel_for(static_cast<std::size_t>(Ns) * Nt, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            int i = static_cast<int>(k / Nt), j = static_cast<int>(k % Nt);
            CellGeom c = cell_geometry(u, cyl, i, j);
            TangentMap S = S_q(cell_differential(c) * kappa, p - 1.0);
            SkewMap Js = cross(S.col(0), c.X.v()), Jt = cross(S.col(1), c.X.v());
            nc.V(i, j) = {-Jt, Js};
            nc.centers(i, j) = c.X;
        }
    });

    const Mat3 H = u.holonomy();
    const Mat3 Hinv = sharp_transpose(H);
    // Cell value in column j - 1 expressed in the chart of column j.
    auto left = [&](int i, int j, int comp) -> SkewMap {
        if (j > 0) return nc.V(i, j - 1)[comp];
        return adjoint(Hinv, H, nc.V(i, Nt - 1)[comp]);
    };
    const double ds = cyl.ds(), dt = cyl.dt();
    auto edge_s = [&](int i, int j, bool shifted) {  // s-edge crossing node row i in column j (or j-1)
        SkewMap a = shifted ? left(i - 1, j, 0) : nc.V(i - 1, j)[0];
        SkewMap b = shifted ? left(i, j, 0) : nc.V(i, j)[0];
        return (a + b) * (0.5 * ds);
    };
    auto edge_t = [&](int a, int j) {  // t-edge in cell row a crossing node column j
        return (left(a, j, 1) + nc.V(a, j)[1]) * (0.5 * dt * std::cosh(cyl.s_cell(a)));
    };

    double worst = 0.0;
    for (int i = 1; i < Ns; ++i)
        for (int j = 0; j < Nt; ++j) {
            SkewMap circ = edge_s(i, j, true) + edge_t(i, j) - edge_s(i, j, false) - edge_t(i - 1, j);
            double nrm = std::sqrt(std::max(bar_metric(u.at(i, j), circ, circ), 0.0));
            double dens = nrm / (ds * dt * std::cosh(cyl.s_node(i)));
            nc.loop(i, j) = dens;
            worst = std::max(worst, dens);
        }
    nc.closedness_defect = worst;
    return nc;
}

DualStationarityReport dual_stationarity_check(const GridMap& u, const Cylinder& cyl, double p, int trials,
                                               std::uint64_t seed, double eps) {
    const int Ns = cyl.Ns, Nt = cyl.Nt;
    DualStationarityReport rep;
    rep.q = p / (p - 1.0);
    rep.eps = eps;
    rep.trials = trials;
    double J = J_p(u, cyl, p);
    double kappa = J > 0 ? std::pow(J, -1.0 / p) : 1.0;

    CellField<CellGeom> geo(Ns, Nt);
    CellField<TangentMap> Z(Ns, Nt);
    for (int i = 0; i < Ns; ++i)
        for (int j = 0; j < Nt; ++j) {
            geo(i, j) = cell_geometry(u, cyl, i, j);
            TangentMap S = S_q(cell_differential(geo(i, j)) * kappa, p - 1.0);
            Z(i, j) = TangentMap::unprojected(S.base(), -S.col(1), S.col(0));
        }
    auto Jq = [&](const CellField<TangentMap>& dxi, double t) {
        double total = 0.0;
        for (int i = 0; i < Ns; ++i) {
            double row = 0.0;
            for (int j = 0; j < Nt; ++j) row += trace_power(Z(i, j) + dxi(i, j) * t, rep.q);
            total += row * cyl.cell_weight(i);
        }
        return total;
    };
    CellField<TangentMap> none(Ns, Nt);
    for (int i = 0; i < Ns; ++i)
        for (int j = 0; j < Nt; ++j) none(i, j) = TangentMap::zero(geo(i, j).X);
    rep.Jq0 = Jq(none, 0.0);
    double zrms = std::sqrt(rep.Jq0 > 0 ? rep.Jq0 / cyl.exact_area() : 1.0);
    double grid2 = cyl.ds() * cyl.ds() + cyl.dt() * cyl.dt();
    rep.slack = 1e-8 * rep.Jq0 + eps * grid2 * rep.Jq0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const Mat3 H = u.holonomy();
    for (int trial = 0; trial < trials; ++trial) {
        double c[3][3][3][2];
        for (auto& a : c)
            for (auto& b : a)
                for (auto& d : b)
                    for (double& x : d) x = U(rng);
        std::vector<MinkVec> xi(u.size());
        for (int i = 0; i <= Ns; ++i)
            for (int j = 0; j < Nt; ++j) {
                double s = static_cast<double>(i) / Ns, t = cyl.t_node(j) / cyl.d;
                MinkVec amb = MinkVec::Zero();
                for (int m = 0; m < 3; ++m)
                    for (int b = 0; b < 3; ++b) {
                        double env = std::sin(std::numbers::pi * (m + 1) * s);
                        double ang = 2.0 * std::numbers::pi * b * t;
                        for (int k = 0; k < 3; ++k)
                            amb[k] += env * (c[m][b][k][0] * std::cos(ang) + c[m][b][k][1] * std::sin(ang));
                    }
                xi[u.index(i, j)] = tangent_project(u.at(i, j), boost(cyl.L * cyl.t_node(j)) * amb);
            }
        auto xnode = [&](int i, int j) -> MinkVec {
            return j < Nt ? xi[u.index(i, j)] : MinkVec(H * xi[u.index(i, j - Nt)]);
        };
        CellField<TangentMap> dxi(Ns, Nt);
        double ss = 0.0;
        for (int i = 0; i < Ns; ++i)
            for (int j = 0; j < Nt; ++j) {
                const CellGeom& g = geo(i, j);
                MinkVec a = xnode(i, j), b = xnode(i + 1, j), cc = xnode(i, j + 1), d = xnode(i + 1, j + 1);
                MinkVec Ds = ((b + d) - (a + cc)) / (2.0 * cyl.ds());
                MinkVec Dt = ((cc + d) - (a + b)) / (2.0 * cyl.dt() * g.cosh_s);
                dxi(i, j) = TangentMap(g.X, Ds, Dt);
                ss += pairing(dxi(i, j), dxi(i, j)) * cyl.cell_weight(i);
            }
        double scale = ss > 0 ? zrms / std::sqrt(ss / cyl.exact_area()) : 0.0;
        double fv = 0.0;
        for (int i = 0; i < Ns; ++i)
            for (int j = 0; j < Nt; ++j) {
                dxi(i, j) = dxi(i, j) * scale;
                fv += first_variation_kernel(Z(i, j), dxi(i, j), rep.q) * cyl.cell_weight(i);
            }
        rep.max_first_variation = std::max(rep.max_first_variation, std::abs(fv));
        for (double sgn : {1.0, -1.0}) {
            double v = rep.Jq0 - Jq(dxi, sgn * eps);
            rep.worst_violation = std::max(rep.worst_violation, v);
            if (v > rep.slack) ++rep.violations;
        }
    }
    return rep;
}

ConvexityReport convexity_check(const GridMap& u0, const GridMap& u1, const Cylinder& cyl, double p, int samples,
                                double slack) {
    if (samples < 3) throw ValidationError("convexity_check: need at least 3 samples");
    if (u0.size() != u1.size()) throw ValidationError("convexity_check: grid shape mismatch");
    ConvexityReport rep;
    std::vector<MinkVec> logs(u0.size());
    for (std::size_t k = 0; k < u0.size(); ++k) logs[k] = log_map(u0.nodes()[k], u1.nodes()[k]);
    for (int s = 0; s < samples; ++s) {
        double tau = static_cast<double>(s) / (samples - 1);
        GridMap ut = u0;
        for (std::size_t k = 0; k < u0.size(); ++k) ut.nodes()[k] = exp_map(u0.nodes()[k], tau * logs[k]);
        rep.taus.push_back(tau);
        rep.values.push_back(J_p(ut, cyl, p));
    }
    double jmax = *std::max_element(rep.values.begin(), rep.values.end());
    double jmin = *std::min_element(rep.values.begin(), rep.values.end());
    double scale = std::max(jmax, 1e-300);
    rep.flatness = (jmax - jmin) / scale;
    for (int a = 0; a < samples; ++a)
        for (int b = a + 2; b < samples; b += 2) {
            double m = ((rep.values[a] + rep.values[b]) / 2.0 - rep.values[(a + b) / 2]) / scale;
            rep.worst_margin = std::min(rep.worst_margin, m);
        }
    rep.convex = rep.worst_margin >= slack;
    return rep;
}

}  // namespace stretchlab
