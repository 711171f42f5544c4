#include <cmath>

#include "stretchlab/jp_solver.hpp"
#include "stretchlab/parallel.hpp"

namespace stretchlab {

namespace {

struct CellEval {
    double e = 0.0;
    MinkVec g[4];
};

CellEval eval_cell(const GridMap& u, const Cylinder& cyl, int i, int j, double p, bool want_grad) {
    CellEval out;
    CellGeom c = cell_geometry(u, cyl, i, j);
    const MinkVec& X = c.X.v();
    double as = mink_inner(c.Ds, X), at = mink_inner(c.Dt, X);
    MinkVec cs = c.Ds + as * X, ct = c.Dt + at * X;
    Eigen::Matrix2d G;
    G(0, 0) = mink_inner(cs, cs);
    G(1, 1) = mink_inner(ct, ct);
    G(0, 1) = G(1, 0) = mink_inner(cs, ct);
    SymEig2 eg = sym_eig2(G);
    double l1 = std::max(eg.l1, 0.0), l2 = std::max(eg.l2, 0.0);
    double w = cyl.ds() * cyl.dt() * c.cosh_s;
    out.e = w * (std::pow(l1, 0.5 * p) + std::pow(l2, 0.5 * p));
    if (!want_grad) return out;

    Eigen::Matrix2d M = (0.5 * p) * sym_pow(G, 0.5 * p - 1.0);
    MinkVec gDs = 2.0 * (M(0, 0) * cs + M(0, 1) * ct);
    MinkVec gDt = 2.0 * (M(1, 0) * cs + M(1, 1) * ct);
    MinkVec gX = 2.0 * ((M(0, 0) * as + M(0, 1) * at) * c.Ds + (M(1, 0) * as + M(1, 1) * at) * c.Dt);
    MinkVec gm = (gX + mink_inner(gX, X) * X) / c.r;

    double ks = 1.0 / (2.0 * cyl.ds()), kt = 1.0 / (2.0 * cyl.dt() * c.cosh_s);
    const double sgn_s[4] = {-1, 1, -1, 1};
    const double sgn_t[4] = {-1, -1, 1, 1};
    for (int k = 0; k < 4; ++k) out.g[k] = w * (sgn_s[k] * ks * gDs + sgn_t[k] * kt * gDt + 0.25 * gm);
    return out;
}

}  // namespace

double J_p(const GridMap& u, const Cylinder& cyl, double p) {
    std::size_t n = static_cast<std::size_t>(cyl.Ns) * cyl.Nt;
    std::vector<double> e(n);
    parallel_for(n, [&](std::size_t b, std::size_t end) {
        for (std::size_t k = b; k < end; ++k)
            e[k] = eval_cell(u, cyl, static_cast<int>(k / cyl.Nt), static_cast<int>(k % cyl.Nt), p, false).e;
    });
    double total = 0.0;
    for (double x : e) total += x;
    return total;
}

EnergyGradient J_p_with_gradient(const GridMap& u, const Cylinder& cyl, double p) {
    std::size_t n = static_cast<std::size_t>(cyl.Ns) * cyl.Nt;
    std::vector<CellEval> cells(n);
    parallel_for(n, [&](std::size_t b, std::size_t end) {
        for (std::size_t k = b; k < end; ++k)
            cells[k] = eval_cell(u, cyl, static_cast<int>(k / cyl.Nt), static_cast<int>(k % cyl.Nt), p, true);
    });
    EnergyGradient out;
    out.grad.assign(u.size(), MinkVec::Zero());
    Mat3 hol_sharp = sharp_transpose(u.holonomy());
    for (int i = 0; i < cyl.Ns; ++i)
        for (int j = 0; j < cyl.Nt; ++j) {
            const CellEval& c = cells[static_cast<std::size_t>(i) * cyl.Nt + j];
            out.J += c.e;
            out.grad[u.index(i, j)] += c.g[0];
            out.grad[u.index(i + 1, j)] += c.g[1];
            if (j + 1 < cyl.Nt) {
                out.grad[u.index(i, j + 1)] += c.g[2];
                out.grad[u.index(i + 1, j + 1)] += c.g[3];
            } else {
                out.grad[u.index(i, 0)] += hol_sharp * c.g[2];
                out.grad[u.index(i + 1, 0)] += hol_sharp * c.g[3];
            }
        }
    for (std::size_t k = 0; k < out.grad.size(); ++k) out.grad[k] = tangent_project(u.nodes()[k], out.grad[k]);
    return out;
}

std::vector<MinkVec> grad_Jp(const GridMap& u, const Cylinder& cyl, double p) {
    return J_p_with_gradient(u, cyl, p).grad;
}

std::vector<double> nodal_weights(const Cylinder& cyl) {
    std::vector<double> w(static_cast<std::size_t>(cyl.Ns + 1) * cyl.Nt, 0.0);
    for (int i = 0; i < cyl.Ns; ++i) {
        double q = 0.25 * cyl.cell_weight(i);
        for (int j = 0; j < cyl.Nt; ++j) {
            int jn = (j + 1) % cyl.Nt;
            w[static_cast<std::size_t>(i) * cyl.Nt + j] += q;
            w[static_cast<std::size_t>(i + 1) * cyl.Nt + j] += q;
            w[static_cast<std::size_t>(i) * cyl.Nt + jn] += q;
            w[static_cast<std::size_t>(i + 1) * cyl.Nt + jn] += q;
        }
    }
    return w;
}

double el_residual(const EnergyGradient& eg, const Cylinder& cyl, double p, BoundaryKind bc) {
    if (eg.J <= 0.0) return 0.0;
    std::vector<double> w = nodal_weights(cyl);
    int i0 = bc == BoundaryKind::Dirichlet ? 1 : 0;
    int i1 = bc == BoundaryKind::Dirichlet ? cyl.Ns - 1 : cyl.Ns;
    double num = 0.0, den = 0.0, area = 0.0;
    for (double x : w) area += x;
    for (int i = i0; i <= i1; ++i)
        for (int j = 0; j < cyl.Nt; ++j) {
            std::size_t k = static_cast<std::size_t>(i) * cyl.Nt + j;
            num += mink_inner(eg.grad[k], eg.grad[k]) / w[k];
            den += w[k];
        }
    double rms = std::sqrt(std::max(num, 0.0) / den);
    return rms / (p * std::pow(eg.J / area, (p - 1.0) / p));
}

double el_residual(const GridMap& u, const Cylinder& cyl, double p, BoundaryKind bc) {
    return el_residual(J_p_with_gradient(u, cyl, p), cyl, p, bc);
}

void gauge_fix(GridMap& u, const Cylinder& cyl) {
    auto [R, T] = target_chart(u.at(cyl.Ns / 2, 0));
    (void)R;
    u.apply(boost(-T));
}

double sup_R(const GridMap& u) {
    double m = 0.0;
    for (const auto& x : u.nodes()) m = std::max(m, std::abs(target_chart(x).first));
    return m;
}

}  // namespace stretchlab
