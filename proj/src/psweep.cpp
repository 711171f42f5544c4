#include "stretchlab/psweep.hpp"

#include <algorithm>
#include <cmath>

namespace stretchlab {

double kappa(const GridMap& u, const Cylinder& cyl, double p) {
    double J = J_p(u, cyl, p);
    if (!(J > 0.0)) throw NumericalError("kappa: J_p vanishes (constant map)");
    if (!std::isfinite(J)) throw NumericalError("kappa: J_p is not finite");
    return std::pow(J, -1.0 / p);
}

CellField<double> density_S(const GridMap& u, const Cylinder& cyl, double p, double kap) {
    CellField<TangentMap> du = discrete_differential(u, cyl);
    CellField<double> f(cyl.Ns, cyl.Nt);
    for (int i = 0; i < cyl.Ns; ++i)
        for (int j = 0; j < cyl.Nt; ++j) f(i, j) = trace_power(du(i, j) * kap, p);
    return f;
}

double concentration(const CellField<double>& density, const Cylinder& cyl, double eps) {
    double inside = 0.0, total = 0.0;
    for (int i = 0; i < cyl.Ns; ++i) {
        double row = 0.0;
        for (int j = 0; j < cyl.Nt; ++j) row += density(i, j);
        row *= cyl.cell_weight(i);
        total += row;
        if (std::abs(cyl.s_cell(i)) <= eps + 1e-12 * cyl.h) inside += row;
    }
    if (!(total > 0.0)) throw NumericalError("concentration: density has no mass");
    return inside / total;
}

namespace {

double sv1_of_gram(const Eigen::Matrix2d& g) {
    SymEig2 e = sym_eig2(g);
    return std::sqrt(std::max(e.l1, 0.0)) + std::sqrt(std::max(e.l2, 0.0));
}

}  // namespace

SweepRecord diagnose(const GridMap& u, const Cylinder& cyl, double p, const std::vector<double>& eps_list,
                     BoundaryKind bc) {
    SweepRecord rec;
    rec.p = p;
    rec.Jp = J_p(u, cyl, p);
    rec.kappa_p = kappa(u, cyl, p);
    rec.Jp_root = std::pow(rec.Jp, 1.0 / p);
    rec.el_residual = el_residual(u, cyl, p, bc);
    rec.density = density_S(u, cyl, p, rec.kappa_p);
    rec.density_integral = quadrature(rec.density, cyl);
    rec.eps = eps_list;
    for (double e : eps_list) rec.concentration.push_back(concentration(rec.density, cyl, e));

    CellField<TangentMap> du = discrete_differential(u, cyl);
    NoetherCurrent nc = noether_current(u, cyl, p, rec.kappa_p);
    rec.closedness_defect = nc.closedness_defect;
    for (int i = 0; i < cyl.Ns; ++i) {
        double rowS = 0.0, rowV = 0.0;
        for (int j = 0; j < cyl.Nt; ++j) {
            const TangentMap& d = du(i, j);
            rec.lipschitz_est = std::max(rec.lipschitz_est, singular_values(d).s1);
            TangentMap S = S_q(d * rec.kappa_p, p - 1.0);
            rowS += sv_norm(S, 1.0);
            const HPoint& X = nc.centers(i, j);
            const auto& V = nc.V(i, j);
            Eigen::Matrix2d gV, gS;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) gV(a, b) = bar_metric(X, V[a], V[b]);
            TangentMap star = TangentMap::unprojected(S.base(), -S.col(1), S.col(0));
            gS = gram(star);
            rowV += sv1_of_gram(gV);
            double scale = 2.0 * gS.trace();
            if (scale > 0) rec.sqrt2_error = std::max(rec.sqrt2_error, (gV - 2.0 * gS).cwiseAbs().maxCoeff() / scale);
        }
        rec.mass_S += rowS * cyl.cell_weight(i);
        rec.mass_V += rowV * cyl.cell_weight(i);
    }
    return rec;
}

std::vector<SweepRecord> sweep(const std::vector<double>& p_list, const Cylinder& cyl, const SweepOptions& opts,
                               std::vector<GridMap>* solutions) {
    cyl.validate();
    if (p_list.empty()) throw ValidationError("sweep: empty p list");
    for (std::size_t k = 0; k < p_list.size(); ++k) {
        if (!(p_list[k] > 2.0 && std::isfinite(p_list[k]))) throw ValidationError("sweep: every p must exceed 2");
        if (k > 0 && !(p_list[k] > p_list[k - 1])) throw ValidationError("sweep: p list must be increasing");
    }
    for (double e : opts.eps_list)
        if (!(e >= 0.0)) throw ValidationError("sweep: eps values must be non-negative");

    GridMap current = opts.solver.bc == BoundaryKind::Neumann ? perturbed_neumann(cyl, opts.init_amplitude, opts.seed)
                                                              : dirichlet_initial(cyl, opts.dirichlet_R0);
    std::vector<SweepRecord> out;
    for (double p : p_list) {
        SolverOptions so = opts.solver;
        so.p = p;
        so.initial_step = opts.solver.initial_step * 4.0 / p;
        SweepRecord rec;
        rec.p = p;
        try {
            if (p == opts.fail_at_p) throw NumericalError("injected failure");
            SolveResult res = minimize(current, cyl, so);
            rec = diagnose(res.u, cyl, p, opts.eps_list, so.bc);
            rec.iters = res.iters;
            rec.converged = res.converged;
            rec.failed = res.termination == Termination::LineSearchFailed;
            rec.message = res.message;
            current = res.u;
            if (solutions) solutions->push_back(res.u);
        } catch (const NumericalError& e) {
            rec.failed = true;
            rec.converged = false;
            rec.message = e.what();
            if (solutions) solutions->push_back(current);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

PrimitiveSample primitive_vq(const NoetherCurrent& nc, const GridMap& u, const Cylinder& cyl, int column) {
    const int Ns = cyl.Ns, Nt = cyl.Nt;
    if (column < 0 || column >= Nt) throw ValidationError("primitive_vq: column out of range");
    const Mat3 H = u.holonomy(), Hinv = sharp_transpose(H);
    auto V = [&](int a, int b, int comp) -> SkewMap {
        int k = 0;
        while (b >= Nt) { b -= Nt; ++k; }
        while (b < 0) { b += Nt; --k; }
        SkewMap v = nc.V(a, b)[comp];
        for (; k > 0; --k) v = SkewMap::raw(H * v.m() * Hinv);
        for (; k < 0; ++k) v = SkewMap::raw(Hinv * v.m() * H);
        return v;
    };
    const double ds = cyl.ds(), dt = cyl.dt();
    auto step_s = [&](int a, int b) { return (V(a, b, 0) + V(a + 1, b, 0)) * (0.5 * ds); };  // c(a,b) -> c(a+1,b)
    auto step_t = [&](int a, int b) {                                                          // c(a,b) -> c(a,b+1)
        return (V(a, b, 1) + V(a, b + 1, 1)) * (0.5 * dt * std::cosh(cyl.s_cell(a)));
    };
    const int a0 = Ns / 2;
    const HPoint& Xa = nc.centers(a0, column);
    auto norm = [&](const SkewMap& m) { return std::sqrt(std::max(bar_metric(Xa, m, m), 0.0)); };

    PrimitiveSample ps;
    std::vector<SkewMap> v(Ns);
    v[a0] = SkewMap();
    for (int a = a0; a + 1 < Ns; ++a) v[a + 1] = v[a] + step_s(a, column);
    for (int a = a0; a > 0; --a) v[a - 1] = v[a] - step_s(a - 1, column);
    for (int a = 0; a < Ns; ++a) {
        ps.s.push_back(cyl.s_cell(a));
        ps.v.push_back(v[a]);
        if (a + 1 < Ns) ps.total_variation += norm(step_s(a, column));
    }

    for (int i = 1; i < Ns; ++i)
        for (int j = 0; j < Nt; ++j)
            ps.max_loop_defect = std::max(ps.max_loop_defect, nc.loop(i, j) * ds * dt * std::cosh(cyl.s_node(i)));

    int ta = Ns - 1, tb = column + Nt / 2;
    SkewMap pa, pb;
    for (int a = a0; a < ta; ++a) pa += step_s(a, column);
    for (int b = column; b < tb; ++b) pa += step_t(ta, b);
    for (int b = column; b < tb; ++b) pb += step_t(a0, b);
    for (int a = a0; a < ta; ++a) pb += step_s(a, tb);
    ps.path_defect = norm(pa - pb);

    for (int a = 0; a < Ns; ++a) {
        SkewMap loop;
        for (int b = column; b < column + Nt; ++b) loop += step_t(a, b);
        ps.t_variation = std::max(ps.t_variation, norm(loop));
    }
    return ps;
}

}  // namespace stretchlab
