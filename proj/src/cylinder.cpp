#include "stretchlab/cylinder.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>

#include "stretchlab/parallel.hpp"

namespace stretchlab {

void Cylinder::validate() const {
    if (!(std::isfinite(h) && h > 0)) throw ValidationError("geometry: h must be finite and positive");
    if (!(std::isfinite(d) && d > 0)) throw ValidationError("geometry: d must be finite and positive");
    if (!(std::isfinite(L) && L >= 1.0)) throw ValidationError("geometry: L must be finite and at least 1");
    if (Ns < 4 || Ns % 2 != 0) throw ValidationError("geometry: Ns must be even and at least 4");
    if (Nt < 4) throw ValidationError("geometry: Nt must be at least 4");
}

double Cylinder::cell_weight(int i) const { return std::cosh(s_cell(i)) * ds() * dt(); }

double Cylinder::exact_area() const { return 2.0 * d * std::sinh(h); }

HPoint target_embed(double R, double T) {
    double cr = std::cosh(R);
    return HPoint::unchecked(MinkVec(std::sinh(R), cr * std::sinh(T), cr * std::cosh(T)));
}

std::pair<double, double> target_chart(const HPoint& x) {
    const MinkVec& v = x.v();
    double R = std::asinh(v[0]);
    double T = 0.5 * std::log((v[2] + v[1]) / (v[2] - v[1]));
    return {R, T};
}

GridMap::GridMap(const Cylinder& cyl)
    : Ns_(cyl.Ns), Nt_(cyl.Nt), hol_(cyl.holonomy()), nodes_(static_cast<std::size_t>(cyl.Ns + 1) * cyl.Nt) {
    cyl.validate();
}

MinkVec GridMap::node(int i, int j) const {
    int k = (j >= 0) ? j / Nt_ : -((-j + Nt_ - 1) / Nt_);
    int jj = j - k * Nt_;
    MinkVec v = at(i, jj).v();
    if (k == 0) return v;
    Mat3 step = k > 0 ? hol_ : Mat3(sharp_transpose(hol_));
    for (int n = 0; n < std::abs(k); ++n) v = step * v;
    return v;
}

void GridMap::apply(const Mat3& g) {
    for (auto& x : nodes_) x = retract(g * x.v());
}

CellGeom cell_geometry(const GridMap& u, const Cylinder& cyl, int i, int j) {
    CellGeom c;
    c.corner[0] = u.node(i, j);
    c.corner[1] = u.node(i + 1, j);
    c.corner[2] = u.node(i, j + 1);
    c.corner[3] = u.node(i + 1, j + 1);
    c.cosh_s = std::cosh(cyl.s_cell(i));
    c.Ds = ((c.corner[1] + c.corner[3]) - (c.corner[0] + c.corner[2])) / (2.0 * cyl.ds());
    c.Dt = ((c.corner[2] + c.corner[3]) - (c.corner[0] + c.corner[1])) / (2.0 * cyl.dt() * c.cosh_s);
    c.mean = 0.25 * (c.corner[0] + c.corner[1] + c.corner[2] + c.corner[3]);
    double q = mink_inner(c.mean, c.mean);
    if (!(q < 0.0)) throw NumericalError("cell_geometry: cell corners do not average to a timelike vector");
    c.r = std::sqrt(-q);
    c.X = HPoint::unchecked(c.mean / c.r);
    return c;
}

CellField<TangentMap> discrete_differential(const GridMap& u, const Cylinder& cyl) {
    CellField<TangentMap> f(cyl.Ns, cyl.Nt);
    parallel_for(static_cast<std::size_t>(cyl.Ns) * cyl.Nt, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            int i = static_cast<int>(k / cyl.Nt), j = static_cast<int>(k % cyl.Nt);
            CellGeom c = cell_geometry(u, cyl, i, j);
            f(i, j) = TangentMap(c.X, c.Ds, c.Dt);
        }
    });
    return f;
}

double quadrature(const CellField<double>& f, const Cylinder& cyl) {
    double total = 0.0;
    for (int i = 0; i < cyl.Ns; ++i) {
        double row = 0.0;
        for (int j = 0; j < cyl.Nt; ++j) row += f(i, j);
        total += row * cyl.cell_weight(i);
    }
    return total;
}

GridMap map_from_chart(const Cylinder& cyl, const std::function<std::pair<double, double>(double, double)>& RT) {
    GridMap u(cyl);
    for (int i = 0; i <= cyl.Ns; ++i)
        for (int j = 0; j < cyl.Nt; ++j) {
            auto [R, T] = RT(cyl.s_node(i), cyl.t_node(j));
            u.set(i, j, target_embed(R, T));
        }
    return u;
}

GridMap exact_neumann(const Cylinder& cyl) {
    return map_from_chart(cyl, [&](double, double t) { return std::make_pair(0.0, cyl.L * t); });
}

GridMap perturbed_neumann(const Cylinder& cyl, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double cr[3][3], ct[3][3], phase[3];
    for (auto& row : cr)
        for (double& c : row) c = u(rng);
    for (auto& row : ct)
        for (double& c : row) c = u(rng);
    for (double& ph : phase) ph = std::numbers::pi * u(rng);
    const double w = 2.0 * std::numbers::pi / cyl.d;
    auto modes = [&](double (&c)[3][3], double s, double t) {
        double x = s / cyl.h, acc = 0.0;
        double ps[3] = {1.0, x, x * x};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) acc += c[a][b] * ps[a] * std::cos(b * w * t + phase[b]);
        return acc / 9.0;
    };
    return map_from_chart(cyl, [&](double s, double t) {
        return std::make_pair(amplitude * modes(cr, s, t), cyl.L * t + amplitude * modes(ct, s, t));
    });
}

GridMap dirichlet_initial(const Cylinder& cyl, double R0) {
    return map_from_chart(cyl, [&](double s, double t) { return std::make_pair(R0 * s / cyl.h, cyl.L * t); });
}

void write_nodes_csv(const GridMap& u, const Cylinder& cyl, const std::string& path,
                     const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out << std::setprecision(17);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "i,j,s,t,x1,x2,x3,R,T\n";
    for (int i = 0; i <= cyl.Ns; ++i)
        for (int j = 0; j < cyl.Nt; ++j) {
            const HPoint& x = u.at(i, j);
            auto [R, T] = target_chart(x);
            out << i << ',' << j << ',' << cyl.s_node(i) << ',' << cyl.t_node(j) << ',' << x[0] << ',' << x[1] << ','
                << x[2] << ',' << R << ',' << T << '\n';
        }
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

void write_cell_csv(const CellField<double>& f, const Cylinder& cyl, const std::string& path,
                    const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out << std::setprecision(17);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "i,j,s_c,t_c,value\n";
    for (int i = 0; i < cyl.Ns; ++i)
        for (int j = 0; j < cyl.Nt; ++j)
            out << i << ',' << j << ',' << cyl.s_cell(i) << ',' << cyl.t_cell(j) << ',' << f(i, j) << '\n';
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

}  // namespace stretchlab
