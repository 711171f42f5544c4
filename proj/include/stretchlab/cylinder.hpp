#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "stretchlab/errors.hpp"
#include "stretchlab/minkowski.hpp"
#include "stretchlab/svnorm.hpp"

namespace stretchlab {

// Collar |s| <= h around a closed geodesic of length d, metric ds^2 + cosh^2(s) dt^2,
// mapped with stretch L along the core onto a target geodesic of length L d.
struct Cylinder {
    double h = 0.5;
    double d = 1.0;
    double L = 1.5;
    int Ns = 32;
    int Nt = 64;

    void validate() const;

    double ds() const { return 2.0 * h / Ns; }
    double dt() const { return d / Nt; }
    double s_node(int i) const { return -h + i * ds(); }
    double s_cell(int i) const { return -h + (i + 0.5) * ds(); }
    double t_node(int j) const { return j * dt(); }
    double t_cell(int j) const { return (j + 0.5) * dt(); }
    double cell_weight(int i) const;
    // Target translation by L d along the core geodesic.
    Mat3 holonomy() const { return boost(L * d); }
    double exact_area() const;
};

// (sinh R, cosh R sinh T, cosh R cosh T): Fermi coordinates around the geodesic x1 = 0.
HPoint target_embed(double R, double T);
std::pair<double, double> target_chart(const HPoint& x);

class GridMap {
public:
    GridMap() = default;
    explicit GridMap(const Cylinder& cyl);

    int Ns() const { return Ns_; }
    int Nt() const { return Nt_; }
    const Mat3& holonomy() const { return hol_; }

    // Stored node on the fundamental domain, 0 <= j < Nt.
    const HPoint& at(int i, int j) const { return nodes_[index(i, j)]; }
    void set(int i, int j, const HPoint& x) { nodes_[index(i, j)] = x; }
    // Any column index; columns outside [0, Nt) are images under powers of the holonomy.
    MinkVec node(int i, int j) const;

    std::size_t size() const { return nodes_.size(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * Nt_ + j; }
    const std::vector<HPoint>& nodes() const { return nodes_; }
    std::vector<HPoint>& nodes() { return nodes_; }

    // Applies an isometry commuting with the holonomy to every node.
    void apply(const Mat3& g);

private:
    int Ns_ = 0;
    int Nt_ = 0;
    Mat3 hol_ = Mat3::Identity();
    std::vector<HPoint> nodes_;
};

template <class T>
class CellField {
public:
    CellField() = default;
    CellField(int Ns, int Nt, const T& init = T()) : Ns_(Ns), Nt_(Nt), data_(static_cast<std::size_t>(Ns) * Nt, init) {}
    int Ns() const { return Ns_; }
    int Nt() const { return Nt_; }
    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * Nt_ + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * Nt_ + j]; }
    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

private:
    int Ns_ = 0;
    int Nt_ = 0;
    std::vector<T> data_;
};

// Bilinear-stencil geometry of one cell.
struct CellGeom {
    MinkVec corner[4];  // (i,j), (i+1,j), (i,j+1), (i+1,j+1)
    MinkVec Ds, Dt;     // unprojected frame differences
    MinkVec mean;
    double r = 1.0;     // sqrt(-(mean, mean))
    HPoint X;           // retracted cell centre
    double cosh_s = 1.0;
};

CellGeom cell_geometry(const GridMap& u, const Cylinder& cyl, int i, int j);

CellField<TangentMap> discrete_differential(const GridMap& u, const Cylinder& cyl);
double quadrature(const CellField<double>& f, const Cylinder& cyl);

GridMap map_from_chart(const Cylinder& cyl, const std::function<std::pair<double, double>(double, double)>& RT);
// target_embed(0, L t): the separated-variable Neumann minimizer.
GridMap exact_neumann(const Cylinder& cyl);
// Low-mode random perturbation of exact_neumann in both chart coordinates.
GridMap perturbed_neumann(const Cylinder& cyl, double amplitude, std::uint64_t seed);
// R = R0 s / h, T = L t; boundary rows carry the Dirichlet data R(+-h) = +-R0.
GridMap dirichlet_initial(const Cylinder& cyl, double R0);

void write_nodes_csv(const GridMap& u, const Cylinder& cyl, const std::string& path,
                     const std::string& header_comment = "");
void write_cell_csv(const CellField<double>& f, const Cylinder& cyl, const std::string& path,
                    const std::string& header_comment = "");

}  // namespace stretchlab
