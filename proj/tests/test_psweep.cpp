#include <doctest.h>

#include <cmath>

#include "stretchlab/errors.hpp"
#include "stretchlab/psweep.hpp"

using namespace stretchlab;

namespace {

// adaptive-quadrature values for L = 1.5, h = 0.5, d = 1
double kappa_oracle(double p) {
    if (p == 4) return 0.686337007163152;
    if (p == 8) return 0.688232745598682;
    if (p == 16) return 0.687066267041712;
    if (p == 32) return 0.683474954836191;
    return 0.678741032714289;
}
double conc_oracle(double p) {
    if (p == 4) return 0.223552597136;
    if (p == 8) return 0.255037791472;
    if (p == 16) return 0.316030781658;
    if (p == 32) return 0.421808470581;
    return 0.570490580298;
}

}  // namespace

TEST_CASE("normalization of the exact Neumann family") {
    Cylinder cyl{0.5, 1.0, 1.5, 40, 40};
    GridMap u = exact_neumann(cyl);
    double prev_conc = 0.0;
    for (double p : {4.0, 8.0, 16.0, 32.0, 64.0}) {
        double k = kappa(u, cyl, p);
        CHECK(k == doctest::Approx(kappa_oracle(p)).epsilon(2e-3));
        CHECK(k * std::pow(J_p(u, cyl, p), 1.0 / p) == doctest::Approx(1.0).epsilon(1e-14));
        CellField<double> f = density_S(u, cyl, p, k);
        CHECK(std::abs(quadrature(f, cyl) - 1.0) < 1e-8);
        double c = concentration(f, cyl, 0.1);
        CHECK(c == doctest::Approx(conc_oracle(p)).epsilon(0.02));
        CHECK(c >= prev_conc);
        prev_conc = c;
        // density proportional to (kappa L / cosh s)^p cosh s, peaked at the core
        CHECK(f(cyl.Ns / 2, 0) > f(0, 0));
    }
    CHECK(std::abs(kappa(u, cyl, 64.0) - 1.0 / 1.5) < std::abs(kappa(u, cyl, 32.0) - 1.0 / 1.5));
}

TEST_CASE("diagnostics of the exact family") {
    Cylinder cyl{0.5, 1.0, 1.5, 16, 32};
    GridMap u = exact_neumann(cyl);
    double prev_mean = 0.0;
    for (double p : {4.0, 8.0, 16.0, 32.0, 64.0}) {
        SweepRecord r = diagnose(u, cyl, p, {0.05, 0.1, 0.2}, BoundaryKind::Neumann);
        CHECK(r.sqrt2_error < 1e-12);
        // Hoelder: the mass of S is at most area^(1/p), which tends to one
        CHECK(r.mass_S <= std::pow(cyl.exact_area(), 1.0 / p) * (1 + 1e-8));
        CHECK(r.density_integral == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.mass_V <= 2.0 + 1e-8);
        CHECK(r.mass_V == doctest::Approx(std::sqrt(2.0) * r.mass_S).epsilon(1e-10));
        CHECK(r.lipschitz_est <= 1.5 * (1 + 1e-3));
        CHECK(r.closedness_defect < 1e-9);
        CHECK(r.concentration.size() == 3);
        CHECK(r.concentration[0] <= r.concentration[1]);
        CHECK(r.concentration[1] <= r.concentration[2]);
        // power mean of the stretch increases toward L
        double mean = std::pow(r.Jp / (2.0 * cyl.exact_area()), 1.0 / p);
        CHECK(mean > prev_mean);
        CHECK(mean < 1.5);
        prev_mean = mean;
    }
    SweepRecord r64 = diagnose(u, cyl, 64.0, {0.1}, BoundaryKind::Neumann);
    CHECK(std::abs(r64.Jp_root - 1.5) < 0.1 * 1.5);
}

TEST_CASE("primitive of the Noether current") {
    Cylinder cyl{0.5, 1.0, 1.5, 16, 32};
    GridMap u = exact_neumann(cyl);
    double k = kappa(u, cyl, 8.0);
    NoetherCurrent nc = noether_current(u, cyl, 8.0, k);
    PrimitiveSample ps = primitive_vq(nc, u, cyl);
    CHECK(ps.s.size() == static_cast<std::size_t>(cyl.Ns));
    CHECK(ps.v[cyl.Ns / 2].m().norm() == 0.0);
    CHECK(ps.t_variation < 1e-10);
    CHECK(ps.path_defect < 1e-10);
    CHECK(ps.max_loop_defect < 1e-10);
    CHECK(ps.total_variation > 0.1);
    CHECK(ps.total_variation <= 2.0);
    CHECK_THROWS_AS(primitive_vq(nc, u, cyl, cyl.Nt), ValidationError);
}

TEST_CASE("sweep with an injected failure keeps the other records") {
    Cylinder cyl{0.5, 1.0, 1.5, 8, 16};
    SweepOptions o;
    o.fail_at_p = 8.0;
    std::vector<GridMap> sols;
    auto recs = sweep({4.0, 8.0, 16.0}, cyl, o, &sols);
    REQUIRE(recs.size() == 3);
    CHECK(sols.size() == 3);
    CHECK_FALSE(recs[0].failed);
    CHECK(recs[0].converged);
    CHECK(recs[1].failed);
    CHECK(recs[1].message == "injected failure");
    CHECK_FALSE(recs[2].failed);
    CHECK(recs[2].converged);
    CHECK(std::abs(recs[2].density_integral - 1.0) < 1e-8);

    CHECK_THROWS_AS(sweep({8.0, 4.0}, cyl, SweepOptions{}), ValidationError);
    CHECK_THROWS_AS(sweep({2.0}, cyl, SweepOptions{}), ValidationError);
    CHECK_THROWS_AS(sweep({}, cyl, SweepOptions{}), ValidationError);
}
