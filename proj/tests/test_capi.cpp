#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "stretchlab/errors.hpp"
#include "stretchlab/stretchlab.h"

using json = nlohmann::json;

namespace {

json take_json(char* s) {
    json j = json::parse(s);
    sl_string_free(s);
    return j;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(sl_version()) == STRETCHLAB_VERSION);
    CHECK(std::string(sl_status_name(SL_OK)) == "ok");
    CHECK(std::string(sl_status_name(SL_ERR_NO_BRACKET)) == "no bracket");
    sl_string_free(nullptr);
}

TEST_CASE("cylinder validation goes through status codes") {
    sl_cylinder* c = nullptr;
    CHECK(sl_cylinder_create(0.5, 1.0, 1.5, 2, 64, &c) == SL_ERR_INVALID_ARGUMENT);
    CHECK(c == nullptr);
    CHECK(std::strlen(sl_last_error()) > 0);
    CHECK(sl_cylinder_create(0.5, 1.0, 1.5, 8, 16, nullptr) == SL_ERR_INVALID_ARGUMENT);
    REQUIRE(sl_cylinder_create(0.5, 1.0, 1.5, 8, 16, &c) == SL_OK);
    CHECK(std::string(sl_last_error()).empty());
    double area = 0.0;
    CHECK(sl_cylinder_exact_area(c, &area) == SL_OK);
    CHECK(area == doctest::Approx(2.0 * std::sinh(0.5)));
    sl_cylinder_destroy(c);
    CHECK(sl_set_threads(0) == SL_ERR_INVALID_ARGUMENT);
    CHECK(sl_set_threads(2) == SL_OK);
    CHECK(sl_get_threads() == 2);
    CHECK(sl_set_threads(1) == SL_OK);
}

TEST_CASE("grid maps, energy and gradient") {
    sl_cylinder* c = nullptr;
    REQUIRE(sl_cylinder_create(0.5, 1.0, 1.5, 8, 16, &c) == SL_OK);
    sl_gridmap* u = nullptr;
    REQUIRE(sl_gridmap_exact_neumann(c, &u) == SL_OK);
    double xyz[3];
    CHECK(sl_gridmap_node(u, 0, 0, xyz) == SL_OK);
    CHECK(xyz[2] == doctest::Approx(1.0));
    CHECK(sl_gridmap_node(u, 9, 0, xyz) == SL_ERR_INVALID_ARGUMENT);
    double bad[3] = {0.0, 0.0, 2.0};
    CHECK(sl_gridmap_set_node(u, 1, 1, bad) == SL_ERR_INVALID_ARGUMENT);
    double J = 0.0, el = 1.0;
    CHECK(sl_jp(u, c, 8.0, &J) == SL_OK);
    CHECK(J > 19.0);
    CHECK(sl_el_residual(u, c, 8.0, SL_NEUMANN, &el) == SL_OK);
    CHECK(el < 1e-12);
    std::vector<double> g(3 * 9 * 16);
    CHECK(sl_jp_gradient(u, c, 8.0, g.data(), g.size()) == SL_OK);
    CHECK(sl_jp_gradient(u, c, 8.0, g.data(), g.size() - 1) == SL_ERR_INVALID_ARGUMENT);

    sl_cylinder* other = nullptr;
    REQUIRE(sl_cylinder_create(0.5, 1.0, 1.5, 8, 8, &other) == SL_OK);
    CHECK(sl_jp(u, other, 8.0, &J) == SL_ERR_INVALID_ARGUMENT);
    sl_cylinder_destroy(other);
    CHECK(sl_gridmap_write_csv(u, c, "/nonexistent-dir/x.csv", nullptr) == SL_ERR_IO);

    char* diag = nullptr;
    double eps[] = {0.1};
    REQUIRE(sl_diagnose_json(u, c, 8.0, SL_NEUMANN, eps, 1, &diag) == SL_OK);
    json d = take_json(diag);
    CHECK(d["kappa_times_Jp_root"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d["concentration"].size() == 1);
    sl_gridmap_destroy(u);
    sl_cylinder_destroy(c);
}

TEST_CASE("solve returns partial results on non-convergence") {
    sl_cylinder* c = nullptr;
    REQUIRE(sl_cylinder_create(0.5, 1.0, 1.5, 8, 16, &c) == SL_OK);
    sl_gridmap* init = nullptr;
    REQUIRE(sl_gridmap_perturbed_neumann(c, 0.05, 1, &init) == SL_OK);
    sl_solver_options o;
    sl_solver_options_default(&o);
    CHECK(o.p == 8.0);
    sl_gridmap* out = nullptr;
    sl_solve_summary sum{};
    REQUIRE(sl_solve(c, init, &o, &out, &sum) == SL_OK);
    CHECK(sum.converged == 1);
    CHECK(sum.termination == SL_CONVERGED);
    double supR = 1.0;
    CHECK(sl_gridmap_sup_R(out, &supR) == SL_OK);
    CHECK(supR < 1e-3);
    sl_gridmap_destroy(out);

    o.max_iters = 2;
    out = nullptr;
    CHECK(sl_solve(c, init, &o, &out, &sum) == SL_ERR_NUMERICAL);
    CHECK(out != nullptr);
    CHECK(sum.termination == SL_MAX_ITERS);
    CHECK(sum.iters == 2);
    sl_gridmap_destroy(out);

    o.p = 1.5;
    out = nullptr;
    CHECK(sl_solve(c, init, &o, &out, &sum) == SL_ERR_INVALID_ARGUMENT);
    CHECK(out == nullptr);
    sl_gridmap_destroy(init);
    sl_cylinder_destroy(c);
}

TEST_CASE("sweep reports failures but keeps records") {
    sl_cylinder* c = nullptr;
    REQUIRE(sl_cylinder_create(0.5, 1.0, 1.5, 8, 16, &c) == SL_OK);
    sl_sweep_options o;
    sl_sweep_options_default(&o);
    o.fail_at_p = 8.0;
    double ps[] = {4.0, 8.0, 16.0};
    char* out = nullptr;
    CHECK(sl_sweep_json(c, ps, 3, &o, nullptr, nullptr, &out) == SL_ERR_NUMERICAL);
    REQUIRE(out != nullptr);
    json j = take_json(out);
    REQUIRE(j.size() == 3);
    CHECK(j[1]["failed"].get<bool>());
    CHECK_FALSE(j[2]["failed"].get<bool>());
    sl_cylinder_destroy(c);
}

TEST_CASE("suites, profiles and the ideal map") {
    double ps[] = {4.0, 6.0};
    char* s = nullptr;
    REQUIRE(sl_svcheck_json(200, ps, 2, 7, &s) == SL_OK);
    json sv = take_json(s);
    CHECK(sv["all_pass"].get<bool>());
    CHECK(sv["pointwise"].contains("flux_transport_normal"));
    CHECK(sl_svcheck_json(0, ps, 2, 7, &s) == SL_ERR_INVALID_ARGUMENT);

    sl_profile* prof = nullptr;
    REQUIRE(sl_profile_shoot(8.0, 1.5, 0.5, 0.3, &prof) == SL_OK);
    CHECK(sl_profile_size(prof) == 2001);
    double sv0 = 0, R = 0, Rp = 0;
    int region = -1;
    CHECK(sl_profile_sample(prof, 2000, &sv0, &R, &Rp, &region) == SL_OK);
    CHECK(sv0 == doctest::Approx(0.5));
    CHECK(R == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(sl_profile_sample(prof, 2001, &sv0, &R, &Rp, &region) == SL_ERR_INVALID_ARGUMENT);
    char* pj = nullptr;
    REQUIRE(sl_profile_json(prof, 50, 3, &pj) == SL_OK);
    json pjs = take_json(pj);
    CHECK(pjs["monotonicity"]["pass"].get<bool>());
    sl_profile_destroy(prof);

    double s_star = 0.0;
    CHECK(sl_limit_s_star(1.5, 0.5, 2.0, &s_star) == SL_ERR_NO_BRACKET);
    CHECK(std::string(sl_last_error()).find("attainable") != std::string::npos);

    char* im = nullptr;
    REQUIRE(sl_ideal_map_json(0.02, 0.4, 1.5, 1.2, -1.0, 10000, nullptr, nullptr, &im) == SL_OK);
    json ij = take_json(im);
    CHECK(ij["pass"].get<bool>());
    CHECK(ij["k"].get<double>() == doctest::Approx(1.1));
    CHECK(sl_ideal_map_json(0.1, 0.4, 1.5, 1.2, -1.0, 100, nullptr, nullptr, &im) == SL_ERR_INVALID_ARGUMENT);
}
