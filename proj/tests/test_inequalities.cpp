#include <doctest.h>

#include <cmath>

#include "stretchlab/errors.hpp"
#include "stretchlab/inequalities.hpp"

using namespace stretchlab;

TEST_CASE("check outcome bookkeeping") {
    CheckOutcome c;
    c.name = "x";
    c.record(0.5, {1.0});
    c.record(-1e-13, {2.0});
    CHECK(c.violations == 0);
    c.record(-1e-3, {3.0});
    c.record(std::nan(""), {4.0});
    CHECK(c.count == 4);
    CHECK(c.violations == 2);
    CHECK(c.worst_margin == -kInf);
    CHECK(c.argmin_instance == std::vector<double>{4.0});
    CHECK_FALSE(c.pass());
    c.asserted = false;
    CHECK(c.pass());
    CHECK(relative_margin(1.0, 2.0) == doctest::Approx(0.5));
    CHECK(relative_margin(0.0, 0.0) == 0.0);
}

TEST_CASE("random generators stay in range") {
    Rng rng(1);
    for (int k = 0; k < 2000; ++k) {
        HPoint x = random_hpoint(rng, 2.0);
        CHECK(std::abs(mink_inner(x.v(), x.v()) + 1.0) < 1e-12 * x.v().squaredNorm());
        HPoint y = random_nearby(rng, x);
        CHECK(delta(x.v(), y.v()) < 0.1);
        TangentMap a = random_tangent_map(rng, x);
        CHECK(std::abs(mink_inner(a.col(0), x.v())) < 1e-9 * (1 + a.col(0).norm()) * x.v().norm());
    }
}

TEST_CASE("scalar lemmas have the expected equality cases") {
    for (double p : {4.0, 6.0, 10.0}) {
        for (const auto& m : check_scalar_lemmas(0.7, 0.7, 0.7, p)) CHECK(m.margin >= -1e-12);
        for (const auto& m : check_scalar_lemmas(0.2, 0.9, 1.3, p)) CHECK(m.margin >= -1e-12);
    }
}

TEST_CASE("property suite") {
    SuiteReport r = svnorm_property_suite(1000, {4, 6, 10}, 3);
    CHECK(r.all_pass());
    for (const char* n : {"holder_product", "holder_trace", "p_monotone", "p_limit", "norm_equivalence", "triangle",
                          "convexity_subgradient", "spectral_power"}) {
        const CheckOutcome* c = r.find(n);
        REQUIRE(c != nullptr);
        CHECK(c->count == 3000);
        CHECK(c->worst_margin >= -1e-12);
    }
}

TEST_CASE("pointwise suite") {
    SuiteReport r = pointwise_suite(1000, {4, 6, 10}, 3);
    CHECK(r.all_pass());
    int asserted = 0;
    for (const auto& c : r.checks) {
        if (!c.asserted) continue;
        ++asserted;
        CHECK(c.violations == 0);
    }
    CHECK(asserted >= 7);
    // the diagnostic non-negativity claim does fail on random data
    const CheckOutcome* diag = r.find("gram_power_nonnegative");
    REQUIRE(diag != nullptr);
    CHECK_FALSE(diag->asserted);
    CHECK(diag->violations > 0);
}

TEST_CASE("suites are reproducible") {
    SuiteReport a = pointwise_suite(200, {6}, 42), b = pointwise_suite(200, {6}, 42);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t k = 0; k < a.checks.size(); ++k) {
        CHECK(a.checks[k].worst_margin == b.checks[k].worst_margin);
        CHECK(a.checks[k].argmin_instance == b.checks[k].argmin_instance);
    }
}
