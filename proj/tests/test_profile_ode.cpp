#include <doctest.h>

#include <cmath>
#include <vector>

#include "stretchlab/errors.hpp"
#include "stretchlab/profile_ode.hpp"

using namespace stretchlab;

namespace {

// Direct minimization of the discrete reduced profile energy on K intervals with R(0) = 0, R(h) = R0:
// damped Newton on the convex midpoint discretization, tridiagonal solves.
std::vector<double> direct_minimizer(double p, double L, double h, double R0, int K) {
    const double ds = h / K;
    std::vector<double> R(K + 1);
    for (int k = 0; k <= K; ++k) R[k] = R0 * k / K;
    auto energy = [&](const std::vector<double>& r) {
        double e = 0.0;
        for (int k = 0; k < K; ++k) {
            double m = (k + 0.5) * ds, x = (r[k + 1] - r[k]) / ds, c = std::cosh(0.5 * (r[k] + r[k + 1]));
            e += ds * std::cosh(m) * (std::pow(std::abs(x), p) + std::pow(L * c / std::cosh(m), p));
        }
        return e;
    };
    for (int it = 0; it < 200; ++it) {
        std::vector<double> g(K + 1, 0.0), a(K + 1, 0.0), b(K + 1, 0.0), c(K + 1, 0.0);
        for (int k = 0; k < K; ++k) {
            double m = (k + 0.5) * ds, w = ds * std::cosh(m), x = (R[k + 1] - R[k]) / ds;
            double y = 0.5 * (R[k] + R[k + 1]), A = std::pow(L / std::cosh(m), p);
            double d1 = p * std::pow(std::abs(x), p - 1) * (x < 0 ? -1 : 1) / ds;
            double d2 = p * (p - 1) * std::pow(std::abs(x), p - 2) / (ds * ds);
            double v1 = 0.5 * A * p * std::pow(std::cosh(y), p - 1) * std::sinh(y);
            double v2 = 0.25 * A * p * std::pow(std::cosh(y), p - 2) * ((p - 1) * std::sinh(y) * std::sinh(y) + std::cosh(y) * std::cosh(y));
            g[k] += w * (-d1 + v1);
            g[k + 1] += w * (d1 + v1);
            b[k] += w * (d2 + v2);
            b[k + 1] += w * (d2 + v2);
            c[k] += w * (-d2 + v2);      // coupling (k, k+1)
            a[k + 1] += w * (-d2 + v2);  // coupling (k+1, k)
        }
        double gn = 0.0;
        for (int k = 1; k < K; ++k) gn = std::max(gn, std::abs(g[k]));
        if (gn < 1e-12) break;
        // Thomas algorithm on the interior unknowns
        std::vector<double> cp(K + 1, 0.0), dp(K + 1, 0.0), step(K + 1, 0.0);
        for (int k = 1; k < K; ++k) {
            double lo = k > 1 ? a[k] : 0.0, up = k < K - 1 ? c[k] : 0.0;
            double den = b[k] - lo * cp[k - 1];
            cp[k] = up / den;
            dp[k] = (-g[k] - lo * dp[k - 1]) / den;
        }
        for (int k = K - 1; k >= 1; --k) step[k] = dp[k] - cp[k] * (k < K - 1 ? step[k + 1] : 0.0);
        double e0 = energy(R), t = 1.0;
        std::vector<double> trial(R);
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            for (int k = 1; k < K; ++k) trial[k] = R[k] + t * step[k];
            if (energy(trial) <= e0) break;
        }
        R = trial;
    }
    return R;
}

}  // namespace

TEST_CASE("reduced profile energy") {
    const double p = 8.0, L = 1.5, h = 0.5;
    Profile zero;
    for (int k = 0; k <= 2000; ++k) {
        zero.s.push_back(h * k / 2000);
        zero.R.push_back(0.0);
        zero.Rp.push_back(0.0);
    }
    // half of the adaptive-quadrature value d * integral over [-h, h]
    CHECK(label_A_energy(zero, p, L, h) == doctest::Approx(9.93315807593286).epsilon(1e-10));

    // R(s) = s with L = 1: the integrand is (1 + 1) cosh s
    Profile diag;
    for (int k = 0; k <= 100; ++k) {
        diag.s.push_back(h * k / 100);
        diag.R.push_back(h * k / 100);
        diag.Rp.push_back(1.0);
    }
    CHECK(label_A_energy(diag, p, 1.0, h) == doctest::Approx(2.0 * std::sinh(h)).epsilon(1e-10));
    CHECK(label_A_integrand(0.2, 0.0, 0.0, p, L) == doctest::Approx(std::pow(L / std::cosh(0.2), p) * std::cosh(0.2)));
}

TEST_CASE("ODE right-hand side") {
    // with R = 0 only the damping term remains
    CHECK(ode_rhs(0.2, 0.0, 0.3, 8.0, 1.5) == doctest::Approx(-std::tanh(0.2) * 0.3 / 7.0));
    CHECK(ode_rhs(0.0, 0.01, 0.3, 8.0, 1.5) > 0.0);
    CHECK(ode_rhs(0.0, -0.01, -0.3, 8.0, 1.5) < 0.0);
    CHECK_THROWS_AS(ode_rhs(0.2, 0.1, 0.0, 8.0, 1.5), NumericalError);
}

TEST_CASE("IVP in the sigma variable") {
    Profile triv = solve_ivp_sigma(8.0, 1.5, 0.0, 0.5);
    for (double r : triv.R) CHECK(r == 0.0);
    CHECK_THROWS_AS(solve_ivp_sigma(8.0, 1.5, -0.1, 0.5), ValidationError);

    Profile prof = solve_ivp_sigma(8.0, 1.5, 0.1, 0.5);
    CHECK(prof.R.front() == 0.0);
    CHECK(prof.refinement_change < 1e-8);
    MonotonicityReport m = check_profile_monotonicity(prof, 100, 5);
    CHECK(m.pairs == 100);
    CHECK(m.pass());
    CHECK(m.step4_margin >= -1e-10);
    CHECK(m.step5_margin >= -1e-10);
    CHECK(prof.eval(-0.3) == doctest::Approx(-prof.eval(0.3)));

    // residual of the second-order equation at interior samples
    for (int k = 200; k < prof.K(); k += 200) {
        double s = prof.s[k], ds = prof.s[1] - prof.s[0];
        double flux_p = std::cosh(s + ds) * std::pow(prof.Rp[k + 1], 7), flux_m = std::cosh(s - ds) * std::pow(prof.Rp[k - 1], 7);
        double lhs = (flux_p - flux_m) / (2 * ds);
        double rhs = std::pow(1.5, 8) * std::pow(std::cosh(prof.R[k]) / std::cosh(s), 7) * std::sinh(prof.R[k]);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
    }
}

TEST_CASE("Dirichlet shooting agrees with direct minimization") {
    const double p = 8.0, L = 1.5, h = 0.5, R0 = 0.3;
    Profile prof = shoot_dirichlet(p, L, h, R0);
    CHECK(std::abs(prof.R.back() - R0) < 1e-10);
    CHECK(check_profile_monotonicity(prof, 100, 9).pass());
    const int K = 400;
    std::vector<double> direct = direct_minimizer(p, L, h, R0, K);
    double sup = 0.0;
    for (int k = 0; k <= K; ++k) sup = std::max(sup, std::abs(direct[k] - prof.eval(h * k / K)));
    CHECK(sup < 1e-3);

    // large targets go through the slope branch
    Profile steep = shoot_dirichlet(p, L, h, 0.5);
    CHECK(std::abs(steep.R.back() - 0.5) < 1e-10);
    CHECK(check_profile_monotonicity(steep, 100, 11).pass());
    CHECK_THROWS_AS(shoot_dirichlet(p, L, h, 0.6), ValidationError);
    CHECK_THROWS_AS(shoot_dirichlet(p, L, h, 0.0), ValidationError);
}

TEST_CASE("limit profile") {
    const double L = 1.5, h = 0.5;
    Profile flat = limit_profile(h * (1 - 1e-9), L, h);
    for (double r : flat.R) CHECK(std::abs(r) < 1e-8);

    double s_star = limit_s_star_for_R0(L, h, 0.3);
    CHECK(s_star == doctest::Approx(0.291445648728).epsilon(1e-9));
    Profile lin = limit_profile(s_star, L, h);
    CHECK(lin.match_point < 0);
    CHECK(lin.R.back() == doctest::Approx(0.3).epsilon(1e-9));

    double s5 = limit_s_star_for_R0(L, h, 0.5);
    CHECK(s5 == doctest::Approx(0.162669720197).epsilon(1e-8));
    Profile full = limit_profile(s5, L, h);
    CHECK(full.match_point == doctest::Approx(0.431414104143945).epsilon(1e-8));
    for (int k = 0; k <= full.K(); ++k) {
        double s = full.s[k];
        if (s <= s5) CHECK(full.R[k] == 0.0);
        else if (s <= full.match_point) CHECK(full.Rp[k] == doctest::Approx(L / std::cosh(s5)).epsilon(1e-12));
        else CHECK(full.Rp[k] == doctest::Approx(L * std::cosh(full.R[k]) / std::cosh(s)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(limit_profile(0.0, L, h), ValidationError);
    CHECK_THROWS_AS(limit_s_star_for_R0(L, h, 2.0), NoBracket);
}

TEST_CASE("ideal map") {
    IdealMapParams prm;
    CHECK(prm.k() == doctest::Approx(1.1));
    IdealMapReport r = ideal_map_profile(prm);
    CHECK(r.pass());
    CHECK(r.continuity_error < 1e-12);
    CHECK(r.kK0 == doctest::Approx(1.32));
    CHECK(r.K_h == doctest::Approx(1.5 / std::cosh(0.02)));
    CHECK(r.lipschitz_bound < prm.L);
    CHECK(r.s.size() == 10000);

    IdealMapParams bad = prm;
    bad.h = 0.1;  // k = 1.5 exceeds (L / K0)^(1/2)
    CHECK_THROWS_AS(ideal_map_profile(bad), InvariantViolation);

    IdealMapParams thin = prm;
    thin.h = 1e-6;
    IdealMapReport t = ideal_map_profile(thin);
    CHECK(t.pass());
    for (const auto& reg : t.regions)
        if (reg.region == 'c') CHECK(reg.max_eigen <= 1.0 + 1e-12);
}
