#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stretchlab/errors.hpp"
#include "stretchlab/inequalities.hpp"
#include "stretchlab/svnorm.hpp"

using namespace stretchlab;

namespace {

// Largest singular value by sweeping unit directions in the domain.
double angular_s1(const TangentMap& a) {
    double best = 0.0;
    for (int k = 0; k < 721; ++k) {
        double th = std::numbers::pi * k / 720.0;
        MinkVec w = std::cos(th) * a.col(0) + std::sin(th) * a.col(1);
        best = std::max(best, std::sqrt(std::max(mink_inner(w, w), 0.0)));
    }
    return best;
}

// Trace and determinant of the Gram matrix of the columns.
std::pair<double, double> gram_invariants(const TangentMap& a) {
    double n0 = mink_inner(a.col(0), a.col(0));
    double c = mink_inner(a.col(0), a.col(1));
    double n1 = mink_inner(a.col(1), a.col(1));
    return {n0 + n1, n0 * n1 - c * c};
}

}  // namespace

TEST_CASE("closed-form symmetric eigenpairs") {
    Eigen::Matrix2d g;
    g << 2, 1, 1, 2;
    SymEig2 e = sym_eig2(g);
    CHECK(e.l1 == doctest::Approx(3.0));
    CHECK(e.l2 == doctest::Approx(1.0));
    CHECK((g * e.vecs.col(0) - 3.0 * e.vecs.col(0)).norm() < 1e-14);
    SymEig2 d = sym_eig2(Eigen::Matrix2d::Identity() * 4.0);
    CHECK(d.degenerate);
    CHECK(d.l1 == 4.0);
    CHECK(d.l2 == 4.0);
}

TEST_CASE("singular values against independent oracles") {
    Rng rng(17);
    for (int k = 0; k < 500; ++k) {
        HPoint X = random_hpoint(rng, 1.5);
        TangentMap A = random_tangent_map(rng, X);
        Spectrum s = singular_values(A);
        auto [tr, det] = gram_invariants(A);
        CHECK(s.s1 * s.s1 + s.s2 * s.s2 == doctest::Approx(tr).epsilon(1e-12));
        CHECK(std::abs(s.s1 * s.s1 * s.s2 * s.s2 - det) <= 1e-12 * tr * tr);
        double a1 = angular_s1(A);
        CHECK(a1 <= s.s1 * (1 + 1e-12));
        CHECK(a1 >= s.s1 * (1 - 1e-5));
    }
}

TEST_CASE("Schatten norms") {
    HPoint X;
    TangentMap A(X, MinkVec(3, 0, 0), MinkVec(0, 4, 0));
    CHECK(sv_norm(A, 1.0) == doctest::Approx(7.0));
    CHECK(sv_norm(A, 2.0) == doctest::Approx(5.0));
    CHECK(sv_norm(A, kInf) == doctest::Approx(4.0));
    CHECK(trace_power(A, 4.0) == doctest::Approx(81.0 + 256.0));
    CHECK(hs_norm(A) == doctest::Approx(5.0));
    CHECK_THROWS_AS(sv_norm(A, 0.5), ValidationError);

    Rng rng(19);
    for (int k = 0; k < 200; ++k) {
        TangentMap B = random_tangent_map(rng, random_hpoint(rng, 1.0));
        double prev = kInf;
        for (double p : {1.0, 2.0, 4.0, 8.0, 64.0, kInf}) {
            double n = sv_norm(B, p);
            CHECK(n <= prev * (1 + 1e-14));
            prev = n;
        }
        double s1 = singular_values(B).s1;
        CHECK(std::abs(sv_norm(B, 1024.0) - s1) <= s1 * (std::pow(2.0, 1.0 / 1024) - 1) * (1 + 1e-9));
    }
}

TEST_CASE("spectral power and the flux identity") {
    Rng rng(23);
    for (int k = 0; k < 500; ++k) {
        TangentMap A = random_tangent_map(rng, random_hpoint(rng, 1.5));
        for (double p : {4.0, 6.0, 10.0}) {
            TangentMap S = S_q(A, p - 1);
            CHECK(pairing(S, A) == doctest::Approx(trace_power(A, p)).epsilon(1e-10));
            Spectrum sa = singular_values(A), ss = singular_values(S);
            CHECK(ss.s1 == doctest::Approx(std::pow(sa.s1, p - 1)).epsilon(1e-9));
        }
    }
    TangentMap Z = TangentMap::zero(HPoint());
    CHECK(sv_norm(S_q(Z, 3.0), 2.0) == 0.0);
}

TEST_CASE("first variation matches a central difference") {
    Rng rng(29);
    for (int k = 0; k < 300; ++k) {
        HPoint X = random_hpoint(rng, 1.0);
        TangentMap A = random_tangent_map(rng, X), C = random_tangent_map(rng, X);
        for (double p : {4.0, 6.0, 10.0}) {
            const double e = 1e-5;
            double fd = (trace_power(A + C * e, p) - trace_power(A - C * e, p)) / (2 * e);
            double an = first_variation_kernel(A, C, p);
            double scale = std::max(std::abs(an), 1e-3 * trace_power(A, p) * hs_norm(C) / std::max(hs_norm(A), 1e-300));
            // central-difference truncation: e^2 / 6 times the third derivative along C
            double a = hs_norm(A), c = hs_norm(C);
            double trunc = e * e / 6.0 * p * (p - 1) * (p - 2) * std::pow(a + 2 * e * c, p - 3) * c * c * c;
            CHECK(std::abs(fd - an) <= 1e-6 * scale + 1e-8 * std::abs(an) + trunc);
        }
    }
}

TEST_CASE("convexity subgradient and norm equivalence") {
    Rng rng(31);
    for (int k = 0; k < 10000; ++k) {
        HPoint X = random_hpoint(rng, 1.0);
        TangentMap A = random_tangent_map(rng, X), B = random_tangent_map(rng, X);
        double p = (k % 3 == 0) ? 4.0 : (k % 3 == 1) ? 6.0 : 10.0;
        CHECK(check_convexity_subgradient(A, B, p));
        CHECK(norm_equivalence_check(A, p));
    }
}

TEST_CASE("frame coordinates round trip") {
    Rng rng(37);
    for (int k = 0; k < 100; ++k) {
        TangentMap A = random_tangent_map(rng, random_hpoint(rng, 2.0));
        TangentMap B = from_frame_matrix(A.base(), frame_matrix(A));
        CHECK((B.col(0) - A.col(0)).norm() < 1e-10 * (1 + A.col(0).norm()));
        CHECK((B.col(1) - A.col(1)).norm() < 1e-10 * (1 + A.col(1).norm()));
    }
}
