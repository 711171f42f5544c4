#include <doctest.h>

#include <cmath>

#include "stretchlab/errors.hpp"
#include "stretchlab/inequalities.hpp"
#include "stretchlab/minkowski.hpp"

using namespace stretchlab;

namespace {

MinkVec random_tangent(Rng& rng, const HPoint& x, double scale) {
    std::normal_distribution<double> n(0.0, scale);
    auto f = tangent_frame(x);
    return n(rng) * f[0] + n(rng) * f[1];
}

}  // namespace

TEST_CASE("hyperboloid membership is validated") {
    CHECK_NOTHROW(HPoint(MinkVec(0, 0, 1)));
    CHECK_THROWS_AS(HPoint(MinkVec(0, 0, 2)), ValidationError);
    CHECK_THROWS_AS(HPoint(MinkVec(0, 0, -1)), ValidationError);
}

TEST_CASE("inner product along a geodesic") {
    HPoint X(MinkVec(0, 0, 1));
    HPoint Y(MinkVec(0, std::sinh(1.0), std::cosh(1.0)));
    CHECK(mink_inner(X.v(), Y.v()) == doctest::Approx(-std::cosh(1.0)).epsilon(1e-15));
    CHECK(dist(X, Y) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(delta(X.v(), Y.v()) == doctest::Approx(2.0 * (std::cosh(1.0) - 1.0)).epsilon(1e-14));
    CHECK(delta(X.v(), Y.v()) == doctest::Approx(1.0862).epsilon(1e-4));
}

TEST_CASE("sharp transpose negates skew maps and is the form adjoint") {
    Rng rng(3);
    std::normal_distribution<double> n;
    for (int k = 0; k < 100; ++k) {
        Mat3 b;
        for (int i = 0; i < 9; ++i) b.data()[i] = n(rng);
        SkewMap s = SkewMap::from_matrix(b);
        CHECK((sharp_transpose(s.m()) + s.m()).norm() < 1e-14);
        MinkVec x(n(rng), n(rng), n(rng)), y(n(rng), n(rng), n(rng));
        CHECK(mink_inner(b * x, y) == doctest::Approx(mink_inner(x, sharp_transpose(b) * y)).epsilon(1e-12));
    }
}

TEST_CASE("cross product and the alpha/beta identities") {
    HPoint X(MinkVec(0, 0, 1));
    MinkVec v(1, 0, 0);
    SkewMap c = cross(v, X.v());
    Mat3 expected = X.v() * sharp(v) - v * sharp(X.v());
    CHECK((c.m() - expected).norm() < 1e-15);
    CHECK((alpha(X, beta(X, v)) - v).norm() < 1e-15);

    Rng rng(5);
    for (int k = 0; k < 1000; ++k) {
        HPoint P = random_hpoint(rng, 2.0), Q = random_hpoint(rng, 2.0);
        SkewMap xy = cross(P.v(), Q.v());
        CHECK((sharp_transpose(xy.m()) + xy.m()).norm() < 1e-10 * (1 + xy.m().norm()));
        MinkVec w = random_tangent(rng, P, 1.0);
        CHECK((alpha(P, beta(P, w)) - w).norm() < 1e-10 * (1 + w.norm()));
        SkewMap bw = beta(P, w);
        double tr = (bw.m() * bw.m()).trace();
        CHECK(tr == doctest::Approx(2.0 * mink_inner(alpha(P, bw), w)).epsilon(1e-10));
        // beta is an isometry up to sqrt(2) for the bar metric
        CHECK(bar_metric(P, bw, bw) == doctest::Approx(2.0 * mink_inner(w, w)).epsilon(1e-10));
    }
}

TEST_CASE("distance sandwich and the projection weight") {
    Rng rng(7);
    for (int k = 0; k < 1000; ++k) {
        HPoint X = random_hpoint(rng, 1.5), Y = random_hpoint(rng, 1.5);
        double t = dist(X, Y), dl = delta(X.v(), Y.v());
        CHECK(t * t <= dl * (1 + 1e-12) + 1e-14);
        CHECK(dl <= t * t * std::cosh(t) * (1 + 1e-12) + 1e-14);
        MinkVec W = random_tangent(rng, Y, 1.0);
        MinkVec WX = tangent_project(X, W);
        double om = omega(X.v(), Y.v());
        CHECK(mink_inner(WX, WX) <= om * om * mink_inner(W, W) * (1 + 1e-12) + 1e-14);
    }
}

TEST_CASE("exponential map, logarithm and retraction") {
    HPoint X(MinkVec(0, 0, 1));
    HPoint g = exp_map(X, MinkVec(0, 0.7, 0));
    CHECK((g.v() - MinkVec(0, std::sinh(0.7), std::cosh(0.7))).norm() < 1e-15);
    CHECK_THROWS_AS(exp_map(X, MinkVec(0, 0, 1)), ValidationError);

    Rng rng(11);
    for (int k = 0; k < 1000; ++k) {
        HPoint P = random_hpoint(rng, 2.0);
        MinkVec v = random_tangent(rng, P, 0.8);
        HPoint Q = exp_map(P, v);
        CHECK(dist(P, Q) == doctest::Approx(std::sqrt(mink_inner(v, v))).epsilon(1e-10));
        CHECK((log_map(P, Q) - v).norm() < 1e-9 * (1 + v.norm()) * P.v().norm());
        MinkVec t(0.3 * rng() / double(Rng::max()), 0.2, 2.0 + rng() / double(Rng::max()));
        HPoint r = retract(t);
        CHECK(std::abs(mink_inner(r.v(), r.v()) + 1.0) < 1e-14);
    }
    CHECK_THROWS_AS(retract(MinkVec(1, 0, 0.5)), NumericalError);
}

TEST_CASE("bar metric is positive and agrees on tangent vectors") {
    Rng rng(13);
    for (int k = 0; k < 1000; ++k) {
        HPoint P = random_hpoint(rng, 2.0);
        MinkVec w = random_tangent(rng, P, 1.0);
        CHECK(bar_metric(P, w, w) == doctest::Approx(mink_inner(w, w)).epsilon(1e-10));
        std::normal_distribution<double> n;
        MinkVec a(n(rng), n(rng), n(rng));
        CHECK(bar_metric(P, a, a) > 0.0);
        // O-twisted Gram matrix is positive definite
        Eigen::SelfAdjointEigenSolver<Mat3> es(esharp() * bar_operator(P));
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("boost translates along the core geodesic") {
    HPoint X(MinkVec(0, 0, 1));
    MinkVec y = boost(0.9) * X.v();
    CHECK((y - MinkVec(0, std::sinh(0.9), std::cosh(0.9))).norm() < 1e-15);
    Mat3 B = boost(0.4);
    CHECK((sharp_transpose(B) * B - Mat3::Identity()).norm() < 1e-14);
    CHECK((boost(0.3) * boost(0.5) - boost(0.8)).norm() < 1e-14);
}
