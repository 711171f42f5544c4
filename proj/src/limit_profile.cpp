#include <algorithm>
#include <cmath>
#include <limits>

#include "stretchlab/profile_ode.hpp"

namespace stretchlab {

namespace {

double slope_field(double L, double s, double R) { return L * std::cosh(R) / std::cosh(s); }

double rk4(double L, double s, double R, double step) {
    double k1 = slope_field(L, s, R);
    double k2 = slope_field(L, s + 0.5 * step, R + 0.5 * step * k1);
    double k3 = slope_field(L, s + 0.5 * step, R + 0.5 * step * k2);
    double k4 = slope_field(L, s + step, R + step * k3);
    return R + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

double advance(double L, double s0, double s1, double R, int substeps) {
    double step = (s1 - s0) / substeps;
    for (int n = 0; n < substeps; ++n) R = rk4(L, s0 + n * step, R, step);
    return R;
}

// First point after s* where the linear branch stops dominating L cosh R / cosh s; -1 if none in (s*, h].
double matching_point(double s_star, double L, double h) {
    double m = L / std::cosh(s_star);
    auto g = [&](double x) { return std::cosh(m * (x - s_star)) / std::cosh(x) - 1.0 / std::cosh(s_star); };
    const int n = 4000;
    double prev_x = s_star, prev_g = -1.0;
    for (int k = 1; k <= n; ++k) {
        double x = s_star + (h - s_star) * k / n;
        double gx = g(x);
        if (prev_g < 0.0 && gx >= 0.0 && k > 1) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                double mid = 0.5 * (lo + hi);
                (g(mid) < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_x = x;
        prev_g = gx;
    }
    return -1.0;
}

double limit_endpoint(double s_star, double L, double h) {
    if (s_star >= h) return 0.0;
    double m = L / std::cosh(s_star);
    double st = matching_point(s_star, L, h);
    if (st < 0.0) return m * (h - s_star);
    return advance(L, st, h, m * (st - s_star), 4000);
}

}  // namespace

Profile limit_profile(double s_star, double L, double h, int K) {
    if (!(std::isfinite(L) && L >= 1.0)) throw ValidationError("limit_profile: L must be at least 1");
    if (!(h > 0.0)) throw ValidationError("limit_profile: h must be positive");
    if (!(s_star > 0.0)) throw ValidationError("limit_profile: s* must be positive");
    if (K < 2) throw ValidationError("limit_profile: K must be at least 2");
    Profile prof;
    prof.kind = "limit";
    prof.parameter = s_star;
    prof.L = L;
    prof.h = h;
    prof.p = std::numeric_limits<double>::infinity();
    double m = L / std::cosh(s_star);
    double st = s_star < h ? matching_point(s_star, L, h) : -1.0;
    prof.match_point = st;
    double R = 0.0, s_prev = st;
    for (int k = 0; k <= K; ++k) {
        double s = h * k / K;
        prof.s.push_back(s);
        if (s <= s_star) {
            prof.R.push_back(0.0);
            prof.Rp.push_back(0.0);
            prof.region.push_back(1);
        } else if (st < 0.0 || s <= st) {
            prof.R.push_back(m * (s - s_star));
            prof.Rp.push_back(m);
            prof.region.push_back(2);
        } else {
            if (s_prev == st) R = m * (st - s_star);
            R = advance(L, s_prev, s, R, 16);
            s_prev = s;
            prof.R.push_back(R);
            prof.Rp.push_back(slope_field(L, s, R));
            prof.region.push_back(3);
        }
    }
    return prof;
}

double limit_s_star_for_R0(double L, double h, double R0) {
    if (!(R0 > 0.0)) throw ValidationError("limit_s_star_for_R0: R0 must be positive");
    double lo = 1e-12, hi = h;
    double top = limit_endpoint(lo, L, h);
    if (R0 > top) throw NoBracket("limit_s_star_for_R0: R0 above the range of the limit family", 0.0, top);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        (limit_endpoint(mid, L, h) > R0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace stretchlab
