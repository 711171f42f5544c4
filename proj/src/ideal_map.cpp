#include <algorithm>
#include <cmath>

#include "stretchlab/profile_ode.hpp"

namespace stretchlab {

void IdealMapParams::validate() const {
    if (!(h > 0.0 && std::isfinite(h))) throw ValidationError("idealmap: h must be positive");
    if (!(h0 > 3.0 * h && std::isfinite(h0))) throw ValidationError("idealmap: need h0 > 3 h");
    if (!(L > 1.0 && std::isfinite(L))) throw ValidationError("idealmap: L must exceed 1");
    if (!(K0 > 0.0 && K0 < L)) throw ValidationError("idealmap: need 0 < K0 < L");
    double kk = k();
    if (!(kk > 1.0 && kk <= std::sqrt(L / K0)))
        throw InvariantViolation("idealmap: k = (h0 + 2h)/h0 must satisfy 1 < k <= sqrt(L/K0)");
}

namespace {

struct Piece {
    double R, Rp;
};

Piece piece(char region, double s, const IdealMapParams& P) {
    switch (region) {
        case 'a': return {0.0, 0.0};
        case 'b': return {0.5 * (s - P.h), 0.5};
        case 'c': return {s - 2.0 * P.h, 1.0};
        default: return {P.k() * (s - P.h0) + P.h0 - 2.0 * P.h, P.k()};
    }
}

char region_of(double s, const IdealMapParams& P) {
    if (s <= P.h) return 'a';
    if (s <= 3.0 * P.h) return 'b';
    if (s <= P.h0) return 'c';
    return 'd';
}

}  // namespace

bool IdealMapReport::pass() const {
    return lipschitz_pass && continuity_error < 1e-12 &&
           std::all_of(regions.begin(), regions.end(), [](const RegionBound& r) { return r.pass; });
}

IdealMapReport ideal_map_profile(const IdealMapParams& params, int samples) {
    params.validate();
    if (samples < 2) throw ValidationError("idealmap: need at least 2 samples");
    IdealMapReport rep;
    rep.params = params;
    rep.k = params.k();
    const double kb = std::max(0.5, 1.0 / std::cosh(params.h));
    rep.regions = {{'a', 0.0, params.h, 0.0, 1.0, true},
                   {'b', params.h, 3.0 * params.h, 0.0, kb, true},
                   {'c', 3.0 * params.h, params.h0, 0.0, 1.0, true},
                   {'d', params.h0, 2.0 * params.h0, 0.0, rep.k, true}};
    for (int n = 0; n < samples; ++n) {
        double s = 2.0 * params.h0 * n / (samples - 1);
        char reg = region_of(s, params);
        Piece pc = piece(reg, s, params);
        double e1 = pc.Rp, e2 = std::cosh(pc.R) / std::cosh(s);
        rep.s.push_back(s);
        rep.R.push_back(pc.R);
        rep.Rp.push_back(pc.Rp);
        rep.eig1.push_back(e1);
        rep.eig2.push_back(e2);
        rep.region.push_back(reg);
        RegionBound& rb = rep.regions[reg - 'a'];
        rb.max_eigen = std::max({rb.max_eigen, e1, e2});
    }
    for (auto& rb : rep.regions) rb.pass = rb.max_eigen <= rb.bound * (1.0 + 1e-12);

    const double knots[3] = {params.h, 3.0 * params.h, params.h0};
    const char left[3] = {'a', 'b', 'c'};
    for (int n = 0; n < 3; ++n) {
        double jump = std::abs(piece(left[n], knots[n], params).R - piece(left[n] + 1, knots[n], params).R);
        rep.continuity_error = std::max(rep.continuity_error, jump);
    }
    double outer = piece('d', 2.0 * params.h0, params).R;
    rep.continuity_error = std::max(rep.continuity_error, std::abs(outer - 2.0 * params.h0));

    rep.K_h = kb * params.L;
    rep.K_star = params.K_star < 0.0 ? params.K0 : params.K_star;
    rep.kK0 = rep.k * params.K0;
    rep.lipschitz_bound = std::max({rep.K_h, rep.K_star, rep.kK0});
    rep.lipschitz_pass = rep.lipschitz_bound < params.L;
    return rep;
}

}  // namespace stretchlab
