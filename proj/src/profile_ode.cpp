#include "stretchlab/profile_ode.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stretchlab/svnorm.hpp"

namespace stretchlab {

namespace {

constexpr double kBlowUpR = 50.0;
constexpr double kSeedOffset = 1e-7;

double log_cosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// cosh(R)^p - 1 without cancellation for small R.
double cosh_pow_m1(double R, double p) {
    double sh = std::sinh(0.5 * R);
    return std::expm1(p * std::log1p(2.0 * sh * sh));
}

struct OdeParams {
    double p, L;
    double inv;    // 1 / (p - 1)
    double pstar;  // p - 1 - 1 / (p - 1)
    double logLp;
    OdeParams(double p_, double L_) : p(p_), L(L_), inv(1.0 / (p_ - 1.0)), pstar(p_ - 1.0 - 1.0 / (p_ - 1.0)),
                                      logLp(p_ * std::log(L_)) {}
};

// State (s, R, y) with y = Phi, or y = log Phi once Phi is large.
struct State {
    double s, R, y;
};

State rhs(const OdeParams& P, const State& x, bool log_mode) {
    State d;
    d.s = std::exp(P.inv * log_cosh(x.s));
    double force_log = P.logLp - P.pstar * log_cosh(x.s) + (P.p - 1.0) * log_cosh(x.R);
    double sh = std::sinh(x.R);
    if (log_mode) {
        d.R = std::exp(P.inv * x.y);
        d.y = std::exp(force_log - x.y) * sh;
    } else {
        d.R = x.y > 0.0 ? std::pow(x.y, P.inv) : 0.0;
        d.y = std::exp(force_log) * sh;
    }
    return d;
}

struct Trajectory {
    std::vector<SigmaNode> nodes;
    std::vector<double> dRdsigma;
    bool blew_up = false;
};

// Simpson quadrature of d sigma / ds on [a, b].
double sigma_of(double p, double a, double b) {
    if (b <= a) return 0.0;
    const int n = 4096;
    double hh = (b - a) / n, acc = 0.0;
    auto f = [&](double s) { return std::exp(-log_cosh(s) / (p - 1.0)); };
    for (int k = 0; k <= n; ++k) {
        double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * f(a + k * hh);
    }
    return acc * hh / 3.0;
}

// RK4 in sigma from the given start, N steps; graded steps cluster near the start.
Trajectory integrate(const OdeParams& P, double h, State x, double sigma0, int N, bool graded) {
    Trajectory tr;
    double span = sigma_of(P.p, x.s, h);
    bool log_mode = false;
    auto push = [&](double sig, const State& st) {
        double r = log_mode ? std::exp(P.inv * st.y) : (st.y > 0 ? std::pow(st.y, P.inv) : 0.0);
        double phi = log_mode ? std::exp(st.y) : st.y;
        tr.nodes.push_back({sig, st.s, st.R, phi});
        tr.dRdsigma.push_back(r);
    };
    push(sigma0, x);
    double prev = 0.0;
    for (int k = 1; k <= N; ++k) {
        double f = static_cast<double>(k) / N;
        double cur = graded ? f * f * f : f;
        double dsig = (cur - prev) * span;
        prev = cur;
        if (!log_mode && x.y > 1e300) {
            log_mode = true;
            x.y = std::log(x.y);
        }
        auto add = [](const State& a, const State& b, double c) { return State{a.s + c * b.s, a.R + c * b.R, a.y + c * b.y}; };
        State k1 = rhs(P, x, log_mode);
        State k2 = rhs(P, add(x, k1, 0.5 * dsig), log_mode);
        State k3 = rhs(P, add(x, k2, 0.5 * dsig), log_mode);
        State k4 = rhs(P, add(x, k3, dsig), log_mode);
        x.s += dsig / 6.0 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s);
        x.R += dsig / 6.0 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R);
        x.y += dsig / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
        if (!std::isfinite(x.R) || !std::isfinite(x.y) || x.R > kBlowUpR) {
            tr.blew_up = true;
            return tr;
        }
        push(sigma0 + cur * span, x);
    }
    return tr;
}

struct CoreSeed {
    State x;
    double a, gamma;
};

CoreSeed core_seed(const OdeParams& P, double s0) {
    double p = P.p;
    double g = p / (p - 2.0);
    double c0 = std::cosh(s0);
    double logK = P.logLp - (p - 1.0) * std::log(c0);
    double loga = (logK - std::log(c0) - (p - 1.0) * std::log(g) - std::log(g - 1.0) - std::log(p - 1.0)) / (p - 2.0);
    double a = std::exp(loga);
    double x0 = kSeedOffset;
    State st;
    st.s = s0 + x0;
    st.R = a * std::pow(x0, g);
    st.y = std::cosh(s0 + x0) * std::pow(a * g * std::pow(x0, g - 1.0), p - 1.0);
    return {st, a, g};
}

Trajectory slope_trajectory(const OdeParams& P, double h, double slope0, int N) {
    return integrate(P, h, State{0.0, 0.0, std::pow(slope0, P.p - 1.0)}, 0.0, N, false);
}

Trajectory core_trajectory(const OdeParams& P, double h, double s0, int N) {
    CoreSeed seed = core_seed(P, s0);
    Trajectory tr;
    tr.nodes.push_back({0.0, 0.0, 0.0, 0.0});
    tr.dRdsigma.push_back(0.0);
    double sig0 = sigma_of(P.p, 0.0, s0);
    if (s0 > 0.0) {
        tr.nodes.push_back({sig0, s0, 0.0, 0.0});
        tr.dRdsigma.push_back(0.0);
    }
    if (seed.x.s >= h) {
        tr.nodes.push_back({sigma_of(P.p, 0.0, h), h, 0.0, 0.0});
        tr.dRdsigma.push_back(0.0);
        return tr;
    }
    Trajectory rest = integrate(P, h, seed.x, sigma_of(P.p, 0.0, seed.x.s), N, true);
    tr.nodes.insert(tr.nodes.end(), rest.nodes.begin(), rest.nodes.end());
    tr.dRdsigma.insert(tr.dRdsigma.end(), rest.dRdsigma.begin(), rest.dRdsigma.end());
    tr.blew_up = rest.blew_up;
    return tr;
}

double endpoint(const Trajectory& tr) { return tr.blew_up ? kInf : tr.nodes.back().R; }

Profile resample(const Trajectory& tr, const OdeParams& P, double h, int K) {
    Profile prof;
    prof.p = P.p;
    prof.L = P.L;
    prof.h = h;
    prof.s.resize(K + 1);
    prof.R.resize(K + 1);
    prof.Rp.resize(K + 1);
    prof.region.assign(K + 1, 0);
    const auto& nd = tr.nodes;
    std::vector<double> dRds(nd.size());
    for (std::size_t k = 0; k < nd.size(); ++k) dRds[k] = tr.dRdsigma[k] * std::exp(-log_cosh(nd[k].s) * P.inv);
    std::size_t seg = 0;
    for (int k = 0; k <= K; ++k) {
        double x = h * k / K;
        prof.s[k] = x;
        while (seg + 2 < nd.size() && nd[seg + 1].s < x) ++seg;
        std::size_t a = seg, b = std::min(seg + 1, nd.size() - 1);
        double xa = nd[a].s, xb = nd[b].s, dx = xb - xa;
        if (dx <= 0.0 || x >= xb) {
            prof.R[k] = nd[b].R;
            prof.Rp[k] = dRds[b];
            continue;
        }
        double t = std::clamp((x - xa) / dx, 0.0, 1.0);
        double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        prof.R[k] = h00 * nd[a].R + h10 * dx * dRds[a] + h01 * nd[b].R + h11 * dx * dRds[b];
        double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1, d01 = -d00, d11 = 3 * t * t - 2 * t;
        prof.Rp[k] = (d00 * nd[a].R + d01 * nd[b].R) / dx + d10 * dRds[a] + d11 * dRds[b];
    }
    prof.R[0] = 0.0;
    prof.trajectory = tr.nodes;
    return prof;
}

double sup_diff(const Profile& a, const Profile& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.R.size(); ++k) m = std::max(m, std::abs(a.R[k] - b.R[k]));
    return m;
}

template <class Build>
Profile refine(const IvpOptions& opts, Build build) {
    int N = opts.initial_steps;
    Profile cur = build(N);
    cur.steps = N;
    while (2 * N <= opts.max_steps) {
        N *= 2;
        Profile next = build(N);
        next.steps = N;
        next.refinement_change = sup_diff(cur, next);
        cur = std::move(next);
        if (cur.refinement_change < opts.refine_tol) break;
    }
    return cur;
}

void check_inputs(double p, double L, double h) {
    if (!(std::isfinite(p) && p > 2.0)) throw ValidationError("profile: p must be finite and greater than 2");
    if (!(std::isfinite(L) && L >= 1.0)) throw ValidationError("profile: L must be at least 1");
    if (!(std::isfinite(h) && h > 0.0)) throw ValidationError("profile: h must be positive");
}

Profile trivial_profile(double p, double L, double h, int K) {
    Profile prof;
    prof.kind = "trivial";
    prof.p = p;
    prof.L = L;
    prof.h = h;
    for (int k = 0; k <= K; ++k) {
        prof.s.push_back(h * k / K);
        prof.R.push_back(0.0);
        prof.Rp.push_back(0.0);
        prof.region.push_back(0);
    }
    return prof;
}

}  // namespace

double Profile::eval(double x) const {
    double sg = x < 0 ? -1.0 : 1.0;
    double ax = std::abs(x);
    int n = K();
    if (n <= 0) return 0.0;
    double step = s[n] / n;
    int k = std::min(static_cast<int>(ax / step), n - 1);
    double t = std::clamp((ax - s[k]) / step, 0.0, 1.0);
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return sg * (h00 * R[k] + h10 * step * Rp[k] + h01 * R[k + 1] + h11 * step * Rp[k + 1]);
}

double label_A_integrand(double s, double R, double Rp, double p, double L) {
    double c = std::cosh(s);
    return (std::pow(std::abs(Rp), p) + std::pow(L * std::cosh(R) / c, p)) * c;
}

double label_A_energy(const Profile& prof, double p, double L, double h) {
    int K = prof.K();
    if (K < 2 || K % 2) throw ValidationError("label_A_energy: profile needs an even number of intervals");
    if (std::abs(prof.s.back() - h) > 1e-12 * std::max(1.0, h)) throw ValidationError("label_A_energy: grid does not end at h");
    double step = h / K, acc = 0.0;
    for (int k = 0; k <= K; ++k) {
        double w = (k == 0 || k == K) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * label_A_integrand(prof.s[k], prof.R[k], prof.Rp[k], p, L);
    }
    return acc * step / 3.0;
}

double ode_rhs(double s, double R, double Rp, double p, double L) {
    double a = std::pow(std::abs(Rp), p - 2.0);
    if (p > 2.0 && !(a > 1e-300)) throw NumericalError("ode_rhs: |R'|^(p-2) underflows; use the flux formulation");
    double c = std::cosh(s);
    double force = std::pow(L, p) * std::pow(std::cosh(R) / c, p - 1.0) * std::sinh(R);
    return (force - std::sinh(s) * Rp * a) / (c * (p - 1.0) * a);
}

Profile solve_ivp_sigma(double p, double L, double slope0, double h, const IvpOptions& opts) {
    check_inputs(p, L, h);
    if (!(slope0 >= 0.0 && std::isfinite(slope0))) throw ValidationError("solve_ivp_sigma: slope0 must be non-negative");
    if (slope0 == 0.0) return trivial_profile(p, L, h, opts.K);
    OdeParams P(p, L);
    Profile prof = refine(opts, [&](int N) {
        Trajectory tr = slope_trajectory(P, h, slope0, N);
        if (tr.blew_up) throw NumericalError("solve_ivp_sigma: solution blows up before s = h");
        return resample(tr, P, h, opts.K);
    });
    prof.kind = "slope";
    prof.parameter = slope0;
    return prof;
}

Profile solve_ivp_core(double p, double L, double s0, double h, const IvpOptions& opts) {
    check_inputs(p, L, h);
    if (!(s0 >= 0.0 && s0 <= h)) throw ValidationError("solve_ivp_core: departure point must lie in [0, h]");
    OdeParams P(p, L);
    Profile prof = refine(opts, [&](int N) {
        Trajectory tr = core_trajectory(P, h, s0, N);
        if (tr.blew_up) throw NumericalError("solve_ivp_core: solution blows up before s = h");
        return resample(tr, P, h, opts.K);
    });
    prof.kind = "core";
    prof.parameter = s0;
    return prof;
}

double zero_slope_limit(double p, double L, double h, const IvpOptions& opts) {
    check_inputs(p, L, h);
    return endpoint(core_trajectory(OdeParams(p, L), h, 0.0, opts.initial_steps));
}

Profile shoot_dirichlet(double p, double L, double h, double R0, const IvpOptions& opts) {
    check_inputs(p, L, h);
    if (!(R0 > 0.0 && R0 <= h)) throw ValidationError("shoot_dirichlet: need 0 < R0 <= h");
    OdeParams P(p, L);
    const double hi_slope = 10.0 * L;

    auto bisect = [&](auto f, double lo, double hi, bool increasing) {
        double mid = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            mid = 0.5 * (lo + hi);
            double v = f(mid);
            if (std::abs(v) < 1e-12 || hi - lo < 1e-15 * std::max(1.0, hi)) break;
            bool above = !(v < 0.0);
            if (above == increasing) hi = mid;
            else lo = mid;
        }
        return mid;
    };

    std::string kind;
    Profile prof = refine(opts, [&](int N) {
        double rmax = endpoint(core_trajectory(P, h, 0.0, N));
        Trajectory tr;
        double param;
        if (R0 >= rmax) {
            double top = endpoint(slope_trajectory(P, h, hi_slope, N));
            if (top < R0) throw NoBracket("shoot_dirichlet: R0 above the range reached by slope0 <= 10 L", 0.0, top);
            param = bisect([&](double a) { return endpoint(slope_trajectory(P, h, a, N)) - R0; }, 0.0, hi_slope, true);
            tr = slope_trajectory(P, h, param, N);
            kind = "slope";
        } else {
            param = bisect([&](double s0) { return endpoint(core_trajectory(P, h, s0, N)) - R0; }, 0.0, h, false);
            tr = core_trajectory(P, h, param, N);
            kind = "core";
        }
        if (tr.blew_up) throw NumericalError("shoot_dirichlet: accepted trajectory blows up");
        Profile pr = resample(tr, P, h, opts.K);
        pr.parameter = param;
        pr.boundary_miss = tr.nodes.back().R - R0;
        return pr;
    });
    prof.kind = kind;
    return prof;
}

bool MonotonicityReport::pass(double slack) const {
    return odd_margin >= slack && rp_margin >= slack && flux_margin >= slack && step4_margin >= slack &&
           step5_margin >= slack;
}

MonotonicityReport check_profile_monotonicity(const Profile& prof, int pairs, std::uint64_t seed) {
    MonotonicityReport rep;
    const double p = prof.p, L = prof.L;
    double rscale = 0.0;
    for (double r : prof.R) rscale = std::max(rscale, std::abs(r));
    rep.odd_margin = prof.R.front() == 0.0 ? 0.0 : -kInf;
    if (rscale > 0)
        for (double r : prof.R) rep.odd_margin = std::min(rep.odd_margin, r / rscale);

    const auto& tr = prof.trajectory;
    std::vector<double> r(tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        double y = tr[k].Phi;
        r[k] = y > 0 ? std::pow(y, 1.0 / (p - 1.0)) : 0.0;
    }
    double rmax = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
    rep.rp_margin = 0.0;
    rep.flux_margin = 0.0;
    if (rmax > 0)
        for (std::size_t k = 0; k + 1 < r.size(); ++k) {
            rep.rp_margin = std::min(rep.rp_margin, (r[k + 1] - r[k]) / rmax);
            rep.flux_margin = std::min(rep.flux_margin, std::pow(r[k + 1] / rmax, p - 1) - std::pow(r[k] / rmax, p - 1));
        }

    rep.step4_margin = rep.step5_margin = 0.0;
    if (tr.size() >= 2 && pairs > 0) {
        rep.step4_margin = rep.step5_margin = kInf;
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, tr.size() - 1);
        const double pstar = p - 1.0 - 1.0 / (p - 1.0);
        for (int n = 0; n < pairs; ++n) {
            std::size_t a = pick(rng), b = pick(rng);
            while (b == a) b = pick(rng);
            if (a > b) std::swap(a, b);
            double lhs = std::pow(r[b], p) - std::pow(r[a], p);
            double dc = cosh_pow_m1(tr[b].R, p) - cosh_pow_m1(tr[a].R, p);
            double common = std::pow(L, p) / (p - 1.0) * dc;
            double up = common * std::exp(-pstar * log_cosh(tr[a].s));
            double low = common * std::exp(-pstar * log_cosh(tr[b].s));
            auto margin = [](double small, double big) {
                double sc = std::max(std::abs(small), std::abs(big));
                return sc == 0.0 ? 0.0 : (big - small) / sc;
            };
            rep.step4_margin = std::min(rep.step4_margin, margin(lhs, up));
            rep.step5_margin = std::min(rep.step5_margin, margin(low, lhs));
            ++rep.pairs;
        }
    }
    return rep;
}

}  // namespace stretchlab
