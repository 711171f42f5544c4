#include "stretchlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stretchlab/errors.hpp"

namespace stretchlab {

void CheckOutcome::record(double margin, const std::vector<double>& instance, double slack) {
    ++count;
    if (!(margin >= slack)) ++violations;
    if (std::isnan(margin)) margin = -kInf;
    if (count == 1 || margin < worst_margin) {
        worst_margin = margin;
        argmin_instance = instance;
    }
}

bool SuiteReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.pass(); });
}

CheckOutcome& SuiteReport::get(const std::string& name) {
    for (auto& c : checks)
        if (c.name == name) return c;
    CheckOutcome c;
    c.name = name;
    checks.push_back(std::move(c));
    return checks.back();
}

const CheckOutcome* SuiteReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

double relative_margin(double lhs, double rhs) {
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    return (rhs - lhs) / scale;
}

HPoint random_hpoint(Rng& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double t = radius * u(rng);
    double th = 2.0 * std::numbers::pi * u(rng);
    return HPoint::unchecked(MinkVec(std::sinh(t) * std::cos(th), std::sinh(t) * std::sin(th), std::cosh(t)));
}

namespace {

Eigen::Matrix2d rotation(double a) {
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

double upow(double x, double e) { return x <= 0.0 ? 0.0 : std::pow(x, e); }

}  // namespace

TangentMap random_tangent_map(Rng& rng, const HPoint& x) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double s1 = std::exp(-3.0 + 5.0 * u(rng));
    double s2 = std::exp(-3.0 + 5.0 * u(rng));
    double kind = u(rng);
    if (kind < 0.2)
        s2 = s1 * (1.0 + 1e-9 * u(rng));
    else if (kind < 0.4)
        s2 = 0.0;
    Eigen::Matrix2d m = rotation(2.0 * std::numbers::pi * u(rng)) * Eigen::Vector2d(s1, s2).asDiagonal() *
                        rotation(2.0 * std::numbers::pi * u(rng)).transpose();
    return from_frame_matrix(x, m);
}

HPoint random_nearby(Rng& rng, const HPoint& x) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // delta = 2 (cosh t - 1) stays below 1/10
    const double t_max = std::acosh(1.0 + 0.05 * (1.0 - 1e-9));
    double t = std::exp(std::log(1e-3) + (std::log(t_max) - std::log(1e-3)) * u(rng));
    double th = 2.0 * std::numbers::pi * u(rng);
    auto f = tangent_frame(x);
    return exp_map(x, t * (std::cos(th) * f[0] + std::sin(th) * f[1]));
}

std::vector<NamedMargin> check_scalar_lemmas(double x, double y, double z, double p) {
    std::vector<NamedMargin> out;
    for (int sg : {-1, 1}) {
        double lhs = std::pow(std::pow(x, p / 2) + sg * std::pow(y, p / 2), 2);
        double rhs = p * (std::pow(x, p - 1) + sg * std::pow(y, p - 1)) * (x + sg * y);
        out.push_back({sg < 0 ? "lemma_power_minus" : "lemma_power_plus", relative_margin(lhs, rhs)});
    }
    for (int sg : {-1, 1}) {
        double lhs = std::pow(std::pow(x, p - 1) + sg * std::pow(y, p - 1), 2);
        double rhs = 4.0 * std::pow(z, p - 2) * std::pow(std::pow(x, p / 2) + sg * std::pow(y, p / 2), 2);
        out.push_back({sg < 0 ? "lemma_zpower_minus" : "lemma_zpower_plus", relative_margin(lhs, rhs)});
    }
    return out;
}

std::vector<NamedMargin> check_same_base(const TangentMap& a, const TangentMap& b, double p) {
    std::vector<NamedMargin> out;
    TangentMap dh = S_q(a, p / 2) - S_q(b, p / 2);
    double lhs1 = pairing(dh, dh);
    double rhs1 = p * pairing(S_q(a, p - 1) - S_q(b, p - 1), a - b);
    out.push_back({"spectral_monotonicity", relative_margin(lhs1, rhs1)});

    TangentMap df = S_q(a, p - 1) - S_q(b, p - 1);
    double smax = std::max(singular_values(a).s1, singular_values(b).s1);
    double lhs2 = pairing(df, df);
    double rhs2 = 4.0 * upow(smax, p - 2) * lhs1;
    out.push_back({"flux_difference_bound", relative_margin(lhs2, rhs2)});
    return out;
}

std::vector<NamedMargin> check_cross_base(const TangentMap& a, const TangentMap& bt, double p) {
    std::vector<NamedMargin> out;
    const HPoint& X = a.base();
    const HPoint& Y = bt.base();
    TangentMap b(X, bt.col(0), bt.col(1));
    double d = delta(X.v(), Y.v());
    double sB = singular_values(b).s1;
    MinkVec xy = X.v() - Y.v();

    TangentMap sbt = S_q(bt, p - 1);
    double lhs5 = mink_inner(sbt.col(0), X.v()) * mink_inner(bt.col(0), X.v()) +
                  mink_inner(sbt.col(1), X.v()) * mink_inner(bt.col(1), X.v());
    double rhs5 = trace_power(bt, p) * d * (1.0 + 0.25 * d);
    out.push_back({"cross_normal_component", relative_margin(lhs5, rhs5)});

    double worst_up = kInf, worst_nonneg = kInf;
    for (double q : {(p - 2) / 2, p / 2, 1.0}) {
        SymEig2 e = sym_eig2(sym_pow(gram(b), q) - sym_pow(gram(bt), q));
        double bound = 2.0 * q * std::pow(sB, 2 * q) * d;
        worst_up = std::min(worst_up, relative_margin(e.l1, bound));
        double scale = std::pow(sB, 2 * q);
        worst_nonneg = std::min(worst_nonneg, scale > 0 ? e.l2 / scale : 0.0);
    }
    out.push_back({"gram_power_upper", worst_up});
    out.push_back({"gram_power_nonnegative", worst_nonneg});

    TangentMap sb = S_q(b, p - 1);
    double v0 = mink_inner(sb.col(0) - sbt.col(0), xy), v1 = mink_inner(sb.col(1) - sbt.col(1), xy);
    double rhs6 = 2.0 * (p - 1) * upow(sB, p - 1) * std::pow(d, 1.5);
    out.push_back({"flux_transport_normal", relative_margin(std::hypot(v0, v1), rhs6)});

    TangentMap h = S_q(bt, p / 2);
    TangentMap hx = TangentMap(X, h.col(0), h.col(1)) - S_q(b, p / 2);
    double rhs7 = p * d * upow(sB, p / 2);
    out.push_back({"half_power_transport", relative_margin(hs_norm(hx), rhs7)});

    if (p >= 4) {
        double lhs8 = std::abs(mink_inner(sbt.col(0) - sb.col(0), b.col(0) - a.col(0)) +
                               mink_inner(sbt.col(1) - sb.col(1), b.col(1) - a.col(1)));
        TangentMap z = S_q(b, p / 2) - S_q(a, p / 2);
        double rhs8 = 2.0 * (p - 2) * 8.0 * upow(sB, p - 2) * d * std::pow(pairing(z, z), 2.0 / p);
        out.push_back({"mixed_transport_C8", relative_margin(lhs8, rhs8)});
    }
    return out;
}

SuiteReport svnorm_property_suite(int trials, const std::vector<double>& p_list, std::uint64_t seed) {
    Rng rng(seed);
    SuiteReport rep;
    for (const char* n : {"holder_product", "holder_trace", "p_monotone", "p_limit", "norm_equivalence", "triangle",
                          "convexity_subgradient", "spectral_power"})
        rep.get(n);
    for (double p : p_list) {
        double pc = p / (p - 1);
        for (int it = 0; it < trials; ++it) {
            HPoint x = random_hpoint(rng, 3.0);
            TangentMap A = random_tangent_map(rng, x), B = random_tangent_map(rng, x);
            std::vector<double> inst{p, double(it)};
            Eigen::Matrix2d ma = frame_matrix(A), mb = frame_matrix(B), prod = ma * mb.transpose();

            double w = kInf;
            for (double q : {pc, p, 2 * p, kInf}) {
                double r = std::isinf(q) ? p : 1.0 / (1.0 / p + 1.0 / q);
                w = std::min(w, relative_margin(sv_norm(prod, r), sv_norm(A, p) * sv_norm(B, q)));
            }
            rep.get("holder_product").record(w, inst);
            rep.get("holder_trace").record(relative_margin(std::abs(pairing(A, B)), sv_norm(A, p) * sv_norm(B, pc)),
                                           inst);

            double n1 = sv_norm(A, 1), np = sv_norm(A, p), nq = sv_norm(A, 2 * p), ni = sv_norm(A, kInf);
            rep.get("p_monotone").record(
                std::min({relative_margin(np, n1), relative_margin(nq, np), relative_margin(ni, nq)}), inst);

            double s1 = singular_values(A).s1, prev = sv_norm(A, 2.0), lim = kInf;
            for (int k = 2; k <= 40; ++k) {
                double pk = std::ldexp(1.0, k), nk = sv_norm(A, pk);
                lim = std::min({lim, relative_margin(nk, prev), relative_margin(s1, nk),
                                relative_margin(nk - s1, s1 * (std::pow(2.0, 1.0 / pk) - 1.0) + 1e-15 * s1)});
                prev = nk;
            }
            rep.get("p_limit").record(lim, inst);

            double hs = hs_norm(A);
            rep.get("norm_equivalence")
                .record(std::min(relative_margin(hs / std::sqrt(2.0), np), relative_margin(np, hs)), inst);
            rep.get("triangle").record(relative_margin(sv_norm(A + B, p), np + sv_norm(B, p)), inst);

            double lhs = first_variation_kernel(A, B - A, p);
            double rhs = trace_power(B, p) - trace_power(A, p);
            double scale = std::max(trace_power(A, p), trace_power(B, p));
            rep.get("convexity_subgradient").record(scale > 0 ? (rhs - lhs) / scale : 0.0, inst);

            double sp = kInf;
            for (double q : {p - 1, p / 2}) {
                Spectrum s = singular_values(S_q(A, q));
                double e1 = std::abs(s.s1 - std::pow(s1, q));
                double e2 = std::abs(s.s2 - upow(singular_values(A).s2, q));
                sp = std::min(sp, relative_margin(std::max(e1, e2), 1e-10 * std::pow(s1, q)));
            }
            rep.get("spectral_power").record(sp, inst);
        }
    }
    return rep;
}

SuiteReport pointwise_suite(int trials, const std::vector<double>& p_list, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SuiteReport rep;
    for (const char* n : {"lemma_power_minus", "lemma_power_plus", "lemma_zpower_minus", "lemma_zpower_plus",
                          "spectral_monotonicity", "flux_difference_bound", "cross_normal_component",
                          "gram_power_upper", "gram_power_nonnegative", "flux_transport_normal",
                          "half_power_transport", "mixed_transport_C8"})
        rep.get(n);
    rep.get("gram_power_nonnegative").asserted = false;
    rep.get("mixed_transport_C8").asserted = false;

    for (double p : p_list) {
        for (int it = 0; it < trials; ++it) {
            std::vector<double> inst{p, double(it)};
            double x = std::exp(-3.0 + 5.0 * u(rng)), y = std::exp(-3.0 + 5.0 * u(rng));
            double kind = u(rng);
            if (kind < 0.1)
                y = x;
            else if (kind < 0.3)
                y = x * (1.0 + 1e-6 * u(rng));
            double z = std::max(x, y) * (u(rng) < 0.3 ? 1.0 : 1.0 + u(rng));
            for (const auto& m : check_scalar_lemmas(x, y, z, p)) rep.get(m.name).record(m.margin, inst);

            HPoint X = random_hpoint(rng, 3.0);
            TangentMap A = random_tangent_map(rng, X);
            TangentMap B = u(rng) < 0.5 ? random_tangent_map(rng, X)
                                        : A + random_tangent_map(rng, X) * std::exp(-9.0 + 6.0 * u(rng));
            for (const auto& m : check_same_base(A, B, p)) rep.get(m.name).record(m.margin, inst);

            HPoint Y = random_nearby(rng, X);
            double d = delta(X.v(), Y.v());
            if (!(d < 0.1)) throw NumericalError("pointwise_suite: sampled pair violates delta < 1/10");
            TangentMap Bt = random_tangent_map(rng, Y);
            std::vector<double> cinst{p, double(it), d};
            for (const auto& m : check_cross_base(A, Bt, p)) rep.get(m.name).record(m.margin, cinst);
        }
    }
    return rep;
}

}  // namespace stretchlab
