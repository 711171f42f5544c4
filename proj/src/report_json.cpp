#include "report_json.hpp"

#include <cmath>

namespace stretchlab {

json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

namespace {

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

}  // namespace

json to_json(const CheckOutcome& c) {
    return json{{"pass", c.pass()},
                {"asserted", c.asserted},
                {"count", c.count},
                {"violations", c.violations},
                {"worst_margin", number(c.worst_margin)},
                {"argmin_instance", numbers(c.argmin_instance)}};
}

json to_json(const SuiteReport& r) {
    json out = json::object();
    for (const auto& c : r.checks) out[c.name] = to_json(c);
    return out;
}

json to_json(const SweepRecord& r) {
    return json{{"p", r.p},
                {"kappa_p", number(r.kappa_p)},
                {"Jp", number(r.Jp)},
                {"Jp_root", number(r.Jp_root)},
                {"kappa_times_Jp_root", number(r.kappa_p * r.Jp_root)},
                {"lipschitz_est", number(r.lipschitz_est)},
                {"el_residual", number(r.el_residual)},
                {"eps", numbers(r.eps)},
                {"concentration", numbers(r.concentration)},
                {"density_integral", number(r.density_integral)},
                {"mass_S", number(r.mass_S)},
                {"mass_V", number(r.mass_V)},
                {"closedness_defect", number(r.closedness_defect)},
                {"sqrt2_error", number(r.sqrt2_error)},
                {"iters", r.iters},
                {"converged", r.converged},
                {"failed", r.failed},
                {"message", r.message}};
}

json to_json(const MonotonicityReport& r) {
    return json{{"pass", r.pass()},
                {"odd_margin", number(r.odd_margin)},
                {"rp_margin", number(r.rp_margin)},
                {"flux_margin", number(r.flux_margin)},
                {"step4_margin", number(r.step4_margin)},
                {"step5_margin", number(r.step5_margin)},
                {"pairs", r.pairs}};
}

json profile_summary(const Profile& prof) {
    json j{{"kind", prof.kind},
           {"parameter", number(prof.parameter)},
           {"p", number(prof.p)},
           {"L", prof.L},
           {"h", prof.h},
           {"K", prof.K()},
           {"steps", prof.steps},
           {"refinement_change", number(prof.refinement_change)},
           {"boundary_miss", number(prof.boundary_miss)},
           {"R_h", prof.R.empty() ? json(nullptr) : number(prof.R.back())}};
    if (prof.match_point >= 0) j["match_point"] = prof.match_point;
    return j;
}

json to_json(const IdealMapReport& r) {
    json regions = json::array();
    for (const auto& b : r.regions)
        regions.push_back(json{{"region", std::string(1, b.region)},
                               {"lo", b.lo},
                               {"hi", b.hi},
                               {"max_eigen", number(b.max_eigen)},
                               {"bound", number(b.bound)},
                               {"pass", b.pass}});
    return json{{"params",
                 {{"h", r.params.h}, {"h0", r.params.h0}, {"L", r.params.L}, {"K0", r.params.K0},
                  {"K_star", r.K_star}}},
                {"k", r.k},
                {"regions", regions},
                {"continuity_error", number(r.continuity_error)},
                {"K_h", r.K_h},
                {"K_star", r.K_star},
                {"kK0", r.kK0},
                {"lipschitz_bound", r.lipschitz_bound},
                {"lipschitz_pass", r.lipschitz_pass},
                {"pass", r.pass()}};
}

json to_json(const DualStationarityReport& r) {
    return json{{"q", r.q},
                {"Jq0", number(r.Jq0)},
                {"eps", r.eps},
                {"slack", number(r.slack)},
                {"trials", r.trials},
                {"violations", r.violations},
                {"worst_violation", number(r.worst_violation)},
                {"max_first_variation", number(r.max_first_variation)},
                {"note", "finite test family: necessary-condition check only"}};
}

}  // namespace stretchlab
