#pragma once

#include <json.hpp>

#include "stretchlab/inequalities.hpp"
#include "stretchlab/jp_solver.hpp"
#include "stretchlab/profile_ode.hpp"
#include "stretchlab/psweep.hpp"

namespace stretchlab {

using json = nlohmann::ordered_json;

// Non-finite doubles become strings so the output stays valid JSON.
json number(double x);

json to_json(const CheckOutcome& c);
json to_json(const SuiteReport& r);
json to_json(const SweepRecord& r);
json to_json(const MonotonicityReport& r);
json profile_summary(const Profile& prof);
json to_json(const IdealMapReport& r);
json to_json(const DualStationarityReport& r);

}  // namespace stretchlab
