#pragma once

#include <json.hpp>

#include "tanglekit/monogamy.hpp"
#include "tanglekit/state_io.hpp"

namespace tanglekit {

nlohmann::json verdict_to_json(const ConstraintVerdict& verdict);

/// { "state_meta", "focus", "one_tangle", "pairs", "triples", "verdicts",
///   "sum_rules", "criterion" }
nlohmann::json report_to_json(const FullReport& report, const StateMeta& meta = {});

}  // namespace tanglekit
