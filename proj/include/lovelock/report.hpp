#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lovelock/checks.hpp"
#include "lovelock/metrics.hpp"

namespace lovelock {

// Report payload; timing fields are omitted when include_timing is false.
nlohmann::json report_to_json(const SuiteReport& rep, bool include_timing = true);
// One line per check plus a totals line.
std::string report_summary(const SuiteReport& rep);

struct EvalRequest {
    std::string what;    // density | tensor | psi | divergence | eds
    std::string metric;  // built-in name or path to a tabulated JSON file
    MetricParams params;
    int r = 1;
    std::optional<std::vector<double>> point;  // evaluator default when empty
    double step = 1e-3;
};

// Throws std::invalid_argument or std::runtime_error when the request cannot be evaluated.
nlohmann::json evaluate(const EvalRequest& req);

}  // namespace lovelock
