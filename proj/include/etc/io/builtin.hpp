#pragma once

#include "etc/sim/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace etc::io {

/// "flexible-link-paper": the flexible-link arm with x0 = (1,1,1,1), x_hat0 = 0,
/// node-relative triggers (factor 0.2, dwell 0.01 s) and a unit jump at t = 2 s.
std::optional<sim::Scenario> builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

}  // namespace etc::io
