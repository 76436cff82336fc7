#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace fairdiv::cli {

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs one property suite with fixed internal seeds. The report has a
/// top-level "passed" flag and one entry per check under "checks".
/// Throws std::invalid_argument for an unknown suite.
nlohmann::json run_suite(const std::string& name);

}  // namespace fairdiv::cli
