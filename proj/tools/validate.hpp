#pragma once

#include <optional>

#include <json.hpp>

namespace cvsearch::tools {

/// Runs the invariant suite on one grid and returns the report:
/// {"grid_size", "qunats", "theta", "checks": [{name, value, tolerance, passed}], "passed"}.
/// Checks whose tolerance is null are informational.
nlohmann::json run_validation(int grid_size, int qunats, std::optional<double> theta);

}  // namespace cvsearch::tools
