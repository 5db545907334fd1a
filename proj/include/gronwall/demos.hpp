#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gronwall/io.hpp"

namespace gronwall {

struct DemoOutcome {
  std::string name;
  bool passed = false;
  /// Checks performed, each {"check": ..., "passed": ...} plus scenario data.
  io::Json report;
};

const std::vector<std::string>& demo_names();

/// Runs a self-asserting scenario. grid_count overrides the scenario's default
/// grid size. Throws Error(Schema) for unknown names.
DemoOutcome run_demo(const std::string& name, std::optional<int> grid_count = std::nullopt);

}  // namespace gronwall
