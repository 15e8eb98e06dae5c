#pragma once

#include <string>
#include <vector>

#include "tdoa/optimizer.hpp"
#include "tdoa/scenario.hpp"

namespace tdoa {

struct ParsedConfig {
  Scenario scenario;
  std::vector<OptimizerConfig> optimizers;
};

// JSON document with a "scenario" object (preset name plus overrides, or a
// full inline definition) and an "optimizers" array. Unknown keys are rejected
// at every level; unset optimizer fields take the built-in defaults.
// Throws ConfigParseError / ConfigValidationError.
ParsedConfig parse_config(const std::string& text);

// Inverse of parse_config up to structural equality.
std::string serialize_config(const ParsedConfig& config);

}  // namespace tdoa
