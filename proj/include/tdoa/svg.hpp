#pragma once

#include <iosfwd>
#include <vector>

#include "tdoa/harness.hpp"

namespace tdoa {

enum class PlotKind { convergence, trajectory };

// Self-contained deterministic SVG. Convergence: cost vs iteration, one styled
// series per trace. Trajectory: receiver markers, true position, and iterate
// paths; requires the scenario geometry. Throws InvalidArgumentError on empty
// input or missing geometry.
void emit_svg(const std::vector<ConvergenceTrace>& traces, PlotKind kind,
              std::ostream& sink, const Scenario* scenario = nullptr);

}  // namespace tdoa
