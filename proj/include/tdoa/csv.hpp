#pragma once

#include <iosfwd>
#include <vector>

#include "tdoa/harness.hpp"

namespace tdoa {

// Format version 1: header "iteration,x,y,cost,position_error", one row per
// record, 17-significant-digit decimal doubles, LF line endings. Byte
// deterministic for a given trace.
void emit_csv(const ConvergenceTrace& trace, std::ostream& sink);

// Parses emit_csv output; values round-trip exactly.
std::vector<TraceRecord> parse_trace_csv(std::istream& source);

}  // namespace tdoa
