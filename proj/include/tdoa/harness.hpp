#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdoa/optimizer.hpp"
#include "tdoa/scenario.hpp"

namespace tdoa {

struct TraceRecord {
  long iteration = 0;
  Vec2 position;
  double cost = 0.0;
  double position_error = 0.0;  // meters to the true position
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;  // K+1 records: initial state plus K steps
  std::string algorithm;
  std::string scenario_id;
  std::uint64_t seed = 0;
  OptimizerConfig config;
};

struct RunResult {
  ConvergenceTrace trace;
  bool failed = false;             // divergence: J > 1e12 or non-finite state
  std::string failure_reason;      // empty on success; trace holds the valid prefix
};

inline constexpr double kDivergenceCostLimit = 1e12;

// Draws measurements once (direct-noise or signal-frontend path per the
// scenario), then iterates the configured optimizer K times from the start
// position. Deterministic given (scenario, config, seed).
RunResult run(const Scenario& scenario, const OptimizerConfig& config,
              std::uint64_t seed);

// Smallest k with error(k) <= threshold and error(j) <= 1.5*threshold for all
// j > k; nullopt if no such k.
std::optional<long> iterations_to_threshold(const ConvergenceTrace& trace,
                                            double threshold);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct CellSummary {
  std::string scenario_id;
  std::string algorithm;
  std::map<int, Quartiles> checkpoint_error;       // k -> error quartiles
  double median_iterations_to_threshold = 0.0;     // +inf when not reached
  long reached_count = 0;
  long failed_count = 0;
  long run_count = 0;
};

struct SuiteSummary {
  std::vector<CellSummary> cells;   // ordered by (scenario, algorithm)
  std::vector<int> checkpoints;     // {50, 150, 300} clipped to K
  double threshold = 3.5;           // meters, for iterations-to-threshold stats
  std::vector<std::uint64_t> seeds;
};

inline constexpr double kDefaultThresholdMeters = 3.5;

// Runs every (scenario, config, seed) triple; individual failures are recorded
// per cell and never abort the suite. The result is independent of execution
// order and of the seed list's ordering. Runs execute in parallel.
SuiteSummary run_suite(const std::vector<Scenario>& scenarios,
                       const std::vector<OptimizerConfig>& configs,
                       const std::vector<std::uint64_t>& seeds,
                       double threshold = kDefaultThresholdMeters);

// Median and quartiles with the midpoint convention; infinities propagate.
Quartiles quartiles(std::vector<double> values);

}  // namespace tdoa
