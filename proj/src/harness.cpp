#include "tdoa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tdoa/errors.hpp"

namespace tdoa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SignalDraw {
  std::vector<ReceivedSignal> signals;
};

std::vector<ReceivedSignal> synthesize_scenario_signals(
    const Scenario& scenario, const std::vector<double>& waveform,
    std::mt19937_64& rng) {
  const SignalParams params = scenario.signal_params();
  const double samples_per_meter = params.sample_rate / params.propagation_speed;
  std::uniform_real_distribution<double> magnitude(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<ReceivedSignal> signals;
  signals.reserve(scenario.receivers.positions.size());
  int id = 0;
  for (const Vec2& anchor : scenario.receivers.positions) {
    const double dist = distance(scenario.true_position, anchor);
    const int delay =
        static_cast<int>(std::lround(dist * samples_per_meter));
    const double mag = magnitude(rng);
    const double arg = phase(rng);
    const std::complex<double> gain(mag * std::cos(arg), mag * std::sin(arg));
    ReceivedSignal z = synthesize_received(waveform, delay, gain,
                                           params.noise_stddev, rng);
    z.receiver_id = id++;
    signals.push_back(std::move(z));
  }
  return signals;
}

MeasurementSet draw_measurements(const Scenario& scenario,
                                 const std::vector<double>& waveform,
                                 std::mt19937_64& rng) {
  if (scenario.measurement_source == MeasurementSource::direct_noise) {
    return generate_measurements(scenario, rng);
  }
  const SignalParams params = scenario.signal_params();
  const std::vector<ReceivedSignal> signals =
      synthesize_scenario_signals(scenario, waveform, rng);
  const std::vector<PairRangeDifference> ranges =
      estimate_range_differences(signals, params);
  Eigen::VectorXd values(static_cast<Eigen::Index>(ranges.size()));
  for (std::size_t idx = 0; idx < ranges.size(); ++idx) {
    values[static_cast<Eigen::Index>(idx)] = ranges[idx].range_difference;
  }
  const int m = static_cast<int>(ranges.size());
  return make_measurement_set(std::move(values), scenario.covariance.build(m));
}

bool finite(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

RunResult run(const Scenario& scenario, const OptimizerConfig& config,
              std::uint64_t seed) {
  validate_scenario(scenario);
  validate_optimizer_config(config);

  std::mt19937_64 rng(seed);
  std::vector<double> waveform;
  if (scenario.measurement_source == MeasurementSource::signal_frontend) {
    const SignalParams params = scenario.signal_params();
    waveform = make_waveform(params.waveform_kind, params.num_samples, rng);
  }

  RunResult result;
  result.trace.algorithm = algorithm_name(config.algorithm);
  result.trace.scenario_id = scenario.id;
  result.trace.seed = seed;
  result.trace.config = config;
  result.trace.records.reserve(static_cast<std::size_t>(scenario.iterations) + 1);

  CostModel model{scenario.receivers, draw_measurements(scenario, waveform, rng)};
  OptimizerState state = make_state(config, scenario.start());

  const auto record = [&](long k) -> bool {
    const double j = cost(state.position, model);
    const double err = distance(state.position, scenario.true_position);
    if (!finite(state.position) || !std::isfinite(j)) {
      result.failed = true;
      result.failure_reason = "non-finite state at iteration " + std::to_string(k);
      return false;
    }
    result.trace.records.push_back({k, state.position, j, err});
    if (j > kDivergenceCostLimit) {
      result.failed = true;
      result.failure_reason = "cost exceeded divergence limit at iteration " +
                              std::to_string(k);
      return false;
    }
    return true;
  };

  if (!record(0)) return result;
  for (long k = 1; k <= scenario.iterations; ++k) {
    if (scenario.resample_measurements) {
      model.measurements = draw_measurements(scenario, waveform, rng);
    }
    try {
      const Vec2 g = gradient(state.position, model);
      step(state, g, config);
    } catch (const SingularityError& e) {
      result.failed = true;
      result.failure_reason = e.what();
      return result;
    } catch (const NumericError& e) {
      result.failed = true;
      result.failure_reason = e.what();
      return result;
    }
    if (!record(k)) return result;
  }
  return result;
}

std::optional<long> iterations_to_threshold(const ConvergenceTrace& trace,
                                            double threshold) {
  if (!(threshold > 0.0)) {
    throw InvalidArgumentError("threshold must be positive");
  }
  const auto& records = trace.records;
  const std::size_t n = records.size();
  double suffix_max = -kInf;
  std::optional<long> best;
  for (std::size_t idx = n; idx-- > 0;) {
    if (records[idx].position_error <= threshold && suffix_max <= 1.5 * threshold) {
      best = records[idx].iteration;
    }
    suffix_max = std::max(suffix_max, records[idx].position_error);
  }
  return best;
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) {
    throw InvalidArgumentError("quartiles of an empty set");
  }
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return {values[0], values[0], values[0]};
  const auto midpoint = [&](std::size_t lo, std::size_t hi) {
    // Median of values[lo..hi) with the midpoint convention.
    const std::size_t len = hi - lo;
    const std::size_t mid = lo + len / 2;
    if (len % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
  };
  const std::size_t n = values.size();
  Quartiles q;
  q.median = midpoint(0, n);
  q.q1 = midpoint(0, n / 2);
  q.q3 = midpoint(n % 2 == 1 ? n / 2 + 1 : n / 2, n);
  return q;
}

SuiteSummary run_suite(const std::vector<Scenario>& scenarios,
                       const std::vector<OptimizerConfig>& configs,
                       const std::vector<std::uint64_t>& seeds,
                       double threshold) {
  if (scenarios.empty() || configs.empty() || seeds.empty()) {
    throw InvalidArgumentError("suite needs scenarios, configs, and seeds");
  }
  std::vector<std::uint64_t> sorted_seeds = seeds;
  std::sort(sorted_seeds.begin(), sorted_seeds.end());

  const std::size_t cells = scenarios.size() * configs.size();
  const std::size_t total = cells * sorted_seeds.size();
  std::vector<RunResult> results(total);

#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < static_cast<long>(total); ++t) {
    const std::size_t cell = static_cast<std::size_t>(t) / sorted_seeds.size();
    const std::size_t seed_idx = static_cast<std::size_t>(t) % sorted_seeds.size();
    const Scenario& scenario = scenarios[cell / configs.size()];
    const OptimizerConfig& config = configs[cell % configs.size()];
    results[static_cast<std::size_t>(t)] =
        run(scenario, config, sorted_seeds[seed_idx]);
  }

  SuiteSummary summary;
  summary.threshold = threshold;
  summary.seeds = sorted_seeds;
  summary.checkpoints = {50, 150, 300};

  for (std::size_t cell = 0; cell < cells; ++cell) {
    const Scenario& scenario = scenarios[cell / configs.size()];
    const OptimizerConfig& config = configs[cell % configs.size()];
    CellSummary cs;
    cs.scenario_id = scenario.id;
    cs.algorithm = algorithm_name(config.algorithm);
    cs.run_count = static_cast<long>(sorted_seeds.size());

    std::vector<double> crossings;
    std::map<int, std::vector<double>> checkpoint_values;
    for (int k : summary.checkpoints) {
      if (k <= scenario.iterations) checkpoint_values[k] = {};
    }
    for (std::size_t s = 0; s < sorted_seeds.size(); ++s) {
      const RunResult& r = results[cell * sorted_seeds.size() + s];
      if (r.failed) cs.failed_count += 1;
      for (auto& [k, vals] : checkpoint_values) {
        const std::size_t idx = static_cast<std::size_t>(k);
        vals.push_back(idx < r.trace.records.size()
                           ? r.trace.records[idx].position_error
                           : kInf);
      }
      std::optional<long> crossing;
      if (!r.failed) crossing = iterations_to_threshold(r.trace, threshold);
      if (crossing.has_value()) {
        cs.reached_count += 1;
        crossings.push_back(static_cast<double>(*crossing));
      } else {
        crossings.push_back(kInf);
      }
    }
    for (auto& [k, vals] : checkpoint_values) {
      cs.checkpoint_error[k] = quartiles(std::move(vals));
    }
    cs.median_iterations_to_threshold = quartiles(std::move(crossings)).median;
    summary.cells.push_back(std::move(cs));
  }
  return summary;
}

}  // namespace tdoa
