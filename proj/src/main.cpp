#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdoa/config.hpp"
#include "tdoa/csv.hpp"
#include "tdoa/errors.hpp"
#include "tdoa/harness.hpp"
#include "tdoa/svg.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tdoa;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRunFailure = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string scenario = "scenario1";
  std::vector<std::string> algos;
  std::string out_dir = "out";
  std::vector<std::string> emit = {"csv", "summary"};
  std::string measurement_source;  // empty = keep the scenario's setting
  std::optional<int> iterations;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// File-name friendly algorithm tag: "RMSProp+AF" -> "rmsprop_af".
std::string slug(const std::string& name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (!out.empty() && out.back() != '_') {
      out.push_back('_');
    }
  }
  return out;
}

Algorithm algorithm_from_cli(const std::string& raw) {
  const std::string key = lower(raw);
  for (Algorithm a : all_algorithms()) {
    if (lower(algorithm_name(a)) == key) return a;
  }
  return algorithm_from_name(raw);  // throws with the canonical name list
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read configuration file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failure on " + path.string());
  }
  return buffer.str();
}

bool is_preset(const std::string& name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

// Preset name -> preset with all-algorithm defaults; anything else is a path
// to a configuration document.
ParsedConfig load_config(const std::string& scenario_ref) {
  if (is_preset(scenario_ref)) {
    ParsedConfig config;
    config.scenario = preset_by_name(scenario_ref);
    for (Algorithm a : all_algorithms()) {
      OptimizerConfig c;
      c.algorithm = a;
      config.optimizers.push_back(c);
    }
    return config;
  }
  return parse_config(read_file(scenario_ref));
}

void apply_overrides(const CommonOptions& options, ParsedConfig& config) {
  if (options.iterations.has_value()) {
    config.scenario.iterations = *options.iterations;
  }
  if (!options.measurement_source.empty()) {
    const std::string src = lower(options.measurement_source);
    if (src == "direct") {
      config.scenario.measurement_source = MeasurementSource::direct_noise;
    } else if (src == "signal") {
      config.scenario.measurement_source = MeasurementSource::signal_frontend;
    } else {
      throw ConfigValidationError(
          "--measurement-source must be direct or signal, got \"" +
          options.measurement_source + "\"");
    }
  }
  if (!options.algos.empty() &&
      !(options.algos.size() == 1 && lower(options.algos.front()) == "all")) {
    std::vector<OptimizerConfig> selected;
    for (const std::string& raw : options.algos) {
      const Algorithm a = algorithm_from_cli(raw);
      bool found = false;
      for (const OptimizerConfig& c : config.optimizers) {
        if (c.algorithm == a) {
          selected.push_back(c);
          found = true;
        }
      }
      if (!found) {
        OptimizerConfig c;  // not in the document: Table-1 defaults
        c.algorithm = a;
        selected.push_back(c);
      }
    }
    config.optimizers = std::move(selected);
  }
  validate_scenario(config.scenario);
  for (const OptimizerConfig& c : config.optimizers) {
    validate_optimizer_config(c);
  }
}

struct EmitFlags {
  bool csv = false;
  bool svg = false;
  bool summary = false;
};

EmitFlags parse_emit(const std::vector<std::string>& tokens) {
  EmitFlags flags;
  for (const std::string& token : tokens) {
    std::stringstream ss(token);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string key = lower(item);
      if (key.empty()) continue;
      if (key == "csv") {
        flags.csv = true;
      } else if (key == "svg") {
        flags.svg = true;
      } else if (key == "summary") {
        flags.summary = true;
      } else {
        throw ConfigValidationError("--emit accepts csv, svg, summary; got \"" +
                                    item + "\"");
      }
    }
  }
  return flags;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                  ec.message());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("write failure on " + path.string());
  }
}

fs::path trace_csv_path(const fs::path& dir, const ConvergenceTrace& trace) {
  char name[160];
  std::snprintf(name, sizeof(name), "%s_%s_seed%llu.csv",
                slug(trace.scenario_id).c_str(), slug(trace.algorithm).c_str(),
                static_cast<unsigned long long>(trace.seed));
  return dir / name;
}

void emit_trace_csv(const fs::path& dir, const ConvergenceTrace& trace) {
  const fs::path path = trace_csv_path(dir, trace);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  emit_csv(trace, out);
}

void emit_plots(const fs::path& dir, const Scenario& scenario,
                const std::vector<ConvergenceTrace>& traces) {
  const std::string base = slug(scenario.id);
  {
    const fs::path path = dir / (base + "_convergence.svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    emit_svg(traces, PlotKind::convergence, out);
  }
  {
    const fs::path path = dir / (base + "_trajectory.svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    emit_svg(traces, PlotKind::trajectory, out, &scenario);
  }
}

std::string format_metric(double v) {
  char buf[48];
  if (std::isinf(v)) return "inf";
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Structured text table: one row per (scenario, algorithm, checkpoint) with
// error quartiles, then per-cell iterations-to-threshold statistics.
std::string format_summary(const SuiteSummary& summary) {
  std::ostringstream out;
  char line[256];
  out << "position error quartiles [m] over " << summary.seeds.size()
      << " seeds\n";
  std::snprintf(line, sizeof(line), "%-12s %-12s %10s %12s %12s %12s\n",
                "scenario", "algorithm", "checkpoint", "q1", "median", "q3");
  out << line;
  for (const CellSummary& cell : summary.cells) {
    for (const auto& [k, q] : cell.checkpoint_error) {
      std::snprintf(line, sizeof(line), "%-12s %-12s %10d %12s %12s %12s\n",
                    cell.scenario_id.c_str(), cell.algorithm.c_str(), k,
                    format_metric(q.q1).c_str(), format_metric(q.median).c_str(),
                    format_metric(q.q3).c_str());
      out << line;
    }
  }
  out << "\niterations to reach " << format_metric(summary.threshold)
      << " m (stable crossing)\n";
  std::snprintf(line, sizeof(line), "%-12s %-12s %16s %10s %10s\n", "scenario",
                "algorithm", "median-iters", "reached", "failed");
  out << line;
  for (const CellSummary& cell : summary.cells) {
    char reached[32];
    std::snprintf(reached, sizeof(reached), "%ld/%ld", cell.reached_count,
                  cell.run_count);
    std::snprintf(line, sizeof(line), "%-12s %-12s %16s %10s %10ld\n",
                  cell.scenario_id.c_str(), cell.algorithm.c_str(),
                  format_metric(cell.median_iterations_to_threshold).c_str(),
                  reached, cell.failed_count);
    out << line;
  }
  return out.str();
}

std::vector<std::uint64_t> seed_range(const std::string& spec) {
  const auto dots = spec.find("..");
  try {
    if (dots == std::string::npos) {
      return {static_cast<std::uint64_t>(std::stoull(spec))};
    }
    const std::uint64_t a = std::stoull(spec.substr(0, dots));
    const std::uint64_t b = std::stoull(spec.substr(dots + 2));
    if (b < a) {
      throw ConfigValidationError("--seeds range must be ascending, got " + spec);
    }
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigValidationError("--seeds expects <n> or <a..b>, got \"" + spec +
                                "\"");
  }
}

int cmd_run(const CommonOptions& options, std::uint64_t seed) {
  ParsedConfig config = load_config(options.scenario);
  apply_overrides(options, config);
  const EmitFlags emit = parse_emit(options.emit);

  std::vector<ConvergenceTrace> traces;
  std::vector<std::string> failures;
  for (const OptimizerConfig& c : config.optimizers) {
    RunResult result = tdoa::run(config.scenario, c, seed);
    if (result.failed) {
      failures.push_back(algorithm_name(c.algorithm) + ": " +
                         result.failure_reason);
    }
    traces.push_back(std::move(result.trace));
  }

  if (emit.csv || emit.svg) {
    ensure_dir(options.out_dir);
    if (emit.csv) {
      for (const ConvergenceTrace& trace : traces) {
        emit_trace_csv(options.out_dir, trace);
      }
    }
    if (emit.svg) {
      emit_plots(options.out_dir, config.scenario, traces);
    }
  }

  if (emit.summary) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %6s %12s %14s %14s\n", "algorithm",
                  "seed", "iterations", "final-error", "final-cost");
    std::cout << line;
    for (const ConvergenceTrace& trace : traces) {
      const TraceRecord& last = trace.records.back();
      std::snprintf(line, sizeof(line), "%-12s %6llu %12ld %14s %14s\n",
                    trace.algorithm.c_str(),
                    static_cast<unsigned long long>(trace.seed), last.iteration,
                    format_metric(last.position_error).c_str(),
                    format_metric(last.cost).c_str());
      std::cout << line;
    }
  }
  for (const std::string& failure : failures) {
    std::cerr << "run failed: " << failure << "\n";
  }
  return failures.empty() ? kExitOk : kExitRunFailure;
}

int cmd_suite(const CommonOptions& options, const std::string& seeds_spec,
              double threshold) {
  ParsedConfig config = load_config(options.scenario);
  apply_overrides(options, config);
  const EmitFlags emit = parse_emit(options.emit);
  const std::vector<std::uint64_t> seeds = seed_range(seeds_spec);

  const SuiteSummary summary =
      run_suite({config.scenario}, config.optimizers, seeds, threshold);

  if (emit.csv || emit.svg) {
    ensure_dir(options.out_dir);
    std::vector<ConvergenceTrace> first_seed_traces;
    for (const OptimizerConfig& c : config.optimizers) {
      for (std::uint64_t seed : seeds) {
        RunResult result = tdoa::run(config.scenario, c, seed);
        if (emit.csv) emit_trace_csv(options.out_dir, result.trace);
        if (seed == seeds.front()) {
          first_seed_traces.push_back(std::move(result.trace));
        }
      }
    }
    if (emit.svg) {
      emit_plots(options.out_dir, config.scenario, first_seed_traces);
    }
  }

  const std::string table = format_summary(summary);
  if (emit.summary) {
    std::cout << table;
    if (!options.out_dir.empty() && (emit.csv || emit.svg)) {
      write_text_file(fs::path(options.out_dir) / "summary.txt", table);
    }
  }

  long total = 0;
  long failed = 0;
  for (const CellSummary& cell : summary.cells) {
    total += cell.run_count;
    failed += cell.failed_count;
  }
  if (total > 0 && failed == total) {
    std::cerr << "suite failed: every run diverged\n";
    return kExitRunFailure;
  }
  return kExitOk;
}

int cmd_presets() {
  for (const std::string& name : preset_names()) {
    const Scenario s = preset_by_name(name);
    std::cout << name << "\n";
    std::cout << "  receivers:";
    for (const Vec2& p : s.receivers.positions) {
      std::cout << " [" << p.x << ", " << p.y << "]";
    }
    std::cout << "\n";
    std::cout << "  true position: [" << s.true_position.x << ", "
              << s.true_position.y << "]\n";
    const Vec2 start = s.start();
    std::cout << "  start: [" << start.x << ", " << start.y << "]\n";
    std::cout << "  covariance: diag " << s.covariance.diag << ", offdiag "
              << s.covariance.offdiag << "\n";
    std::cout << "  iterations: " << s.iterations << "\n";
  }
  return kExitOk;
}

int cmd_validate(const std::string& scenario_ref) {
  ParsedConfig config = load_config(scenario_ref);
  validate_scenario(config.scenario);
  for (const OptimizerConfig& c : config.optimizers) {
    validate_optimizer_config(c);
  }
  std::cout << "valid: scenario \"" << config.scenario.id << "\" with "
            << config.optimizers.size() << " optimizer configuration"
            << (config.optimizers.size() == 1 ? "" : "s") << "\n";
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"TDOA source localization: signal synthesis, range-difference "
               "estimation, and first-order position solvers"};
  app.require_subcommand(1);

  CommonOptions run_options;
  std::uint64_t run_seed = 1;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Run one scenario with selected algorithms");
  run_cmd->add_option("--scenario", run_options.scenario,
                      "Preset name or configuration file path");
  run_cmd->add_option("--algo", run_options.algos,
                      "Algorithm name or \"all\" (repeatable)");
  run_cmd->add_option("--seed", run_seed, "Random seed");
  run_cmd->add_option("--iterations", run_options.iterations,
                      "Override the iteration count");
  run_cmd->add_option("--out", run_options.out_dir, "Output directory");
  run_cmd->add_option("--emit", run_options.emit,
                      "Comma-separated artifacts: csv,svg,summary");
  run_cmd->add_option("--measurement-source", run_options.measurement_source,
                      "direct or signal");

  CommonOptions suite_options;
  std::string seeds_spec = "1..30";
  double threshold = kDefaultThresholdMeters;
  CLI::App* suite_cmd = app.add_subcommand(
      "suite", "Run a scenario x algorithm x seed cross-product");
  suite_cmd->add_option("--scenario", suite_options.scenario,
                        "Preset name or configuration file path");
  suite_cmd->add_option("--algo", suite_options.algos,
                        "Algorithm name or \"all\" (repeatable)");
  suite_cmd->add_option("--seeds", seeds_spec, "Seed or inclusive range a..b");
  suite_cmd->add_option("--iterations", suite_options.iterations,
                        "Override the iteration count");
  suite_cmd->add_option("--threshold", threshold,
                        "Stable-crossing threshold in meters");
  suite_cmd->add_option("--out", suite_options.out_dir, "Output directory");
  suite_cmd->add_option("--emit", suite_options.emit,
                        "Comma-separated artifacts: csv,svg,summary");
  suite_cmd->add_option("--measurement-source",
                        suite_options.measurement_source, "direct or signal");

  CLI::App* presets_cmd =
      app.add_subcommand("presets", "List built-in scenarios");

  std::string validate_ref;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "Parse and validate a configuration without running");
  validate_cmd->add_option("--scenario", validate_ref,
                           "Preset name or configuration file path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (run_cmd->parsed()) return cmd_run(run_options, run_seed);
  if (suite_cmd->parsed()) return cmd_suite(suite_options, seeds_spec, threshold);
  if (presets_cmd->parsed()) return cmd_presets();
  if (validate_cmd->parsed()) return cmd_validate(validate_ref);
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SingularityError& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRunFailure;
  } catch (const NumericError& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRunFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
