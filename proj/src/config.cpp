#include "tdoa/config.hpp"

#include <json.hpp>

#include "tdoa/errors.hpp"

namespace tdoa {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const char* where,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : object.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigParseError(std::string("unknown key \"") + key + "\" in " +
                             where);
    }
  }
}

double require_number(const json& j, const char* field) {
  if (!j.is_number()) {
    throw ConfigParseError(std::string(field) + " must be a number");
  }
  return j.get<double>();
}

int require_int(const json& j, const char* field) {
  if (!j.is_number_integer()) {
    throw ConfigParseError(std::string(field) + " must be an integer");
  }
  return j.get<int>();
}

bool require_bool(const json& j, const char* field) {
  if (!j.is_boolean()) {
    throw ConfigParseError(std::string(field) + " must be a boolean");
  }
  return j.get<bool>();
}

std::string require_string(const json& j, const char* field) {
  if (!j.is_string()) {
    throw ConfigParseError(std::string(field) + " must be a string");
  }
  return j.get<std::string>();
}

Vec2 require_point(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigParseError(std::string(field) +
                           " must be a two-element numeric array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CovarianceSpec parse_covariance(const json& j) {
  if (!j.is_object()) {
    throw ConfigParseError("covariance must be an object");
  }
  CovarianceSpec spec;
  if (j.contains("matrix")) {
    reject_unknown_keys(j, "covariance", {"matrix"});
    const json& rows = j["matrix"];
    if (!rows.is_array() || rows.empty()) {
      throw ConfigParseError("covariance.matrix must be a nonempty array");
    }
    const auto n = rows.size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (!rows[r].is_array() || rows[r].size() != n) {
        throw ConfigParseError("covariance.matrix must be square");
      }
      for (std::size_t c = 0; c < n; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            require_number(rows[r][c], "covariance.matrix entry");
      }
    }
    spec.matrix = std::move(m);
    return spec;
  }
  reject_unknown_keys(j, "covariance", {"diag", "offdiag"});
  if (j.contains("diag")) spec.diag = require_number(j["diag"], "covariance.diag");
  if (j.contains("offdiag")) {
    spec.offdiag = require_number(j["offdiag"], "covariance.offdiag");
  }
  return spec;
}

SignalParams parse_signal(const json& j) {
  if (!j.is_object()) {
    throw ConfigParseError("signal must be an object");
  }
  reject_unknown_keys(j, "signal",
                      {"sample_rate", "num_samples", "noise_stddev",
                       "propagation_speed", "waveform_kind", "subsample_peak"});
  SignalParams p;
  if (j.contains("sample_rate")) {
    p.sample_rate = require_number(j["sample_rate"], "signal.sample_rate");
  }
  if (j.contains("num_samples")) {
    p.num_samples = require_int(j["num_samples"], "signal.num_samples");
  }
  if (j.contains("noise_stddev")) {
    p.noise_stddev = require_number(j["noise_stddev"], "signal.noise_stddev");
  }
  if (j.contains("propagation_speed")) {
    p.propagation_speed =
        require_number(j["propagation_speed"], "signal.propagation_speed");
  }
  if (j.contains("waveform_kind")) {
    const std::string kind = require_string(j["waveform_kind"], "signal.waveform_kind");
    if (kind == "impulse") {
      p.waveform_kind = WaveformKind::impulse;
    } else if (kind == "band-limited") {
      p.waveform_kind = WaveformKind::band_limited;
    } else {
      throw ConfigValidationError("signal.waveform_kind must be \"impulse\" or "
                                  "\"band-limited\", got \"" + kind + "\"");
    }
  }
  if (j.contains("subsample_peak")) {
    p.subsample_peak = require_bool(j["subsample_peak"], "signal.subsample_peak");
  }
  return p;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) {
    throw ConfigParseError("scenario must be an object");
  }
  reject_unknown_keys(j, "scenario",
                      {"name", "id", "receivers", "true_position", "covariance",
                       "initial_position", "iterations", "measurement_source",
                       "signal", "noise_scale", "resample_measurements"});
  Scenario s;
  if (j.contains("name")) {
    s = preset_by_name(require_string(j["name"], "scenario.name"));
  } else {
    if (!j.contains("receivers") || !j.contains("true_position")) {
      throw ConfigParseError(
          "scenario needs receivers and true_position (or a preset name)");
    }
  }
  if (j.contains("id")) s.id = require_string(j["id"], "scenario.id");
  if (j.contains("receivers")) {
    const json& arr = j["receivers"];
    if (!arr.is_array()) {
      throw ConfigParseError("scenario.receivers must be an array of points");
    }
    s.receivers.positions.clear();
    for (const auto& p : arr) {
      s.receivers.positions.push_back(require_point(p, "scenario.receivers entry"));
    }
  }
  if (j.contains("true_position")) {
    s.true_position = require_point(j["true_position"], "scenario.true_position");
  }
  if (j.contains("covariance")) s.covariance = parse_covariance(j["covariance"]);
  if (j.contains("initial_position")) {
    s.initial_position =
        require_point(j["initial_position"], "scenario.initial_position");
  }
  if (j.contains("iterations")) {
    s.iterations = require_int(j["iterations"], "scenario.iterations");
  }
  if (j.contains("measurement_source")) {
    const std::string src =
        require_string(j["measurement_source"], "scenario.measurement_source");
    if (src == "direct-noise") {
      s.measurement_source = MeasurementSource::direct_noise;
    } else if (src == "signal-frontend") {
      s.measurement_source = MeasurementSource::signal_frontend;
    } else {
      throw ConfigValidationError(
          "scenario.measurement_source must be \"direct-noise\" or "
          "\"signal-frontend\", got \"" + src + "\"");
    }
  }
  if (j.contains("signal")) s.signal = parse_signal(j["signal"]);
  if (j.contains("noise_scale")) {
    s.noise_scale = require_number(j["noise_scale"], "scenario.noise_scale");
  }
  if (j.contains("resample_measurements")) {
    s.resample_measurements =
        require_bool(j["resample_measurements"], "scenario.resample_measurements");
  }
  return s;
}

OptimizerConfig parse_optimizer(const json& j, std::size_t index) {
  const std::string where = "optimizers[" + std::to_string(index) + "]";
  if (!j.is_object()) {
    throw ConfigParseError(where + " must be an object");
  }
  reject_unknown_keys(j, where.c_str(),
                      {"algorithm", "learning_rate", "momentum", "decay",
                       "decay1", "decay2", "decay_threshold", "smoothing",
                       "buffer_size"});
  if (!j.contains("algorithm")) {
    throw ConfigParseError(where + " needs an algorithm");
  }
  OptimizerConfig c;
  try {
    c.algorithm = algorithm_from_name(require_string(j["algorithm"], "algorithm"));
  } catch (const InvalidArgumentError& e) {
    throw ConfigValidationError(where + ": " + e.what());
  }
  if (j.contains("learning_rate")) {
    c.learning_rate = require_number(j["learning_rate"], "learning_rate");
  }
  if (j.contains("momentum")) c.momentum = require_number(j["momentum"], "momentum");
  if (j.contains("decay")) c.decay = require_number(j["decay"], "decay");
  if (j.contains("decay1")) c.decay1 = require_number(j["decay1"], "decay1");
  if (j.contains("decay2")) c.decay2 = require_number(j["decay2"], "decay2");
  if (j.contains("decay_threshold")) {
    c.decay_threshold = require_number(j["decay_threshold"], "decay_threshold");
  }
  if (j.contains("smoothing")) c.smoothing = require_number(j["smoothing"], "smoothing");
  if (j.contains("buffer_size")) {
    c.buffer_size = require_int(j["buffer_size"], "buffer_size");
  }
  return c;
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(e.what());
  }
  if (!doc.is_object()) {
    throw ConfigParseError("configuration document must be a JSON object");
  }
  reject_unknown_keys(doc, "the document root", {"scenario", "optimizers"});
  if (!doc.contains("scenario")) {
    throw ConfigParseError("configuration needs a scenario");
  }
  ParsedConfig parsed;
  parsed.scenario = parse_scenario(doc["scenario"]);
  if (doc.contains("optimizers")) {
    const json& arr = doc["optimizers"];
    if (!arr.is_array() || arr.empty()) {
      throw ConfigParseError("optimizers must be a nonempty array");
    }
    for (std::size_t idx = 0; idx < arr.size(); ++idx) {
      parsed.optimizers.push_back(parse_optimizer(arr[idx], idx));
    }
  } else {
    for (Algorithm a : all_algorithms()) {
      OptimizerConfig c;
      c.algorithm = a;
      parsed.optimizers.push_back(c);
    }
  }

  try {
    validate_scenario(parsed.scenario);
    for (const OptimizerConfig& c : parsed.optimizers) {
      validate_optimizer_config(c);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw ConfigValidationError(e.what());
  }
  return parsed;
}

std::string serialize_config(const ParsedConfig& config) {
  const Scenario& s = config.scenario;
  json scenario;
  scenario["id"] = s.id;
  json receivers = json::array();
  for (const Vec2& p : s.receivers.positions) receivers.push_back(point_json(p));
  scenario["receivers"] = receivers;
  scenario["true_position"] = point_json(s.true_position);
  if (s.covariance.matrix.has_value()) {
    const Eigen::MatrixXd& m = *s.covariance.matrix;
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    scenario["covariance"] = json{{"matrix", rows}};
  } else {
    scenario["covariance"] =
        json{{"diag", s.covariance.diag}, {"offdiag", s.covariance.offdiag}};
  }
  if (s.initial_position.has_value()) {
    scenario["initial_position"] = point_json(*s.initial_position);
  }
  scenario["iterations"] = s.iterations;
  scenario["measurement_source"] =
      s.measurement_source == MeasurementSource::direct_noise ? "direct-noise"
                                                              : "signal-frontend";
  if (s.signal.has_value()) {
    const SignalParams& p = *s.signal;
    scenario["signal"] = json{
        {"sample_rate", p.sample_rate},
        {"num_samples", p.num_samples},
        {"noise_stddev", p.noise_stddev},
        {"propagation_speed", p.propagation_speed},
        {"waveform_kind",
         p.waveform_kind == WaveformKind::impulse ? "impulse" : "band-limited"},
        {"subsample_peak", p.subsample_peak}};
  }
  scenario["noise_scale"] = s.noise_scale;
  scenario["resample_measurements"] = s.resample_measurements;

  json optimizers = json::array();
  for (const OptimizerConfig& c : config.optimizers) {
    optimizers.push_back(json{{"algorithm", algorithm_name(c.algorithm)},
                              {"learning_rate", c.learning_rate},
                              {"momentum", c.momentum},
                              {"decay", c.decay},
                              {"decay1", c.decay1},
                              {"decay2", c.decay2},
                              {"decay_threshold", c.decay_threshold},
                              {"smoothing", c.smoothing},
                              {"buffer_size", c.buffer_size}});
  }
  const json doc = json{{"scenario", scenario}, {"optimizers", optimizers}};
  return doc.dump(2) + "\n";
}

}  // namespace tdoa
