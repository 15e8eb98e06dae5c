#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tdoa/model.hpp"
#include "tdoa/signal.hpp"

namespace tdoa {

// Either a uniform (diag, offdiag) pattern or a full M x M matrix.
struct CovarianceSpec {
  double diag = 0.4;
  double offdiag = 0.1;
  std::optional<Eigen::MatrixXd> matrix;

  Eigen::MatrixXd build(int m) const;
};

enum class MeasurementSource { direct_noise, signal_frontend };

struct Scenario {
  std::string id = "custom";
  ReceiverSet receivers;
  Vec2 true_position;
  CovarianceSpec covariance;
  std::optional<Vec2> initial_position;  // defaults to the receiver centroid
  int iterations = 300;
  MeasurementSource measurement_source = MeasurementSource::direct_noise;
  std::optional<SignalParams> signal;
  double noise_scale = 1.0;          // scales the measurement noise draw
  bool resample_measurements = false;  // redraw the noise every iteration

  Vec2 start() const;
  SignalParams signal_params() const { return signal.value_or(SignalParams{}); }
};

// Throws InvalidArgumentError / CovarianceError on invariant violations.
void validate_scenario(const Scenario& scenario);

// Measurement draw: values = g(true_position) + noise_scale * L * u with
// L the Cholesky factor of the covariance and u standard normal.
MeasurementSet generate_measurements(const Scenario& scenario,
                                     std::mt19937_64& rng);

std::vector<std::string> preset_names();
Scenario preset_by_name(const std::string& name);  // InvalidArgumentError if unknown

}  // namespace tdoa
