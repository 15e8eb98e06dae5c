#include "tdoa/scenario.hpp"

#include "tdoa/errors.hpp"

namespace tdoa {

Eigen::MatrixXd CovarianceSpec::build(int m) const {
  if (matrix.has_value()) {
    if (matrix->rows() != m || matrix->cols() != m) {
      throw CovarianceError("covariance matrix is " +
                            std::to_string(matrix->rows()) + "x" +
                            std::to_string(matrix->cols()) + ", expected " +
                            std::to_string(m) + "x" + std::to_string(m));
    }
    return *matrix;
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(m, m, offdiag);
  c.diagonal().setConstant(diag);
  return c;
}

Vec2 Scenario::start() const {
  if (initial_position.has_value()) return *initial_position;
  Vec2 centroid;
  for (const Vec2& p : receivers.positions) centroid = centroid + p;
  return (1.0 / receivers.count()) * centroid;
}

void validate_scenario(const Scenario& scenario) {
  validate_receivers(scenario.receivers);
  if (scenario.iterations < 0) {
    throw InvalidArgumentError("iteration count must be nonnegative");
  }
  if (scenario.noise_scale < 0.0) {
    throw InvalidArgumentError("noise_scale must be nonnegative");
  }
  if (scenario.measurement_source == MeasurementSource::signal_frontend) {
    const SignalParams params = scenario.signal_params();
    if (params.sample_rate <= 0.0 || params.num_samples <= 0 ||
        params.noise_stddev < 0.0 || params.propagation_speed <= 0.0) {
      throw InvalidArgumentError("invalid signal parameters");
    }
  }
  const int m = scenario.receivers.count() * (scenario.receivers.count() - 1) / 2;
  // Surfaces covariance shape/definiteness problems at validation time.
  make_measurement_set(Eigen::VectorXd::Zero(m), scenario.covariance.build(m));
}

MeasurementSet generate_measurements(const Scenario& scenario,
                                     std::mt19937_64& rng) {
  const int m = scenario.receivers.count() * (scenario.receivers.count() - 1) / 2;
  MeasurementSet set = make_measurement_set(
      predict(scenario.true_position, scenario.receivers),
      scenario.covariance.build(m));
  Eigen::VectorXd u(m);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int idx = 0; idx < m; ++idx) u[idx] = unit(rng);
  set.values += scenario.noise_scale * (set.cholesky_factor * u);
  return set;
}

std::vector<std::string> preset_names() { return {"scenario1", "scenario2"}; }

namespace {

Scenario base_preset() {
  Scenario s;
  s.receivers.positions = {{0.0, 0.0}, {10.0, 60.0}, {70.0, 70.0}, {60.0, 10.0}};
  s.covariance.diag = 0.4;
  s.covariance.offdiag = 0.1;
  s.iterations = 300;
  s.measurement_source = MeasurementSource::direct_noise;
  return s;
}

}  // namespace

Scenario preset_by_name(const std::string& name) {
  if (name == "scenario1") {
    Scenario s = base_preset();
    s.id = "scenario1";
    s.true_position = {40.0, 80.0};
    s.initial_position = Vec2{44.0, 85.0};
    return s;
  }
  if (name == "scenario2") {
    Scenario s = base_preset();
    s.id = "scenario2";
    s.true_position = {75.0, 65.0};
    s.initial_position = Vec2{60.0, 50.0};
    return s;
  }
  throw InvalidArgumentError("unknown preset \"" + name +
                             "\" (expected scenario1 or scenario2)");
}

}  // namespace tdoa
