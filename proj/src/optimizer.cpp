#include "tdoa/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "tdoa/errors.hpp"

namespace tdoa {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::sgd: return "SGD";
    case Algorithm::sgd_momentum: return "SGD+M";
    case Algorithm::rmsprop: return "RMSProp";
    case Algorithm::adam: return "Adam";
    case Algorithm::rmsprop_af: return "RMSProp+AF";
  }
  throw InvalidArgumentError("unknown algorithm tag");
}

Algorithm algorithm_from_name(const std::string& name) {
  for (Algorithm a : all_algorithms()) {
    if (algorithm_name(a) == name) return a;
  }
  throw InvalidArgumentError("unknown algorithm \"" + name +
                             "\" (expected SGD, SGD+M, RMSProp, Adam, or "
                             "RMSProp+AF)");
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::sgd, Algorithm::sgd_momentum, Algorithm::rmsprop,
          Algorithm::adam, Algorithm::rmsprop_af};
}

void validate_optimizer_config(const OptimizerConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    throw ConfigValidationError("learning_rate must be positive");
  }
  if (!(config.smoothing > 0.0)) {
    throw ConfigValidationError("smoothing must be positive");
  }
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
    throw ConfigValidationError("momentum must lie in [0, 1)");
  }
  if (!(config.decay > 0.0 && config.decay < 1.0)) {
    throw ConfigValidationError("decay must lie in (0, 1)");
  }
  if (!(config.decay1 > 0.0 && config.decay1 < 1.0)) {
    throw ConfigValidationError("decay1 must lie in (0, 1)");
  }
  if (!(config.decay2 > 0.0 && config.decay2 < 1.0)) {
    throw ConfigValidationError("decay2 must lie in (0, 1)");
  }
  if (!(config.decay_threshold > 0.0 && config.decay_threshold < 1.0)) {
    throw ConfigValidationError("decay_threshold must lie in (0, 1)");
  }
  if (config.buffer_size < 1) {
    throw ConfigValidationError("buffer_size must be at least 1");
  }
}

OptimizerState make_state(const OptimizerConfig& config, Vec2 initial_position) {
  OptimizerState state;
  state.position = initial_position;
  state.current_rho = {config.decay_threshold, config.decay_threshold};
  if (config.algorithm == Algorithm::rmsprop_af) {
    state.buffer_x.assign(static_cast<std::size_t>(config.buffer_size), 0.0);
    state.buffer_y.assign(static_cast<std::size_t>(config.buffer_size), 0.0);
  }
  return state;
}

int buffer_index(long k, int buffer_size) {
  if (k < 1 || buffer_size < 1) {
    throw InvalidArgumentError("buffer index needs k >= 1 and L >= 1");
  }
  return static_cast<int>(k - buffer_size * ((k - 1) / buffer_size));
}

namespace {

double axis_rho(const std::vector<double>& buffer, double rho0) {
  double v_max = buffer.front();
  double v_min = buffer.front();
  for (double v : buffer) {
    v_max = std::max(v_max, v);
    v_min = std::min(v_min, v);
  }
  const double gamma = (v_max - v_min) / (v_max + v_min + 1.0);
  return std::max(rho0, gamma);
}

void check_finite(Vec2 gradient) {
  if (!std::isfinite(gradient.x) || !std::isfinite(gradient.y)) {
    throw NumericError("non-finite gradient component");
  }
}

}  // namespace

Vec2 adaptive_rho(const std::vector<double>& buffer_x,
                  const std::vector<double>& buffer_y, Vec2 rho0) {
  if (buffer_x.empty() || buffer_y.empty()) {
    throw InvalidArgumentError("adaptive rho needs nonempty buffers");
  }
  return {axis_rho(buffer_x, rho0.x), axis_rho(buffer_y, rho0.y)};
}

void sgd_step(OptimizerState& state, Vec2 gradient,
              const OptimizerConfig& config) {
  check_finite(gradient);
  state.iteration += 1;
  state.position.x -= config.learning_rate * gradient.x;
  state.position.y -= config.learning_rate * gradient.y;
}

void sgd_momentum_step(OptimizerState& state, Vec2 gradient,
                       const OptimizerConfig& config) {
  check_finite(gradient);
  state.iteration += 1;
  state.velocity.x = config.momentum * state.velocity.x -
                     config.learning_rate * gradient.x;
  state.velocity.y = config.momentum * state.velocity.y -
                     config.learning_rate * gradient.y;
  state.position.x += state.velocity.x;
  state.position.y += state.velocity.y;
}

void rmsprop_step(OptimizerState& state, Vec2 gradient,
                  const OptimizerConfig& config) {
  check_finite(gradient);
  state.iteration += 1;
  const double rho = config.decay;
  state.accumulator.x = rho * state.accumulator.x +
                        (1.0 - rho) * (gradient.x * gradient.x);
  state.accumulator.y = rho * state.accumulator.y +
                        (1.0 - rho) * (gradient.y * gradient.y);
  state.position.x -= config.learning_rate /
                      (config.smoothing + std::sqrt(state.accumulator.x)) *
                      gradient.x;
  state.position.y -= config.learning_rate /
                      (config.smoothing + std::sqrt(state.accumulator.y)) *
                      gradient.y;
}

void adam_step(OptimizerState& state, Vec2 gradient,
               const OptimizerConfig& config) {
  check_finite(gradient);
  state.iteration += 1;
  const double k = static_cast<double>(state.iteration);
  state.first_moment.x = config.decay1 * state.first_moment.x +
                         (1.0 - config.decay1) * gradient.x;
  state.first_moment.y = config.decay1 * state.first_moment.y +
                         (1.0 - config.decay1) * gradient.y;
  state.accumulator.x = config.decay2 * state.accumulator.x +
                        (1.0 - config.decay2) * (gradient.x * gradient.x);
  state.accumulator.y = config.decay2 * state.accumulator.y +
                        (1.0 - config.decay2) * (gradient.y * gradient.y);
  const double m_hat_x = state.first_moment.x / (1.0 - std::pow(config.decay1, k));
  const double m_hat_y = state.first_moment.y / (1.0 - std::pow(config.decay1, k));
  const double r_hat_x = state.accumulator.x / (1.0 - std::pow(config.decay2, k));
  const double r_hat_y = state.accumulator.y / (1.0 - std::pow(config.decay2, k));
  state.position.x -=
      config.learning_rate * m_hat_x / (config.smoothing + std::sqrt(r_hat_x));
  state.position.y -=
      config.learning_rate * m_hat_y / (config.smoothing + std::sqrt(r_hat_y));
}

void rmsprop_af_step(OptimizerState& state, Vec2 gradient,
                     const OptimizerConfig& config) {
  check_finite(gradient);
  if (state.buffer_x.size() != static_cast<std::size_t>(config.buffer_size) ||
      state.buffer_y.size() != static_cast<std::size_t>(config.buffer_size)) {
    throw InvalidArgumentError("state buffers do not match the configured size");
  }
  state.iteration += 1;
  const int slot = buffer_index(state.iteration, config.buffer_size) - 1;
  state.buffer_x[static_cast<std::size_t>(slot)] = gradient.x * gradient.x;
  state.buffer_y[static_cast<std::size_t>(slot)] = gradient.y * gradient.y;
  state.current_rho =
      adaptive_rho(state.buffer_x, state.buffer_y,
                   {config.decay_threshold, config.decay_threshold});
  state.accumulator.x = state.current_rho.x * state.accumulator.x +
                        (1.0 - state.current_rho.x) * (gradient.x * gradient.x);
  state.accumulator.y = state.current_rho.y * state.accumulator.y +
                        (1.0 - state.current_rho.y) * (gradient.y * gradient.y);
  state.position.x -= config.learning_rate /
                      (config.smoothing + std::sqrt(state.accumulator.x)) *
                      gradient.x;
  state.position.y -= config.learning_rate /
                      (config.smoothing + std::sqrt(state.accumulator.y)) *
                      gradient.y;
}

void step(OptimizerState& state, Vec2 gradient, const OptimizerConfig& config) {
  switch (config.algorithm) {
    case Algorithm::sgd: sgd_step(state, gradient, config); return;
    case Algorithm::sgd_momentum: sgd_momentum_step(state, gradient, config); return;
    case Algorithm::rmsprop: rmsprop_step(state, gradient, config); return;
    case Algorithm::adam: adam_step(state, gradient, config); return;
    case Algorithm::rmsprop_af: rmsprop_af_step(state, gradient, config); return;
  }
  throw ConfigError("unknown algorithm tag");
}

}  // namespace tdoa
