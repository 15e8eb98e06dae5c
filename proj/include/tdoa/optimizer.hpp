#pragma once

#include <string>
#include <vector>

#include "tdoa/geometry.hpp"

namespace tdoa {

enum class Algorithm { sgd, sgd_momentum, rmsprop, adam, rmsprop_af };

// Canonical names: "SGD", "SGD+M", "RMSProp", "Adam", "RMSProp+AF".
std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);  // InvalidArgumentError
std::vector<Algorithm> all_algorithms();

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::sgd;
  double learning_rate = 0.01;    // mu
  double momentum = 0.9;          // alpha (SGD+M)
  double decay = 0.999;           // rho (RMSProp)
  double decay1 = 0.9;            // rho1 (Adam)
  double decay2 = 0.999;          // rho2 (Adam)
  double decay_threshold = 0.99;  // rho0 (RMSProp+AF)
  double smoothing = 1e-6;        // delta
  int buffer_size = 10;           // L (RMSProp+AF)
};

// Throws ConfigValidationError on range violations.
void validate_optimizer_config(const OptimizerConfig& config);

struct OptimizerState {
  Vec2 position;
  long iteration = 0;       // k, incremented once per step
  Vec2 velocity;            // SGD+M
  Vec2 accumulator;         // r (RMSProp, Adam, RMSProp+AF)
  Vec2 first_moment;        // Adam
  std::vector<double> buffer_x;  // squared gradient components (RMSProp+AF)
  std::vector<double> buffer_y;
  Vec2 current_rho;         // last adaptive decaying factor (RMSProp+AF)
};

OptimizerState make_state(const OptimizerConfig& config, Vec2 initial_position);

// 1-based circular index: k' = k - L*floor((k-1)/L), cycling 1..L.
int buffer_index(long k, int buffer_size);

// Per axis: gamma = (v_max - v_min) / (v_max + v_min + 1) over the buffer,
// then rho = max(rho0, gamma). The buffers start zeroed, so unwritten slots
// count as zero spread floor during the fill phase.
Vec2 adaptive_rho(const std::vector<double>& buffer_x,
                  const std::vector<double>& buffer_y, Vec2 rho0);

void sgd_step(OptimizerState& state, Vec2 gradient, const OptimizerConfig& config);
void sgd_momentum_step(OptimizerState& state, Vec2 gradient,
                       const OptimizerConfig& config);
void rmsprop_step(OptimizerState& state, Vec2 gradient,
                  const OptimizerConfig& config);
void adam_step(OptimizerState& state, Vec2 gradient,
               const OptimizerConfig& config);
void rmsprop_af_step(OptimizerState& state, Vec2 gradient,
                     const OptimizerConfig& config);

// Dispatches on config.algorithm. Throws NumericError on non-finite gradient.
void step(OptimizerState& state, Vec2 gradient, const OptimizerConfig& config);

}  // namespace tdoa
