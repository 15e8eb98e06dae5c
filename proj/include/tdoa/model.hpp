#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tdoa/geometry.hpp"

namespace tdoa {

struct ReceiverSet {
  std::vector<Vec2> positions;
  int count() const { return static_cast<int>(positions.size()); }
};

// Throws InvalidArgumentError unless N >= 3 and all positions are distinct.
void validate_receivers(const ReceiverSet& receivers);

struct PairIndex {
  int i = 0;  // 1-based, i < j
  int j = 0;
  int m = 0;  // 1-based lexicographic rank
};

// 1-based lexicographic rank of pair (i, j) among all i < j pairs of n receivers.
int pair_index(int i, int j, int n);

// All N(N-1)/2 pairs in lexicographic order, m = 1..M.
std::vector<PairIndex> all_pairs(int n);

// g(p, p_i, p_j) = ||p - p_i|| - ||p - p_j||.
double range_difference(Vec2 p, Vec2 p_i, Vec2 p_j);

// Stacked range differences for all pairs, component m-1 = pair of rank m.
Eigen::VectorXd predict(Vec2 p, const ReceiverSet& receivers);

// M x 2 matrix; row m-1 = unit(p - p_i) - unit(p - p_j) for the pair of rank m.
// Throws SingularityError if p is within the guard radius of any receiver.
Eigen::MatrixXd jacobian(Vec2 p, const ReceiverSet& receivers);

inline constexpr double kSingularityGuardRadius = 1e-9;  // meters

struct MeasurementSet {
  Eigen::VectorXd values;             // length M, meters
  Eigen::MatrixXd covariance;         // M x M, symmetric positive definite
  Eigen::MatrixXd covariance_inverse;
  Eigen::MatrixXd cholesky_factor;    // lower triangular, L * L^T = covariance
};

// Validates symmetry (1e-9) and positive definiteness, computes the Cholesky
// factor and the inverse. Throws CovarianceError on violation.
MeasurementSet make_measurement_set(Eigen::VectorXd values,
                                    Eigen::MatrixXd covariance);

struct CostModel {
  ReceiverSet receivers;
  MeasurementSet measurements;
};

// J(p) = (values - g(p))^T C^-1 (values - g(p)).
double cost(Vec2 p, const CostModel& model);

// grad J(p) = -2 * G(p)^T C^-1 (values - g(p)), with G the jacobian.
Vec2 gradient(Vec2 p, const CostModel& model);

}  // namespace tdoa
