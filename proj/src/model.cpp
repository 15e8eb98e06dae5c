#include "tdoa/model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "tdoa/errors.hpp"

namespace tdoa {

void validate_receivers(const ReceiverSet& receivers) {
  const int n = receivers.count();
  if (n < 3) {
    throw InvalidArgumentError("need at least three receivers, got " +
                               std::to_string(n));
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (receivers.positions[a].x == receivers.positions[b].x &&
          receivers.positions[a].y == receivers.positions[b].y) {
        throw InvalidArgumentError("receivers " + std::to_string(a + 1) +
                                   " and " + std::to_string(b + 1) +
                                   " share the same position");
      }
    }
  }
}

int pair_index(int i, int j, int n) {
  if (i < 1 || j <= i || j > n) {
    throw InvalidArgumentError("pair (" + std::to_string(i) + ", " +
                               std::to_string(j) + ") is not valid for " +
                               std::to_string(n) + " receivers");
  }
  // Pairs with first index < i come first, then (i, i+1) .. (i, j).
  return (i - 1) * n - (i - 1) * i / 2 + (j - i);
}

std::vector<PairIndex> all_pairs(int n) {
  std::vector<PairIndex> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  int m = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      pairs.push_back({i, j, ++m});
    }
  }
  return pairs;
}

double range_difference(Vec2 p, Vec2 p_i, Vec2 p_j) {
  return distance(p, p_i) - distance(p, p_j);
}

Eigen::VectorXd predict(Vec2 p, const ReceiverSet& receivers) {
  const auto pairs = all_pairs(receivers.count());
  Eigen::VectorXd g(static_cast<Eigen::Index>(pairs.size()));
  for (const auto& pair : pairs) {
    g[pair.m - 1] = range_difference(p, receivers.positions[pair.i - 1],
                                     receivers.positions[pair.j - 1]);
  }
  return g;
}

Eigen::MatrixXd jacobian(Vec2 p, const ReceiverSet& receivers) {
  const int n = receivers.count();
  std::vector<Vec2> units(n);
  for (int idx = 0; idx < n; ++idx) {
    const Vec2 d = p - receivers.positions[idx];
    const double r = norm(d);
    if (r < kSingularityGuardRadius) {
      throw SingularityError("position within " +
                             std::to_string(kSingularityGuardRadius) +
                             " m of receiver " + std::to_string(idx + 1));
    }
    units[idx] = (1.0 / r) * d;
  }
  const auto pairs = all_pairs(n);
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(pairs.size()), 2);
  for (const auto& pair : pairs) {
    const Vec2 row = units[pair.i - 1] - units[pair.j - 1];
    jac(pair.m - 1, 0) = row.x;
    jac(pair.m - 1, 1) = row.y;
  }
  return jac;
}

MeasurementSet make_measurement_set(Eigen::VectorXd values,
                                    Eigen::MatrixXd covariance) {
  const Eigen::Index m = covariance.rows();
  if (covariance.cols() != m) {
    throw CovarianceError("covariance must be square");
  }
  if (values.size() != m) {
    throw CovarianceError("covariance size " + std::to_string(m) +
                          " does not match " + std::to_string(values.size()) +
                          " measurements");
  }
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = r + 1; c < m; ++c) {
      if (std::abs(covariance(r, c) - covariance(c, r)) > 1e-9) {
        throw CovarianceError("covariance is not symmetric at (" +
                              std::to_string(r) + ", " + std::to_string(c) +
                              ")");
      }
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw CovarianceError("covariance is not positive definite");
  }
  MeasurementSet set;
  set.values = std::move(values);
  set.covariance = std::move(covariance);
  set.cholesky_factor = llt.matrixL();
  set.covariance_inverse =
      llt.solve(Eigen::MatrixXd::Identity(m, m));
  return set;
}

double cost(Vec2 p, const CostModel& model) {
  const Eigen::VectorXd residual =
      model.measurements.values - predict(p, model.receivers);
  return residual.dot(model.measurements.covariance_inverse * residual);
}

Vec2 gradient(Vec2 p, const CostModel& model) {
  const Eigen::VectorXd residual =
      model.measurements.values - predict(p, model.receivers);
  const Eigen::MatrixXd jac = jacobian(p, model.receivers);
  const Eigen::Vector2d grad =
      -2.0 * jac.transpose() * (model.measurements.covariance_inverse * residual);
  return {grad[0], grad[1]};
}

}  // namespace tdoa
