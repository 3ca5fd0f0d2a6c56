#include "lrv/score_matrix.hpp"

#include <cmath>
#include <string>

#include "lrv/errors.hpp"

namespace lrv {

ScoreMatrix::ScoreMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.cols() < 1) throw ConfigError("score matrix needs at least one column");
  if (data_.rows() < 2 * data_.cols()) {
    throw ConfigError("score matrix needs T >= 2p (T=" + std::to_string(data_.rows()) +
                      ", p=" + std::to_string(data_.cols()) + ")");
  }
  if (!data_.allFinite()) throw ConfigError("score matrix contains non-finite entries");
}

void SmoothingPlan::validate(Eigen::Index T) const {
  if (!(b1 > 0.0 && b1 <= 1.0)) throw ConfigError("lag bandwidth b1 must lie in (0, 1]");
  if (!(b2 > 0.0 && b2 <= 1.0)) throw ConfigError("time bandwidth b2 must lie in (0, 1]");
  if (nT < 1 || nT >= T) {
    throw ConfigError("block length must satisfy 1 <= nT < T (nT=" + std::to_string(nT) +
                      ", T=" + std::to_string(T) + ")");
  }
  if (static_cast<double>(T) * b2 < 1.0) throw ConfigError("time window T*b2 holds no observation");
}

Eigen::Index default_block_length(Eigen::Index T) {
  const auto n = static_cast<Eigen::Index>(std::floor(std::pow(static_cast<double>(T), 0.66)));
  return n < 1 ? 1 : n;
}

}  // namespace lrv
