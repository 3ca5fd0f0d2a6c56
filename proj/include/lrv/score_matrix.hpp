#pragma once

#include <Eigen/Dense>

namespace lrv {

// T x p matrix whose row t is the score observation V_t. Entries are finite,
// p >= 1 and T >= 2p.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(Eigen::MatrixXd data);

  const Eigen::MatrixXd& data() const noexcept { return data_; }
  Eigen::Index T() const noexcept { return data_.rows(); }
  Eigen::Index p() const noexcept { return data_.cols(); }
  auto row(Eigen::Index t) const { return data_.row(t); }
  auto col(Eigen::Index r) const { return data_.col(r); }

  ScoreMatrix scaled(double c) const { return ScoreMatrix(c * data_); }

 private:
  Eigen::MatrixXd data_;
};

// Normalization applied to the block sum in the block-averaged autocovariance.
enum class BlockNormalization {
  Display,  // n_T / (T - n_T)
  Proof,    // n_T / T
};

// Bandwidths and block length for the double-kernel estimator.
struct SmoothingPlan {
  double b1 = 0.1;
  double b2 = 0.2;
  Eigen::Index nT = 1;
  bool dofAdjust = true;
  BlockNormalization normalization = BlockNormalization::Display;

  // Checks b1, b2 in (0, 1], 1 <= nT < T and T * b2 >= 1. Throws ConfigError.
  void validate(Eigen::Index T) const;
};

// floor(T^0.66), the default block length; at least 1.
Eigen::Index default_block_length(Eigen::Index T);

}  // namespace lrv
