#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lrv/kernels.hpp"
#include "lrv/score_matrix.hpp"

namespace lrv {

// Time-localized autocovariance c_T(r n_T / T, k): a K2-weighted average of
// V_s V'_{s-k} over a window of T*b2 observations ending at (r+1) n_T. Negative
// lags use the mirrored branch V_{s+k} V'_s. Throws DomainError for |k| >= T
// or a block index outside [0, floor((T - nT)/nT)].
Eigen::MatrixXd local_autocov(const ScoreMatrix& V, Eigen::Index r, Eigen::Index k, double b2,
                              Eigen::Index nT, K2Kind k2 = K2Kind::Parabolic);

// Block average of local autocovariances,
//   Gamma(k) = norm * sum_{r=0}^{floor((T-nT)/nT)} c_T(r nT / T, k),
// with norm = nT/(T-nT) (display) or nT/T (proof). Throws ConfigError if nT >= T.
Eigen::MatrixXd block_avg_autocov(const ScoreMatrix& V, Eigen::Index k, const SmoothingPlan& plan,
                                  K2Kind k2 = K2Kind::Parabolic);

// Full-sample autocovariance T^{-1} sum_t V_t V'_{t-k}.
Eigen::MatrixXd classical_autocov(const ScoreMatrix& V, Eigen::Index k);

// Number of blocks summed in the block average: floor((T - nT) / nT) + 1.
Eigen::Index block_count(Eigen::Index T, Eigen::Index nT);

// Evaluates Gamma(k) for many lags with one pass over the data per lag.
//
// The combined K2 weight attached to V_s V'_{s-k} depends on s and k only
// through s - k/2, so the sum over blocks is tabulated once on the half-integer
// grid and each lag then costs O(T p^2). Gamma(-k) = Gamma(k)' exactly.
class BlockAutocovEngine {
 public:
  BlockAutocovEngine(const ScoreMatrix& V, const SmoothingPlan& plan, K2Kind k2 = K2Kind::Parabolic);

  // Gamma(k) for 0 <= k < T.
  Eigen::MatrixXd gamma(Eigen::Index k) const;

  // Combined weight (including the 1/(T b2) and block normalization) at s - k/2 = m/2.
  double weight_at_half_index(Eigen::Index m) const { return weights_[static_cast<std::size_t>(m)]; }

 private:
  const ScoreMatrix& V_;
  std::vector<double> weights_;  // indexed by 2s - k in [0, 2T]
};

}  // namespace lrv
