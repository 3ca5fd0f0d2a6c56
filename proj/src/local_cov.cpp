#include "lrv/local_cov.hpp"

#include <cstdlib>
#include <string>

#include "lrv/errors.hpp"

namespace lrv {

namespace {

void check_lag(const ScoreMatrix& V, Eigen::Index k) {
  if (std::abs(k) > V.T() - 1) {
    throw DomainError("lag " + std::to_string(k) + " outside [-(T-1), T-1] for T=" +
                      std::to_string(V.T()));
  }
}

double block_normalization(const SmoothingPlan& plan, Eigen::Index T) {
  const double n = static_cast<double>(plan.nT);
  return plan.normalization == BlockNormalization::Display ? n / (static_cast<double>(T) - n)
                                                           : n / static_cast<double>(T);
}

}  // namespace

Eigen::Index block_count(Eigen::Index T, Eigen::Index nT) {
  if (nT < 1 || nT >= T) throw ConfigError("block length must satisfy 1 <= nT < T");
  return (T - nT) / nT + 1;
}

Eigen::MatrixXd local_autocov(const ScoreMatrix& V, Eigen::Index r, Eigen::Index k, double b2,
                              Eigen::Index nT, K2Kind k2) {
  check_lag(V, k);
  const Eigen::Index T = V.T();
  if (r < 0 || r >= block_count(T, nT)) {
    throw DomainError("block index " + std::to_string(r) + " out of range");
  }
  const double Td = static_cast<double>(T);
  const double width = Td * b2;
  const double end = static_cast<double>((r + 1) * nT);
  const double half = static_cast<double>(k) / 2.0;

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(V.p(), V.p());
  if (k >= 0) {
    for (Eigen::Index s = k + 1; s <= T; ++s) {
      const double w = eval_k2(k2, (end - (static_cast<double>(s) - half)) / width);
      if (w == 0.0) continue;
      out.noalias() += w * V.row(s - 1).transpose() * V.row(s - k - 1);
    }
  } else {
    for (Eigen::Index s = -k + 1; s <= T; ++s) {
      const double w = eval_k2(k2, (end - (static_cast<double>(s) + half)) / width);
      if (w == 0.0) continue;
      out.noalias() += w * V.row(s + k - 1).transpose() * V.row(s - 1);
    }
  }
  return out / width;
}

Eigen::MatrixXd block_avg_autocov(const ScoreMatrix& V, Eigen::Index k, const SmoothingPlan& plan,
                                  K2Kind k2) {
  const Eigen::Index T = V.T();
  if (plan.nT >= T) throw ConfigError("block length nT must be smaller than T");
  const Eigen::Index blocks = block_count(T, plan.nT);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(V.p(), V.p());
  for (Eigen::Index r = 0; r < blocks; ++r) sum += local_autocov(V, r, k, plan.b2, plan.nT, k2);
  return block_normalization(plan, T) * sum;
}

Eigen::MatrixXd classical_autocov(const ScoreMatrix& V, Eigen::Index k) {
  check_lag(V, k);
  const Eigen::Index T = V.T();
  const Eigen::Index m = std::abs(k);
  const auto& X = V.data();
  // Rows m..T-1 against rows 0..T-1-m; negative lags are the transpose.
  Eigen::MatrixXd g = X.bottomRows(T - m).transpose() * X.topRows(T - m);
  g /= static_cast<double>(T);
  if (k < 0) return g.transpose();
  return g;
}

BlockAutocovEngine::BlockAutocovEngine(const ScoreMatrix& V, const SmoothingPlan& plan, K2Kind k2)
    : V_(V) {
  const Eigen::Index T = V.T();
  plan.validate(T);
  const Eigen::Index blocks = block_count(T, plan.nT);
  const double width = static_cast<double>(T) * plan.b2;
  const double scale = block_normalization(plan, T) / width;
  weights_.assign(static_cast<std::size_t>(2 * T + 1), 0.0);
  for (Eigen::Index m = 0; m <= 2 * T; ++m) {
    const double x = static_cast<double>(m) / 2.0;
    double acc = 0.0;
    for (Eigen::Index r = 0; r < blocks; ++r) {
      acc += eval_k2(k2, (static_cast<double>((r + 1) * plan.nT) - x) / width);
    }
    weights_[static_cast<std::size_t>(m)] = scale * acc;
  }
}

Eigen::MatrixXd BlockAutocovEngine::gamma(Eigen::Index k) const {
  const Eigen::Index T = V_.T();
  if (k < 0 || k >= T) throw DomainError("engine lag out of range");
  const Eigen::Index n = T - k;
  // Row i of the lead block is s = k + 1 + i, whose weight index is 2s - k.
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = weights_[static_cast<std::size_t>(k + 2 + 2 * i)];
  const auto& X = V_.data();
  if (X.cols() == 1) {
    const double g = (w.array() * X.col(0).tail(n).array() * X.col(0).head(n).array()).sum();
    return Eigen::MatrixXd::Constant(1, 1, g);
  }
  return (X.bottomRows(n).array().colwise() * w.array()).matrix().transpose() * X.topRows(n);
}

}  // namespace lrv
