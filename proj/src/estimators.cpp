#include "lrv/estimators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lrv/errors.hpp"
#include "lrv/local_cov.hpp"

namespace lrv {

namespace {

constexpr double kNegligibleLagWeight = 1e-12;

double smallest_eigenvalue(const Eigen::MatrixXd& J) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& J) { return 0.5 * (J + J.transpose()); }

double dof_factor(const ScoreMatrix& V, bool enabled) {
  if (!enabled) return 1.0;
  return static_cast<double>(V.T()) / static_cast<double>(V.T() - V.p());
}

}  // namespace

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::DkHac: return "dk-hac";
    case EstimatorKind::ClassicalHac: return "classical-hac";
    case EstimatorKind::Ewc: return "ewc";
  }
  return "?";
}

namespace {

// Only called on failure: finds the first block whose local autocovariance is not finite.
std::string nonfinite_location(const ScoreMatrix& V, const SmoothingPlan& plan, K2Kind k2, Eigen::Index k) {
  const Eigen::Index blocks = block_count(V.T(), plan.nT);
  for (Eigen::Index r = 0; r < blocks; ++r) {
    if (!local_autocov(V, r, k, plan.b2, plan.nT, k2).allFinite()) {
      return "non-finite local autocovariance at lag k=" + std::to_string(k) + ", block r=" + std::to_string(r);
    }
  }
  return "non-finite block-averaged autocovariance at lag k=" + std::to_string(k);
}

}  // namespace

LrvEstimate dk_hac(const ScoreMatrix& V, const SmoothingPlan& plan, K1Kind k1, K2Kind k2) {
  const BlockAutocovEngine engine(V, plan, k2);
  const Eigen::Index T = V.T();
  Eigen::MatrixXd J = engine.gamma(0);
  for (Eigen::Index k = 1; k < T; ++k) {
    const double w = eval_k1(k1, plan.b1 * static_cast<double>(k));
    if (std::abs(w) < kNegligibleLagWeight) continue;
    const Eigen::MatrixXd g = engine.gamma(k);
    if (!g.allFinite()) throw NumericError(nonfinite_location(V, plan, k2, k));
    J += w * (g + g.transpose());
  }
  J *= dof_factor(V, plan.dofAdjust);
  if (!J.allFinite()) throw NumericError("non-finite DK-HAC estimate");

  LrvEstimate est;
  est.J = symmetrized(J);
  est.kind = EstimatorKind::DkHac;
  est.plan = plan;
  est.lagBandwidth = plan.b1;
  est.minEig = smallest_eigenvalue(est.J);
  return est;
}

LrvEstimate classical_hac(const ScoreMatrix& V, double b1, K1Kind k1, bool dofAdjust) {
  if (!(b1 > 0.0 && b1 <= 1.0)) throw ConfigError("lag bandwidth b1 must lie in (0, 1]");
  const Eigen::Index T = V.T();
  Eigen::MatrixXd J = classical_autocov(V, 0);
  for (Eigen::Index k = 1; k < T; ++k) {
    const double w = eval_k1(k1, b1 * static_cast<double>(k));
    if (std::abs(w) < kNegligibleLagWeight) continue;
    const Eigen::MatrixXd g = classical_autocov(V, k);
    J += w * (g + g.transpose());
  }
  J *= dof_factor(V, dofAdjust);
  if (!J.allFinite()) throw NumericError("non-finite classical HAC estimate");

  LrvEstimate est;
  est.J = symmetrized(J);
  est.kind = EstimatorKind::ClassicalHac;
  est.lagBandwidth = b1;
  est.minEig = smallest_eigenvalue(est.J);
  return est;
}

int ewc_default_basis(Eigen::Index T) {
  const int B = static_cast<int>(std::floor(0.4 * std::pow(static_cast<double>(T), 2.0 / 3.0)));
  return B < 1 ? 1 : B;
}

LrvEstimate ewc(const ScoreMatrix& V, int B) {
  const Eigen::Index T = V.T();
  if (B < 1 || B >= T) throw ConfigError("EWC basis count must satisfy 1 <= B < T");
  const double Td = static_cast<double>(T);
  const double scale = std::sqrt(2.0 / Td);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(V.p(), V.p());
  Eigen::VectorXd basis(T);
  for (int j = 1; j <= B; ++j) {
    for (Eigen::Index t = 0; t < T; ++t) {
      basis[t] = std::cos(std::numbers::pi * j * (static_cast<double>(t) + 0.5) / Td);
    }
    const Eigen::VectorXd lambda = scale * (V.data().transpose() * basis);
    J.noalias() += lambda * lambda.transpose();
  }
  J /= static_cast<double>(B);
  if (!J.allFinite()) throw NumericError("non-finite EWC estimate");

  LrvEstimate est;
  est.J = symmetrized(J);
  est.kind = EstimatorKind::Ewc;
  est.df = B;
  est.minEig = smallest_eigenvalue(est.J);
  return est;
}

LrvEstimate psd_project(const LrvEstimate& est, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(est.J));
  Eigen::VectorXd lambda = es.eigenvalues();
  LrvEstimate out = est;
  out.minEig = lambda.minCoeff();
  bool raised = false;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < floor) {
      lambda[i] = floor;
      raised = true;
    }
  }
  if (raised) {
    out.J = symmetrized(es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose());
    out.psdRepaired = true;
  }
  return out;
}

}  // namespace lrv
