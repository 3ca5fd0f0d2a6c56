#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "lrv/kernels.hpp"
#include "lrv/score_matrix.hpp"

namespace lrv {

enum class EstimatorKind { DkHac, ClassicalHac, Ewc };

std::string to_string(EstimatorKind kind);

// A long-run variance estimate together with how it was produced.
struct LrvEstimate {
  Eigen::MatrixXd J;  // symmetric p x p
  EstimatorKind kind = EstimatorKind::DkHac;
  std::optional<SmoothingPlan> plan;  // double-kernel estimator only
  double lagBandwidth = 0.0;          // b1 for either HAC family
  int df = 0;                         // equivalent degrees of freedom (EWC)
  bool psdRepaired = false;
  double minEig = 0.0;  // smallest eigenvalue before any repair
};

// Double-kernel HAC:
//   J = [T/(T-p)] sum_{|k|<T} K1(b1 k) Gamma(k),
// Gamma(k) the block-averaged local autocovariance. Lags whose weight is below
// 1e-12 in magnitude are skipped. Output is symmetrized.
LrvEstimate dk_hac(const ScoreMatrix& V, const SmoothingPlan& plan,
                   K1Kind k1 = K1Kind::QuadraticSpectral, K2Kind k2 = K2Kind::Parabolic);

// Classical kernel HAC, J = [T/(T-p)] sum_k K1(b1 k) Gamma_Cla(k).
LrvEstimate classical_hac(const ScoreMatrix& V, double b1, K1Kind k1, bool dofAdjust = true);

// Equal-weighted cosine estimator with B basis functions; df = B.
LrvEstimate ewc(const ScoreMatrix& V, int B);

// max(1, floor(0.4 T^{2/3})).
int ewc_default_basis(Eigen::Index T);

// Clips eigenvalues of est.J at `floor`. Records the original smallest eigenvalue.
LrvEstimate psd_project(const LrvEstimate& est, double floor);

}  // namespace lrv
