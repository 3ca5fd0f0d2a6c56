#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lrv/kernels.hpp"
#include "lrv/score_matrix.hpp"

namespace lrv {

// Frequencies at which the analytic curvature of the pilot model is averaged.
std::vector<double> default_frequency_grid();

struct Ar1Window {
  Eigen::Index uIndex = 0;  // 1-based block start j*n3 + 1
  double a1 = 0.0;
  double sigma = 0.0;  // root of the residual sum of squares
  bool degenerate = false;
};

// Rolling least-squares AR(1) fits for one score series.
struct LocalAr1Fits {
  std::vector<Ar1Window> windows;
  Eigen::Index n2 = 0;
  Eigen::Index n3 = 0;
};

// AR(1) least squares on a contiguous sample: a1 = sum x_j x_{j-1} / sum x_{j-1}^2,
// sigma = sqrt(sum (x_j - a1 x_{j-1})^2), a1 clipped to [-aMax, aMax].
Ar1Window fit_ar1(std::span<const double> x, double aMax);

// Left-aligned windows of n2 observations evaluated at block starts j*n3 + 1 for
// j = 0, ..., floor(T/n3) - 1. A window that would start before the sample uses
// the first n2 observations instead. n3 = 0 means n3 = n2.
LocalAr1Fits fit_local_ar1(const ScoreMatrix& V, Eigen::Index series, Eigen::Index n2,
                           Eigen::Index n3 = 0, double aMax = 0.97);

// Second time-derivative of the local autocovariance at lag k for the pilot
// model a(u) = 0.8 (cos 1.5 + cos 4 pi u), sigma = 1, averaged over the
// frequency grid. Returns the real part.
double delta_121_analytic(double u, Eigen::Index k, std::span<const double> grid);

// Riemann average over u = j n3 / T (j = 0..floor(T/n3)) summed over
// |k| <= floor(T^{1/6}). Depends on (T, n3, grid) only.
double delta_bar_121(Eigen::Index T, Eigen::Index n3, std::span<const double> grid);

struct PluginQuantities {
  double phi11 = 0.0;
  double phi12 = 0.0;
  double phi1 = 0.0;  // phi11 / phi12^5
  double phi2 = 0.0;  // phi12 / phi11^5
  std::vector<double> deltaBar121;
  bool zeroCurvature = false;
};

struct PluginOptions {
  double aMax = 0.97;
  std::vector<double> frequencyGrid = default_frequency_grid();
  // The pilot-model curvature is computed for unit innovation variance. When
  // set, it is rescaled by the block-averaged sigma^2 of each series so that
  // phi11 is invariant to the units of V.
  bool scaleCurvature = true;
  std::vector<double> weights;  // diagonal W; empty means all ones
  Eigen::Index n2 = 0;          // 0: floor(T^0.66)
  Eigen::Index n3 = 0;          // 0: same as n2
};

PluginQuantities phi_hats(std::span<const LocalAr1Fits> fits, std::span<const double> deltaBar,
                          std::span<const double> W, Eigen::Index n3, Eigen::Index T,
                          bool scaleCurvature = true);

struct BandwidthPair {
  double b1 = 0.0;
  double b2 = 0.0;
  bool fallback = false;  // unit plug-ins were used
};

// b1 = 0.46 phi1^{1/24} T^{-1/6}, b2 = 3.56 phi2^{1/24} T^{-1/6}, clipped to [1/T, 1].
BandwidthPair joint_bandwidths(const PluginQuantities& pq, Eigen::Index T);

struct JointSelection {
  BandwidthPair bandwidths;
  PluginQuantities quantities;
  std::vector<LocalAr1Fits> fits;
  Eigen::Index nT = 0;
};

// Full plug-in pipeline: local AR(1) fits, curvature term, phi-hats, bandwidths.
JointSelection select_joint_bandwidths(const ScoreMatrix& V, const PluginOptions& options = {});

// Andrews' alpha(q) from full-sample AR(1) fits, q in {1, 2}.
double andrews_alpha(const ScoreMatrix& V, int q, std::span<const double> W = {}, double aMax = 0.97);

struct AndrewsBandwidth {
  double b1 = 1.0;
  bool degenerate = false;  // alpha was zero; maximal smoothing returned
};

// b = (q K_{1,q}^2 alpha T / int K1^2)^{-1/(2q+1)} clipped to [1/T, 1].
// Throws ConfigError when q differs from the kernel's exponent.
AndrewsBandwidth andrews_bandwidth(double alpha, int q, K1Kind k1, Eigen::Index T);

struct NeweyWestBandwidth {
  Eigen::Index lags = 0;
  double b1 = 1.0;  // 1 / (lags + 1)
};

// Newey-West (1994) automatic lag selection for the Bartlett kernel with
// floor(4 (T/100)^{2/9}) pilot lags. `weights` combines the score columns
// (empty means all ones).
NeweyWestBandwidth nw_bandwidth(const ScoreMatrix& V, std::span<const double> weights = {});

// Leading terms of the relative MSE for q = 2:
//   pi3 / (T b1 b2) + (b1^2 pi1 + b2^2 pi2)^2.
double asymptotic_remse(double pi1, double pi2, double pi3, double b1, double b2, double T);

// Closed-form joint minimizer of asymptotic_remse for positive constants.
BandwidthPair remse_minimizer(double pi1, double pi2, double pi3, double T);

}  // namespace lrv
