#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lrv {

enum class Model { M1, M2, M3, M4 };

Model parse_model(std::string_view name);
std::string to_string(Model model);

struct DgpSpec {
  Model model = Model::M1;
  Eigen::Index T = 200;
  double delta = 0.0;  // zero under the null
  std::uint64_t seed = 0;
};

struct SimulatedRegression {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;  // column 0 is the intercept
  Eigen::VectorXd errors;
  std::vector<std::string> warnings;
};

// M1: y = delta + x + e, x ~ N(1,1), e AR(1) with a = 0.4, Var(u) = 0.5.
// M2: y = delta x + e, x ~ N(1,1), e AR(1) with a = 0.4, Var(u) = 1.
// M3: y = delta x + e, x_t = 1 + 0.6 x_{t-1} + u_X, e segmented locally stationary.
// M4: y_t = 1 + x_{t-1} + delta x_{t-1} 1{t > 0.7T} + e_t, x ~ N(1, 1.2),
//     e AR(1) with a = 0.3; row t of X is (1, x_{t-1}).
SimulatedRegression simulate(const DgpSpec& spec);
SimulatedRegression gen_m1(Eigen::Index T, double delta, std::uint64_t seed);
SimulatedRegression gen_m2(Eigen::Index T, double delta, std::uint64_t seed);
SimulatedRegression gen_m3(Eigen::Index T, double delta, std::uint64_t seed);
SimulatedRegression gen_m4(Eigen::Index T, double delta, std::uint64_t seed);

// Coefficient index tested in each model and its null value; M4 is the
// forecast-breakdown design and has no coefficient test.
Eigen::Index tested_coefficient(Model model);
double null_value(Model model);

// In-sample share of the forecast-breakdown design (T_m = 0.4 T).
inline constexpr double kGrInSampleShare = 0.4;
inline constexpr double kGrBreakFraction = 0.7;

struct RhoOverride {
  Eigen::Index startIndex;  // 1-based, inclusive
  Eigen::Index endIndex;    // 1-based, inclusive
  double rho;
};

// e_t = rho_t e_{t-1} + sigma(t/T) z_t with rho_t = rho(t/T) unless t falls in
// an override window.
struct SlsAr1Spec {
  std::function<double(double)> rho;
  std::function<double(double)> sigma;
  std::vector<RhoOverride> breaks;
};

inline constexpr int kBurnIn = 200;

// Starts from the stationary law at u = 0 and discards kBurnIn draws.
Eigen::VectorXd sls_ar1_path(const SlsAr1Spec& spec, Eigen::Index T, std::uint64_t seed);

// AR coefficient of the M3 errors outside the near-unit-root window.
double m3_rho(double u);
// Near-unit-root window of M3: t in (4T/5 + 1, 4T/5 + h).
RhoOverride m3_override(Eigen::Index T);

// Writes t,y,x...,e as CSV.
void write_paths_csv(std::ostream& out, const SimulatedRegression& sim);

}  // namespace lrv
