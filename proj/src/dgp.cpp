#include "lrv/dgp.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "lrv/errors.hpp"
#include "lrv/seeds.hpp"

namespace lrv {

namespace {

std::vector<std::string> check_sample_size(Model model, Eigen::Index T) {
  std::vector<std::string> warnings;
  if (T != 200 && T != 400 && T != 800) {
    warnings.push_back(to_string(model) + ": T=" + std::to_string(T) + " is outside the tabulated designs");
  }
  return warnings;
}

SlsAr1Spec constant_ar1(double a, double sigma) {
  return SlsAr1Spec{[a](double) { return a; }, [sigma](double) { return sigma; }, {}};
}

Eigen::VectorXd iid_normal(Eigen::Index n, double mean, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(mean, sd);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
  return x;
}

std::uint64_t errors_seed(std::uint64_t seed) { return seeds::combine(seed, std::string_view("errors")); }
std::uint64_t regressor_seed(std::uint64_t seed) { return seeds::combine(seed, std::string_view("regressor")); }

Eigen::MatrixXd with_intercept(const Eigen::VectorXd& x) {
  Eigen::MatrixXd X(x.size(), 2);
  X.col(0).setOnes();
  X.col(1) = x;
  return X;
}

}  // namespace

Model parse_model(std::string_view name) {
  if (name == "M1" || name == "m1") return Model::M1;
  if (name == "M2" || name == "m2") return Model::M2;
  if (name == "M3" || name == "m3") return Model::M3;
  if (name == "M4" || name == "m4") return Model::M4;
  throw ConfigError("unknown model '" + std::string(name) + "'");
}

std::string to_string(Model model) {
  switch (model) {
    case Model::M1: return "M1";
    case Model::M2: return "M2";
    case Model::M3: return "M3";
    case Model::M4: return "M4";
  }
  return "?";
}

Eigen::Index tested_coefficient(Model model) { return model == Model::M1 ? 0 : 1; }

double null_value(Model model) {
  switch (model) {
    case Model::M1: return 0.0;
    case Model::M2: return 0.0;
    case Model::M3: return 0.0;
    case Model::M4: return 1.0;
  }
  return 0.0;
}

Eigen::VectorXd sls_ar1_path(const SlsAr1Spec& spec, Eigen::Index T, std::uint64_t seed) {
  if (T < 1) throw ConfigError("path length must be positive");
  for (const auto& o : spec.breaks) {
    if (!(std::abs(o.rho) < 1.0)) throw ConfigError("override AR coefficient must satisfy |rho| < 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const double rho0 = spec.rho(0.0);
  const double sigma0 = spec.sigma(0.0);
  if (!(std::abs(rho0) < 1.0)) throw ConfigError("AR coefficient must satisfy |rho(u)| < 1");
  double e = sigma0 / std::sqrt(1.0 - rho0 * rho0) * normal(rng);
  for (int i = 0; i < kBurnIn; ++i) e = rho0 * e + sigma0 * normal(rng);

  Eigen::VectorXd path(T);
  const double Td = static_cast<double>(T);
  for (Eigen::Index t = 1; t <= T; ++t) {
    const double u = static_cast<double>(t) / Td;
    double rho = spec.rho(u);
    bool overridden = false;
    for (const auto& o : spec.breaks) {
      if (t >= o.startIndex && t <= o.endIndex) {
        rho = o.rho;
        overridden = true;
      }
    }
    if (!overridden && !(std::abs(rho) < 1.0)) throw ConfigError("AR coefficient must satisfy |rho(u)| < 1");
    e = rho * e + spec.sigma(u) * normal(rng);
    path[t - 1] = e;
  }
  return path;
}

double m3_rho(double u) { return std::max(0.0, -std::cos(1.5 - std::cos(5.0 * u))); }

RhoOverride m3_override(Eigen::Index T) {
  const Eigen::Index h = T < 400 ? 10 : 30;
  const double lo = 4.0 * static_cast<double>(T) / 5.0 + 1.0;
  const double hi = 4.0 * static_cast<double>(T) / 5.0 + static_cast<double>(h);
  // Open interval (lo, hi) on the integers.
  return RhoOverride{static_cast<Eigen::Index>(std::floor(lo)) + 1,
                     static_cast<Eigen::Index>(std::ceil(hi)) - 1, 0.99};
}

SimulatedRegression gen_m1(Eigen::Index T, double delta, std::uint64_t seed) {
  SimulatedRegression s;
  s.warnings = check_sample_size(Model::M1, T);
  s.errors = sls_ar1_path(constant_ar1(0.4, std::sqrt(0.5)), T, errors_seed(seed));
  const Eigen::VectorXd x = iid_normal(T, 1.0, 1.0, regressor_seed(seed));
  s.X = with_intercept(x);
  s.y = (0.0 + delta) + 1.0 * x.array() + s.errors.array();
  return s;
}

SimulatedRegression gen_m2(Eigen::Index T, double delta, std::uint64_t seed) {
  SimulatedRegression s;
  s.warnings = check_sample_size(Model::M2, T);
  s.errors = sls_ar1_path(constant_ar1(0.4, 1.0), T, errors_seed(seed));
  const Eigen::VectorXd x = iid_normal(T, 1.0, 1.0, regressor_seed(seed));
  s.X = with_intercept(x);
  s.y = 0.0 + (0.0 + delta) * x.array() + s.errors.array();
  return s;
}

SimulatedRegression gen_m3(Eigen::Index T, double delta, std::uint64_t seed) {
  SimulatedRegression s;
  s.warnings = check_sample_size(Model::M3, T);
  if (T != 200 && T != 400) {
    s.warnings.push_back("M3: window length h is tabulated for T=200 and T=400 only");
  }
  SlsAr1Spec spec{m3_rho, [](double) { return 1.0; }, {m3_override(T)}};
  s.errors = sls_ar1_path(spec, T, errors_seed(seed));
  // x_t = 1 + 0.6 x_{t-1} + u_X: mean 2.5 plus a zero-mean AR(1) deviation.
  const Eigen::VectorXd dev = sls_ar1_path(constant_ar1(0.6, 1.0), T, regressor_seed(seed));
  const Eigen::VectorXd x = (dev.array() + 2.5).matrix();
  s.X = with_intercept(x);
  s.y = 0.0 + (0.0 + delta) * x.array() + s.errors.array();
  return s;
}

SimulatedRegression gen_m4(Eigen::Index T, double delta, std::uint64_t seed) {
  SimulatedRegression s;
  s.warnings = check_sample_size(Model::M4, T);
  s.errors = sls_ar1_path(constant_ar1(0.3, 1.0), T, errors_seed(seed));
  // x_0, ..., x_{T-1}; row t uses the lagged regressor.
  const Eigen::VectorXd xlag = iid_normal(T, 1.0, std::sqrt(1.2), regressor_seed(seed));
  s.X = with_intercept(xlag);
  s.y.resize(T);
  const double breakPoint = kGrBreakFraction * static_cast<double>(T);
  for (Eigen::Index t = 1; t <= T; ++t) {
    const double x = xlag[t - 1];
    const double shift = static_cast<double>(t) > breakPoint ? delta * x : 0.0;
    s.y[t - 1] = 1.0 + x + shift + s.errors[t - 1];
  }
  return s;
}

SimulatedRegression simulate(const DgpSpec& spec) {
  switch (spec.model) {
    case Model::M1: return gen_m1(spec.T, spec.delta, spec.seed);
    case Model::M2: return gen_m2(spec.T, spec.delta, spec.seed);
    case Model::M3: return gen_m3(spec.T, spec.delta, spec.seed);
    case Model::M4: return gen_m4(spec.T, spec.delta, spec.seed);
  }
  throw ConfigError("unknown model");
}

void write_paths_csv(std::ostream& out, const SimulatedRegression& sim) {
  out << "t,y";
  for (Eigen::Index j = 0; j < sim.X.cols(); ++j) out << ",x" << j;
  out << ",e\n";
  out.precision(17);
  for (Eigen::Index t = 0; t < sim.y.size(); ++t) {
    out << (t + 1) << ',' << sim.y[t];
    for (Eigen::Index j = 0; j < sim.X.cols(); ++j) out << ',' << sim.X(t, j);
    out << ',' << sim.errors[t] << '\n';
  }
}

}  // namespace lrv
