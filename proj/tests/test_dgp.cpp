#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lrv/dgp.hpp"
#include "lrv/errors.hpp"
#include "lrv/seeds.hpp"

using namespace lrv;

namespace {

double variance(const Eigen::VectorXd& v) {
  const double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

double lag1_corr(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  const Eigen::VectorXd c = (v.array() - v.mean()).matrix();
  return c.tail(n - 1).dot(c.head(n - 1)) / c.squaredNorm();
}

double corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = (a.array() - a.mean()).matrix();
  const Eigen::VectorXd cb = (b.array() - b.mean()).matrix();
  return ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

}  // namespace

TEST_CASE("generators are deterministic") {
  for (const Model m : {Model::M1, Model::M2, Model::M3, Model::M4}) {
    const DgpSpec spec{m, 200, 0.0, 42};
    const auto a = simulate(spec);
    const auto b = simulate(spec);
    CHECK(a.y == b.y);
    CHECK(a.X == b.X);
    CHECK(a.errors == b.errors);
    CHECK(a.warnings.empty());
    std::ostringstream sa, sb;
    write_paths_csv(sa, a);
    write_paths_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(simulate(DgpSpec{m, 200, 0.0, 43}).y != a.y);
  }
}

TEST_CASE("regression structure of each design") {
  const auto m1 = gen_m1(400, 0.3, 1);
  CHECK((m1.X.col(0).array() == 1.0).all());
  CHECK((m1.y.array() - (0.3 + m1.X.col(1).array() + m1.errors.array())).abs().maxCoeff() < 1e-14);

  const auto m2 = gen_m2(400, 0.3, 1);
  CHECK((m2.y.array() - (0.3 * m2.X.col(1).array() + m2.errors.array())).abs().maxCoeff() < 1e-14);

  const auto m4 = gen_m4(400, 2.0, 1);
  for (Eigen::Index t = 1; t <= 400; ++t) {
    const double x = m4.X(t - 1, 1);
    const double expected = 1.0 + x + (t > 280 ? 2.0 * x : 0.0) + m4.errors[t - 1];
    CHECK(std::abs(m4.y[t - 1] - expected) < 1e-13);
  }
  CHECK(tested_coefficient(Model::M1) == 0);
  CHECK(tested_coefficient(Model::M2) == 1);
  CHECK(null_value(Model::M4) == 1.0);
  CHECK(null_value(Model::M3) == 0.0);
}

TEST_CASE("the alternative at delta = 0 is the null draw") {
  const auto null = gen_m2(200, 0.0, 9);
  const auto alt = gen_m2(200, 0.8, 9);
  CHECK(null.errors == alt.errors);
  CHECK(null.X == alt.X);
  CHECK(simulate(DgpSpec{Model::M2, 200, 0.0, 9}).y == null.y);
  CHECK(null.y == null.errors);
  const auto m4null = gen_m4(200, 0.0, 9);
  const auto m4alt = gen_m4(200, 1.0, 9);
  CHECK(m4null.y.head(140) == m4alt.y.head(140));
}

TEST_CASE("M1 errors have the AR(1) stationary variance") {
  const auto sim = gen_m1(100'000, 0.0, 2024);
  CHECK(std::abs(variance(sim.errors) - 0.5 / 0.84) < 0.01);
  CHECK(std::abs(lag1_corr(sim.errors) - 0.4) < 0.01);
  CHECK(std::abs(sim.X.col(1).mean() - 1.0) < 0.02);
  CHECK_FALSE(sim.warnings.empty());
}

TEST_CASE("segmented AR(1) paths") {
  const SlsAr1Spec ar{[](double) { return 0.4; }, [](double) { return 1.0; }, {}};
  const Eigen::VectorXd e = sls_ar1_path(ar, 100'000, 5);
  CHECK(std::abs(lag1_corr(e) - 0.4) < 0.01);
  CHECK(std::abs(variance(e) - 1.0 / 0.84) < 0.02);

  const SlsAr1Spec silent{[](double) { return 0.4; }, [](double) { return 0.0; }, {}};
  CHECK(sls_ar1_path(silent, 300, 5).isZero(0.0));

  // near-unit root inside [101, 150] inflates the local variance
  const SlsAr1Spec spiked{[](double) { return 0.0; }, [](double) { return 1.0; }, {{101, 150, 0.99}}};
  int inflated = 0;
  double inSum = 0.0, outSum = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Eigen::VectorXd p = sls_ar1_path(spiked, 200, 300 + s);
    const double in = variance(p.segment(100, 50));
    const double out = variance(p.head(100));
    inSum += in;
    outSum += out;
    if (in > out) ++inflated;
  }
  CHECK(inSum > outSum);
  CHECK(inflated >= 90);
}

TEST_CASE("M3 coefficient path") {
  double hi = -1.0, lo = 1.0;
  for (int i = 0; i <= 100'000; ++i) {
    const double r = m3_rho(i / 100'000.0);
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  CHECK(hi == doctest::Approx(0.8011).epsilon(1e-3));
  CHECK(lo == 0.0);
  const auto w200 = m3_override(200);
  CHECK(w200.startIndex == 162);
  CHECK(w200.endIndex == 169);
  CHECK(w200.rho == 0.99);
  const auto w400 = m3_override(400);
  CHECK(w400.startIndex == 322);
  CHECK(w400.endIndex == 349);

  const auto sim = gen_m3(200, 0.0, 3);
  CHECK(std::abs(sim.X.col(1).mean() - 2.5) < 0.5);
  CHECK_FALSE(gen_m3(800, 0.0, 3).warnings.empty());
}

TEST_CASE("independent replication streams") {
  const std::uint64_t base = 20240611;
  const auto a = gen_m1(10'000, 0.0, seeds::substream(base, 0));
  const auto b = gen_m1(10'000, 0.0, seeds::substream(base, 1));
  CHECK(std::abs(corr(a.errors, b.errors)) < 0.02);
  CHECK(std::abs(corr(a.X.col(1), b.X.col(1))) < 0.02);
  // errors and regressor come from separate streams within a replication
  CHECK(std::abs(corr(a.errors, a.X.col(1))) < 0.04);  // about four standard errors
}

TEST_CASE("model names and path dump") {
  CHECK(parse_model("M3") == Model::M3);
  CHECK(parse_model(to_string(Model::M4)) == Model::M4);
  CHECK_THROWS_AS(parse_model("M5"), ConfigError);
  std::ostringstream out;
  write_paths_csv(out, gen_m2(200, 0.0, 1));
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,y,x0,x1,e");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 200);
}
