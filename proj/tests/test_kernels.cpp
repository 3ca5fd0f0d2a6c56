#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lrv/errors.hpp"
#include "lrv/kernels.hpp"

using namespace lrv;
using boost::math::quadrature::gauss_kronrod;

namespace {

double integrate(auto f, double a, double b) { return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14); }

const K1Kind kAllK1[] = {K1Kind::QuadraticSpectral, K1Kind::Bartlett, K1Kind::Parzen, K1Kind::TukeyHanning,
                         K1Kind::Truncated};

}  // namespace

TEST_CASE("k1 point values") {
  CHECK(eval_k1(K1Kind::QuadraticSpectral, 0.0) == 1.0);
  CHECK(eval_k1(K1Kind::Bartlett, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  // closed form evaluated independently at x = 1
  CHECK(eval_k1(K1Kind::QuadraticSpectral, 1.0) == doctest::Approx(0.13786058167459359).epsilon(1e-14));
  CHECK(eval_k1(K1Kind::Parzen, 0.25) == doctest::Approx(1 - 6 * 0.0625 + 6 * 0.015625));
  CHECK(eval_k1(K1Kind::Parzen, 0.75) == doctest::Approx(2 * std::pow(0.25, 3)));
  CHECK(eval_k1(K1Kind::TukeyHanning, 0.5) == doctest::Approx(0.5));
  CHECK(eval_k1(K1Kind::Truncated, 0.999) == 1.0);
  CHECK(eval_k1(K1Kind::Truncated, 1.001) == 0.0);
  for (const K1Kind k : {K1Kind::Bartlett, K1Kind::Parzen, K1Kind::TukeyHanning}) {
    CHECK(eval_k1(k, 1.5) == 0.0);
  }
}

TEST_CASE("k1 class membership: unit at zero, symmetric, bounded") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (const K1Kind k : kAllK1) {
    CHECK(eval_k1(k, 0.0) == 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = unif(rng);
      CHECK(eval_k1(k, x) == eval_k1(k, -x));
    }
    for (double x = -20.0; x <= 20.0; x += 0.001) {
      REQUIRE(std::abs(eval_k1(k, x)) <= 1.0);
    }
  }
}

TEST_CASE("QS series branch agrees with the closed form") {
  const double sw = kernel_constants::kQsSeriesSwitch;
  CHECK(std::abs(eval_k1(K1Kind::QuadraticSpectral, 1e-5) - 1.0) < 1e-8);
  const double below = eval_k1(K1Kind::QuadraticSpectral, std::nextafter(sw, 0.0));
  const double above = eval_k1(K1Kind::QuadraticSpectral, sw);
  CHECK(std::abs(below - above) < 1e-10);
  // high-precision reference values of the closed form
  // the closed form at the switch point carries a cancellation error of order 1e-9
  CHECK(std::abs(eval_k1(K1Kind::QuadraticSpectral, 1e-4) - 0.999999985787769734569713342188) < 1e-8);
  CHECK(eval_k1(K1Kind::QuadraticSpectral, 2.5e-5) ==
        doctest::Approx(0.999999999111735604183756944778).epsilon(1e-13));
}

TEST_CASE("k2 values and moments") {
  CHECK(eval_k2(K2Kind::Parabolic, 0.5) == 1.5);
  CHECK(eval_k2(K2Kind::Parabolic, 0.0) == 0.0);
  CHECK(eval_k2(K2Kind::Parabolic, 1.2) == 0.0);
  CHECK(eval_k2(K2Kind::Parabolic, -0.1) == 0.0);
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    CHECK(eval_k2(K2Kind::Parabolic, x) == doctest::Approx(eval_k2(K2Kind::Parabolic, 1.0 - x)).epsilon(1e-14));
  }
  auto k2 = [](double x) { return eval_k2(K2Kind::Parabolic, x); };
  CHECK(std::abs(integrate(k2, 0.0, 1.0) - 1.0) < 1e-10);
  CHECK(std::abs(integrate([&](double x) { return x * x * k2(x); }, 0.0, 1.0) - 0.3) < 1e-10);
  CHECK(std::abs(integrate([&](double x) { return k2(x) * k2(x); }, 0.0, 1.0) - 1.2) < 1e-10);
}

TEST_CASE("k1 characteristics against quadrature and limits") {
  const auto bart = k1_characteristics(K1Kind::Bartlett);
  CHECK(bart.q == 1.0);
  CHECK(bart.k1q == 1.0);
  CHECK(bart.l2norm == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto parzen = k1_characteristics(K1Kind::Parzen);
  CHECK(parzen.q == 2.0);
  CHECK(parzen.k1q == 6.0);
  CHECK(parzen.l2norm == doctest::Approx(0.539285).epsilon(1e-6));

  for (const K1Kind k : {K1Kind::Bartlett, K1Kind::Parzen, K1Kind::TukeyHanning}) {
    const auto c = k1_characteristics(k);
    auto sq = [k](double x) { return eval_k1(k, x) * eval_k1(k, x); };
    const double l2 = 2.0 * (integrate(sq, 0.0, 0.5) + integrate(sq, 0.5, 1.0));
    CHECK(std::abs(l2 - c.l2norm) < 1e-10);
    const double x = 1e-4;
    CHECK((1.0 - eval_k1(k, x)) / std::pow(x, c.q) == doctest::Approx(c.k1q).epsilon(1e-3));
  }

  const auto qs = k1_characteristics(K1Kind::QuadraticSpectral);
  CHECK(qs.q == 2.0);
  CHECK(qs.k1q == doctest::Approx(18.0 * std::numbers::pi * std::numbers::pi / 125.0).epsilon(1e-15));
  // 1 - K(x) = k1q x^2 - (6 pi / 5)^4 x^4 / 280 + ...
  const double x = 1e-2;
  const double z = 6.0 * std::numbers::pi * x / 5.0;
  CHECK((1.0 - eval_k1(K1Kind::QuadraticSpectral, x) - std::pow(z, 4) / 280.0 * -1.0) / (x * x) ==
        doctest::Approx(qs.k1q).epsilon(1e-6));
  boost::math::quadrature::exp_sinh<double> tail;
  auto sq = [](double t) { return std::pow(eval_k1(K1Kind::QuadraticSpectral, t), 2); };
  double head = 0.0;
  for (int a = 0; a < 50; ++a) head += integrate(sq, a, a + 1.0);
  const double rest = tail.integrate(sq, 50.0, std::numeric_limits<double>::infinity());
  CHECK(2.0 * (head + rest) == doctest::Approx(qs.l2norm).epsilon(1e-8));

  CHECK_THROWS_AS(k1_characteristics(K1Kind::Truncated), NoFiniteSmoothness);
  CHECK_THROWS_AS(k1_characteristics(K1Kind::Truncated), ConfigError);
}

TEST_CASE("kernel names round-trip") {
  for (const K1Kind k : kAllK1) CHECK(parse_k1(to_string(k)) == k);
  CHECK(parse_k1("qs") == K1Kind::QuadraticSpectral);
  CHECK(parse_k1("tukey-hanning") == K1Kind::TukeyHanning);
  CHECK(parse_k2("parabolic") == K2Kind::Parabolic);
  CHECK_THROWS_AS(parse_k1("gaussian"), ConfigError);
  CHECK_THROWS_AS(parse_k2("flat"), ConfigError);
}
