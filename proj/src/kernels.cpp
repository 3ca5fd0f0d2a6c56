#include "lrv/kernels.hpp"

#include <cmath>
#include <numbers>

#include "lrv/errors.hpp"

namespace lrv {

namespace {

double quadratic_spectral(double x) {
  using kernel_constants::kQsSeriesSwitch;
  const double ax = std::abs(x);
  if (ax < kQsSeriesSwitch) {
    // 1 - z^2/10 + z^4/280 with z = 6 pi x / 5
    const double z2 = std::pow(6.0 * std::numbers::pi * ax / 5.0, 2);
    return 1.0 - z2 / 10.0 + z2 * z2 / 280.0;
  }
  // Long double keeps the sin(z)/z - cos(z) cancellation tolerable near the switch.
  const long double z = 6.0L * std::numbers::pi_v<long double> * ax / 5.0L;
  const long double r = 3.0L / (z * z) * (std::sin(z) / z - std::cos(z));
  return static_cast<double>(r);
}

double parzen(double x) {
  const double ax = std::abs(x);
  if (ax <= 0.5) return 1.0 - 6.0 * ax * ax + 6.0 * ax * ax * ax;
  if (ax <= 1.0) return 2.0 * std::pow(1.0 - ax, 3);
  return 0.0;
}

}  // namespace

double eval_k1(K1Kind kind, double x) {
  switch (kind) {
    case K1Kind::QuadraticSpectral:
      return quadratic_spectral(x);
    case K1Kind::Bartlett: {
      const double ax = std::abs(x);
      return ax <= 1.0 ? 1.0 - ax : 0.0;
    }
    case K1Kind::Parzen:
      return parzen(x);
    case K1Kind::TukeyHanning: {
      const double ax = std::abs(x);
      return ax <= 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * ax)) : 0.0;
    }
    case K1Kind::Truncated:
      return std::abs(x) <= 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double eval_k2(K2Kind kind, double x) {
  switch (kind) {
    case K2Kind::Parabolic:
      return (x >= 0.0 && x <= 1.0) ? 6.0 * x * (1.0 - x) : 0.0;
  }
  return 0.0;
}

K1Characteristics k1_characteristics(K1Kind kind) {
  namespace kc = kernel_constants;
  switch (kind) {
    case K1Kind::QuadraticSpectral:
      return {2.0, kc::kQsCurvature, kc::kQsL2};
    case K1Kind::Bartlett:
      return {1.0, 1.0, 2.0 / 3.0};
    case K1Kind::Parzen:
      return {2.0, 6.0, kc::kParzenL2};
    case K1Kind::TukeyHanning:
      return {2.0, kc::kTukeyHanningCurvature, kc::kTukeyHanningL2};
    case K1Kind::Truncated:
      throw NoFiniteSmoothness("truncated kernel has no finite characteristic exponent");
  }
  throw ConfigError("unknown K1 kernel");
}

K1Kind parse_k1(std::string_view name) {
  if (name == "qs") return K1Kind::QuadraticSpectral;
  if (name == "bartlett") return K1Kind::Bartlett;
  if (name == "parzen") return K1Kind::Parzen;
  if (name == "tukey-hanning") return K1Kind::TukeyHanning;
  if (name == "truncated") return K1Kind::Truncated;
  throw ConfigError("unknown lag kernel '" + std::string(name) + "'");
}

K2Kind parse_k2(std::string_view name) {
  if (name == "parabolic") return K2Kind::Parabolic;
  throw ConfigError("unknown time kernel '" + std::string(name) + "'");
}

std::string to_string(K1Kind kind) {
  switch (kind) {
    case K1Kind::QuadraticSpectral: return "qs";
    case K1Kind::Bartlett: return "bartlett";
    case K1Kind::Parzen: return "parzen";
    case K1Kind::TukeyHanning: return "tukey-hanning";
    case K1Kind::Truncated: return "truncated";
  }
  return "?";
}

std::string to_string(K2Kind kind) {
  switch (kind) {
    case K2Kind::Parabolic: return "parabolic";
  }
  return "?";
}

}  // namespace lrv
