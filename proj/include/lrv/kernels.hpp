#pragma once

#include <string>
#include <string_view>

namespace lrv {

// Lag-smoothing kernels: K(0) = 1, K(x) = K(-x), |K| <= 1.
enum class K1Kind { QuadraticSpectral, Bartlett, Parzen, TukeyHanning, Truncated };

// Time-smoothing kernels supported on [0, 1], symmetric about 1/2, unit mass.
enum class K2Kind { Parabolic };

struct K1Characteristics {
  double q;       // characteristic exponent
  double k1q;     // lim_{x->0} (1 - K(x)) / |x|^q
  double l2norm;  // integral of K(x)^2 over the real line
};

double eval_k1(K1Kind kind, double x);
double eval_k2(K2Kind kind, double x);

// Throws NoFiniteSmoothness for the truncated kernel.
K1Characteristics k1_characteristics(K1Kind kind);

// Names used on the command line and in config files ("qs", "bartlett",
// "parzen", "tukey-hanning", "truncated", "parabolic").
K1Kind parse_k1(std::string_view name);
K2Kind parse_k2(std::string_view name);
std::string to_string(K1Kind kind);
std::string to_string(K2Kind kind);

namespace kernel_constants {
// 18 pi^2 / 125, the curvature of the QS kernel at the origin.
inline constexpr double kQsCurvature = 1.4212230337568672;
inline constexpr double kQsL2 = 1.0;
inline constexpr double kParzenL2 = 151.0 / 280.0;
inline constexpr double kTukeyHanningCurvature = 2.4674011002723395;  // pi^2 / 4
inline constexpr double kTukeyHanningL2 = 0.75;
// Below this |x| the QS closed form loses precision and the Taylor branch is used.
inline constexpr double kQsSeriesSwitch = 1e-4;
}  // namespace kernel_constants

}  // namespace lrv
