#include "lrv/bandwidths.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "lrv/errors.hpp"

namespace lrv {

namespace {

constexpr double kPi = std::numbers::pi;

double clip_bandwidth(double b, Eigen::Index T) {
  return std::clamp(b, 1.0 / static_cast<double>(T), 1.0);
}

// Largest integer K with K^6 <= T.
Eigen::Index sixth_root_floor(Eigen::Index T) {
  auto K = static_cast<Eigen::Index>(std::floor(std::pow(static_cast<double>(T), 1.0 / 6.0)));
  auto pow6 = [](Eigen::Index v) { return v * v * v * v * v * v; };
  while (pow6(K + 1) <= T) ++K;
  while (K > 0 && pow6(K) > T) --K;
  return K;
}

double weight_or_one(std::span<const double> W, std::size_t r) { return W.empty() ? 1.0 : W[r]; }

std::vector<double> column(const ScoreMatrix& V, Eigen::Index r) {
  std::vector<double> x(static_cast<std::size_t>(V.T()));
  for (Eigen::Index t = 0; t < V.T(); ++t) x[static_cast<std::size_t>(t)] = V.data()(t, r);
  return x;
}

}  // namespace

std::vector<double> default_frequency_grid() { return {-kPi, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, kPi}; }

Ar1Window fit_ar1(std::span<const double> x, double aMax) {
  Ar1Window w;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    num += x[i] * x[i - 1];
    den += x[i - 1] * x[i - 1];
  }
  if (den == 0.0) {
    w.degenerate = true;
    return w;
  }
  w.a1 = std::clamp(num / den, -aMax, aMax);
  double ssr = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double e = x[i] - w.a1 * x[i - 1];
    ssr += e * e;
  }
  w.sigma = std::sqrt(ssr);
  return w;
}

LocalAr1Fits fit_local_ar1(const ScoreMatrix& V, Eigen::Index series, Eigen::Index n2, Eigen::Index n3,
                           double aMax) {
  const Eigen::Index T = V.T();
  if (series < 0 || series >= V.p()) throw ConfigError("series index out of range");
  if (n2 < 4 || n2 > T) throw ConfigError("AR(1) window length must satisfy 4 <= n2 <= T");
  if (n3 == 0) n3 = n2;
  if (n3 < 1 || n3 > T) throw ConfigError("block step n3 must satisfy 1 <= n3 <= T");

  const std::vector<double> x = column(V, series);
  LocalAr1Fits fits;
  fits.n2 = n2;
  fits.n3 = n3;
  const Eigen::Index blocks = T / n3;
  fits.windows.reserve(static_cast<std::size_t>(blocks));
  for (Eigen::Index j = 0; j < blocks; ++j) {
    const Eigen::Index start = j * n3 + 1;
    const Eigen::Index last = std::max(start, n2);           // 1-based window end
    const Eigen::Index first = std::max<Eigen::Index>(2, last - n2 + 1);  // first regressand
    // Observations first-1 .. last (1-based) feed the pairs (x_j, x_{j-1}).
    std::span<const double> window(x.data() + (first - 2), static_cast<std::size_t>(last - first + 2));
    Ar1Window w = fit_ar1(window, aMax);
    w.uIndex = start;
    fits.windows.push_back(w);
  }
  return fits;
}

double delta_121_analytic(double u, Eigen::Index k, std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("frequency grid is empty");
  using cd = std::complex<double>;
  const double a = 0.8 * (std::cos(1.5) + std::cos(4.0 * kPi * u));
  const double slope = 0.8 * (-4.0 * kPi * std::sin(4.0 * kPi * u));
  const double curvature = 0.8 * (-16.0 * kPi * kPi * std::cos(4.0 * kPi * u));
  cd acc(0.0, 0.0);
  for (const double omega : grid) {
    const cd e = std::exp(cd(0.0, -omega));
    const cd z = 1.0 + a * e;
    const cd first = (3.0 / kPi) * std::pow(z, -4) * slope * e;
    const cd second = -(1.0 / kPi) * std::pow(std::abs(z), -3.0) * curvature * e;
    acc += std::exp(cd(0.0, static_cast<double>(k) * omega)) * (first + second);
  }
  return acc.real() / static_cast<double>(grid.size());
}

double delta_bar_121(Eigen::Index T, Eigen::Index n3, std::span<const double> grid) {
  if (n3 < 1) throw ConfigError("n3 must be positive");
  const Eigen::Index K = sixth_root_floor(T);
  const double step = static_cast<double>(n3) / static_cast<double>(T);
  double total = 0.0;
  for (Eigen::Index k = -K; k <= K; ++k) {
    double inner = 0.0;
    for (Eigen::Index j = 0; j <= T / n3; ++j) {
      inner += delta_121_analytic(static_cast<double>(j) * step, k, grid);
    }
    total += step * inner;
  }
  return total;
}

PluginQuantities phi_hats(std::span<const LocalAr1Fits> fits, std::span<const double> deltaBar,
                          std::span<const double> W, Eigen::Index n3, Eigen::Index T, bool scaleCurvature) {
  if (fits.size() != deltaBar.size()) throw ConfigError("one curvature term per series is required");
  if (!W.empty() && W.size() != fits.size()) throw ConfigError("weight count differs from series count");
  const double step = static_cast<double>(n3) / static_cast<double>(T);

  PluginQuantities pq;
  pq.deltaBar121.assign(deltaBar.begin(), deltaBar.end());
  for (std::size_t r = 0; r < fits.size(); ++r) {
    double level = 0.0;      // block average of sigma^2 (1 - a)^{-2}
    double curvature = 0.0;  // block average of sigma^2 a (1 - a)^{-4}
    double innovation = 0.0; // block average of sigma^2
    for (const Ar1Window& w : fits[r].windows) {
      const double s2 = w.sigma * w.sigma;
      const double oneMinus = 1.0 - w.a1;
      level += s2 / (oneMinus * oneMinus);
      curvature += s2 * w.a1 / std::pow(oneMinus, 4);
      innovation += s2;
    }
    level *= step;
    curvature *= step;
    innovation *= step;
    if (level <= 0.0) {
      pq.zeroCurvature = true;
      continue;
    }
    const double wr = weight_or_one(W, r);
    const double delta = scaleCurvature ? deltaBar[r] * innovation : deltaBar[r];
    pq.phi11 += wr * delta * delta / (level * level);
    pq.phi12 += wr * (curvature / level) * (curvature / level);
  }
  pq.phi11 /= (4.0 * kPi) * (4.0 * kPi);
  pq.phi12 *= 36.0;
  if (pq.phi12 == 0.0 || pq.phi11 == 0.0) pq.zeroCurvature = true;
  pq.phi1 = pq.phi11 / std::pow(pq.phi12, 5);
  pq.phi2 = pq.phi12 / std::pow(pq.phi11, 5);
  return pq;
}

BandwidthPair joint_bandwidths(const PluginQuantities& pq, Eigen::Index T) {
  const double rate = std::pow(static_cast<double>(T), -1.0 / 6.0);
  BandwidthPair out;
  const bool usable = !pq.zeroCurvature && std::isfinite(pq.phi1) && std::isfinite(pq.phi2) &&
                      pq.phi1 > 0.0 && pq.phi2 > 0.0;
  if (!usable) {
    out.b1 = clip_bandwidth(0.46 * rate, T);
    out.b2 = clip_bandwidth(3.56 * rate, T);
    out.fallback = true;
    return out;
  }
  out.b1 = clip_bandwidth(0.46 * std::pow(pq.phi1, 1.0 / 24.0) * rate, T);
  out.b2 = clip_bandwidth(3.56 * std::pow(pq.phi2, 1.0 / 24.0) * rate, T);
  return out;
}

JointSelection select_joint_bandwidths(const ScoreMatrix& V, const PluginOptions& options) {
  const Eigen::Index T = V.T();
  JointSelection sel;
  sel.nT = options.n2 > 0 ? options.n2 : default_block_length(T);
  const Eigen::Index n3 = options.n3 > 0 ? options.n3 : sel.nT;
  const double bar = delta_bar_121(T, n3, options.frequencyGrid);
  std::vector<double> deltaBar(static_cast<std::size_t>(V.p()), bar);
  for (Eigen::Index r = 0; r < V.p(); ++r) {
    sel.fits.push_back(fit_local_ar1(V, r, sel.nT, n3, options.aMax));
  }
  sel.quantities = phi_hats(sel.fits, deltaBar, options.weights, n3, T, options.scaleCurvature);
  sel.bandwidths = joint_bandwidths(sel.quantities, T);
  return sel;
}

double andrews_alpha(const ScoreMatrix& V, int q, std::span<const double> W, double aMax) {
  if (q != 1 && q != 2) throw ConfigError("andrews_alpha supports q = 1 or q = 2");
  if (!W.empty() && static_cast<Eigen::Index>(W.size()) != V.p()) {
    throw ConfigError("weight count differs from series count");
  }
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index r = 0; r < V.p(); ++r) {
    const std::vector<double> x = column(V, r);
    const Ar1Window f = fit_ar1(x, aMax);
    const double wr = weight_or_one(W, static_cast<std::size_t>(r));
    const double s4 = std::pow(f.sigma, 4);
    const double a = f.a1;
    const double tail = q == 2 ? std::pow(1.0 - a, 8) : std::pow(1.0 - a, 6) * (1.0 + a) * (1.0 + a);
    num += wr * 4.0 * a * a * s4 / tail;
    den += wr * s4 / std::pow(1.0 - a, 4);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

AndrewsBandwidth andrews_bandwidth(double alpha, int q, K1Kind k1, Eigen::Index T) {
  const K1Characteristics c = k1_characteristics(k1);
  if (static_cast<double>(q) != c.q) throw ConfigError("q does not match the kernel's exponent");
  AndrewsBandwidth out;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    out.b1 = 1.0;
    out.degenerate = true;
    return out;
  }
  const double base = q * c.k1q * c.k1q * alpha * static_cast<double>(T) / c.l2norm;
  out.b1 = clip_bandwidth(std::pow(base, -1.0 / (2.0 * q + 1.0)), T);
  return out;
}

NeweyWestBandwidth nw_bandwidth(const ScoreMatrix& V, std::span<const double> weights) {
  const Eigen::Index T = V.T();
  if (!weights.empty() && static_cast<Eigen::Index>(weights.size()) != V.p()) {
    throw ConfigError("weight count differs from series count");
  }
  Eigen::VectorXd w = Eigen::VectorXd::Ones(V.p());
  for (std::size_t i = 0; i < weights.size(); ++i) w[static_cast<Eigen::Index>(i)] = weights[i];
  const Eigen::VectorXd z = V.data() * w;

  const auto pilot = std::min<Eigen::Index>(
      T - 1, static_cast<Eigen::Index>(std::floor(4.0 * std::pow(static_cast<double>(T) / 100.0, 2.0 / 9.0))));
  double s0 = 0.0;
  double s1 = 0.0;
  for (Eigen::Index j = 0; j <= pilot; ++j) {
    const double sigma = z.tail(T - j).dot(z.head(T - j)) / static_cast<double>(T);
    if (j == 0) {
      s0 += sigma;
    } else {
      s0 += 2.0 * sigma;
      s1 += 2.0 * static_cast<double>(j) * sigma;
    }
  }
  NeweyWestBandwidth out;
  if (s0 == 0.0 || !std::isfinite(s1 / s0)) return out;
  const double gamma = 1.1447 * std::pow((s1 / s0) * (s1 / s0), 1.0 / 3.0);
  out.lags = std::min<Eigen::Index>(
      T - 1, static_cast<Eigen::Index>(std::floor(gamma * std::pow(static_cast<double>(T), 1.0 / 3.0))));
  out.b1 = 1.0 / static_cast<double>(out.lags + 1);
  return out;
}

double asymptotic_remse(double pi1, double pi2, double pi3, double b1, double b2, double T) {
  const double bias = b1 * b1 * pi1 + b2 * b2 * pi2;
  return pi3 / (T * b1 * b2) + bias * bias;
}

BandwidthPair remse_minimizer(double pi1, double pi2, double pi3, double T) {
  if (!(pi1 > 0.0 && pi2 > 0.0 && pi3 > 0.0)) throw ConfigError("MSE constants must be positive");
  const double common = std::pow(T, -1.0 / 6.0) * std::pow(pi3 / 8.0, 1.0 / 6.0);
  BandwidthPair out;
  out.b1 = common * std::pow(pi2 / std::pow(pi1, 5), 1.0 / 12.0);
  out.b2 = common * std::pow(std::pow(pi2, 5) / pi1, -1.0 / 12.0);
  return out;
}

}  // namespace lrv
