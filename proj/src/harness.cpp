#include "lrv/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include "lrv/errors.hpp"
#include "lrv/parallel.hpp"
#include "lrv/seeds.hpp"

namespace lrv {

namespace {

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + " '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + " '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

EstimatorSpec with_bandwidth(EstimatorSpec spec, const std::string& bandwidth) {
  if (bandwidth == "joint" || bandwidth == "joint-plugin") {
    spec.bandwidth = BandwidthRule::JointPlugin;
  } else if (bandwidth == "joint-unscaled") {
    spec.bandwidth = BandwidthRule::JointPluginUnscaled;
  } else if (bandwidth == "nw94" || bandwidth == "newey-west") {
    spec.bandwidth = BandwidthRule::NeweyWest;
  } else if (bandwidth == "andrews") {
    spec.bandwidth = BandwidthRule::Andrews;
  } else if (bandwidth == "full") {
    spec.bandwidth = BandwidthRule::FullSample;
  } else if (bandwidth == "default") {
    spec.bandwidth = spec.kind == EstimatorKind::Ewc ? BandwidthRule::CosineBasis : BandwidthRule::JointPlugin;
  } else if (bandwidth.starts_with("fixed:")) {
    std::string pair = bandwidth.substr(6);
    std::replace(pair.begin(), pair.end(), ',', ':');
    return with_bandwidth(std::move(spec), pair);
  } else {
    const auto parts = split(bandwidth, ':');
    if (spec.kind == EstimatorKind::Ewc) {
      if (parts.size() != 1) throw ConfigError("EWC takes a single basis count");
      spec.bandwidth = BandwidthRule::CosineBasis;
      spec.ewcBasis = static_cast<int>(parse_int(parts[0], "basis count"));
      return spec;
    }
    if (parts.empty() || parts.size() > 2) throw ConfigError("unknown bandwidth '" + bandwidth + "'");
    spec.bandwidth = BandwidthRule::Fixed;
    spec.fixedB1 = parse_double(parts[0], "bandwidth");
    if (parts.size() == 2) spec.fixedB2 = parse_double(parts[1], "bandwidth");
    if (spec.kind == EstimatorKind::DkHac && parts.size() != 2) {
      throw ConfigError("double-kernel estimator needs b1:b2");
    }
  }
  if (spec.kind == EstimatorKind::Ewc && spec.bandwidth != BandwidthRule::CosineBasis) {
    throw ConfigError("EWC only takes a basis count");
  }
  if (spec.kind == EstimatorKind::DkHac &&
      (spec.bandwidth == BandwidthRule::NeweyWest || spec.bandwidth == BandwidthRule::Andrews ||
       spec.bandwidth == BandwidthRule::FullSample)) {
    throw ConfigError("bandwidth rule '" + bandwidth + "' applies to classical HAC only");
  }
  if (spec.kind == EstimatorKind::ClassicalHac &&
      (spec.bandwidth == BandwidthRule::JointPlugin || spec.bandwidth == BandwidthRule::JointPluginUnscaled)) {
    throw ConfigError("bandwidth rule '" + bandwidth + "' applies to the double-kernel estimator only");
  }
  return spec;
}

EstimatorSpec parse_estimator(const std::string& text) {
  EstimatorSpec spec;
  spec.name = text;
  if (text == "dk-hac") return spec;
  if (text == "dk-hac-unscaled") {
    spec.bandwidth = BandwidthRule::JointPluginUnscaled;
    return spec;
  }
  if (text == "nw") {
    spec.kind = EstimatorKind::ClassicalHac;
    spec.k1 = K1Kind::Bartlett;
    spec.bandwidth = BandwidthRule::NeweyWest;
    return spec;
  }
  if (text == "hac-qs") {
    spec.kind = EstimatorKind::ClassicalHac;
    spec.bandwidth = BandwidthRule::Andrews;
    return spec;
  }
  if (text == "kvb") {
    spec.kind = EstimatorKind::ClassicalHac;
    spec.k1 = K1Kind::Bartlett;
    spec.bandwidth = BandwidthRule::FullSample;
    spec.cv = CriticalRule::FixedB;
    spec.dofAdjust = false;
    return spec;
  }
  if (text == "ewc") {
    spec.kind = EstimatorKind::Ewc;
    spec.bandwidth = BandwidthRule::CosineBasis;
    spec.cv = CriticalRule::Student;
    return spec;
  }

  const auto parts = split(text, '/');
  if (parts.size() != 3) throw ConfigError("unknown estimator '" + text + "'");
  if (parts[0] == "dk") {
    spec.kind = EstimatorKind::DkHac;
  } else if (parts[0] == "ewc") {
    spec.kind = EstimatorKind::Ewc;
  } else {
    spec.kind = EstimatorKind::ClassicalHac;
    spec.k1 = parse_k1(parts[0]);
  }
  spec = with_bandwidth(spec, parts[1]);
  if (parts[2] == "normal") {
    spec.cv = CriticalRule::Normal;
  } else if (parts[2] == "student") {
    if (spec.kind != EstimatorKind::Ewc) throw ConfigError("Student-t reference requires EWC");
    spec.cv = CriticalRule::Student;
  } else if (parts[2] == "fixedb") {
    if (spec.kind != EstimatorKind::ClassicalHac ||
        (spec.bandwidth != BandwidthRule::FullSample && spec.bandwidth != BandwidthRule::Fixed)) {
      throw ConfigError("fixed-b reference requires classical HAC with a full or fixed bandwidth");
    }
    spec.cv = CriticalRule::FixedB;
    spec.dofAdjust = false;
  } else {
    throw ConfigError("unknown critical-value rule '" + parts[2] + "'");
  }
  return spec;
}

LrvChoice estimate_with(const ScoreMatrix& V, const EstimatorSpec& spec, std::span<const double> weights) {
  const Eigen::Index T = V.T();
  const double Td = static_cast<double>(T);
  LrvChoice out;
  switch (spec.kind) {
    case EstimatorKind::DkHac: {
      SmoothingPlan plan;
      plan.nT = default_block_length(T);
      plan.dofAdjust = spec.dofAdjust;
      if (spec.bandwidth == BandwidthRule::Fixed) {
        plan.b1 = spec.fixedB1;
        plan.b2 = spec.fixedB2;
      } else {
        PluginOptions options;
        options.scaleCurvature = spec.bandwidth != BandwidthRule::JointPluginUnscaled;
        const JointSelection sel = select_joint_bandwidths(V, options);
        plan.b1 = sel.bandwidths.b1;
        plan.b2 = sel.bandwidths.b2;
        out.fallback = sel.bandwidths.fallback;
      }
      out.estimate = dk_hac(V, plan, spec.k1);
      out.b1 = plan.b1;
      out.b2 = plan.b2;
      break;
    }
    case EstimatorKind::ClassicalHac: {
      double b1 = 0.0;
      switch (spec.bandwidth) {
        case BandwidthRule::NeweyWest:
          b1 = nw_bandwidth(V, weights).b1;
          break;
        case BandwidthRule::Andrews: {
          const int q = static_cast<int>(k1_characteristics(spec.k1).q);
          const AndrewsBandwidth ab = andrews_bandwidth(andrews_alpha(V, q, weights), q, spec.k1, T);
          b1 = ab.b1;
          out.fallback = ab.degenerate;
          break;
        }
        case BandwidthRule::FullSample:
          b1 = 1.0 / Td;
          break;
        case BandwidthRule::Fixed:
          b1 = spec.fixedB1;
          break;
        default:
          throw ConfigError("bandwidth rule does not apply to classical HAC");
      }
      out.estimate = classical_hac(V, b1, spec.k1, spec.dofAdjust);
      out.b1 = b1;
      break;
    }
    case EstimatorKind::Ewc: {
      const int B = spec.ewcBasis > 0 ? spec.ewcBasis : ewc_default_basis(T);
      out.estimate = ewc(V, B);
      out.b1 = static_cast<double>(B);
      break;
    }
  }
  switch (spec.cv) {
    case CriticalRule::Normal:
      out.reference = NormalDist{};
      break;
    case CriticalRule::Student:
      if (spec.kind != EstimatorKind::Ewc) throw ConfigError("Student-t reference requires EWC");
      out.reference = StudentDist{static_cast<double>(out.estimate.df)};
      break;
    case CriticalRule::FixedB: {
      double b = 1.0;
      if (spec.bandwidth == BandwidthRule::Fixed) {
        b = std::min(1.0, 1.0 / (spec.fixedB1 * Td));
      } else if (spec.bandwidth != BandwidthRule::FullSample) {
        throw ConfigError("fixed-b reference requires a full or fixed bandwidth");
      }
      out.reference = FixedBDist{b, spec.k1};
      break;
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (models.empty() || estimators.empty() || Ts.empty() || deltas.empty()) {
    throw ConfigError("models, estimators, Ts and deltas must be non-empty");
  }
  if (nReps < 100) throw ConfigError("nReps must be at least 100");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (threads < 1) throw ConfigError("threads must be positive");
  for (const auto& e : estimators) parse_estimator(e);
  for (const auto T : Ts) {
    if (T < 20) throw ConfigError("sample size T must be at least 20");
  }
}

ExperimentConfig config_from(const KeyValueConfig& kv, ExperimentConfig cfg) {
  if (kv.has("models")) {
    cfg.models.clear();
    for (const auto& m : kv.list("models")) cfg.models.push_back(parse_model(m));
  }
  if (kv.has("estimators")) cfg.estimators = kv.list("estimators");
  if (kv.has("Ts")) {
    cfg.Ts.clear();
    for (const auto& t : kv.list("Ts")) cfg.Ts.push_back(static_cast<Eigen::Index>(parse_int(t, "T")));
  }
  if (kv.has("deltas")) {
    cfg.deltas.clear();
    for (const auto& d : kv.list("deltas")) cfg.deltas.push_back(parse_double(d, "delta"));
  }
  if (kv.has("nReps")) cfg.nReps = static_cast<int>(parse_int(kv.get("nReps"), "nReps"));
  if (kv.has("alpha")) cfg.alpha = parse_double(kv.get("alpha"), "alpha");
  if (kv.has("baseSeed")) cfg.baseSeed = static_cast<std::uint64_t>(parse_int(kv.get("baseSeed"), "baseSeed"));
  if (kv.has("threads")) {
    const long long t = parse_int(kv.get("threads"), "threads");
    if (t < 1) throw ConfigError("threads must be positive");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (kv.has("outPath")) cfg.outPath = kv.get("outPath");
  if (kv.has("cvCache")) cfg.cvCache = kv.get("cvCache");
  if (kv.has("fixedBPaths")) cfg.fixedB.nPaths = static_cast<int>(parse_int(kv.get("fixedBPaths"), "fixedBPaths"));
  if (kv.has("fixedBGrid")) cfg.fixedB.gridN = static_cast<int>(parse_int(kv.get("fixedBGrid"), "fixedBGrid"));
  if (kv.has("grVariance")) cfg.grVariance = parse_gr_variance(kv.get("grVariance"));
  for (const auto& [key, value] : kv.entries()) {
    static const char* known[] = {"models", "estimators", "Ts", "deltas", "nReps", "alpha", "baseSeed",
                                  "threads", "outPath", "cvCache", "fixedBPaths", "fixedBGrid", "grVariance"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key '" + key + "'");
  }
  return cfg;
}

std::uint64_t cell_seed(std::uint64_t baseSeed, const CellKey& key) {
  std::uint64_t s = seeds::combine(baseSeed, std::string_view(to_string(key.model)));
  s = seeds::combine(s, std::string_view(key.estimator));
  s = seeds::combine(s, static_cast<std::uint64_t>(key.T));
  return seeds::combine(s, key.delta);
}

ReplicationOutcome run_replication(const CellKey& key, const EstimatorSpec& spec, std::uint64_t seed,
                                   const ReplicationSettings& settings) {
  const SimulatedRegression sim = simulate(DgpSpec{key.model, key.T, key.delta, seed});
  ReplicationOutcome out;
  if (key.model == Model::M4) {
    const auto Tm = static_cast<Eigen::Index>(std::llround(kGrInSampleShare * static_cast<double>(key.T)));
    const GrInputs g = surprise_losses(sim.y, sim.X, Tm);
    const LrvChoice choice = estimate_with(surprise_loss_scores(g), spec);
    out.statistic = gr_statistic(g, choice.estimate, settings.grVariance);
    out.critical = critical_value(choice.reference, settings.alpha, settings.fixedB);
    out.degenerate = choice.fallback || choice.estimate.psdRepaired;
  } else {
    const RegressionFit fit = ols_fit(sim.y, sim.X);
    std::vector<double> weights(static_cast<std::size_t>(fit.scores.p()), 1.0);
    if (weights.size() > 1) weights[0] = 0.0;  // the intercept score does not drive lag selection
    const LrvChoice choice = estimate_with(fit.scores, spec, weights);
    const TStatistic t =
        t_statistic_detail(fit, choice.estimate, tested_coefficient(key.model), null_value(key.model));
    out.statistic = t.value;
    out.critical = critical_value(choice.reference, settings.alpha, settings.fixedB);
    out.degenerate = choice.fallback || choice.estimate.psdRepaired || t.psdRepaired;
  }
  out.reject = std::abs(out.statistic) > out.critical;
  return out;
}

ExperimentResult run_cell(const CellKey& key, int nReps, std::uint64_t baseSeed, unsigned threads,
                          const ReplicationSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const EstimatorSpec spec = parse_estimator(key.estimator);
  const std::uint64_t seed = cell_seed(baseSeed, key);
  std::vector<std::optional<ReplicationOutcome>> outcomes(static_cast<std::size_t>(nReps));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    try {
      outcomes[i] = run_replication(key, spec, seeds::substream(seed, i), settings);
    } catch (const NumericError&) {
    } catch (const DomainError&) {
    }
  });

  ExperimentResult r;
  r.key = key;
  int rejections = 0;
  for (const auto& o : outcomes) {
    if (!o) {
      ++r.failedCount;
      continue;
    }
    ++r.nReps;
    rejections += o->reject ? 1 : 0;
    r.degenerateCount += o->degenerate ? 1 : 0;
  }
  if (100 * r.failedCount >= nReps) {
    throw NumericError(to_string(key.model) + "/" + key.estimator + "/T=" + std::to_string(key.T) + ": " +
                       std::to_string(r.failedCount) + " of " + std::to_string(nReps) + " replications failed");
  }
  r.rejectionRate = static_cast<double>(rejections) / static_cast<double>(r.nReps);
  r.mcse = std::sqrt(r.rejectionRate * (1.0 - r.rejectionRate) / static_cast<double>(r.nReps));
  r.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.cvCache.empty()) FixedBCache::global().load(cfg.cvCache);

  std::vector<ExperimentResult> stored;
  if (!cfg.outPath.empty() && std::filesystem::exists(cfg.outPath)) stored = read_results(cfg.outPath);

  std::vector<ExperimentResult> results;
  for (const Model model : cfg.models) {
    for (const auto& estimator : cfg.estimators) {
      for (const Eigen::Index T : cfg.Ts) {
        for (const double delta : cfg.deltas) {
          const CellKey key{model, estimator, T, delta};
          const auto found =
              std::find_if(stored.begin(), stored.end(), [&](const ExperimentResult& r) { return r.key == key; });
          if (found != stored.end()) {
            results.push_back(*found);
            continue;
          }
          results.push_back(
              run_cell(key, cfg.nReps, cfg.baseSeed, cfg.threads, {cfg.alpha, cfg.fixedB, cfg.grVariance}));
          stored.push_back(results.back());
          if (!cfg.outPath.empty()) write_results(cfg.outPath, stored);
          if (!cfg.cvCache.empty()) FixedBCache::global().save(cfg.cvCache);
        }
      }
    }
  }
  return results;
}

}  // namespace lrv
