#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrv/bandwidths.hpp"
#include "lrv/config.hpp"
#include "lrv/dgp.hpp"
#include "lrv/estimators.hpp"
#include "lrv/har_tests.hpp"

namespace lrv {

enum class BandwidthRule {
  JointPlugin,          // double-kernel plug-in pair
  JointPluginUnscaled,  // same, curvature term left in unit-variance form
  NeweyWest,            // lag count from the 1994 rule
  Andrews,              // AR(1) plug-in for the kernel's exponent
  FullSample,           // all T lags (b = 1 in fixed-b units)
  Fixed,                // user supplied b1 (and b2)
  CosineBasis           // EWC default number of basis functions
};

enum class CriticalRule { Normal, Student, FixedB };

struct EstimatorSpec {
  std::string name;
  EstimatorKind kind = EstimatorKind::DkHac;
  K1Kind k1 = K1Kind::QuadraticSpectral;
  BandwidthRule bandwidth = BandwidthRule::JointPlugin;
  double fixedB1 = 0.0;
  double fixedB2 = 0.0;
  int ewcBasis = 0;  // 0: default rule
  CriticalRule cv = CriticalRule::Normal;
  bool dofAdjust = true;
};

// Presets: dk-hac, dk-hac-unscaled, nw, hac-qs, kvb, ewc. Otherwise
// "kind/bandwidth/cv" with kind in {dk, bartlett, qs, parzen, tukey-hanning, ewc},
// bandwidth in {joint, joint-unscaled, nw94, andrews, full, default, <b1>, <b1>:<b2>, fixed:<b1>,<b2>}
// and cv in {normal, student, fixedb}.
EstimatorSpec parse_estimator(const std::string& text);

// Bandwidth names accepted by the estimate command.
EstimatorSpec with_bandwidth(EstimatorSpec spec, const std::string& bandwidth);

struct LrvChoice {
  LrvEstimate estimate;
  NullDistribution reference;
  bool fallback = false;  // plug-in fell back or Andrews alpha was degenerate
  double b1 = 0.0;
  double b2 = 0.0;
};

// Bandwidth selection plus LRV estimation for a score matrix. `weights` feeds
// the classical bandwidth rules (empty means ones).
LrvChoice estimate_with(const ScoreMatrix& V, const EstimatorSpec& spec, std::span<const double> weights = {});

struct ExperimentConfig {
  std::vector<Model> models{Model::M1};
  std::vector<std::string> estimators{"dk-hac"};
  std::vector<Eigen::Index> Ts{200};
  std::vector<double> deltas{0.0};
  int nReps = 5000;
  double alpha = 0.05;
  std::uint64_t baseSeed = 20240611;
  unsigned threads = 1;
  std::string outPath;
  std::string cvCache;  // empty: in-memory only
  FixedBOracleParams fixedB;
  GrVariance grVariance = GrVariance::FixedScheme;

  void validate() const;
};

// Reads keys models, estimators, Ts, deltas, nReps, alpha, baseSeed, threads,
// outPath, cvCache, fixedBPaths, fixedBGrid, grVariance.
ExperimentConfig config_from(const KeyValueConfig& kv, ExperimentConfig defaults = {});

struct CellKey {
  Model model = Model::M1;
  std::string estimator;
  Eigen::Index T = 0;
  double delta = 0.0;

  bool operator==(const CellKey&) const = default;
};

struct ExperimentResult {
  CellKey key;
  double rejectionRate = 0.0;
  double mcse = 0.0;
  int nReps = 0;  // replications entering the rate
  int failedCount = 0;
  int degenerateCount = 0;  // PSD repairs and bandwidth fallbacks
  double wallTime = 0.0;    // seconds
};

std::uint64_t cell_seed(std::uint64_t baseSeed, const CellKey& key);

struct ReplicationOutcome {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
  bool degenerate = false;
};

// One replication of a cell: simulate, fit, estimate the LRV, test.
struct ReplicationSettings {
  double alpha = 0.05;
  FixedBOracleParams fixedB;
  GrVariance grVariance = GrVariance::FixedScheme;
};

ReplicationOutcome run_replication(const CellKey& key, const EstimatorSpec& spec, std::uint64_t seed,
                                   const ReplicationSettings& settings = {});

ExperimentResult run_cell(const CellKey& key, int nReps, std::uint64_t baseSeed, unsigned threads,
                          const ReplicationSettings& settings = {});

// Runs every cell of the grid in order. Cells already present in outPath are
// reused; the file is rewritten after each new cell.
std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg);

enum class TableFormat { Csv, Json, Markdown };
TableFormat parse_table_format(const std::string& name);

void emit_table(std::ostream& out, const std::vector<ExperimentResult>& results, TableFormat format);
void write_results(const std::filesystem::path& path, const std::vector<ExperimentResult>& results);
std::vector<ExperimentResult> parse_results_csv(std::istream& in);
std::vector<ExperimentResult> read_results(const std::filesystem::path& path);

}  // namespace lrv
