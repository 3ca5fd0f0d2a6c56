// Command-line front end: Monte Carlo runs, one-off LRV estimates, tables.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrv/dgp.hpp"
#include "lrv/errors.hpp"
#include "lrv/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

Eigen::MatrixXd read_score_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lrv::ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw lrv::ConfigError(path + " is empty");
  const auto columns = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
  std::vector<double> values;
  int lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index n = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw lrv::ConfigError(path + ":" + std::to_string(lineNo) + ": not a number: '" + cell + "'");
      }
      ++n;
    }
    if (n != columns) throw lrv::ConfigError(path + ":" + std::to_string(lineNo) + ": wrong column count");
  }
  const auto rows = static_cast<Eigen::Index>(values.size()) / columns;
  Eigen::MatrixXd V(rows, columns);
  for (Eigen::Index t = 0; t < rows; ++t) {
    for (Eigen::Index j = 0; j < columns; ++j) V(t, j) = values[static_cast<std::size_t>(t * columns + j)];
  }
  return V;
}

void print_matrix(const Eigen::MatrixXd& J) {
  std::cout.precision(12);
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    for (Eigen::Index j = 0; j < J.cols(); ++j) std::cout << (j ? " " : "") << J(i, j);
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-run variance estimation and HAR test simulations"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outPath;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string cvCache;
  bool regenerateCv = false;
  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment grid");
  run->add_option("--config", configPath, "key = value experiment file")->check(CLI::ExistingFile);
  run->add_option("--out", outPath, "CSV results file (existing cells are reused)");
  run->add_option("--threads", threads, "worker threads");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--cv-cache", cvCache, "JSON cache of simulated fixed-b critical values");
  run->add_flag("--regenerate-cv", regenerateCv, "discard cached fixed-b critical values");

  std::string inputPath;
  std::string estimator = "dk-hac";
  std::string bandwidth = "default";
  auto* estimate = app.add_subcommand("estimate", "Estimate the LRV of score series in a CSV file");
  estimate->add_option("--input", inputPath, "CSV with a header row, one column per series")->required();
  estimate->add_option("--estimator", estimator, "dk-hac, nw, hac-qs, kvb, ewc or kind/bandwidth/cv");
  estimate->add_option("--bandwidth", bandwidth, "joint-plugin, nw94, andrews, full, <b1>, <b1>:<b2> or fixed:<b1>,<b2>");

  std::string tableIn;
  std::string format = "markdown";
  auto* table = app.add_subcommand("table", "Format a results file");
  table->add_option("--in", tableIn, "CSV results file")->required();
  table->add_option("--format", format, "csv, json or markdown");

  std::string model = "M1";
  Eigen::Index T = 200;
  double delta = 0.0;
  std::uint64_t pathSeed = 1;
  std::string dumpPaths;
  auto* simulate = app.add_subcommand("simulate", "Generate one path of a simulation design");
  simulate->add_option("--model", model, "M1, M2, M3 or M4");
  simulate->add_option("--T", T, "sample size");
  simulate->add_option("--delta", delta, "alternative magnitude");
  simulate->add_option("--seed", pathSeed, "seed");
  simulate->add_option("--dump-paths", dumpPaths, "CSV destination (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      lrv::ExperimentConfig cfg;
      if (!configPath.empty()) cfg = lrv::config_from(lrv::KeyValueConfig::load(configPath));
      if (!outPath.empty()) cfg.outPath = outPath;
      if (threads > 0) cfg.threads = threads;
      if (run->count("--seed") > 0) cfg.baseSeed = seed;
      if (!cvCache.empty()) cfg.cvCache = cvCache;
      if (regenerateCv) {
        lrv::FixedBCache::global().clear();
        if (!cfg.cvCache.empty()) std::filesystem::remove(cfg.cvCache);
      }
      const auto results = lrv::run_experiment(cfg);
      lrv::emit_table(std::cout, results, lrv::TableFormat::Markdown);
    } else if (*estimate) {
      lrv::EstimatorSpec spec = lrv::parse_estimator(estimator);
      if (bandwidth != "default") spec = lrv::with_bandwidth(spec, bandwidth);
      const lrv::ScoreMatrix V(read_score_csv(inputPath));
      const lrv::LrvChoice choice = lrv::estimate_with(V, spec);
      if (choice.fallback) std::cerr << "warning: bandwidth plug-in was degenerate; default bandwidths used\n";
      if (choice.estimate.psdRepaired) std::cerr << "warning: estimate was projected onto the PSD cone\n";
      std::cout << "estimator " << spec.name;
      if (spec.kind == lrv::EstimatorKind::Ewc) {
        std::cout << "\nB " << choice.estimate.df;
      } else {
        std::cout << "\nb1 " << choice.b1;
      }
      if (spec.kind == lrv::EstimatorKind::DkHac) std::cout << "\nb2 " << choice.b2;
      std::cout << "\nJ\n";
      print_matrix(choice.estimate.J);
    } else if (*table) {
      lrv::emit_table(std::cout, lrv::read_results(tableIn), lrv::parse_table_format(format));
    } else if (*simulate) {
      const auto sim = lrv::simulate(lrv::DgpSpec{lrv::parse_model(model), T, delta, pathSeed});
      for (const auto& w : sim.warnings) std::cerr << "warning: " << w << '\n';
      if (dumpPaths.empty()) {
        lrv::write_paths_csv(std::cout, sim);
      } else {
        std::ofstream out(dumpPaths);
        if (!out) throw lrv::ConfigError("cannot write " + dumpPaths);
        lrv::write_paths_csv(out, sim);
      }
    }
  } catch (const lrv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lrv::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const lrv::DomainError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
