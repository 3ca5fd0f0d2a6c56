#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lrv/errors.hpp"
#include "lrv/harness.hpp"

using namespace lrv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lrv_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LRV_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::vector<ExperimentResult> two_cells() {
  return {{CellKey{Model::M1, "dk-hac", 200, 0.0}, 0.0566, 0.0032705, 5000, 0, 12, 1.5},
          {CellKey{Model::M1, "nw", 200, 0.0}, 0.0762, 0.0037534, 5000, 0, 0, 0.25}};
}

}  // namespace

TEST_CASE("estimator presets and bandwidth names") {
  const auto dk = parse_estimator("dk-hac");
  CHECK(dk.kind == EstimatorKind::DkHac);
  CHECK(dk.bandwidth == BandwidthRule::JointPlugin);
  const auto nw = parse_estimator("nw");
  CHECK(nw.kind == EstimatorKind::ClassicalHac);
  CHECK(nw.k1 == K1Kind::Bartlett);
  CHECK(nw.bandwidth == BandwidthRule::NeweyWest);
  const auto kvb = parse_estimator("kvb");
  CHECK(kvb.cv == CriticalRule::FixedB);
  CHECK(kvb.bandwidth == BandwidthRule::FullSample);
  CHECK_FALSE(kvb.dofAdjust);
  CHECK(parse_estimator("ewc").cv == CriticalRule::Student);
  CHECK(parse_estimator("hac-qs").bandwidth == BandwidthRule::Andrews);

  const auto fixed = with_bandwidth(dk, "fixed:0.1,0.3");
  CHECK(fixed.bandwidth == BandwidthRule::Fixed);
  CHECK(fixed.fixedB1 == 0.1);
  CHECK(fixed.fixedB2 == 0.3);
  const auto colon = with_bandwidth(dk, "0.1:0.3");
  CHECK(colon.fixedB2 == 0.3);
  CHECK(with_bandwidth(nw, "andrews").bandwidth == BandwidthRule::Andrews);
  CHECK(parse_estimator("qs/andrews/normal").k1 == K1Kind::QuadraticSpectral);

  CHECK_THROWS_AS(parse_estimator("lasso"), ConfigError);
  CHECK_THROWS_AS(with_bandwidth(dk, "nw94"), ConfigError);
  CHECK_THROWS_AS(with_bandwidth(dk, "0.1"), ConfigError);
  CHECK_THROWS_AS(with_bandwidth(nw, "joint-plugin"), ConfigError);
  CHECK_THROWS_AS(parse_estimator("dk/joint/fixedb"), ConfigError);
}

TEST_CASE("estimate_with returns the matching reference distribution") {
  const auto sim = gen_m1(200, 0.0, 1);
  const auto fit = ols_fit(sim.y, sim.X);
  const auto kvb = estimate_with(fit.scores, parse_estimator("kvb"));
  CHECK(std::holds_alternative<FixedBDist>(kvb.reference));
  CHECK(std::get<FixedBDist>(kvb.reference).b == 1.0);
  CHECK(kvb.b1 == doctest::Approx(1.0 / 200.0));
  const auto e = estimate_with(fit.scores, parse_estimator("ewc"));
  CHECK(std::get<StudentDist>(e.reference).df == ewc_default_basis(200));
  const auto dk = estimate_with(fit.scores, with_bandwidth(parse_estimator("dk-hac"), "fixed:0.1,0.3"));
  CHECK(std::holds_alternative<NormalDist>(dk.reference));
  CHECK((dk.estimate.J - dk_hac(fit.scores, SmoothingPlan{0.1, 0.3, default_block_length(200)}).J).norm() == 0.0);
}

TEST_CASE("cells are deterministic and independent of the thread count") {
  const CellKey key{Model::M2, "dk-hac", 200, 0.0};
  const auto one = run_cell(key, 100, 7, 1);
  const auto again = run_cell(key, 100, 7, 1);
  CHECK(one.rejectionRate == again.rejectionRate);
  CHECK(one.degenerateCount == again.degenerateCount);
  for (const unsigned threads : {4u, 8u}) {
    const auto par = run_cell(key, 100, 7, threads);
    CHECK(par.rejectionRate == one.rejectionRate);
    CHECK(par.nReps == one.nReps);
    CHECK(par.degenerateCount == one.degenerateCount);
  }
  CHECK(one.mcse == doctest::Approx(std::sqrt(one.rejectionRate * (1 - one.rejectionRate) / one.nReps)));
  CHECK(one.nReps + one.failedCount == 100);
  CHECK(cell_seed(7, key) != cell_seed(7, CellKey{Model::M2, "nw", 200, 0.0}));
  CHECK(cell_seed(7, key) != cell_seed(8, key));
}

TEST_CASE("an interrupted run resumes from its results file") {
  const fs::path dir = scratch_dir("resume");
  ExperimentConfig cfg;
  cfg.models = {Model::M1};
  cfg.estimators = {"dk-hac"};
  cfg.Ts = {200};
  cfg.deltas = {0.0};
  cfg.nReps = 100;
  cfg.outPath = (dir / "out.csv").string();
  const auto first = run_experiment(cfg);
  REQUIRE(first.size() == 1);

  cfg.estimators = {"dk-hac", "nw"};
  const auto second = run_experiment(cfg);
  REQUIRE(second.size() == 2);
  // the first cell is read back rather than recomputed
  CHECK(second[0].wallTime == first[0].wallTime);
  CHECK(second[0].rejectionRate == first[0].rejectionRate);
  const auto onDisk = read_results(cfg.outPath);
  CHECK(onDisk.size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("results tables") {
  const auto results = two_cells();
  std::ostringstream csv;
  emit_table(csv, results, TableFormat::Csv);
  std::istringstream in(csv.str());
  const auto back = parse_results_csv(in);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].key == results[i].key);
    CHECK(back[i].rejectionRate == results[i].rejectionRate);
    CHECK(back[i].mcse == results[i].mcse);
    CHECK(back[i].nReps == results[i].nReps);
    CHECK(back[i].degenerateCount == results[i].degenerateCount);
    CHECK(back[i].wallTime == results[i].wallTime);
  }

  std::ostringstream json;
  emit_table(json, results, TableFormat::Json);
  const auto doc = nlohmann::json::parse(json.str());
  REQUIRE(doc.at("results").is_array());
  CHECK(doc["results"].size() == 2);
  for (const auto& r : doc["results"]) {
    CHECK(r.at("model").is_string());
    CHECK(r.at("estimator").is_string());
    CHECK(r.at("T").is_number_integer());
    CHECK(r.at("delta").is_number());
    CHECK(r.at("rejectionRate").is_number());
    CHECK(r.at("mcse").is_number());
    CHECK(r.at("nReps").is_number_integer());
  }

  std::ostringstream md;
  emit_table(md, results, TableFormat::Markdown);
  const std::string golden =
      "### M1, T=200, delta=0\n"
      "\n"
      "| Estimator | delta=0 |\n"
      "|---|---:|\n"
      "| dk-hac | 0.057 (0.003) |\n"
      "| nw | 0.076 (0.004) |\n";
  CHECK(md.str() == golden);

  std::istringstream bad("model,estimator\nM1,x\n");
  CHECK_THROWS_AS(parse_results_csv(bad), ConfigError);
  CHECK_THROWS_AS(parse_table_format("html"), ConfigError);
}

TEST_CASE("experiment configuration files") {
  const auto kv = KeyValueConfig::parse(
      "# grid\n"
      "[experiment]\n"
      "models = [M1, M4]\n"
      "estimators = dk-hac, nw\n"
      "Ts = [200, 800]\n"
      "deltas = [0, 0.4]\n"
      "nReps = 250\n"
      "baseSeed = 99\n"
      "outPath = \"out.csv\"\n"
      "grVariance = out-of-sample\n");
  const auto cfg = config_from(kv);
  CHECK(cfg.models == std::vector<Model>{Model::M1, Model::M4});
  CHECK(cfg.estimators == std::vector<std::string>{"dk-hac", "nw"});
  CHECK(cfg.Ts == std::vector<Eigen::Index>{200, 800});
  CHECK(cfg.deltas == std::vector<double>{0.0, 0.4});
  CHECK(cfg.nReps == 250);
  CHECK(cfg.baseSeed == 99);
  CHECK(cfg.outPath == "out.csv");
  CHECK(cfg.grVariance == GrVariance::OutOfSample);
  CHECK(cfg.alpha == 0.05);

  CHECK_THROWS_AS(config_from(KeyValueConfig::parse("colour = red\n")), ConfigError);
  CHECK_THROWS_AS(config_from(KeyValueConfig::parse("nReps = many\n")), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse("just text\n"), ConfigError);
  ExperimentConfig small;
  small.nReps = 10;
  CHECK_THROWS_AS(small.validate(), ConfigError);
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch_dir("cli");
  const std::string data = (dir / "scores.csv").string();
  {
    std::ofstream out(data);
    out << "v\n";
    for (int t = 0; t < 120; ++t) out << std::sin(0.7 * t) + 0.1 * (t % 5) << '\n';
  }
  CHECK(run_cli("estimate --input " + data + " --estimator nw") == 0);
  CHECK(run_cli("estimate --input " + data + " --estimator dk-hac --bandwidth joint-plugin") == 0);
  CHECK(run_cli("estimate --input " + data + " --estimator dk-hac --bandwidth fixed:0.1,0.3") == 0);
  CHECK(run_cli("estimate --input " + data + " --estimator lasso") == 2);
  CHECK(run_cli("estimate --input " + (dir / "missing.csv").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);

  const std::string bad = (dir / "bad.toml").string();
  {
    std::ofstream out(bad);
    out << "nReps = 10\n";
  }
  CHECK(run_cli("run --config " + bad) == 2);

  const std::string zero = (dir / "zero.csv").string();
  {
    std::ofstream out(zero);
    out << "v\n";
    for (int t = 0; t < 50; ++t) out << "0\n";
  }
  CHECK(run_cli("estimate --input " + zero + " --estimator ewc") == 0);

  const std::string cfg = (dir / "grid.toml").string();
  {
    std::ofstream out(cfg);
    out << "models = [M2]\nestimators = [ewc]\nTs = [200]\nnReps = 100\n";
  }
  const std::string results = (dir / "results.csv").string();
  CHECK(run_cli("run --config " + cfg + " --out " + results + " --threads 2 --seed 5") == 0);
  CHECK(read_results(results).size() == 1);
  CHECK(run_cli("table --in " + results + " --format json") == 0);
  CHECK(run_cli("simulate --model M3 --T 200 --dump-paths " + (dir / "m3.csv").string()) == 0);
  CHECK(fs::exists(dir / "m3.csv"));
  fs::remove_all(dir);
}

TEST_CASE("numeric failures exit with code 3") {
  const fs::path dir = scratch_dir("overflow");
  const std::string big = (dir / "big.csv").string();
  {
    std::ofstream out(big);
    out << "v\n";
    for (int t = 0; t < 100; ++t) out << 1e200 * (1 + t % 3) << '\n';
  }
  CHECK(run_cli("estimate --input " + big + " --estimator nw") == 3);
  CHECK(run_cli("estimate --input " + big + " --estimator dk-hac --bandwidth fixed:0.1,0.3") == 3);
  CHECK(run_cli("estimate --input " + big + " --estimator ewc") == 3);
  fs::remove_all(dir);
}
