#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lrv/errors.hpp"
#include "lrv/harness.hpp"

namespace lrv {

namespace {

constexpr const char* kCsvHeader =
    "model,estimator,T,delta,rejectionRate,mcse,nReps,failedCount,degenerateCount,wallTime";

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << kCsvHeader << '\n';
  for (const auto& r : results) {
    out << to_string(r.key.model) << ',' << r.key.estimator << ',' << r.key.T << ',' << shortest(r.key.delta) << ','
        << shortest(r.rejectionRate) << ',' << shortest(r.mcse) << ',' << r.nReps << ',' << r.failedCount << ','
        << r.degenerateCount << ',' << shortest(r.wallTime) << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<ExperimentResult>& results) {
  nlohmann::json doc;
  doc["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    doc["results"].push_back({{"model", to_string(r.key.model)},
                              {"estimator", r.key.estimator},
                              {"T", r.key.T},
                              {"delta", r.key.delta},
                              {"rejectionRate", r.rejectionRate},
                              {"mcse", r.mcse},
                              {"nReps", r.nReps},
                              {"failedCount", r.failedCount},
                              {"degenerateCount", r.degenerateCount},
                              {"wallTime", r.wallTime}});
  }
  out << doc.dump(2) << '\n';
}

// One table per model: estimators as rows, (T, delta) cells as columns.
void write_markdown(std::ostream& out, const std::vector<ExperimentResult>& results) {
  std::vector<Model> models;
  for (const auto& r : results) {
    if (std::find(models.begin(), models.end(), r.key.model) == models.end()) models.push_back(r.key.model);
  }
  bool first = true;
  for (const Model m : models) {
    std::vector<std::string> rows;
    std::vector<std::pair<Eigen::Index, double>> cols;
    for (const auto& r : results) {
      if (r.key.model != m) continue;
      if (std::find(rows.begin(), rows.end(), r.key.estimator) == rows.end()) rows.push_back(r.key.estimator);
      const std::pair<Eigen::Index, double> c{r.key.T, r.key.delta};
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    }
    bool oneT = true;
    bool oneDelta = true;
    for (const auto& c : cols) {
      oneT = oneT && c.first == cols.front().first;
      oneDelta = oneDelta && c.second == cols.front().second;
    }
    if (!first) out << '\n';
    first = false;
    out << "### " << to_string(m);
    if (oneT) out << ", T=" << cols.front().first;
    if (oneDelta) out << ", delta=" << shortest(cols.front().second);
    out << "\n\n| Estimator |";
    for (const auto& c : cols) {
      if (!oneT && !oneDelta) {
        out << " T=" << c.first << ", delta=" << shortest(c.second) << " |";
      } else if (!oneT) {
        out << " T=" << c.first << " |";
      } else {
        out << " delta=" << shortest(c.second) << " |";
      }
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < cols.size(); ++i) out << "---:|";
    out << '\n';
    for (const auto& row : rows) {
      out << "| " << row << " |";
      for (const auto& c : cols) {
        const auto it = std::find_if(results.begin(), results.end(), [&](const ExperimentResult& r) {
          return r.key.model == m && r.key.estimator == row && r.key.T == c.first && r.key.delta == c.second;
        });
        if (it == results.end()) {
          out << "  |";
        } else {
          out << ' ' << fmt(it->rejectionRate, 3) << " (" << fmt(it->mcse, 3) << ") |";
        }
      }
      out << '\n';
    }
  }
}

}  // namespace

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  if (name == "markdown" || name == "md") return TableFormat::Markdown;
  throw ConfigError("unknown table format '" + name + "'");
}

void emit_table(std::ostream& out, const std::vector<ExperimentResult>& results, TableFormat format) {
  switch (format) {
    case TableFormat::Csv: write_csv(out, results); break;
    case TableFormat::Json: write_json(out, results); break;
    case TableFormat::Markdown: write_markdown(out, results); break;
  }
  if (!out) throw std::runtime_error("failed to write results table");
}

void write_results(const std::filesystem::path& path, const std::vector<ExperimentResult>& results) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    emit_table(out, results, TableFormat::Csv);
  }
  std::filesystem::rename(tmp, path);
}

std::vector<ExperimentResult> parse_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("results file has an unexpected header");
  std::vector<ExperimentResult> results;
  int lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 10) throw ConfigError("results line " + std::to_string(lineNo) + " has the wrong field count");
    try {
      ExperimentResult r;
      r.key = CellKey{parse_model(f[0]), f[1], static_cast<Eigen::Index>(std::stoll(f[2])), std::stod(f[3])};
      r.rejectionRate = std::stod(f[4]);
      r.mcse = std::stod(f[5]);
      r.nReps = std::stoi(f[6]);
      r.failedCount = std::stoi(f[7]);
      r.degenerateCount = std::stoi(f[8]);
      r.wallTime = std::stod(f[9]);
      results.push_back(r);
    } catch (const std::logic_error&) {
      throw ConfigError("results line " + std::to_string(lineNo) + " is malformed");
    }
  }
  return results;
}

std::vector<ExperimentResult> read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open results file " + path.string());
  return parse_results_csv(in);
}

}  // namespace lrv
