// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration, single-run reports and the benchmark matrix runner
// behind the command-line tool.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "imax/diffusion.hpp"
#include "imax/graph.hpp"
#include "imax/seed_result.hpp"

namespace imax {

enum class Algorithm { kRcelf, kRcelfNoBound, kGreedy, kCelf, kSg, kRis };

// "ic": uniform constant weight w. "wc": IC with min(1, rho / |In(v)|).
// "lt": LT with min(1, rho / |In(v)|). Explicit file weights replace either
// rule for "ic" and "lt".
enum class ModelKind { kIC, kWC, kLT };

std::string_view AlgorithmName(Algorithm a);
std::string_view ModelKindName(ModelKind m);
// Throw UsageError on unknown names.
Algorithm ParseAlgorithm(std::string_view name);
ModelKind ParseModelKind(std::string_view name);

// Default per-algorithm sample count: 200 for the snapshot and residual
// methods, 10000 for Monte-Carlo greedy.
std::uint32_t DefaultSampleCount(Algorithm a);

struct RunConfig {
  Algorithm algorithm = Algorithm::kRcelf;
  ModelKind model = ModelKind::kWC;
  std::size_t k = 50;
  std::optional<double> rho;
  std::optional<double> w;
  bool explicit_weights = false;
  // 0 selects DefaultSampleCount(algorithm).
  std::uint32_t r = 0;
  std::uint64_t theta = 10000;
  bool theta_doubling = false;
  std::uint64_t theta_max = std::uint64_t{1} << 22;
  std::uint64_t rng_seed = 1;
  // Independent evaluation runs; 0 skips evaluation.
  std::uint32_t eval_r = 10000;
  // Defaults to a seed derived from rng_seed in a separate domain.
  std::optional<std::uint64_t> eval_seed;
  int threads = 0;
  std::filesystem::path input;
  bool directed = false;

  // Throws UsageError.
  void Validate() const;
  std::uint32_t sample_count() const { return r > 0 ? r : DefaultSampleCount(algorithm); }
  std::uint64_t evaluation_seed() const;
  WeightPolicy weight_policy() const;
  DiffusionSpec selection_spec() const;
  DiffusionSpec evaluation_spec() const;
  // Configuration echo; omits threads.
  nlohmann::ordered_json ToJson() const;
  // Arguments of an equivalent `select` invocation (without the program).
  std::vector<std::string> SelectArguments() const;
};

struct RunReport {
  RunConfig config;
  std::vector<std::int64_t> seed_labels;
  SeedResult result;
  std::optional<SpreadEstimate> spread;
  double total_time_ms = 0.0;
  std::size_t peak_rss_bytes = 0;
  int threads = 1;

  // Everything outside "runtime" is a pure function of the configuration.
  nlohmann::ordered_json ToJson() const;
};

// Process peak resident set size in bytes.
std::size_t PeakRssBytes();

SeedResult RunAlgorithm(const RunConfig& config, const Graph& g);
// Loads config.input, selects, evaluates.
RunReport ExecuteRun(const RunConfig& config);
RunReport ExecuteRun(const RunConfig& config, const Graph& g);

// Original ids, one per line; blank lines and '#' comments skipped.
// Unknown ids throw DomainError, malformed lines ParseError.
std::vector<NodeId> ReadSeedFile(std::istream& in, const Graph& g);

// One CSV row of a benchmark sweep.
struct BenchRow {
  std::string alg;
  std::string model;
  double rho = 0.0;
  std::size_t k = 0;
  std::uint32_t r = 0;
  double time_ms = 0.0;
  std::size_t peak_rss = 0;
  double delta = 0.0;
  double spread_mean = 0.0;
  double spread_se = 0.0;
  std::uint64_t exact_mg_count = 0;
  std::uint64_t rr_sets = 0;
  std::size_t aux_bytes = 0;
  // Original seed ids joined by ';'.
  std::string seeds;
  // Empty on success.
  std::string error;

  static const std::vector<std::string>& Columns();
  static BenchRow FromReportJson(const nlohmann::ordered_json& report);
  // Throws ParseError on malformed rows.
  static BenchRow ParseCsv(std::string_view line);
  std::string ToCsv() const;
  bool ok() const { return error.empty(); }
};

std::string CsvHeader();

// Cartesian sweep over models x algorithms x rho x k on one input.
//
// JSON form:
//   {"input": "g.txt", "directed": false, "models": ["wc"],
//    "algorithms": ["rcelf", "sg"], "rho": [0.1, 1.0], "k": [5, 10],
//    "r": {"rcelf": 200}, "theta": 10000, "theta_doubling": true,
//    "theta_max": 4194304, "rng_seed": 1, "eval_r": 1000, "threads": 1}
// Only "input", "algorithms", "rho" and "k" are required. For model "ic"
// the rho axis is read as the uniform weight w.
struct BenchMatrix {
  RunConfig base;
  std::vector<ModelKind> models{ModelKind::kWC};
  std::vector<Algorithm> algorithms;
  std::vector<double> rhos;
  std::vector<std::size_t> ks;
  std::map<Algorithm, std::uint32_t> sample_counts;

  // Relative input paths resolve against `base_dir`.
  static BenchMatrix FromJson(const nlohmann::json& j, const std::filesystem::path& base_dir);
  std::vector<RunConfig> Cells() const;
};

// Runs one cell as `exe select ...` in a fresh process so its peak RSS is
// its own. Failures land in BenchRow::error.
BenchRow RunCellInSubprocess(const RunConfig& config, const std::filesystem::path& exe,
                             const std::filesystem::path& scratch_dir);

}  // namespace imax
