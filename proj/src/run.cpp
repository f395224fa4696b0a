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

#include "imax/run.hpp"

#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <charconv>
#include <chrono>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>

#include "imax/baselines.hpp"
#include "imax/error.hpp"
#include "imax/rcelf.hpp"
#include "imax/rng.hpp"
#include "parallel.hpp"

extern char** environ;

namespace imax {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::pair<Algorithm, std::string_view> kAlgorithms[] = {
    {Algorithm::kRcelf, "rcelf"}, {Algorithm::kRcelfNoBound, "rcelf-nobound"},
    {Algorithm::kGreedy, "greedy"}, {Algorithm::kCelf, "celf"},
    {Algorithm::kSg, "sg"}, {Algorithm::kRis, "ris"},
};

constexpr std::pair<ModelKind, std::string_view> kModels[] = {
    {ModelKind::kIC, "ic"}, {ModelKind::kWC, "wc"}, {ModelKind::kLT, "lt"}};

std::string FormatDouble(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::string HexDigest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string_view AlgorithmName(Algorithm a) {
  for (const auto& [value, name] : kAlgorithms) {
    if (value == a) return name;
  }
  return "?";
}

std::string_view ModelKindName(ModelKind m) {
  for (const auto& [value, name] : kModels) {
    if (value == m) return name;
  }
  return "?";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (const auto& [value, n] : kAlgorithms) {
    if (n == name) return value;
  }
  throw UsageError("unknown algorithm '" + std::string(name) + "'");
}

ModelKind ParseModelKind(std::string_view name) {
  for (const auto& [value, n] : kModels) {
    if (n == name) return value;
  }
  throw UsageError("unknown model '" + std::string(name) + "'");
}

std::uint32_t DefaultSampleCount(Algorithm a) {
  return a == Algorithm::kGreedy || a == Algorithm::kCelf ? 10000 : 200;
}

void RunConfig::Validate() const {
  if (k < 1) throw UsageError("--k must be at least 1");
  if (input.empty()) throw UsageError("--input is required");
  if (threads < 0) throw UsageError("--threads must be non-negative");
  if (explicit_weights) {
    if (model == ModelKind::kWC) throw UsageError("model wc derives weights from rho");
    if (rho || w) throw UsageError("--explicit-weights excludes --rho and --w");
  } else if (model == ModelKind::kIC) {
    if (rho) throw UsageError("model ic takes --w, not --rho");
    if (w && !(*w > 0.0 && *w <= 1.0)) throw UsageError("--w must lie in (0, 1]");
  } else {
    if (w) throw UsageError("model " + std::string(ModelKindName(model)) + " takes --rho, not --w");
    if (rho && !(*rho > 0.0)) throw UsageError("--rho must be positive");
  }
  if (algorithm == Algorithm::kRis) {
    if (theta < 1) throw UsageError("--theta must be at least 1");
    if (theta > theta_max) throw UsageError("--theta exceeds --theta-max");
    if (theta_max > UINT32_MAX) throw UsageError("--theta-max must fit in 32 bits");
  }
}

std::uint64_t RunConfig::evaluation_seed() const {
  return eval_seed ? *eval_seed : DeriveSeed(rng_seed, RngDomain::kEvaluation);
}

WeightPolicy RunConfig::weight_policy() const {
  if (explicit_weights) return WeightPolicy::Explicit();
  if (model == ModelKind::kIC) return WeightPolicy::UniformConstant(w.value_or(0.1));
  return WeightPolicy::GeneralizedInDegree(rho.value_or(1.0));
}

DiffusionSpec RunConfig::selection_spec() const {
  DiffusionSpec spec;
  spec.model = model == ModelKind::kLT ? Model::kLT : Model::kIC;
  spec.weight_policy = weight_policy();
  spec.sim_count = sample_count();
  spec.rng_seed = rng_seed;
  spec.threads = threads;
  return spec;
}

DiffusionSpec RunConfig::evaluation_spec() const {
  DiffusionSpec spec = selection_spec();
  spec.sim_count = eval_r;
  spec.rng_seed = evaluation_seed();
  return spec;
}

Json RunConfig::ToJson() const {
  Json j;
  j["algorithm"] = AlgorithmName(algorithm);
  j["model"] = ModelKindName(model);
  j["k"] = k;
  if (explicit_weights) {
    j["explicit_weights"] = true;
  } else if (model == ModelKind::kIC) {
    j["w"] = w.value_or(0.1);
  } else {
    j["rho"] = rho.value_or(1.0);
  }
  if (algorithm == Algorithm::kRis) {
    j["theta"] = theta;
    j["theta_doubling"] = theta_doubling;
    if (theta_doubling) j["theta_max"] = theta_max;
  } else {
    j["r"] = sample_count();
  }
  j["rng_seed"] = rng_seed;
  j["eval_r"] = eval_r;
  j["eval_seed"] = evaluation_seed();
  j["input"] = input.string();
  j["directed"] = directed;
  return j;
}

std::vector<std::string> RunConfig::SelectArguments() const {
  std::vector<std::string> args{"select",
                                "--input", input.string(),
                                "--alg", std::string(AlgorithmName(algorithm)),
                                "--model", std::string(ModelKindName(model)),
                                "--k", std::to_string(k),
                                "--rng-seed", std::to_string(rng_seed),
                                "--eval-r", std::to_string(eval_r),
                                "--threads", std::to_string(threads)};
  auto add = [&args](std::string flag, std::string value) {
    args.push_back(std::move(flag));
    args.push_back(std::move(value));
  };
  if (rho) add("--rho", FormatDouble(*rho));
  if (w) add("--w", FormatDouble(*w));
  if (r > 0) add("--r", std::to_string(r));
  if (algorithm == Algorithm::kRis) {
    add("--theta", std::to_string(theta));
    add("--theta-max", std::to_string(theta_max));
    if (theta_doubling) args.push_back("--theta-doubling");
  }
  if (eval_seed) add("--eval-seed", std::to_string(*eval_seed));
  if (directed) args.push_back("--directed");
  if (explicit_weights) args.push_back("--explicit-weights");
  return args;
}

Json RunReport::ToJson() const {
  Json j;
  j["config"] = config.ToJson();
  j["seeds"] = seed_labels;
  j["gains"] = result.gains;
  j["delta"] = result.delta;
  Json traces = Json::array();
  for (const ContributionTrace& t : result.contribution_trace) {
    traces.push_back({{"count", t.count}, {"sum", t.sum}, {"digest", HexDigest(t.digest)}});
  }
  j["contribution_trace"] = std::move(traces);
  j["truncated"] = result.truncated;
  j["sample_capped"] = result.sample_capped;
  if (spread) {
    j["spread"] = {{"mean", spread->mean},
                   {"std_error", spread->std_error},
                   {"runs", spread->runs},
                   {"rng_seed", config.evaluation_seed()}};
  } else {
    j["spread"] = nullptr;
  }
  if (result.own_estimate) {
    j["own_estimate"] = {{"mean", result.own_estimate->mean},
                         {"std_error", result.own_estimate->std_error},
                         {"samples", result.own_estimate->runs}};
  } else {
    j["own_estimate"] = nullptr;
  }
  j["exact_mg_computations"] = result.exact_mg_computations;
  j["bound_computations"] = result.bound_computations;
  j["bound_fallbacks"] = result.bound_fallbacks;
  j["rr_sets"] = result.rr_sets;
  j["rr_entries"] = result.rr_entries;
  j["aux_bytes"] = result.aux_bytes;
  j["runtime"] = {{"selection_ms", result.wall_time_ms},
                  {"total_ms", total_time_ms},
                  {"peak_rss_bytes", peak_rss_bytes},
                  {"threads", threads}};
  return j;
}

std::size_t PeakRssBytes() {
  // VmHWM belongs to the current address space. getrusage's maxrss survives
  // exec, so a spawned child would report its parent's peak.
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) != 0) continue;
    std::size_t kib = 0;
    const char* p = line.c_str() + 6;
    while (*p == ' ' || *p == '\t') ++p;
    if (std::from_chars(p, line.c_str() + line.size(), kib).ec == std::errc{}) return kib * 1024;
  }
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<std::size_t>(usage.ru_maxrss) * 1024;
}

SeedResult RunAlgorithm(const RunConfig& config, const Graph& g) {
  const DiffusionSpec spec = config.selection_spec();
  switch (config.algorithm) {
    case Algorithm::kRcelf:
      return SelectSeedsRcelf(g, config.k, spec, {.use_bound_filter = true});
    case Algorithm::kRcelfNoBound:
      return SelectSeedsRcelf(g, config.k, spec, {.use_bound_filter = false});
    case Algorithm::kGreedy:
      return GreedyMc(g, config.k, spec);
    case Algorithm::kCelf:
      return Celf(g, config.k, spec);
    case Algorithm::kSg:
      return SgSelect(g, config.k, spec.sim_count, spec.model, spec.rng_seed, spec.threads);
    case Algorithm::kRis: {
      RisOptions options;
      options.theta = config.theta;
      options.doubling = config.theta_doubling;
      options.theta_max = config.theta_max;
      return RisSelect(g, config.k, options, spec);
    }
  }
  throw UsageError("unknown algorithm");
}

RunReport ExecuteRun(const RunConfig& config, const Graph& g) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;
  report.threads = detail::ResolveThreads(config.threads);
  report.result = RunAlgorithm(config, g);
  for (NodeId s : report.result.seeds) report.seed_labels.push_back(g.label(s));
  if (config.eval_r > 0 && !report.result.seeds.empty()) {
    report.spread = SimulateSpread(g, report.result.seeds, config.evaluation_spec());
  }
  report.total_time_ms = ElapsedMs(start);
  report.peak_rss_bytes = PeakRssBytes();
  return report;
}

RunReport ExecuteRun(const RunConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  const Graph g = LoadGraph(config.input, config.directed, config.weight_policy());
  RunReport report = ExecuteRun(config, g);
  report.total_time_ms = ElapsedMs(start);
  return report;
}

std::vector<NodeId> ReadSeedFile(std::istream& in, const Graph& g) {
  std::vector<NodeId> seeds;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + first, last - first + 1);
    std::int64_t label = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), label);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError(number, "expected one integer node id, got '" + std::string(token) + "'");
    }
    const auto id = g.FindLabel(label);
    if (!id) throw DomainError("seed id " + std::to_string(label) + " is not in the graph");
    seeds.push_back(*id);
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// CSV rows

const std::vector<std::string>& BenchRow::Columns() {
  static const std::vector<std::string> columns{
      "alg",   "model",          "rho",     "k",         "r",
      "time_ms", "peak_rss",     "delta",   "spread_mean", "spread_se",
      "exact_mg_count", "rr_sets", "aux_bytes", "seeds",   "error"};
  return columns;
}

std::string CsvHeader() {
  std::string out;
  for (const std::string& c : BenchRow::Columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

namespace {

std::string QuoteCsv(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(1, "unterminated quoted field");
  return fields;
}

template <typename T>
T ParseNumber(const std::string& field, const std::string& column) {
  T value{};
  if (field.empty()) return value;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(1, "column " + column + ": bad number '" + field + "'");
  }
  return value;
}

}  // namespace

std::string BenchRow::ToCsv() const {
  const std::vector<std::string> fields{
      alg,
      model,
      FormatDouble(rho),
      std::to_string(k),
      std::to_string(r),
      FormatDouble(time_ms),
      std::to_string(peak_rss),
      FormatDouble(delta),
      FormatDouble(spread_mean),
      FormatDouble(spread_se),
      std::to_string(exact_mg_count),
      std::to_string(rr_sets),
      std::to_string(aux_bytes),
      seeds,
      error};
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += QuoteCsv(fields[i]);
  }
  return out;
}

BenchRow BenchRow::ParseCsv(std::string_view line) {
  const std::vector<std::string> f = SplitCsv(line);
  const auto& columns = Columns();
  if (f.size() != columns.size()) {
    throw ParseError(1, "expected " + std::to_string(columns.size()) + " CSV fields, got " +
                            std::to_string(f.size()));
  }
  BenchRow row;
  row.alg = f[0];
  row.model = f[1];
  row.rho = ParseNumber<double>(f[2], columns[2]);
  row.k = ParseNumber<std::size_t>(f[3], columns[3]);
  row.r = ParseNumber<std::uint32_t>(f[4], columns[4]);
  row.time_ms = ParseNumber<double>(f[5], columns[5]);
  row.peak_rss = ParseNumber<std::size_t>(f[6], columns[6]);
  row.delta = ParseNumber<double>(f[7], columns[7]);
  row.spread_mean = ParseNumber<double>(f[8], columns[8]);
  row.spread_se = ParseNumber<double>(f[9], columns[9]);
  row.exact_mg_count = ParseNumber<std::uint64_t>(f[10], columns[10]);
  row.rr_sets = ParseNumber<std::uint64_t>(f[11], columns[11]);
  row.aux_bytes = ParseNumber<std::size_t>(f[12], columns[12]);
  row.seeds = f[13];
  row.error = f[14];
  return row;
}

namespace {

void FillConfigColumns(BenchRow& row, const RunConfig& config) {
  row.alg = AlgorithmName(config.algorithm);
  row.model = ModelKindName(config.model);
  row.rho = config.model == ModelKind::kIC ? config.w.value_or(0.1) : config.rho.value_or(1.0);
  row.k = config.k;
  row.r = config.algorithm == Algorithm::kRis ? 0 : config.sample_count();
}

}  // namespace

BenchRow BenchRow::FromReportJson(const Json& report) {
  BenchRow row;
  const Json& config = report.at("config");
  row.alg = config.at("algorithm").get<std::string>();
  row.model = config.at("model").get<std::string>();
  if (config.contains("rho")) row.rho = config.at("rho").get<double>();
  if (config.contains("w")) row.rho = config.at("w").get<double>();
  row.k = config.at("k").get<std::size_t>();
  if (config.contains("r")) row.r = config.at("r").get<std::uint32_t>();
  const Json& runtime = report.at("runtime");
  row.time_ms = runtime.at("selection_ms").get<double>();
  row.peak_rss = runtime.at("peak_rss_bytes").get<std::size_t>();
  const Json& delta = report.at("delta");
  row.delta = delta.empty() ? 0.0 : delta.back().get<double>();
  if (!report.at("spread").is_null()) {
    row.spread_mean = report["spread"].at("mean").get<double>();
    row.spread_se = report["spread"].at("std_error").get<double>();
  }
  row.exact_mg_count = report.at("exact_mg_computations").get<std::uint64_t>();
  row.rr_sets = report.at("rr_sets").get<std::uint64_t>();
  row.aux_bytes = report.at("aux_bytes").get<std::size_t>();
  for (const Json& s : report.at("seeds")) {
    if (!row.seeds.empty()) row.seeds += ';';
    row.seeds += std::to_string(s.get<std::int64_t>());
  }
  return row;
}

// ---------------------------------------------------------------------------
// Benchmark matrix

BenchMatrix BenchMatrix::FromJson(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    BenchMatrix m;
    std::filesystem::path input = j.at("input").get<std::string>();
    m.base.input = input.is_absolute() ? input : base_dir / input;
    m.base.directed = j.value("directed", false);
    if (j.contains("models")) {
      m.models.clear();
      for (const auto& name : j.at("models")) {
        m.models.push_back(ParseModelKind(name.get<std::string>()));
      }
    }
    for (const auto& name : j.at("algorithms")) {
      m.algorithms.push_back(ParseAlgorithm(name.get<std::string>()));
    }
    m.rhos = j.at("rho").get<std::vector<double>>();
    m.ks = j.at("k").get<std::vector<std::size_t>>();
    if (j.contains("r")) {
      for (const auto& [name, value] : j.at("r").items()) {
        m.sample_counts[ParseAlgorithm(name)] = value.get<std::uint32_t>();
      }
    }
    m.base.theta = j.value("theta", m.base.theta);
    m.base.theta_doubling = j.value("theta_doubling", m.base.theta_doubling);
    m.base.theta_max = j.value("theta_max", m.base.theta_max);
    m.base.rng_seed = j.value("rng_seed", m.base.rng_seed);
    m.base.eval_r = j.value("eval_r", m.base.eval_r);
    m.base.threads = j.value("threads", m.base.threads);
    if (m.models.empty() || m.algorithms.empty() || m.rhos.empty() || m.ks.empty()) {
      throw UsageError("bench matrix has an empty axis");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bench matrix: ") + e.what());
  }
}

std::vector<RunConfig> BenchMatrix::Cells() const {
  std::vector<RunConfig> cells;
  for (ModelKind model : models) {
    for (Algorithm alg : algorithms) {
      for (double rho : rhos) {
        for (std::size_t k : ks) {
          RunConfig c = base;
          c.model = model;
          c.algorithm = alg;
          c.k = k;
          if (model == ModelKind::kIC) {
            c.w = rho;
          } else {
            c.rho = rho;
          }
          if (auto it = sample_counts.find(alg); it != sample_counts.end()) c.r = it->second;
          cells.push_back(std::move(c));
        }
      }
    }
  }
  return cells;
}

namespace {

std::string LastLine(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) last = line;
  }
  return last;
}

}  // namespace

BenchRow RunCellInSubprocess(const RunConfig& config, const std::filesystem::path& exe,
                             const std::filesystem::path& scratch_dir) {
  static std::atomic<std::uint64_t> counter{0};
  const std::string stem =
      "cell_" + std::to_string(getpid()) + "_" + std::to_string(counter.fetch_add(1));
  const std::filesystem::path json_path = scratch_dir / (stem + ".json");
  const std::filesystem::path err_path = scratch_dir / (stem + ".err");

  BenchRow row;
  FillConfigColumns(row, config);

  std::vector<std::string> args = config.SelectArguments();
  args.insert(args.begin(), exe.string());
  args.push_back("--output");
  args.push_back(json_path.string());
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, err_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  pid_t pid = 0;
  const int spawn_rc = posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (spawn_rc != 0) {
    row.error = "spawn failed: " + std::string(std::strerror(spawn_rc));
    return row;
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
    try {
      std::ifstream in(json_path);
      const Json report = Json::parse(in);
      row = BenchRow::FromReportJson(report);
    } catch (const std::exception& e) {
      row.error = std::string("unreadable report: ") + e.what();
    }
  } else {
    std::string message = LastLine(err_path);
    if (WIFSIGNALED(status)) {
      message = "killed by signal " + std::to_string(WTERMSIG(status));
    } else if (message.empty()) {
      message = "exit status " + std::to_string(WEXITSTATUS(status));
    }
    row.error = message;
  }
  std::error_code ignored;
  std::filesystem::remove(json_path, ignored);
  std::filesystem::remove(err_path, ignored);
  return row;
}

}  // namespace imax
