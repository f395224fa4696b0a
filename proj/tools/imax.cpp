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

// imax: influence maximization runs from the command line.
//
//   imax convert  --input raw.txt --output dense.txt [--directed]
//   imax generate --type ba --n 15000 --m 2 --output g.txt
//   imax select   --input g.txt --alg rcelf --model wc --rho 0.1 --k 50
//   imax spread   --input g.txt --seeds seeds.txt --model wc --r 10000
//   imax bench    --matrix sweep.json --output sweep.csv
//
// Exit status: 0 on success, 2 on usage errors, 1 on any other failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "imax/diffusion.hpp"
#include "imax/error.hpp"
#include "imax/generators.hpp"
#include "imax/graph.hpp"
#include "imax/rng.hpp"
#include "imax/run.hpp"

namespace {

using imax::UsageError;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Writes to `path`, or stdout when it is empty.
template <typename Fn>
void WriteOutput(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw imax::Error("cannot open " + path + " for writing");
  write(out);
  if (!out) throw imax::Error("write to " + path + " failed");
}

// Flags shared by select and spread.
struct ModelFlags {
  std::string model = "wc";
  double rho = 1.0;
  double w = 0.1;
  CLI::Option* rho_opt = nullptr;
  CLI::Option* w_opt = nullptr;
  bool explicit_weights = false;
  bool directed = false;
  std::string input;
  int threads = 0;

  void Register(CLI::App* app) {
    app->add_option("--input", input, "Edge list file")->required();
    app->add_option("--model", model, "Diffusion model: ic, wc or lt");
    rho_opt = app->add_option("--rho", rho, "Activeness: w(u,v) = min(1, rho/|In(v)|) (wc, lt)");
    w_opt = app->add_option("--w", w, "Uniform edge weight (ic)");
    app->add_flag("--explicit-weights", explicit_weights, "Read weights from the third column");
    app->add_flag("--directed", directed, "Treat edges as directed");
    app->add_option("--threads", threads, "Worker threads (0 = runtime default)")
        ->envname("IMAX_THREADS");
  }

  void Fill(imax::RunConfig& c) const {
    c.model = imax::ParseModelKind(model);
    if (*rho_opt) c.rho = rho;
    if (*w_opt) c.w = w;
    c.explicit_weights = explicit_weights;
    c.directed = directed;
    c.input = input;
    c.threads = threads;
  }
};

int RunConvert(const std::string& input, const std::string& output, bool directed,
               bool explicit_weights) {
  const auto policy = explicit_weights ? imax::WeightPolicy::Explicit()
                                       : imax::WeightPolicy::UniformConstant(1.0);
  const imax::Graph g = imax::LoadGraph(input, directed, policy);
  WriteOutput(output, [&](std::ostream& out) {
    for (imax::NodeId u = 0; u < g.node_count(); ++u) {
      for (const imax::Arc& a : g.out(u)) {
        // Undirected edges are stored both ways; write each once.
        if (!directed && a.node < u) continue;
        out << u << ' ' << a.node;
        if (explicit_weights) out << ' ' << std::setprecision(17) << a.weight;
        out << '\n';
      }
    }
  });
  const std::string ids = output.empty() ? std::string("ids.csv") : output + ".ids.csv";
  WriteOutput(ids, [&](std::ostream& out) { imax::WriteIdMap(g, out); });
  std::cerr << "converted " << g.node_count() << " nodes, "
            << (directed ? g.edge_count() : g.edge_count() / 2) << " edges; id map in " << ids
            << '\n';
  return 0;
}

int RunGenerate(const std::string& type, std::size_t n, std::size_t m, double p,
                std::size_t block, double cross, bool directed, std::uint64_t seed,
                const std::string& output) {
  std::vector<imax::InputEdge> edges;
  if (type == "ba") {
    edges = imax::BarabasiAlbertEdges(n, m, seed);
  } else if (type == "er") {
    edges = imax::ErdosRenyiEdges(n, p, directed, seed);
  } else if (type == "community") {
    edges = imax::CommunityEdges(n, block, p, cross, seed);
  } else {
    throw UsageError("unknown generator '" + type + "'");
  }
  WriteOutput(output, [&](std::ostream& out) {
    out << "# " << type << " n=" << n << '\n';
    for (const auto& e : edges) out << e.source << ' ' << e.target << '\n';
  });
  return 0;
}

int RunSelect(const imax::RunConfig& config, const std::string& output) {
  const imax::RunReport report = imax::ExecuteRun(config);
  WriteOutput(output, [&](std::ostream& out) { out << report.ToJson().dump(2) << '\n'; });
  return 0;
}

int RunSpread(const imax::RunConfig& config, const std::string& seeds_path,
              const std::string& output) {
  config.Validate();
  std::ifstream seeds_in(seeds_path);
  if (!seeds_in) throw imax::Error("cannot open seeds file " + seeds_path);
  const imax::Graph g = imax::LoadGraph(config.input, config.directed, config.weight_policy());
  const auto seeds = imax::ReadSeedFile(seeds_in, g);
  if (seeds.empty()) throw UsageError("seeds file lists no seeds");
  imax::DiffusionSpec spec = config.selection_spec();
  const imax::SpreadEstimate e = imax::SimulateSpread(g, seeds, spec);
  nlohmann::ordered_json j;
  j["seeds"] = seeds.size();
  j["mean"] = e.mean;
  j["std_error"] = e.std_error;
  j["runs"] = e.runs;
  j["rng_seed"] = spec.rng_seed;
  WriteOutput(output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  return 0;
}

int RunBench(const std::string& matrix_path, const std::string& output,
             const std::string& scratch) {
  std::ifstream in(matrix_path);
  if (!in) throw imax::Error("cannot open matrix file " + matrix_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("matrix file: ") + e.what());
  }
  const auto base_dir = std::filesystem::absolute(matrix_path).parent_path();
  const imax::BenchMatrix matrix = imax::BenchMatrix::FromJson(j, base_dir);
  const auto exe = std::filesystem::read_symlink("/proc/self/exe");
  const std::filesystem::path scratch_dir =
      scratch.empty() ? std::filesystem::temp_directory_path() : std::filesystem::path(scratch);
  std::filesystem::create_directories(scratch_dir);

  const auto cells = matrix.Cells();
  std::size_t failures = 0;
  WriteOutput(output, [&](std::ostream& out) {
    out << imax::CsvHeader() << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const imax::BenchRow row = imax::RunCellInSubprocess(cells[i], exe, scratch_dir);
      if (!row.ok()) ++failures;
      out << row.ToCsv() << '\n';
      out.flush();
      std::cerr << '[' << i + 1 << '/' << cells.size() << "] " << row.alg << ' ' << row.model
                << " rho=" << row.rho << " k=" << row.k
                << (row.ok() ? " ok " + std::to_string(row.time_ms) + " ms" : " FAILED: " + row.error)
                << '\n';
    }
  });
  if (failures > 0) std::cerr << failures << " of " << cells.size() << " cells failed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence maximization seed selection and benchmarking"};
  app.require_subcommand(1);

  // convert
  auto* convert = app.add_subcommand("convert", "Relabel an edge list to dense ids");
  std::string convert_in, convert_out;
  bool convert_directed = false, convert_weights = false;
  convert->add_option("--input", convert_in, "Raw edge list")->required();
  convert->add_option("--output", convert_out, "Dense edge list (id map at <output>.ids.csv)")
      ->required();
  convert->add_flag("--directed", convert_directed, "Treat edges as directed");
  convert->add_flag("--explicit-weights", convert_weights, "Keep the weight column");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic edge list");
  std::string gen_type = "ba", gen_out;
  std::size_t gen_n = 1000, gen_m = 2, gen_block = 50;
  double gen_p = 0.01, gen_cross = 0.05;
  bool gen_directed = false;
  std::uint64_t gen_seed = 1;
  generate->add_option("--type", gen_type, "ba, er or community")
      ->check(CLI::IsMember({"ba", "er", "community"}));
  generate->add_option("--n", gen_n, "Node count")->check(CLI::PositiveNumber);
  generate->add_option("--m", gen_m, "Edges per new node (ba)");
  generate->add_option("--p", gen_p, "Edge probability (er; in-block for community)");
  generate->add_option("--block", gen_block, "Block size (community)");
  generate->add_option("--cross", gen_cross, "Cross-block edges per node (community)");
  generate->add_flag("--directed", gen_directed, "Directed pairs (er)");
  generate->add_option("--rng-seed", gen_seed, "Generator seed");
  generate->add_option("--output", gen_out, "Output edge list (default stdout)");

  // select
  auto* select = app.add_subcommand("select", "Select seeds and evaluate their spread");
  ModelFlags select_flags;
  select_flags.Register(select);
  std::string alg = "rcelf", select_out;
  std::size_t k = 50;
  std::uint32_t r = 0, eval_r = 10000;
  std::uint64_t theta = 10000, theta_max = std::uint64_t{1} << 22, rng_seed = 1, eval_seed = 0;
  bool theta_doubling = false;
  select->add_option("--alg", alg, "rcelf, rcelf-nobound, greedy, celf, sg or ris");
  select->add_option("--k", k, "Seed count")->check(CLI::PositiveNumber);
  select->add_option("--r", r, "Samples per estimate (0 = algorithm default)");
  select->add_option("--theta", theta, "RR sets (ris)")->check(CLI::PositiveNumber);
  select->add_flag("--theta-doubling", theta_doubling, "Double theta until coverage settles");
  select->add_option("--theta-max", theta_max, "Cap for --theta-doubling");
  select->add_option("--rng-seed", rng_seed, "Selection seed");
  select->add_option("--eval-r", eval_r, "Evaluation cascades (0 = skip)");
  auto* eval_seed_opt = select->add_option("--eval-seed", eval_seed,
                                           "Evaluation seed (default derived from --rng-seed)");
  select->add_option("--output", select_out, "Report JSON (default stdout)");

  // spread
  auto* spread = app.add_subcommand("spread", "Estimate the spread of a given seed set");
  ModelFlags spread_flags;
  spread_flags.Register(spread);
  std::string seeds_path, spread_out;
  std::uint32_t spread_r = 10000;
  std::uint64_t spread_seed = 1;
  spread->add_option("--seeds", seeds_path, "One original node id per line")->required();
  spread->add_option("--r", spread_r, "Cascades")->check(CLI::PositiveNumber);
  spread->add_option("--rng-seed", spread_seed, "Simulation seed");
  spread->add_option("--output", spread_out, "Result JSON (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a parameter sweep, one process per cell");
  std::string matrix_path, bench_out, scratch;
  bench->add_option("--matrix", matrix_path, "Sweep description (JSON)")->required();
  bench->add_option("--output", bench_out, "CSV output (default stdout)");
  bench->add_option("--scratch", scratch, "Directory for per-cell files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*convert) return RunConvert(convert_in, convert_out, convert_directed, convert_weights);
    if (*generate) {
      return RunGenerate(gen_type, gen_n, gen_m, gen_p, gen_block, gen_cross, gen_directed,
                         gen_seed, gen_out);
    }
    if (*select) {
      imax::RunConfig c;
      select_flags.Fill(c);
      c.algorithm = imax::ParseAlgorithm(alg);
      c.k = k;
      c.r = r;
      c.theta = theta;
      c.theta_doubling = theta_doubling;
      c.theta_max = theta_max;
      c.rng_seed = rng_seed;
      c.eval_r = eval_r;
      if (*eval_seed_opt) c.eval_seed = eval_seed;
      return RunSelect(c, select_out);
    }
    if (*spread) {
      imax::RunConfig c;
      spread_flags.Fill(c);
      c.algorithm = imax::Algorithm::kGreedy;
      c.r = spread_r;
      c.rng_seed = spread_seed;
      return RunSpread(c, seeds_path, spread_out);
    }
    if (*bench) return RunBench(matrix_path, bench_out, scratch);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
