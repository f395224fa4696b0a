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

// Drives the installed binary end to end through a shell.

#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "imax/run.hpp"

namespace imax {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Workdir {
 public:
  Workdir() : root_(fs::temp_directory_path() / ("imax_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(root_);
  }
  ~Workdir() { fs::remove_all(root_); }
  fs::path operator/(const std::string& name) const { return root_ / name; }
  fs::path Write(const std::string& name, const std::string& text) const {
    std::ofstream(root_ / name) << text;
    return root_ / name;
  }
  Outcome Run(const std::string& args) const {
    const fs::path out = root_ / "stdout.txt";
    const fs::path err = root_ / "stderr.txt";
    const std::string cmd = std::string(IMAX_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = Slurp(out);
    o.err = Slurp(err);
    return o;
  }

 private:
  fs::path root_;
};

const Workdir& Dir() {
  static Workdir dir;
  return dir;
}

// Diamond with original ids a=100, b=101, c=102, d=103.
fs::path DiamondFile() {
  return Dir().Write("diamond.txt",
                     "# u v w\n100 101 0.7\n100 102 0.3\n100 103 0.4\n101 102 0.5\n102 103 0.2\n");
}

nlohmann::json WithoutRuntime(nlohmann::json j) {
  j.erase("runtime");
  return j;
}

TEST_CASE("select reports original ids and the LT first seed") {
  const Outcome o =
      Dir().Run("select --input " + DiamondFile().string() +
                " --directed --model lt --explicit-weights --k 1 --r 200000 --eval-r 100000");
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j.at("seeds") == nlohmann::json::array({100}));
  CHECK(j.at("gains")[0].get<double>() == doctest::Approx(testing::diamond::kSpreadOfA).epsilon(0.01));
  const auto& spread = j.at("spread");
  CHECK(std::abs(spread.at("mean").get<double>() - testing::diamond::kSpreadOfA) <
        4 * spread.at("std_error").get<double>() + 1e-9);
}

TEST_CASE("usage errors exit with 2") {
  const std::string in = " --input " + DiamondFile().string();
  CHECK(Dir().Run("select" + in + " --k 0").code == 2);
  CHECK(Dir().Run("select" + in + " --k -1").code == 2);
  CHECK(Dir().Run("select" + in + " --alg imm").code == 2);
  CHECK(Dir().Run("select" + in + " --model sir").code == 2);
  CHECK(Dir().Run("select" + in + " --model ic --rho 1").code == 2);
  CHECK(Dir().Run("select" + in + " --bogus").code == 2);
  CHECK(Dir().Run("select").code == 2);
  CHECK(Dir().Run("").code == 2);
}

TEST_CASE("runtime failures exit with 1 and say why") {
  const fs::path bad = Dir().Write("bad.txt", "1 2\n3 x\n");
  const Outcome parse = Dir().Run("select --input " + bad.string());
  CHECK(parse.code == 1);
  CHECK(parse.err.find("line 2") != std::string::npos);
  CHECK(Dir().Run("select --input " + (Dir() / "missing.txt").string()).code == 1);
  const Outcome too_many =
      Dir().Run("select --input " + DiamondFile().string() + " --directed --k 5");
  CHECK(too_many.code == 1);
}

TEST_CASE("repeated runs agree apart from runtime") {
  const fs::path g = Dir() / "ba.txt";
  REQUIRE(Dir().Run("generate --type ba --n 500 --m 2 --rng-seed 3 --output " + g.string()).code ==
          0);
  for (const std::string alg : {"rcelf", "sg", "ris"}) {
    const std::string args =
        "select --input " + g.string() + " --alg " + alg + " --k 5 --eval-r 500 --threads ";
    const Outcome one = Dir().Run(args + "1");
    const Outcome again = Dir().Run(args + "1");
    const Outcome four = Dir().Run(args + "4");
    REQUIRE(one.code == 0);
    const auto j1 = WithoutRuntime(nlohmann::json::parse(one.out));
    CHECK(j1 == WithoutRuntime(nlohmann::json::parse(again.out)));
    CHECK(j1 == WithoutRuntime(nlohmann::json::parse(four.out)));
  }
}

TEST_CASE("changing only the evaluation seed keeps the seed set") {
  const std::string args = "select --input " + DiamondFile().string() +
                           " --directed --model lt --explicit-weights --k 2 --eval-r 1000";
  const auto a = nlohmann::json::parse(Dir().Run(args).out);
  const auto b = nlohmann::json::parse(Dir().Run(args + " --eval-seed 77").out);
  CHECK(a.at("seeds") == b.at("seeds"));
  CHECK(a.at("spread").at("rng_seed") != b.at("spread").at("rng_seed"));
}

TEST_CASE("spread subcommand") {
  const std::string in = " --input " + DiamondFile().string() +
                         " --directed --model lt --explicit-weights";
  const Outcome all = Dir().Run("spread" + in + " --seeds " +
                                Dir().Write("all.txt", "100\n101\n102\n103\n").string());
  REQUIRE(all.code == 0);
  const auto j = nlohmann::json::parse(all.out);
  CHECK(j.at("mean") == 4.0);
  CHECK(j.at("std_error") == 0.0);

  const Outcome one = Dir().Run("spread" + in + " --r 200000 --seeds " +
                                Dir().Write("a.txt", "# a\n100\n").string());
  const auto ja = nlohmann::json::parse(one.out);
  CHECK(std::abs(ja.at("mean").get<double>() - testing::diamond::kSpreadOfA) <
        4 * ja.at("std_error").get<double>());

  CHECK(Dir().Run("spread" + in + " --seeds " + Dir().Write("none.txt", "# none\n").string())
            .code == 2);
  CHECK(Dir().Run("spread" + in + " --seeds " + Dir().Write("unk.txt", "5\n").string()).code == 1);
  CHECK(Dir().Run("spread" + in + " --seeds " + (Dir() / "nope.txt").string()).code == 1);
}

TEST_CASE("convert writes a dense list plus the id map") {
  const fs::path raw = Dir().Write("raw.txt", "900 7\n7 -2\n900 -2\n");
  const fs::path dense = Dir() / "dense.txt";
  REQUIRE(Dir().Run("convert --input " + raw.string() + " --output " + dense.string()).code == 0);
  std::ifstream ids(dense.string() + ".ids.csv");
  REQUIRE(ids.good());
  std::map<std::string, std::string> map;
  std::string line;
  while (std::getline(ids, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    map[line.substr(0, comma)] = line.substr(comma + 1);
  }
  CHECK(map["-2"] == "0");
  CHECK(map["7"] == "1");
  CHECK(map["900"] == "2");
  std::ifstream in(dense);
  const Graph g = ParseEdgeList(in, false, WeightPolicy::GeneralizedInDegree(1.0));
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 6);
}

TEST_CASE("bench sweep writes one row per cell and records failures") {
  const fs::path g = Dir() / "bench_graph.txt";
  REQUIRE(Dir().Run("generate --type ba --n 400 --m 2 --rng-seed 8 --output " + g.string()).code ==
          0);
  const nlohmann::json matrix = {{"input", g.string()},
                                 {"algorithms", {"rcelf", "rcelf-nobound"}},
                                 {"rho", {0.1, 1.0, 1.3}},
                                 {"k", {5, 10}},
                                 {"eval_r", 200},
                                 {"threads", 1}};
  std::ofstream(Dir() / "matrix.json") << matrix.dump();
  const fs::path csv = Dir() / "sweep.csv";
  const Outcome o = Dir().Run("bench --matrix " + (Dir() / "matrix.json").string() +
                              " --output " + csv.string() + " --scratch " +
                              (Dir() / "scratch").string());
  REQUIRE(o.code == 0);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == CsvHeader());
  std::map<std::string, std::map<std::string, BenchRow>> by_cell;
  int rows = 0;
  while (std::getline(in, line)) {
    const BenchRow row = BenchRow::ParseCsv(line);
    CHECK(row.ok());
    ++rows;
    by_cell[std::to_string(row.rho) + "/" + std::to_string(row.k)][row.alg] = row;
  }
  CHECK(rows == 12);
  for (const auto& [cell, algs] : by_cell) {
    CAPTURE(cell);
    CHECK(algs.at("rcelf").exact_mg_count <= algs.at("rcelf-nobound").exact_mg_count);
  }

  const nlohmann::json failing = {{"input", g.string()},
                                  {"algorithms", {"rcelf"}},
                                  {"rho", {1.0}},
                                  {"k", {5000, 3}},
                                  {"eval_r", 10}};
  std::ofstream(Dir() / "failing.json") << failing.dump();
  const Outcome f = Dir().Run("bench --matrix " + (Dir() / "failing.json").string() +
                              " --scratch " + (Dir() / "scratch").string());
  REQUIRE(f.code == 0);
  std::istringstream lines(f.out);
  std::getline(lines, line);
  std::getline(lines, line);
  CHECK_FALSE(BenchRow::ParseCsv(line).ok());
  std::getline(lines, line);
  CHECK(BenchRow::ParseCsv(line).ok());
}

}  // namespace
}  // namespace imax
