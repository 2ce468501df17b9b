// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lllkit/cli.hpp"
#include "lllkit/io.hpp"

using namespace lllkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lllkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "lllkit_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const std::string kFixtures = FIXTURE_DIR;

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"solve-csp", "--help"}).code == kExitOk);
  CHECK(run({"no-such-command"}).code == kExitInput);
  CHECK(run({"benchmark"}).code == kExitInput);
}

TEST_CASE("solve-csp") {
  const auto sol = scratch("good.solution.json");
  const auto r = run({"solve-csp", kFixtures + "/good.json", "--out", sol.string(), "--oracle"});
  CHECK(r.code == kExitOk);
  const auto j = read_json_file(sol.string());
  CHECK(j["status"] == "solved");
  const auto col = j["coloring"];
  REQUIRE(col.size() == 8);
  for (std::size_t i = 0; i + 1 < 8; ++i) CHECK(col[i] != col[i + 1]);
  const auto csp_bytes = slurp(kFixtures + "/good.json");
  CHECK(j["input_sha256"].get<std::string>() ==
        sha256_hex("solve-csp\ncsp:" + std::to_string(csp_bytes.size()) + "\n" + csp_bytes));

  const auto first = slurp(sol);
  CHECK(run({"solve-csp", kFixtures + "/good.json", "--out", sol.string(), "--oracle"}).code == kExitOk);
  CHECK(slurp(sol) == first);

  const auto rej = scratch("sinkless.json");
  CHECK(run({"solve-csp", kFixtures + "/sharp-sinkless.json", "--out", rej.string()}).code ==
        kExitRejected);
  CHECK(read_json_file(rej.string())["status"] == "gate-rejected");

  const auto bad = scratch("malformed.json");
  spit(bad, "{\"k\": 2, \"points\": ");
  CHECK(run({"solve-csp", bad.string()}).code == kExitInput);
  CHECK(run({"solve-csp", scratch("missing.json").string()}).code == kExitInput);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("build-tiles and find-avoiding") {
  const auto group = scratch("z.json");
  spit(group, R"({"kind":"lattice","d":1})");
  const auto tiles = scratch("h.bin");
  CHECK(run({"build-tiles", "--group", group.string(), "--D", "[[-1],[0],[1]]", "--n", "5",
             "--out", tiles.string(), "--seed", "9"})
            .code == kExitOk);
  const auto bytes = slurp(tiles);
  CHECK(run({"build-tiles", "--group", group.string(), "--D", "[[-1],[0],[1]]", "--n", "5",
             "--out", tiles.string(), "--seed", "9"})
            .code == kExitOk);
  CHECK(slurp(tiles) == bytes);
  std::istringstream in(bytes);
  const auto tf = read_tiles(in);
  CHECK(tf.seed == 9);
  const auto gb = slurp(group);
  CHECK(tf.digest == sha256_hex("build-tiles\ngroup:" + std::to_string(gb.size()) + "\n" + gb +
                                "D=[[-1],[0],[1]]\nn=5\n"));

  CHECK(run({"build-tiles", "--group", group.string(), "--D", "[[-1],[0],[1]]", "--n", "60",
             "--out", tiles.string(), "--budget-vertices", "100"})
            .code == kExitBudget);
  CHECK(run({"build-tiles", "--group", group.string(), "--D", "[[0],[1]]", "--n", "5", "--out",
             tiles.string()})
            .code == kExitInput);

  CHECK(run({"build-tiles", "--group", group.string(), "--D", "[[-1],[0],[1]]", "--n", "4",
             "--out", tiles.string()})
            .code == kExitOk);
  const auto pats = scratch("one.json");
  spit(pats, R"({"k":1,"patterns":[{"dom":[[0]],"values":[0]}]})");
  CHECK(run({"find-avoiding", "--tiles", tiles.string(), "--patterns", pats.string()}).code ==
        kExitRejected);
  spit(pats, R"({"k":3,"patterns":[{"dom":[[0],[1]],"values":[0,0]},{"dom":[[0],[1]],"values":[1,1]},{"dom":[[0],[1]],"values":[2,2]}]})");
  const auto res = scratch("avoid.json");
  CHECK(run({"find-avoiding", "--tiles", tiles.string(), "--patterns", pats.string(), "--out",
             res.string()})
            .code == kExitOk);
  CHECK(read_json_file(res.string())["status"] == "found");
}

TEST_CASE("run-local and benchmark") {
  const auto graph = scratch("cycle.json");
  spit(graph, R"({"group":{"kind":"torus","d":1,"q":64},"vertices":"all"})");
  const auto ledger = scratch("ledger.csv");
  CHECK(run({"run-local", "--graph", graph.string(), "--algo", "gps", "--ledger", ledger.string()})
            .code == kExitOk);
  const auto csv = slurp(ledger);
  CHECK(csv.rfind("# input_sha256=", 0) == 0);
  CHECK(csv.find("phase,rounds,n,d\n") != std::string::npos);
  CHECK(run({"run-local", "--graph", graph.string(), "--algo", "nope"}).code == kExitInput);

  const auto bench = scratch("bench.csv");
  CHECK(run({"benchmark", "--pipeline", "gps", "--sizes", "1,256", "--out", bench.string()}).code ==
        kExitOk);
  std::istringstream lines(slurp(bench));
  std::string pre, header, one;
  std::getline(lines, pre);
  std::getline(lines, header);
  std::getline(lines, one);
  CHECK(pre.rfind("# input_sha256=", 0) == 0);
  CHECK(header == "n,rounds,log_star_n,linial,elimination");
  CHECK(one.rfind("1,0,0", 0) == 0);

  const auto rows = benchmark_rounds({1, 16, 256}, "hom", "cycle", 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rounds == 0);
  CHECK(rows[2].log_star_n == 4);
}

TEST_CASE("budgets from the environment") {
  ::setenv("LLLKIT_TIME_LIMIT_MS", "1234", 1);
  CHECK(budgets_from_env().time.count() == 1234);
  ::setenv("LLLKIT_TIME_LIMIT_MS", "-4", 1);
  CHECK_THROWS(budgets_from_env());
  ::unsetenv("LLLKIT_TIME_LIMIT_MS");
  CHECK(budgets_from_env().time.count() == Budgets{}.time.count());
}
