#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tabuforge/harness.hpp"

using namespace tabuforge;
using namespace tabuforge::cli;
namespace fs = std::filesystem;

namespace {

HarnessOptions parse_config(const std::string& text) {
  HarnessOptions opts;
  std::istringstream in(text);
  apply_config_text(in, opts);
  return opts;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Comparison form of a result document: every line except the wall time.
std::string without_wall_time(const std::string& json_text) {
  std::istringstream in(json_text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("wall_time_ms") == std::string::npos) out << line << "\n";
  return out.str();
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "tabuforge-tests" / leaf;
  fs::remove_all(dir);
  return dir;
}

EvaluationRecord record(std::uint64_t index, double raw, double penalized,
                        bool feasible, Phase phase) {
  EvaluationRecord rec;
  rec.eval_index = index;
  rec.raw_objective = raw;
  rec.penalized_objective = penalized;
  rec.feasible = feasible;
  rec.phase = phase;
  return rec;
}

}  // namespace

TEST_CASE("config text: sections, comments, and value parsing") {
  const HarnessOptions opts = parse_config(
      "# engine block\n"
      "engine.tabu_tenure_n = 9\n"
      "engine.best_memory_size_m = 3\n"
      "engine.initial_step = 2.5, 1.5\n"
      "engine.step_reduction_factor = 0.25\n"
      "engine.intensify_after = 4\n"
      "engine.diversify_after = 6\n"
      "engine.reduce_after = 8\n"
      "engine.max_evaluations = 500\n"
      "engine.aspiration = off\n"
      "\n"
      "harness.problem = tenbar  # trailing comment\n"
      "harness.seed = 17\n"
      "harness.runs = 3\n"
      "harness.out_dir = /tmp/somewhere\n"
      "harness.snapshots = 10,50,200\n"
      "problem.load = 300000\n"
      "problem.area_max = 250\n");
  CHECK(opts.engine.tabu_tenure_n == 9);
  CHECK(opts.engine.best_memory_size_m == 3);
  CHECK(opts.engine.initial_step == std::vector<double>{2.5, 1.5});
  CHECK(opts.engine_initial_step_set);
  CHECK(opts.engine.step_reduction_factor == 0.25);
  CHECK(opts.engine.intensify_after == 4);
  CHECK(opts.engine.diversify_after == 6);
  CHECK(opts.engine.reduce_after == 8);
  CHECK(opts.engine.max_evaluations == 500);
  CHECK_FALSE(opts.engine.aspiration);
  CHECK(opts.problem == "tenbar");
  CHECK(opts.seed == 17);
  CHECK(opts.runs == 3);
  CHECK(opts.out_dir == "/tmp/somewhere");
  CHECK(opts.snapshots == std::vector<std::uint64_t>{10, 50, 200});
  CHECK(opts.problem_options.at("load") == "300000");
  CHECK(opts.problem_options.at("area_max") == "250");

  // Untouched keys keep their defaults.
  const HarnessOptions defaults = parse_config("harness.seed = 2\n");
  CHECK(defaults.runs == 5);
  CHECK(defaults.out_dir == "results");
  CHECK_FALSE(defaults.engine_initial_step_set);

  // problem.name mirrors the echoed JSON layout and selects the problem
  // rather than becoming a benchmark option.
  const HarnessOptions named = parse_config("problem.name = pole2\n");
  CHECK(named.problem == "pole2");
  CHECK(named.problem_options.empty());
}

TEST_CASE("config text: malformed input is rejected with a reason") {
  CHECK_THROWS_AS(parse_config("garbage line\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("= 5\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("engine.unknown_knob = 1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("wrong.prefix = 1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("engine.max_evaluations = abc\n"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_config("engine.aspiration = maybe\n"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_config("harness.snapshots = ,\n"), std::runtime_error);
}

TEST_CASE("convergence log format") {
  const std::vector<EvaluationRecord> history = {
      record(1, 5.0, 5.0, true, Phase::kLocal),
      record(2, 7.0, 9.0, false, Phase::kDiversified),
      record(3, 4.0, 4.0, true, Phase::kReduced),
  };
  std::ostringstream out;
  write_convergence_log(history, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "eval_index,raw_objective,penalized_objective,best_so_far,feasible,phase");
  std::getline(in, line);
  CHECK(line == "1,5,5,5,1,LOCAL");
  std::getline(in, line);
  CHECK(line == "2,7,9,5,0,DIVERSIFIED");
  std::getline(in, line);
  CHECK(line == "3,4,4,4,1,REDUCED");
  CHECK_FALSE(std::getline(in, line));  // header + one line per evaluation
}

TEST_CASE("summary rows: min, max, median per snapshot point") {
  SearchOutcome a;
  a.snapshots = {{20, 900.0}, {100, 300.0}, {1000, 66.0}};
  a.best_penalized = 60.0;
  SearchOutcome b;
  b.snapshots = {{20, 1200.0}, {100, 800.0}, {1000, 425.0}};
  b.best_penalized = 425.0;  // terminated between 1000 and the budget

  std::ostringstream out;
  write_summary({a, b}, {20, 100, 1000}, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "snapshot,min,max,median");
  std::getline(in, line);
  CHECK(line == "20,900,1200,1050");
  std::getline(in, line);
  CHECK(line == "100,300,800,550");
  std::getline(in, line);
  CHECK(line == "1000,66,425,245.5");
  std::getline(in, line);
  CHECK(line == "converged,60,425,242.5");
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("summary of a single run degenerates to one value per row") {
  SearchOutcome only;
  only.snapshots = {{20, 50.0}};
  only.best_penalized = 42.0;
  std::ostringstream out;
  write_summary({only}, {20}, out);
  CHECK(out.str() == "snapshot,min,max,median\n20,50,50,50\nconverged,42,42,42\n");
}

TEST_CASE("a run that stops short of a snapshot reports its final best") {
  SearchOutcome o;
  o.snapshots = {{20, 75.0}};  // never reached 100
  o.best_penalized = 70.0;
  std::ostringstream out;
  write_summary({o}, {20, 100}, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "20,75,75,75");
  std::getline(in, line);
  CHECK(line == "100,70,70,70");
}

TEST_CASE("result document carries config, outcome, and snapshots") {
  HarnessOptions opts;
  opts.problem = "twobasin";
  opts.seed = 3;
  opts.runs = 2;
  opts.out_dir = "results";
  opts.snapshots = {20, 100};
  opts.problem_options["load"] = "300000";
  Benchmark bench;

  SearchOutcome outcome;
  outcome.best_vector = SolutionVector{{5.0, 0.0}};
  outcome.best_penalized = -20.0;
  outcome.best_raw = -20.0;
  outcome.best_feasible = true;
  outcome.best_feasible_vector = outcome.best_vector;
  outcome.best_feasible_raw = -20.0;
  outcome.evaluations_used = 111;
  outcome.termination = Termination::kStepFloor;
  outcome.snapshots = {{20, -16.0}, {100, -20.0}};

  const std::string text = result_json(opts, bench, 4, outcome, 12.5);
  CHECK(text == result_json(opts, bench, 4, outcome, 12.5));
  CHECK(text.back() == '\n');

  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["problem"] == "twobasin");
  CHECK(j["seed"] == 4);
  CHECK(j["config"]["engine"]["rng_seed"] == 4);
  CHECK(j["config"]["engine"]["tabu_tenure_n"] == 7);
  CHECK(j["config"]["engine"]["aspiration"] == true);
  CHECK(j["config"]["problem"]["name"] == "twobasin");
  CHECK(j["config"]["problem"]["load"] == "300000");
  CHECK(j["config"]["harness"]["seed"] == 3);
  CHECK(j["config"]["harness"]["runs"] == 2);
  CHECK(j["best"]["vector"] == nlohmann::json::array({5.0, 0.0}));
  CHECK(j["best"]["feasible"] == true);
  CHECK(j["best_feasible"]["raw_objective"] == -20.0);
  CHECK(j["evaluations_used"] == 111);
  CHECK(j["termination"] == "step_floor");
  REQUIRE(j["snapshots"].size() == 3);
  CHECK(j["snapshots"][0]["evaluations"] == 20);
  CHECK(j["snapshots"][0]["best_objective"] == -16.0);
  CHECK(j["snapshots"][2]["converged"] == true);
  CHECK(j["snapshots"][2]["evaluations"] == 111);
  CHECK(j.contains("wall_time_ms"));

  // A run with no feasible point serializes a null best_feasible.
  SearchOutcome infeasible = outcome;
  infeasible.best_feasible_vector.reset();
  const nlohmann::json j2 =
      nlohmann::json::parse(result_json(opts, bench, 4, infeasible, 1.0));
  CHECK(j2["best_feasible"].is_null());
}

TEST_CASE("cli: usage errors exit with status 2") {
  CHECK(run_main({"--problem", "nosuch"}) == 2);
  CHECK(run_main({"--problem", "twobasin", "--runs", "0"}) == 2);
  CHECK(run_main({"--config", "/no/such/file.cfg"}) == 2);
  CHECK(run_main({}) == 2);  // no problem selected
  CHECK(run_main({"--no-such-flag"}) == 2);

  const fs::path dir = fresh_dir("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "engine.unknown = 1\n";
  CHECK(run_main({"--config", (dir / "bad.cfg").string()}) == 2);

  // Problem options are validated through the same path.
  CHECK(run_main({"--problem", "twobasin", "--seed", "1", "--runs", "1",
                  "--max-evals", "50", "--out-dir", (dir / "out").string(),
                  "--snapshots", "abc"}) == 2);
}

TEST_CASE("cli: unwritable output directory exits with status 1") {
  CHECK(run_main({"--problem", "twobasin", "--runs", "1", "--max-evals", "50",
                  "--out-dir", "/proc/not/writable/here"}) == 1);
}

TEST_CASE("cli: a seeded batch writes per-run results and a summary") {
  const fs::path dir = fresh_dir("batch");
  const int status =
      run_main({"--problem", "twobasin", "--seed", "3", "--runs", "2",
                "--max-evals", "300", "--out-dir", dir.string()});
  REQUIRE(status == 0);
  CHECK(fs::exists(dir / "twobasin-3.json"));
  CHECK(fs::exists(dir / "twobasin-3-convergence.csv"));
  CHECK(fs::exists(dir / "twobasin-4.json"));
  CHECK(fs::exists(dir / "twobasin-4-convergence.csv"));
  CHECK(fs::exists(dir / "twobasin-summary.csv"));

  const nlohmann::json j =
      nlohmann::json::parse(slurp(dir / "twobasin-3.json"));
  CHECK(j["problem"] == "twobasin");
  CHECK(j["seed"] == 3);
  CHECK(j["config"]["engine"]["max_evaluations"] == 300);
  CHECK(j["config"]["harness"]["runs"] == 2);
  CHECK(j["best"]["raw_objective"] == -20.0);

  const std::string csv = slurp(dir / "twobasin-3-convergence.csv");
  CHECK(csv.rfind("eval_index,raw_objective,penalized_objective,best_so_far,"
                  "feasible,phase\n", 0) == 0);

  const std::string summary = slurp(dir / "twobasin-summary.csv");
  CHECK(summary.rfind("snapshot,min,max,median\n", 0) == 0);
  CHECK(summary.find("\nconverged,") != std::string::npos);
}

TEST_CASE("cli: identical invocations reproduce identical artifacts") {
  const fs::path a = fresh_dir("det-a");
  const fs::path b = fresh_dir("det-b");
  const std::vector<std::string> base = {"--problem", "twobasin", "--seed",
                                         "7",         "--runs",   "2",
                                         "--max-evals", "250"};
  auto with_dir = [&](const fs::path& d) {
    std::vector<std::string> args = base;
    args.push_back("--out-dir");
    args.push_back(d.string());
    return args;
  };
  REQUIRE(run_main(with_dir(a)) == 0);
  REQUIRE(run_main(with_dir(b)) == 0);
  for (const std::string seed : {"7", "8"}) {
    CHECK(without_wall_time(slurp(a / ("twobasin-" + seed + ".json"))) ==
          without_wall_time(slurp(b / ("twobasin-" + seed + ".json"))));
    CHECK(slurp(a / ("twobasin-" + seed + "-convergence.csv")) ==
          slurp(b / ("twobasin-" + seed + "-convergence.csv")));
  }
  CHECK(slurp(a / "twobasin-summary.csv") == slurp(b / "twobasin-summary.csv"));
}

TEST_CASE("cli: the environment override beats the flag") {
  const fs::path flag_dir = fresh_dir("flagged");
  const fs::path env_dir = fresh_dir("env");
  setenv("TABU_FORGE_OUT", env_dir.string().c_str(), 1);
  const int status =
      run_main({"--problem", "twobasin", "--seed", "1", "--runs", "1",
                "--max-evals", "60", "--out-dir", flag_dir.string()});
  unsetenv("TABU_FORGE_OUT");
  REQUIRE(status == 0);
  CHECK(fs::exists(env_dir / "twobasin-1.json"));
  CHECK_FALSE(fs::exists(flag_dir / "twobasin-1.json"));

  // An empty value does not override.
  setenv("TABU_FORGE_OUT", "", 1);
  const int status2 =
      run_main({"--problem", "twobasin", "--seed", "1", "--runs", "1",
                "--max-evals", "60", "--out-dir", flag_dir.string()});
  unsetenv("TABU_FORGE_OUT");
  REQUIRE(status2 == 0);
  CHECK(fs::exists(flag_dir / "twobasin-1.json"));
}

TEST_CASE("cli: snapshot points flow from flag to result document") {
  const fs::path dir = fresh_dir("snaps");
  REQUIRE(run_main({"--problem", "twobasin", "--seed", "2", "--runs", "1",
                    "--max-evals", "80", "--out-dir", dir.string(),
                    "--snapshots", "10,50"}) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "twobasin-2.json"));
  REQUIRE(j["snapshots"].size() == 3);  // 10, 50, converged
  CHECK(j["snapshots"][0]["evaluations"] == 10);
  CHECK(j["snapshots"][1]["evaluations"] == 50);
  CHECK(j["config"]["harness"]["snapshots"] ==
        nlohmann::json::array({10, 50}));
}

TEST_CASE("cli: config file drives a run; flags take precedence") {
  const fs::path dir = fresh_dir("cfgrun");
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "harness.problem = twobasin\n"
                     << "harness.seed = 9\n"
                     << "harness.runs = 1\n"
                     << "harness.out_dir = " << (dir / "out").string() << "\n"
                     << "engine.tabu_tenure_n = 5\n"
                     << "engine.max_evaluations = 120\n";
  REQUIRE(run_main({"--config", cfg.string()}) == 0);
  const nlohmann::json j =
      nlohmann::json::parse(slurp(dir / "out" / "twobasin-9.json"));
  CHECK(j["config"]["engine"]["tabu_tenure_n"] == 5);
  CHECK(j["config"]["engine"]["max_evaluations"] == 120);

  // The --seed flag overrides the config's seed.
  REQUIRE(run_main({"--config", cfg.string(), "--seed", "11"}) == 0);
  CHECK(fs::exists(dir / "out" / "twobasin-11.json"));
}

TEST_CASE("cli: pole runs emit a plot-ready profile polyline") {
  const fs::path dir = fresh_dir("pole");
  REQUIRE(run_main({"--problem", "pole1", "--seed", "2", "--runs", "1",
                    "--max-evals", "25", "--out-dir", dir.string()}) == 0);
  CHECK(fs::exists(dir / "pole1-2.json"));
  const std::string profile = slurp(dir / "pole1-2-profile.csv");
  CHECK(profile.rfind("r,h\n", 0) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "pole1-2.json"));
  CHECK(j["config"]["problem"]["name"] == "pole1");
}

TEST_CASE("cli: strict mode disables aspiration in the effective config") {
  const fs::path dir = fresh_dir("strict");
  REQUIRE(run_main({"--problem", "twobasin", "--seed", "4", "--runs", "1",
                    "--max-evals", "60", "--out-dir", dir.string(),
                    "--strict-paper"}) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "twobasin-4.json"));
  CHECK(j["config"]["engine"]["aspiration"] == false);
}
