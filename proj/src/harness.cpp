#include "tabuforge/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "tabuforge/fmt.hpp"

namespace tabuforge::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, delim)) parts.push_back(trim(item));
  return parts;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(key + ": cannot parse '" + text + "' as a count");
  }
}

double parse_f64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(key + ": cannot parse '" + text + "' as a number");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw std::runtime_error(key + ": cannot parse '" + text + "' as a boolean");
}

std::vector<std::uint64_t> parse_u64_list(const std::string& key,
                                          const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const std::string& part : split(text, ','))
    if (!part.empty()) out.push_back(parse_u64(key, part));
  if (out.empty()) throw std::runtime_error(key + ": empty list");
  return out;
}

std::vector<double> parse_f64_list(const std::string& key,
                                   const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ','))
    if (!part.empty()) out.push_back(parse_f64(key, part));
  if (out.empty()) throw std::runtime_error(key + ": empty list");
  return out;
}

void apply_config_entry(const std::string& key, const std::string& value,
                        HarnessOptions& opts) {
  if (key == "engine.tabu_tenure_n")
    opts.engine.tabu_tenure_n = parse_u64(key, value);
  else if (key == "engine.best_memory_size_m")
    opts.engine.best_memory_size_m = parse_u64(key, value);
  else if (key == "engine.initial_step") {
    opts.engine.initial_step = parse_f64_list(key, value);
    opts.engine_initial_step_set = true;
  } else if (key == "engine.step_reduction_factor")
    opts.engine.step_reduction_factor = parse_f64(key, value);
  else if (key == "engine.intensify_after")
    opts.engine.intensify_after = parse_u64(key, value);
  else if (key == "engine.diversify_after")
    opts.engine.diversify_after = parse_u64(key, value);
  else if (key == "engine.reduce_after")
    opts.engine.reduce_after = parse_u64(key, value);
  else if (key == "engine.max_evaluations")
    opts.engine.max_evaluations = parse_u64(key, value);
  else if (key == "engine.aspiration")
    opts.engine.aspiration = parse_bool(key, value);
  else if (key == "problem.name" || key == "harness.problem")
    opts.problem = value;
  else if (key == "harness.seed")
    opts.seed = parse_u64(key, value);
  else if (key == "harness.runs")
    opts.runs = static_cast<int>(parse_u64(key, value));
  else if (key == "harness.out_dir")
    opts.out_dir = value;
  else if (key == "harness.snapshots")
    opts.snapshots = parse_u64_list(key, value);
  else if (key.rfind("problem.", 0) == 0)
    opts.problem_options[key.substr(8)] = value;
  else
    throw std::runtime_error("unknown config key '" + key + "'");
}

}  // namespace

void apply_config_text(std::istream& in, HarnessOptions& opts) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": empty key");
    apply_config_entry(key, value, opts);
  }
}

void write_convergence_log(const std::vector<EvaluationRecord>& history,
                           std::ostream& out) {
  out << "eval_index,raw_objective,penalized_objective,best_so_far,feasible,phase\n";
  double best = kInfeasibleSentinel;
  bool has_best = false;
  for (const EvaluationRecord& rec : history) {
    if (!has_best || rec.penalized_objective < best) {
      best = rec.penalized_objective;
      has_best = true;
    }
    out << rec.eval_index << "," << format_double(rec.raw_objective) << ","
        << format_double(rec.penalized_objective) << "," << format_double(best)
        << "," << (rec.feasible ? 1 : 0) << "," << to_string(rec.phase)
        << "\n";
  }
}

namespace {

// Best objective after `point` evaluations: the recorded snapshot when the
// run got that far, the final best otherwise.
double snapshot_value(const SearchOutcome& outcome, std::uint64_t point) {
  for (const SnapshotEntry& s : outcome.snapshots)
    if (s.evaluations == point) return s.best_objective;
  return outcome.best_penalized;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

void write_summary(const std::vector<SearchOutcome>& outcomes,
                   const std::vector<std::uint64_t>& snapshot_points,
                   std::ostream& out) {
  out << "snapshot,min,max,median\n";
  std::vector<std::uint64_t> points = snapshot_points;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  auto row = [&](const std::string& label, const std::vector<double>& values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    out << label << "," << format_double(*lo) << "," << format_double(*hi)
        << "," << format_double(median(values)) << "\n";
  };
  for (std::uint64_t p : points) {
    std::vector<double> values;
    values.reserve(outcomes.size());
    for (const SearchOutcome& o : outcomes) values.push_back(snapshot_value(o, p));
    row(std::to_string(p), values);
  }
  std::vector<double> converged;
  converged.reserve(outcomes.size());
  for (const SearchOutcome& o : outcomes) converged.push_back(o.best_penalized);
  row("converged", converged);
}

std::string result_json(const HarnessOptions& opts, const Benchmark& bench,
                        std::uint64_t run_seed, const SearchOutcome& outcome,
                        double wall_time_ms) {
  (void)bench;  // reserved for benchmark-specific extras
  nlohmann::json j;
  j["problem"] = opts.problem;
  j["seed"] = run_seed;

  nlohmann::json engine;
  engine["tabu_tenure_n"] = opts.engine.tabu_tenure_n;
  engine["best_memory_size_m"] = opts.engine.best_memory_size_m;
  engine["initial_step"] = opts.engine.initial_step;
  engine["step_reduction_factor"] = opts.engine.step_reduction_factor;
  engine["intensify_after"] = opts.engine.intensify_after;
  engine["diversify_after"] = opts.engine.diversify_after;
  engine["reduce_after"] = opts.engine.reduce_after;
  engine["max_evaluations"] = opts.engine.max_evaluations;
  engine["aspiration"] = opts.engine.aspiration;
  engine["rng_seed"] = run_seed;
  j["config"]["engine"] = engine;

  nlohmann::json problem;
  problem["name"] = opts.problem;
  for (const auto& [key, value] : opts.problem_options) problem[key] = value;
  j["config"]["problem"] = problem;

  nlohmann::json harness;
  harness["seed"] = opts.seed;
  harness["runs"] = opts.runs;
  // out_dir is deliberately not echoed: the payload stays byte-identical no
  // matter where it is written.
  harness["snapshots"] = opts.snapshots;
  j["config"]["harness"] = harness;

  j["best"]["vector"] = outcome.best_vector.values;
  j["best"]["raw_objective"] = outcome.best_raw;
  j["best"]["penalized_objective"] = outcome.best_penalized;
  j["best"]["feasible"] = outcome.best_feasible;
  if (outcome.best_feasible_vector) {
    j["best_feasible"]["vector"] = outcome.best_feasible_vector->values;
    j["best_feasible"]["raw_objective"] = outcome.best_feasible_raw;
  } else {
    j["best_feasible"] = nullptr;
  }
  j["evaluations_used"] = outcome.evaluations_used;
  j["termination"] = to_string(outcome.termination);

  nlohmann::json snaps = nlohmann::json::array();
  std::vector<std::uint64_t> points = opts.snapshots;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::uint64_t p : points) {
    nlohmann::json entry;
    entry["evaluations"] = p;
    entry["best_objective"] = snapshot_value(outcome, p);
    snaps.push_back(entry);
  }
  nlohmann::json conv;
  conv["evaluations"] = outcome.evaluations_used;
  conv["best_objective"] = outcome.best_penalized;
  conv["converged"] = true;
  snaps.push_back(conv);
  j["snapshots"] = snaps;

  j["wall_time_ms"] = wall_time_ms;
  return j.dump(2) + "\n";
}

namespace {

int run_batch(HarnessOptions& opts, const Benchmark& bench) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << opts.out_dir
              << "': " << ec.message() << "\n";
    return 1;
  }

  // A single config scalar broadcasts across every dimension.
  if (opts.engine.initial_step.size() == 1 && opts.dimension > 1)
    opts.engine.initial_step.assign(opts.dimension,
                                    opts.engine.initial_step[0]);

  std::vector<SearchOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(opts.runs));
  for (int i = 0; i < opts.runs; ++i) {
    const std::uint64_t run_seed = opts.seed + static_cast<std::uint64_t>(i);
    SearchConfig cfg = opts.engine;
    cfg.rng_seed = run_seed;
    cfg.snapshot_points = opts.snapshots;

    const auto t0 = std::chrono::steady_clock::now();
    SearchOutcome outcome = run_search(bench.problem, bench.penalty, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    const double wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    const std::string stem =
        opts.out_dir + "/" + opts.problem + "-" + std::to_string(run_seed);
    {
      std::ofstream json_out(stem + ".json");
      if (!json_out) {
        std::cerr << "error: cannot write " << stem << ".json\n";
        return 1;
      }
      json_out << result_json(opts, bench, run_seed, outcome, wall_ms);
    }
    {
      std::ofstream csv_out(stem + "-convergence.csv");
      if (!csv_out) {
        std::cerr << "error: cannot write " << stem << "-convergence.csv\n";
        return 1;
      }
      write_convergence_log(outcome.history, csv_out);
    }
    if (bench.plot_writer) {
      std::ofstream plot_out(stem + "-profile.csv");
      if (!plot_out) {
        std::cerr << "error: cannot write " << stem << "-profile.csv\n";
        return 1;
      }
      bench.plot_writer(outcome.best_vector, plot_out);
    }
    outcomes.push_back(std::move(outcome));
  }

  const std::string summary_path =
      opts.out_dir + "/" + opts.problem + "-summary.csv";
  std::ofstream summary_out(summary_path);
  if (!summary_out) {
    std::cerr << "error: cannot write " << summary_path << "\n";
    return 1;
  }
  write_summary(outcomes, opts.snapshots, summary_out);
  return 0;
}

}  // namespace

int run_main(const std::vector<std::string>& args) {
  CLI::App app{
      "Tabu-search benchmark harness: seeded runs with convergence logs"};
  app.name("tabuforge");

  std::string problem, config_path, out_dir, snapshots_text;
  std::uint64_t seed = 0, max_evals = 0;
  int runs = 0;
  bool strict = false;
  app.add_option("--problem", problem,
                 "problem name (twobasin, tenbar, pole1..pole4)");
  app.add_option("--seed", seed, "base RNG seed; run i uses seed+i");
  app.add_option("--runs", runs, "number of seeded runs");
  app.add_option("--max-evals", max_evals, "evaluation budget per run");
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out-dir", out_dir,
                 "output directory (env TABU_FORGE_OUT overrides)");
  app.add_option("--snapshots", snapshots_text,
                 "comma-separated evaluation counts to snapshot");
  app.add_flag("--strict-paper", strict,
               "disable the aspiration rule (pure tabu acceptance)");

  std::vector<const char*> argv;
  argv.push_back("tabuforge");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage
  }

  HarnessOptions opts;
  if (app.count("--config") > 0) {
    std::ifstream config_in(config_path);
    if (!config_in) {
      std::cerr << "error: cannot read config file '" << config_path << "'\n";
      return 2;
    }
    try {
      apply_config_text(config_in, opts);
    } catch (const std::exception& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return 2;
    }
  }
  if (app.count("--problem") > 0) opts.problem = problem;
  if (app.count("--seed") > 0) opts.seed = seed;
  if (app.count("--runs") > 0) opts.runs = runs;
  if (app.count("--max-evals") > 0) opts.engine.max_evaluations = max_evals;
  if (app.count("--out-dir") > 0) opts.out_dir = out_dir;
  if (app.count("--snapshots") > 0) {
    try {
      opts.snapshots = parse_u64_list("--snapshots", snapshots_text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  if (strict) opts.engine.aspiration = false;
  if (const char* env_out = std::getenv("TABU_FORGE_OUT"))
    if (*env_out != '\0') opts.out_dir = env_out;

  if (opts.problem.empty()) {
    std::cerr << "error: no problem selected\n" << app.help() << "\n";
    return 2;
  }
  if (opts.runs < 1) {
    std::cerr << "error: --runs must be at least 1\n";
    return 2;
  }

  Benchmark bench;
  try {
    bench = make_benchmark(opts.problem, opts.problem_options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
    return 2;
  }
  if (!opts.engine_initial_step_set && !bench.initial_step.empty())
    opts.engine.initial_step = bench.initial_step;
  opts.dimension = bench.problem.dimension();

  try {
    return run_batch(opts, bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_main(args);
}

}  // namespace tabuforge::cli
