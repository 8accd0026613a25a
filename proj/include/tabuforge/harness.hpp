#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tabuforge/registry.hpp"
#include "tabuforge/search.hpp"

namespace tabuforge::cli {

// Effective harness-level settings after merging defaults, config file, and
// command-line flags (flags win; TABU_FORGE_OUT beats --out-dir).
struct HarnessOptions {
  std::string problem;
  std::uint64_t seed = 1;       // base seed; run i uses seed + i
  int runs = 5;
  std::string out_dir = "results";
  std::vector<std::uint64_t> snapshots = {20, 100, 1000};
  SearchConfig engine;          // rng_seed filled per run
  std::map<std::string, std::string> problem_options;
  bool engine_initial_step_set = false;  // config overrode the benchmark's
  std::size_t dimension = 0;    // resolved problem dimension
};

// Flat key=value config text: '#' comments, blank lines ignored, keys are
// engine.*, harness.*, or problem.*. Throws std::runtime_error with a
// reason for syntax errors or unknown keys.
void apply_config_text(std::istream& in, HarnessOptions& opts);

// One run's convergence history. Columns exactly:
// eval_index,raw_objective,penalized_objective,best_so_far,feasible,phase
void write_convergence_log(const std::vector<EvaluationRecord>& history,
                           std::ostream& out);

// Best objective of each run at each snapshot point (rows: one per snapshot
// plus "converged"); per row min, max, and median across runs.
void write_summary(const std::vector<SearchOutcome>& outcomes,
                   const std::vector<std::uint64_t>& snapshot_points,
                   std::ostream& out);

// The JSON result document for one finished run.
std::string result_json(const HarnessOptions& opts, const Benchmark& bench,
                        std::uint64_t run_seed, const SearchOutcome& outcome,
                        double wall_time_ms);

// Full CLI entry: parse flags, merge config, run the seeded batch, write
// result files. Returns the process exit status: 0 success, 2 usage/config
// errors (unknown problem, unreadable config), 1 internal failures.
int run_main(const std::vector<std::string>& args);
int run_main(int argc, char** argv);

}  // namespace tabuforge::cli
