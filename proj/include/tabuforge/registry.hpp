#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tabuforge/problem.hpp"
#include "tabuforge/search.hpp"
#include "tabuforge/truss.hpp"

namespace tabuforge {

// A named, ready-to-run problem: definition, matching penalty, engine-config
// adjustments the benchmark wants (currently initial steps for the truss),
// and optional extras (solver statistics, plot exports).
struct Benchmark {
  ProblemDefinition problem;
  PenaltyConfig penalty;
  // Per-dimension initial steps the benchmark recommends; empty keeps the
  // engine default of range/20.
  std::vector<double> initial_step;
  // Aggregated analysis statistics, when the problem has an inner solver.
  std::shared_ptr<truss::SolveStats> solve_stats;
  // Writes a plot-ready artifact (profile polyline) for a solution vector.
  std::function<void(const SolutionVector&, std::ostream&)> plot_writer;
};

// Names: twobasin, tenbar, pole1..pole4. Options are benchmark-specific
// "problem.*" config values with the prefix stripped — tenbar: load,
// area_max, coord_box, length_limit, stress_limit, start_area; poleN:
// n_ring. Throws std::invalid_argument for unknown names, unknown option
// keys, or unparsable values.
Benchmark make_benchmark(const std::string& name,
                         const std::map<std::string, std::string>& options = {});

std::vector<std::string> benchmark_names();

}  // namespace tabuforge
