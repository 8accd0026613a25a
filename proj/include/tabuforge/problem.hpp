#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tabuforge {

// Penalized objective assigned when an evaluation cannot produce a finite
// result (singular structure, degenerate field, thrown error). Finite so
// records stay ordered and serializable.
inline constexpr double kInfeasibleSentinel = 1e30;

// A point in design space. Every component is lower_bound_i + k_i *
// min_step_i for a non-negative integer k_i; all construction goes through
// Quantizer / quantize() so equal grid points compare bitwise equal and the
// tabu membership test needs no epsilon.
struct SolutionVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const SolutionVector&) const = default;
};

// What a problem's evaluator reports for one design: the raw objective and
// one violation magnitude (>= 0, 0 when satisfied) per constraint.
struct RawEvaluation {
  double raw = 0.0;
  std::vector<double> violations;
};

// Bounds, step quanta and evaluator for one design problem. Objective and
// constraints come from a single evaluator call because benchmark problems
// derive both from one underlying analysis. The evaluator must be pure;
// it may throw or return non-finite values for degenerate designs, which
// evaluate() maps to the sentinel.
struct ProblemDefinition {
  std::string name;
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;
  std::vector<double> min_steps;
  std::size_t constraint_count = 0;
  std::function<RawEvaluation(const SolutionVector&)> evaluator;
  // Fixed start; disengaged means the search draws a random start.
  std::optional<SolutionVector> start;

  std::size_t dimension() const { return lower_bounds.size(); }

  // Convenience views of the combined evaluator.
  double objective(const SolutionVector& x) const { return evaluator(x).raw; }
  std::vector<double> constraint_violations(const SolutionVector& x) const {
    return evaluator(x).violations;
  }

  // Throws std::invalid_argument on dimension mismatches, inverted bounds,
  // non-positive steps, or ranges that are not whole multiples of the step.
  void validate() const;
};

// Static quadratic exterior penalty: penalized = raw + sum w_j * v_j^e.
struct PenaltyConfig {
  std::vector<double> weights;  // one per constraint, finite and > 0
  double exponent = 2.0;        // >= 1

  void validate(std::size_t constraint_count) const;
};

enum class Phase { kLocal, kIntensified, kDiversified, kReduced };

const char* to_string(Phase p);

// One objective evaluation. `accepted` marks solutions the search actually
// moved to (including restarts, which also set is_restart); aspiration and
// tabu_escape flag the two sanctioned ways a tabu solution may be revisited.
struct EvaluationRecord {
  SolutionVector vector;
  double raw_objective = 0.0;
  std::vector<double> violations;
  double penalized_objective = 0.0;
  bool feasible = false;
  std::uint64_t eval_index = 0;
  Phase phase = Phase::kLocal;
  bool accepted = false;
  bool is_restart = false;
  bool aspiration = false;
  bool tabu_escape = false;
};

// Grid arithmetic for one problem. Rounding is half-away-from-lower-bound
// with a 1e-9-step nudge so decimal inputs that sit on a half boundary in
// exact arithmetic (e.g. 0.015 on a 0.01 grid) round up as intended despite
// binary floating point representing them slightly low.
class Quantizer {
 public:
  explicit Quantizer(const ProblemDefinition& p);

  // Clamp to bounds, snap to grid, return the canonical lb + k*step value.
  double component(std::size_t dim, double raw) const;
  SolutionVector quantize(const std::vector<double>& raw) const;

  // Index k of an on-grid value; the inverse of grid_value.
  std::int64_t grid_index(std::size_t dim, double value) const;
  // Largest valid index (number of grid points minus one).
  std::int64_t max_index(std::size_t dim) const { return count_[dim]; }
  double grid_value(std::size_t dim, std::int64_t k) const;

  std::size_t dimension() const { return lower_.size(); }
  double lower(std::size_t dim) const { return lower_[dim]; }
  double upper(std::size_t dim) const { return upper_[dim]; }
  double step(std::size_t dim) const { return step_[dim]; }

 private:
  std::vector<double> lower_, upper_, step_;
  std::vector<std::int64_t> count_;
};

// Free-function forms used by problem code and tests.
SolutionVector quantize(const ProblemDefinition& p, const std::vector<double>& raw);

// Evaluate x, compose the penalty, map failures to the sentinel. eval_index
// and phase are left for the caller (the engine) to fill in.
EvaluationRecord evaluate(const ProblemDefinition& p, const PenaltyConfig& pen,
                          const SolutionVector& x);

}  // namespace tabuforge
