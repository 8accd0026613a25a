#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "tabuforge/problem.hpp"
#include "tabuforge/rng.hpp"

namespace tabuforge {

// Engine tunables. Defaults follow the short/intermediate memory design:
// tenure-7 FIFO of visited solutions, 5 elite solutions, and counter-driven
// intensify -> diversify -> step-reduce escalation on consecutive
// non-improving moves.
struct SearchConfig {
  std::size_t tabu_tenure_n = 7;        // 0 disables short-term memory
  std::size_t best_memory_size_m = 5;
  // Per-dimension initial step; empty -> 1/20 of each range. Values are
  // floored at the problem's min steps.
  std::vector<double> initial_step;
  double step_reduction_factor = 0.5;
  std::uint64_t intensify_after = 10;   // consecutive non-improving moves
  std::uint64_t diversify_after = 15;
  std::uint64_t reduce_after = 25;
  std::uint64_t max_evaluations = 20000;
  std::uint64_t rng_seed = 0;
  // Aspiration-by-objective: a tabu candidate is admissible when it beats the
  // best objective known before the current neighborhood. Disable for a pure
  // short-term-memory acceptance rule.
  bool aspiration = true;
  // Evaluation counts at which the best objective is snapshotted.
  std::vector<std::uint64_t> snapshot_points = {20, 100, 1000};

  void validate() const;  // throws std::invalid_argument
};

// FIFO of the last n visited solutions; membership is exact equality on the
// quantized grid.
class TabuMemory {
 public:
  explicit TabuMemory(std::size_t tenure) : tenure_(tenure) {}

  bool contains(const SolutionVector& c) const;
  void record(const SolutionVector& x);
  std::size_t size() const { return recent_.size(); }
  std::size_t tenure() const { return tenure_; }

 private:
  std::size_t tenure_;
  std::deque<SolutionVector> recent_;
};

inline bool is_tabu(const SolutionVector& c, const TabuMemory& mem) {
  return mem.contains(c);
}

// The m best distinct solutions found so far, sorted by penalized objective
// ascending. Updated only when an entry improves on the stored worst (or the
// list is not yet full); duplicates are ignored.
class BestMemory {
 public:
  explicit BestMemory(std::size_t capacity) : capacity_(capacity) {}

  // Returns true when the memory changed.
  bool insert(const SolutionVector& x, double objective);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<SolutionVector, double>>& entries() const {
    return entries_;
  }
  double worst_objective() const { return entries_.back().second; }

 private:
  std::size_t capacity_;
  std::vector<std::pair<SolutionVector, double>> entries_;
};

bool update_best_memory(const SolutionVector& x, double f, BestMemory& bm);

// One candidate move: the quantized neighbor plus which coordinate moved and
// in which direction (used for deterministic tie-breaking).
struct NeighborMove {
  SolutionVector vector;
  std::size_t dim = 0;
  int direction = 0;  // +1 or -1
};

// x +- step_i along each axis, clamped to bounds and quantized; candidates
// that collapse onto x are dropped. Throws on zero-dimension problems.
std::vector<NeighborMove> generate_neighbors(const SolutionVector& x,
                                             const std::vector<double>& step,
                                             const Quantizer& q);

struct ScoredMove {
  NeighborMove move;
  double penalized = 0.0;
};

struct MoveChoice {
  std::size_t index = 0;    // into the candidate sequence
  bool aspiration = false;  // tabu candidate admitted by objective
  bool tabu_escape = false; // every candidate tabu, none aspirated
};

// Lowest penalized objective among non-tabu candidates; a tabu candidate is
// admissible only when strictly below best_objective (if aspiration is on);
// if everything is tabu and nothing aspirates, the lowest-objective candidate
// is taken anyway. Ties break on lowest dimension, then negative direction.
MoveChoice select_move(const std::vector<ScoredMove>& candidates,
                       const TabuMemory& mem, double best_objective,
                       bool aspiration_enabled);

// Componentwise mean of the elite solutions, quantized. Throws when empty
// (callers fall through to diversify()).
SolutionVector intensify(const BestMemory& bm, const Quantizer& q);

// Uniform random grid point within bounds.
SolutionVector diversify(const Quantizer& q, Rng& rng);

enum class Termination { kBudgetExhausted, kStepFloor, kNoMoves };

const char* to_string(Termination t);

struct SnapshotEntry {
  std::uint64_t evaluations = 0;
  double best_objective = 0.0;
};

struct SearchOutcome {
  SolutionVector best_vector;
  double best_penalized = kInfeasibleSentinel;
  double best_raw = kInfeasibleSentinel;
  bool best_feasible = false;
  // Best evaluation with zero violations, when one was seen.
  std::optional<SolutionVector> best_feasible_vector;
  double best_feasible_raw = kInfeasibleSentinel;
  std::vector<EvaluationRecord> history;  // one record per evaluation
  std::vector<SnapshotEntry> snapshots;   // one per configured point
  std::uint64_t evaluations_used = 0;
  Termination termination = Termination::kBudgetExhausted;
};

// The control loop: evaluate the neighborhood, select a move under the tabu
// rules, record the visit, and escalate through intensification,
// diversification, and step reduction as non-improving moves accumulate.
SearchOutcome run_search(const ProblemDefinition& problem,
                         const PenaltyConfig& penalty,
                         const SearchConfig& config);

}  // namespace tabuforge
