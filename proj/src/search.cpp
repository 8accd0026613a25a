#include "tabuforge/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tabuforge {

void SearchConfig::validate() const {
  // tenure 0 is legal: it disables short-term memory (plain hill climber).
  if (best_memory_size_m < 1)
    throw std::invalid_argument("best_memory_size_m must be >= 1");
  if (!(step_reduction_factor > 0.0 && step_reduction_factor < 1.0))
    throw std::invalid_argument("step_reduction_factor must lie in (0,1)");
  if (intensify_after == 0 || intensify_after >= diversify_after ||
      diversify_after >= reduce_after)
    throw std::invalid_argument(
        "thresholds must satisfy 0 < intensify_after < diversify_after < reduce_after");
  if (max_evaluations < 1)
    throw std::invalid_argument("max_evaluations must be >= 1");
  for (double s : initial_step)
    if (!(s > 0.0)) throw std::invalid_argument("initial steps must be positive");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kBudgetExhausted: return "budget";
    case Termination::kStepFloor: return "step_floor";
    case Termination::kNoMoves: return "no_moves";
  }
  return "budget";
}

bool TabuMemory::contains(const SolutionVector& c) const {
  for (const auto& v : recent_)
    if (v == c) return true;
  return false;
}

void TabuMemory::record(const SolutionVector& x) {
  if (tenure_ == 0) return;
  recent_.push_back(x);
  while (recent_.size() > tenure_) recent_.pop_front();
}

bool BestMemory::insert(const SolutionVector& x, double objective) {
  for (const auto& [v, f] : entries_)
    if (v == x) return false;  // duplicates excluded
  if (entries_.size() >= capacity_ && !(objective < entries_.back().second))
    return false;  // does not improve on the stored worst
  auto pos = std::upper_bound(
      entries_.begin(), entries_.end(), objective,
      [](double f, const auto& e) { return f < e.second; });
  entries_.insert(pos, {x, objective});
  if (entries_.size() > capacity_) entries_.pop_back();
  return true;
}

bool update_best_memory(const SolutionVector& x, double f, BestMemory& bm) {
  return bm.insert(x, f);
}

std::vector<NeighborMove> generate_neighbors(const SolutionVector& x,
                                             const std::vector<double>& step,
                                             const Quantizer& q) {
  const std::size_t d = x.size();
  if (d == 0) throw std::invalid_argument("zero-dimension problem");
  std::vector<NeighborMove> out;
  out.reserve(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (int dir : {+1, -1}) {
      const double moved = q.component(i, x.values[i] + dir * step[i]);
      if (moved == x.values[i]) continue;  // clamped back onto x
      NeighborMove nm;
      nm.vector = x;
      nm.vector.values[i] = moved;
      nm.dim = i;
      nm.direction = dir;
      out.push_back(std::move(nm));
    }
  }
  return out;
}

namespace {

// Tie-break key: objective, then lowest moved dimension, then negative
// direction first. Deterministic given equal objectives.
bool better(const ScoredMove& a, const ScoredMove& b) {
  if (a.penalized != b.penalized) return a.penalized < b.penalized;
  if (a.move.dim != b.move.dim) return a.move.dim < b.move.dim;
  return a.move.direction < b.move.direction;
}

}  // namespace

MoveChoice select_move(const std::vector<ScoredMove>& candidates,
                       const TabuMemory& mem, double best_objective,
                       bool aspiration_enabled) {
  if (candidates.empty())
    throw std::invalid_argument("select_move: no candidates");
  std::size_t best_admissible = candidates.size();
  bool admissible_is_aspiration = false;
  std::size_t best_any = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (better(candidates[i], candidates[best_any])) best_any = i;
    const bool tabu = mem.contains(candidates[i].move.vector);
    const bool admissible =
        !tabu ||
        (aspiration_enabled && candidates[i].penalized < best_objective);
    if (!admissible) continue;
    if (best_admissible == candidates.size() ||
        better(candidates[i], candidates[best_admissible])) {
      best_admissible = i;
      admissible_is_aspiration = tabu;
    }
  }
  MoveChoice choice;
  if (best_admissible < candidates.size()) {
    choice.index = best_admissible;
    choice.aspiration = admissible_is_aspiration;
  } else {
    // Everything tabu and nothing aspirated: escape with the best candidate
    // anyway rather than stalling.
    choice.index = best_any;
    choice.tabu_escape = true;
  }
  return choice;
}

SolutionVector intensify(const BestMemory& bm, const Quantizer& q) {
  if (bm.empty())
    throw std::logic_error("intensify: best memory is empty");
  const std::size_t d = bm.entries().front().first.size();
  std::vector<double> mean(d, 0.0);
  for (const auto& [v, f] : bm.entries())
    for (std::size_t i = 0; i < d; ++i) mean[i] += v.values[i];
  for (double& m : mean) m /= static_cast<double>(bm.size());
  return q.quantize(mean);
}

SolutionVector diversify(const Quantizer& q, Rng& rng) {
  SolutionVector out;
  out.values.resize(q.dimension());
  for (std::size_t i = 0; i < q.dimension(); ++i) {
    const auto k = static_cast<std::int64_t>(
        rng.below(static_cast<std::uint64_t>(q.max_index(i)) + 1));
    out.values[i] = q.grid_value(i, k);
  }
  return out;
}

SearchOutcome run_search(const ProblemDefinition& problem,
                         const PenaltyConfig& penalty,
                         const SearchConfig& config) {
  problem.validate();
  config.validate();
  penalty.validate(problem.constraint_count);
  const std::size_t d = problem.dimension();
  if (!config.initial_step.empty() && config.initial_step.size() != d)
    throw std::invalid_argument("initial_step dimension mismatch");

  const Quantizer q(problem);
  std::vector<double> steps(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double s = config.initial_step.empty()
                         ? (problem.upper_bounds[i] - problem.lower_bounds[i]) / 20.0
                         : config.initial_step[i];
    steps[i] = std::max(s, problem.min_steps[i]);
  }

  Rng rng(config.rng_seed);
  TabuMemory tabu(config.tabu_tenure_n);
  BestMemory best_memory(config.best_memory_size_m);

  std::vector<std::uint64_t> snapshot_points = config.snapshot_points;
  std::sort(snapshot_points.begin(), snapshot_points.end());
  snapshot_points.erase(
      std::unique(snapshot_points.begin(), snapshot_points.end()),
      snapshot_points.end());

  SearchOutcome out;
  out.history.reserve(static_cast<std::size_t>(
      std::min<std::uint64_t>(config.max_evaluations, 1u << 20)));

  std::uint64_t evals = 0;
  bool has_best = false;

  // Evaluates x, appends the record, and maintains best trackers, elite
  // memory, and snapshots. Returns the history index of the new record.
  auto eval_at = [&](const SolutionVector& x, Phase phase, bool accepted,
                     bool restart) -> std::size_t {
    EvaluationRecord rec = evaluate(problem, penalty, x);
    rec.eval_index = ++evals;
    rec.phase = phase;
    rec.accepted = accepted;
    rec.is_restart = restart;
    if (!has_best || rec.penalized_objective < out.best_penalized) {
      has_best = true;
      out.best_vector = x;
      out.best_penalized = rec.penalized_objective;
      out.best_raw = rec.raw_objective;
      out.best_feasible = rec.feasible;
    }
    if (rec.feasible && rec.raw_objective < out.best_feasible_raw) {
      out.best_feasible_vector = x;
      out.best_feasible_raw = rec.raw_objective;
    }
    best_memory.insert(x, rec.penalized_objective);
    out.history.push_back(std::move(rec));
    for (std::uint64_t p : snapshot_points)
      if (p == evals) out.snapshots.push_back({p, out.best_penalized});
    return out.history.size() - 1;
  };

  // Restart helper shared by the three escalation events.
  auto restart_at = [&](const SolutionVector& target, Phase phase) {
    eval_at(target, phase, /*accepted=*/true, /*restart=*/true);
    tabu.record(target);
  };

  Phase phase = Phase::kLocal;
  SolutionVector current =
      problem.start ? q.quantize(problem.start->values) : diversify(q, rng);
  eval_at(current, phase, /*accepted=*/true, /*restart=*/true);
  tabu.record(current);

  std::uint64_t non_improving = 0;
  out.termination = Termination::kBudgetExhausted;

  while (true) {
    if (evals >= config.max_evaluations) break;

    auto neighbors = generate_neighbors(current, steps, q);
    if (neighbors.empty()) {
      out.termination = Termination::kNoMoves;
      break;
    }
    const double pre_batch_best = out.best_penalized;
    std::vector<ScoredMove> scored;
    std::vector<std::size_t> record_of;
    scored.reserve(neighbors.size());
    record_of.reserve(neighbors.size());
    bool budget_hit = false;
    for (auto& nb : neighbors) {
      if (evals >= config.max_evaluations) {
        budget_hit = true;
        break;
      }
      const std::size_t idx =
          eval_at(nb.vector, phase, /*accepted=*/false, /*restart=*/false);
      record_of.push_back(idx);
      scored.push_back({std::move(nb), out.history[idx].penalized_objective});
    }
    if (scored.empty()) break;  // budget exhausted before any candidate

    const MoveChoice choice =
        select_move(scored, tabu, pre_batch_best, config.aspiration);
    EvaluationRecord& chosen = out.history[record_of[choice.index]];
    chosen.accepted = true;
    chosen.aspiration = choice.aspiration;
    chosen.tabu_escape = choice.tabu_escape;
    current = scored[choice.index].move.vector;
    tabu.record(current);

    const bool improved = out.best_penalized < pre_batch_best;
    non_improving = improved ? 0 : non_improving + 1;

    if (budget_hit || evals >= config.max_evaluations) break;

    if (non_improving == config.intensify_after) {
      const double pre = out.best_penalized;
      SolutionVector target =
          best_memory.empty() ? diversify(q, rng) : intensify(best_memory, q);
      phase = Phase::kIntensified;
      restart_at(target, phase);
      current = std::move(target);
      if (out.best_penalized < pre) non_improving = 0;
    } else if (non_improving == config.diversify_after) {
      const double pre = out.best_penalized;
      SolutionVector target = diversify(q, rng);
      phase = Phase::kDiversified;
      restart_at(target, phase);
      current = std::move(target);
      if (out.best_penalized < pre) non_improving = 0;
    } else if (non_improving == config.reduce_after) {
      bool all_at_floor = true;
      for (std::size_t i = 0; i < d; ++i)
        if (steps[i] > problem.min_steps[i]) all_at_floor = false;
      if (all_at_floor) {
        out.termination = Termination::kStepFloor;
        break;
      }
      for (std::size_t i = 0; i < d; ++i)
        steps[i] = std::max(steps[i] * config.step_reduction_factor,
                            problem.min_steps[i]);
      phase = Phase::kReduced;
      restart_at(out.best_vector, phase);
      current = out.best_vector;
      non_improving = 0;
    }
  }

  out.evaluations_used = evals;
  return out;
}

}  // namespace tabuforge
