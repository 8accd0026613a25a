#include "tabuforge/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace tabuforge {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::kLocal: return "LOCAL";
    case Phase::kIntensified: return "INTENSIFIED";
    case Phase::kDiversified: return "DIVERSIFIED";
    case Phase::kReduced: return "REDUCED";
  }
  return "LOCAL";
}

void ProblemDefinition::validate() const {
  const std::size_t d = dimension();
  if (d == 0) throw std::invalid_argument(name + ": zero-dimension problem");
  if (upper_bounds.size() != d || min_steps.size() != d)
    throw std::invalid_argument(name + ": bound/step vectors disagree on dimension");
  if (!evaluator) throw std::invalid_argument(name + ": no evaluator");
  for (std::size_t i = 0; i < d; ++i) {
    if (!(lower_bounds[i] < upper_bounds[i]))
      throw std::invalid_argument(name + ": lower bound not below upper bound");
    if (!(min_steps[i] > 0.0))
      throw std::invalid_argument(name + ": non-positive min step");
    const double span = (upper_bounds[i] - lower_bounds[i]) / min_steps[i];
    // The range must be a whole number of steps (1e-9 relative slack).
    if (std::abs(span - std::round(span)) > 1e-9 * std::max(1.0, span))
      throw std::invalid_argument(name + ": range is not a multiple of min step");
  }
  if (start) {
    if (start->size() != d)
      throw std::invalid_argument(name + ": start vector has wrong dimension");
  }
}

void PenaltyConfig::validate(std::size_t constraint_count) const {
  if (weights.size() != constraint_count)
    throw std::invalid_argument("penalty weights do not match constraint count");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("penalty weights must be finite and positive");
  if (!(exponent >= 1.0))
    throw std::invalid_argument("penalty exponent must be >= 1");
}

Quantizer::Quantizer(const ProblemDefinition& p)
    : lower_(p.lower_bounds), upper_(p.upper_bounds), step_(p.min_steps) {
  count_.resize(lower_.size());
  for (std::size_t i = 0; i < lower_.size(); ++i)
    count_[i] = static_cast<std::int64_t>(std::llround((upper_[i] - lower_[i]) / step_[i]));
}

double Quantizer::component(std::size_t dim, double raw) const {
  double v = raw;
  if (v < lower_[dim]) v = lower_[dim];
  if (v > upper_[dim]) v = upper_[dim];
  const double q = (v - lower_[dim]) / step_[dim];
  // Half-away-from-lower with a tiny nudge: exact-decimal halves (0.015 on a
  // 0.01 grid) sit just below .5 in binary and must still round up.
  std::int64_t k = static_cast<std::int64_t>(std::floor(q + 0.5 + 1e-9));
  if (k < 0) k = 0;
  if (k > count_[dim]) k = count_[dim];
  return grid_value(dim, k);
}

SolutionVector Quantizer::quantize(const std::vector<double>& raw) const {
  SolutionVector out;
  out.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = component(i, raw[i]);
  return out;
}

std::int64_t Quantizer::grid_index(std::size_t dim, double value) const {
  return static_cast<std::int64_t>(std::llround((value - lower_[dim]) / step_[dim]));
}

double Quantizer::grid_value(std::size_t dim, std::int64_t k) const {
  // Single canonical construction so equal grid points are bitwise equal.
  return lower_[dim] + static_cast<double>(k) * step_[dim];
}

SolutionVector quantize(const ProblemDefinition& p, const std::vector<double>& raw) {
  return Quantizer(p).quantize(raw);
}

EvaluationRecord evaluate(const ProblemDefinition& p, const PenaltyConfig& pen,
                          const SolutionVector& x) {
  EvaluationRecord rec;
  rec.vector = x;
  rec.violations.assign(p.constraint_count, 0.0);
  bool failed = false;
  RawEvaluation raw;
  try {
    raw = p.evaluator(x);
  } catch (const std::exception&) {
    failed = true;
  }
  if (!failed && raw.violations.size() != p.constraint_count) failed = true;
  if (!failed && !std::isfinite(raw.raw)) failed = true;
  if (!failed) {
    for (double v : raw.violations)
      if (!std::isfinite(v) || v < 0.0) failed = true;
  }
  if (failed) {
    rec.raw_objective = kInfeasibleSentinel;
    rec.penalized_objective = kInfeasibleSentinel;
    rec.feasible = false;
    return rec;
  }
  rec.raw_objective = raw.raw;
  rec.violations = raw.violations;
  double penalty = 0.0;
  bool feasible = true;
  for (std::size_t j = 0; j < raw.violations.size(); ++j) {
    const double v = raw.violations[j];
    if (v > 0.0) {
      feasible = false;
      penalty += pen.weights[j] * std::pow(v, pen.exponent);
    }
  }
  rec.feasible = feasible;
  rec.penalized_objective = rec.raw_objective + penalty;
  if (!std::isfinite(rec.penalized_objective)) {
    rec.penalized_objective = kInfeasibleSentinel;
    rec.feasible = false;
  }
  return rec;
}

}  // namespace tabuforge
