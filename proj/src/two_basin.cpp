#include "tabuforge/two_basin.hpp"

#include <cmath>

namespace tabuforge {

double two_basin_value(double x, double y) {
  double g;
  if (x <= -5.0)
    g = -10.0 + 3.0 * (-5.0 - x);
  else if (x <= 0.0)
    g = -10.0 + 2.0 * (x + 5.0);
  else if (x <= 5.0)
    g = -4.0 * x;
  else
    g = -20.0 + 4.0 * (x - 5.0);
  return g + 3.0 * std::abs(y);
}

ProblemDefinition make_two_basin_problem() {
  ProblemDefinition p;
  p.name = "twobasin";
  p.lower_bounds = {-10.0, -10.0};
  p.upper_bounds = {10.0, 10.0};
  p.min_steps = {1.0, 1.0};
  p.constraint_count = 0;
  p.evaluator = [](const SolutionVector& x) -> RawEvaluation {
    return {two_basin_value(x[0], x[1]), {}};
  };
  p.start = SolutionVector{{-8.0, 0.0}};
  return p;
}

}  // namespace tabuforge
