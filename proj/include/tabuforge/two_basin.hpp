#pragma once

#include "tabuforge/problem.hpp"

namespace tabuforge {

// 2D fixture with a shallow basin and a deeper one separated by a ridge:
// the short-term memory must climb seven worsening steps to cross. Piecewise
// linear in x plus a |y| confinement term, integer grid on [-10,10]^2,
// fixed start (-8, 0) inside the shallow basin.
//
//   f(x,y) = g(x) + 3|y|
//   g: slope -3 down to the local minimum -10 at x=-5, up at slope 2 to the
//      ridge value 0 at x=0, down at slope -4 to the global minimum -20 at
//      x=+5, back up at slope 4.
double two_basin_value(double x, double y);

inline constexpr double kTwoBasinLocalMinimum = -10.0;
inline constexpr double kTwoBasinGlobalMinimum = -20.0;

ProblemDefinition make_two_basin_problem();

}  // namespace tabuforge
