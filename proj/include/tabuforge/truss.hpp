#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabuforge/problem.hpp"

namespace tabuforge::truss {

// 2D pin-jointed structure. Units: cm, N, kg (and N/cm² for stress) —
// Young's modulus and density defaults are the benchmark's aluminium values.
struct Member {
  int node_a = 0;
  int node_b = 0;
  double area = 0.0;  // cm^2
};

struct TrussModel {
  std::vector<std::array<double, 2>> nodes;    // (x, y) cm
  std::vector<Member> members;
  std::vector<std::array<bool, 2>> supports;   // per node: fix x, fix y
  std::vector<std::array<double, 2>> loads;    // (Fx, Fy) N per node
  double youngs_modulus = 6.88e6;              // N/cm^2
  double density = 2.7e-3;                     // kg/cm^3

  // Throws std::invalid_argument on malformed connectivity, areas below the
  // 0.01 cm^2 floor, or fewer than 3 constrained degrees of freedom.
  void validate() const;
};

struct MemberState {
  double length = 0.0;                  // cm
  double axial_force = 0.0;             // N, tension positive
  double stress = 0.0;                  // N/cm^2
  double critical_buckling_load = 0.0;  // N (Euler, solid circular section)
};

// Near-singular stiffness: the structure moves as a mechanism.
struct MechanismError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate geometry (coincident nodes, zero-length member).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Aggregates solve quality across many evaluations (used by tests to assert
// the equilibrium-residual bound over whole optimization runs).
struct SolveStats {
  double max_relative_residual = 0.0;
  long solves = 0;
};

struct SolveResult {
  std::vector<std::array<double, 2>> displacements;  // per node, cm
  std::vector<MemberState> members;
  double relative_residual = 0.0;  // ||K u - F|| / ||F||
};

// Direct stiffness method: assemble per-member axial stiffness into the
// free-DOF system K u = F and solve densely with partial pivoting. Throws
// MechanismError when a pivot falls below 1e-9 x the largest initial
// diagonal, GeometryError on zero-length members.
SolveResult solve(const TrussModel& model, SolveStats* stats = nullptr);

// Sum of density * area * length over members.
double mass(const TrussModel& model);

// Critical Euler load for a solid circular section of area A:
// I = A^2 / (4 pi), P_cr = pi^2 E I / L^2.
double euler_buckling_load(double area, double youngs_modulus, double length);

struct ConstraintLimits {
  double stress_limit = 17200.0;  // N/cm^2, magnitude bound
  double length_limit = 1500.0;   // cm
};

// Per-member violations in three families plus their sums. A compression
// member violates buckling when |N| exceeds its critical load; tension
// members never do.
struct ConstraintReport {
  std::vector<double> stress;
  std::vector<double> buckling;
  std::vector<double> length;
  double total_stress = 0.0;
  double total_buckling = 0.0;
  double total_length = 0.0;

  bool feasible() const {
    return total_stress == 0.0 && total_buckling == 0.0 && total_length == 0.0;
  }
  std::vector<double> totals() const {
    return {total_stress, total_buckling, total_length};
  }
};

ConstraintReport check_constraints(const TrussModel& model,
                                   const std::vector<MemberState>& states,
                                   const ConstraintLimits& limits = {});

// ---------------------------------------------------------------------------
// The 16-variable benchmark: a two-bay cantelever of 10 members whose three
// non-anchored nodes move and whose member areas size freely.
//
// Node layout (bay b = 914.4 cm): 1 (0,0) and 4 (0,b) are pinned supports,
// 3 (2b,0) carries the load and is fixed in position; 2 (b,0), 5 (b,b) and
// 6 (2b,b) are design variables. Members: 1:(4,5) 2:(5,6) 3:(1,2) 4:(2,3)
// 5:(3,6) 6:(2,5) 7:(1,5) 8:(4,2) 9:(2,6) 10:(5,3).
// ---------------------------------------------------------------------------

struct TenBarConfig {
  double bay = 914.4;                          // cm
  std::array<double, 2> load{0.0, -444822.0};  // N at node 3
  double area_min = 0.01;                      // cm^2
  double area_max = 500.0;
  double area_step = 0.01;
  double coord_step = 1.0;                     // cm
  // Coordinate bounds are round(nominal) +- this half-width, so the grid is
  // integer-aligned and the documented reference design is representable.
  double coord_box_half_width = 1100.0;
  double start_area = 500.0;                   // uniform start areas
  ConstraintLimits limits{};
};

// Design variables: positions of nodes 2, 5, 6 then the ten areas.
struct TenBarDesign {
  std::array<double, 6> coords{};   // x2,y2, x5,y5, x6,y6 (cm)
  std::array<double, 10> areas{};   // cm^2

  static TenBarDesign from_vector(const SolutionVector& x);
  SolutionVector to_vector() const;

  // The known low-mass design used for calibration tests and docs.
  static TenBarDesign reference();
};

// Nominal (undeformed-grid) positions of the three movable nodes, rounded to
// the 1-cm coordinate grid.
std::array<double, 6> ten_bar_nominal_coords(const TenBarConfig& cfg = {});

TrussModel build_ten_bar(const TenBarDesign& d, const TenBarConfig& cfg = {});

// Removal of minimum-area members. Returns the reduced model only when it
// still solves (no mechanism) with zero violations; otherwise the original
// model comes back with a diagnostic explaining why.
struct ReduceResult {
  TrussModel model;
  std::vector<int> removed;  // 0-based indices into the original member list
  bool reduced = false;
  std::string diagnostic;
};

ReduceResult reduce_topology(const TrussModel& model,
                             const std::vector<MemberState>& states,
                             double area_threshold = 0.01,
                             const ConstraintLimits& limits = {});

// Penalty weights matched to the kg mass scale: 0.1 per (N/cm^2) of stress
// violation, 0.01 per N of buckling violation, 1 per cm of length violation,
// all squared.
PenaltyConfig ten_bar_penalty();

// The optimization problem: 16 dimensions, three violation families
// (stress, buckling, length sums), deterministic feasible start. A non-null
// stats pointer aggregates solve residuals across evaluations.
ProblemDefinition make_ten_bar_problem(const TenBarConfig& cfg = {},
                                       std::shared_ptr<SolveStats> stats = nullptr);

}  // namespace tabuforge::truss
