#include "tabuforge/truss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tabuforge::truss {

void TrussModel::validate() const {
  const int n = static_cast<int>(nodes.size());
  if (n < 2) throw std::invalid_argument("truss needs at least 2 nodes");
  if (supports.size() != nodes.size() || loads.size() != nodes.size())
    throw std::invalid_argument("supports/loads must cover every node");
  for (const auto& m : members) {
    if (m.node_a < 0 || m.node_a >= n || m.node_b < 0 || m.node_b >= n)
      throw std::invalid_argument("member references a missing node");
    if (m.node_a == m.node_b)
      throw std::invalid_argument("member connects a node to itself");
    if (m.area < 0.01 - 1e-12)
      throw std::invalid_argument("member area below the 0.01 cm^2 floor");
  }
  int fixed = 0;
  for (const auto& s : supports) fixed += (s[0] ? 1 : 0) + (s[1] ? 1 : 0);
  if (fixed < 3)
    throw std::invalid_argument("fewer than 3 constrained DOF (rigid-body motion)");
  if (!(youngs_modulus > 0.0) || !(density > 0.0))
    throw std::invalid_argument("material constants must be positive");
}

double euler_buckling_load(double area, double youngs_modulus, double length) {
  // Solid circular section: I = A^2 / (4 pi).
  const double inertia = area * area / (4.0 * std::numbers::pi);
  return std::numbers::pi * std::numbers::pi * youngs_modulus * inertia /
         (length * length);
}

double mass(const TrussModel& model) {
  double total = 0.0;
  for (const auto& m : model.members) {
    const auto& a = model.nodes[m.node_a];
    const auto& b = model.nodes[m.node_b];
    total += model.density * m.area * std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return total;
}

SolveResult solve(const TrussModel& model, SolveStats* stats) {
  model.validate();
  const std::size_t n_nodes = model.nodes.size();

  // Number the free DOF; supported directions stay at -1 (zero displacement).
  std::vector<std::array<int, 2>> dof(n_nodes, {-1, -1});
  int n_free = 0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (!model.supports[i][0]) dof[i][0] = n_free++;
    if (!model.supports[i][1]) dof[i][1] = n_free++;
  }

  struct Geometry {
    double length, c, s;
  };
  std::vector<Geometry> geom(model.members.size());
  for (std::size_t e = 0; e < model.members.size(); ++e) {
    const auto& m = model.members[e];
    const auto& a = model.nodes[m.node_a];
    const auto& b = model.nodes[m.node_b];
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double length = std::hypot(dx, dy);
    if (length < 1e-9)
      throw GeometryError("zero-length member (coincident nodes)");
    geom[e] = {length, dx / length, dy / length};
  }

  SolveResult result;
  result.displacements.assign(n_nodes, {0.0, 0.0});
  result.members.resize(model.members.size());

  std::vector<double> u(static_cast<std::size_t>(n_free), 0.0);
  if (n_free > 0) {
    const auto nf = static_cast<std::size_t>(n_free);
    std::vector<double> K(nf * nf, 0.0);
    std::vector<double> F(nf, 0.0);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      if (dof[i][0] >= 0) F[dof[i][0]] = model.loads[i][0];
      if (dof[i][1] >= 0) F[dof[i][1]] = model.loads[i][1];
    }
    for (std::size_t e = 0; e < model.members.size(); ++e) {
      const auto& m = model.members[e];
      const auto& g = geom[e];
      const double k = model.youngs_modulus * m.area / g.length;
      // 4x4 axial stiffness in global axes, scattered into free DOF.
      const double t[2] = {g.c, g.s};
      const int idx[4] = {dof[m.node_a][0], dof[m.node_a][1],
                          dof[m.node_b][0], dof[m.node_b][1]};
      for (int r = 0; r < 4; ++r) {
        if (idx[r] < 0) continue;
        for (int c = 0; c < 4; ++c) {
          if (idx[c] < 0) continue;
          const double sign = (r < 2) == (c < 2) ? 1.0 : -1.0;
          K[static_cast<std::size_t>(idx[r]) * nf + static_cast<std::size_t>(idx[c])] +=
              sign * k * t[r % 2] * t[c % 2];
        }
      }
    }

    const std::vector<double> K0 = K;  // kept for the residual check
    const std::vector<double> F0 = F;

    double max_diag = 0.0;
    for (std::size_t i = 0; i < nf; ++i)
      max_diag = std::max(max_diag, std::abs(K[i * nf + i]));
    const double pivot_floor = 1e-9 * max_diag;
    if (max_diag == 0.0) throw MechanismError("stiffness matrix is zero");

    // Gaussian elimination with partial pivoting on [K | F].
    for (std::size_t col = 0; col < nf; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < nf; ++r)
        if (std::abs(K[r * nf + col]) > std::abs(K[pivot * nf + col])) pivot = r;
      if (std::abs(K[pivot * nf + col]) <= pivot_floor)
        throw MechanismError("near-singular stiffness (mechanism)");
      if (pivot != col) {
        for (std::size_t c = col; c < nf; ++c)
          std::swap(K[pivot * nf + c], K[col * nf + c]);
        std::swap(F[pivot], F[col]);
      }
      const double inv = 1.0 / K[col * nf + col];
      for (std::size_t r = col + 1; r < nf; ++r) {
        const double factor = K[r * nf + col] * inv;
        if (factor == 0.0) continue;
        for (std::size_t c = col; c < nf; ++c) K[r * nf + c] -= factor * K[col * nf + c];
        F[r] -= factor * F[col];
      }
    }
    for (std::size_t ri = nf; ri-- > 0;) {
      double sum = F[ri];
      for (std::size_t c = ri + 1; c < nf; ++c) sum -= K[ri * nf + c] * u[c];
      u[ri] = sum / K[ri * nf + ri];
    }

    // Relative equilibrium residual against the untouched system.
    double res2 = 0.0, f2 = 0.0;
    for (std::size_t r = 0; r < nf; ++r) {
      double ku = 0.0;
      for (std::size_t c = 0; c < nf; ++c) ku += K0[r * nf + c] * u[c];
      res2 += (ku - F0[r]) * (ku - F0[r]);
      f2 += F0[r] * F0[r];
    }
    result.relative_residual =
        f2 > 0.0 ? std::sqrt(res2 / f2) : std::sqrt(res2);
    for (double v : u)
      if (!std::isfinite(v)) throw MechanismError("non-finite displacement");
  }

  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (dof[i][0] >= 0) result.displacements[i][0] = u[static_cast<std::size_t>(dof[i][0])];
    if (dof[i][1] >= 0) result.displacements[i][1] = u[static_cast<std::size_t>(dof[i][1])];
  }

  for (std::size_t e = 0; e < model.members.size(); ++e) {
    const auto& m = model.members[e];
    const auto& g = geom[e];
    const auto& ua = result.displacements[m.node_a];
    const auto& ub = result.displacements[m.node_b];
    const double elongation = (ub[0] - ua[0]) * g.c + (ub[1] - ua[1]) * g.s;
    MemberState& state = result.members[e];
    state.length = g.length;
    state.axial_force = model.youngs_modulus * m.area / g.length * elongation;
    state.stress = state.axial_force / m.area;
    state.critical_buckling_load =
        euler_buckling_load(m.area, model.youngs_modulus, g.length);
  }

  if (stats) {
    stats->max_relative_residual =
        std::max(stats->max_relative_residual, result.relative_residual);
    ++stats->solves;
  }
  return result;
}

ConstraintReport check_constraints(const TrussModel& model,
                                   const std::vector<MemberState>& states,
                                   const ConstraintLimits& limits) {
  ConstraintReport report;
  report.stress.resize(states.size());
  report.buckling.resize(states.size());
  report.length.resize(states.size());
  for (std::size_t e = 0; e < states.size(); ++e) {
    const MemberState& s = states[e];
    report.stress[e] = std::max(0.0, std::abs(s.stress) - limits.stress_limit);
    report.buckling[e] =
        s.axial_force < 0.0
            ? std::max(0.0, -s.axial_force - s.critical_buckling_load)
            : 0.0;
    report.length[e] = std::max(0.0, s.length - limits.length_limit);
    report.total_stress += report.stress[e];
    report.total_buckling += report.buckling[e];
    report.total_length += report.length[e];
  }
  (void)model;
  return report;
}

TenBarDesign TenBarDesign::from_vector(const SolutionVector& x) {
  if (x.size() != 16)
    throw std::invalid_argument("ten-bar design vector must have 16 components");
  TenBarDesign d;
  for (std::size_t i = 0; i < 6; ++i) d.coords[i] = x[i];
  for (std::size_t i = 0; i < 10; ++i) d.areas[i] = x[6 + i];
  return d;
}

SolutionVector TenBarDesign::to_vector() const {
  SolutionVector x;
  x.values.reserve(16);
  x.values.insert(x.values.end(), coords.begin(), coords.end());
  x.values.insert(x.values.end(), areas.begin(), areas.end());
  return x;
}

TenBarDesign TenBarDesign::reference() {
  TenBarDesign d;
  d.coords = {445.0, -61.0, 807.0, 408.0, 1197.0, -112.0};
  d.areas = {60.39, 16.6, 183.17, 0.01, 239.9, 3.04, 0.01, 1.42, 310.26, 47.9};
  return d;
}

std::array<double, 6> ten_bar_nominal_coords(const TenBarConfig& cfg) {
  const double b = cfg.bay;
  return {std::round(b),       std::round(0.0), std::round(b),
          std::round(b),       std::round(2 * b), std::round(b)};
}

TrussModel build_ten_bar(const TenBarDesign& d, const TenBarConfig& cfg) {
  const double b = cfg.bay;
  TrussModel model;
  model.nodes = {
      {0.0, 0.0},                   // 1: lower support
      {d.coords[0], d.coords[1]},   // 2
      {2 * b, 0.0},                 // 3: loaded node, fixed in position
      {0.0, b},                     // 4: upper support
      {d.coords[2], d.coords[3]},   // 5
      {d.coords[4], d.coords[5]},   // 6
  };
  const int con[10][2] = {{3, 4}, {4, 5}, {0, 1}, {1, 2}, {2, 5},
                          {1, 4}, {0, 4}, {3, 1}, {1, 5}, {4, 2}};
  model.members.resize(10);
  for (int e = 0; e < 10; ++e)
    model.members[e] = {con[e][0], con[e][1], d.areas[static_cast<std::size_t>(e)]};
  model.supports.assign(6, {false, false});
  model.supports[0] = {true, true};
  model.supports[3] = {true, true};
  model.loads.assign(6, {0.0, 0.0});
  model.loads[2] = cfg.load;

  for (std::size_t i = 0; i < model.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < model.nodes.size(); ++j)
      if (std::abs(model.nodes[i][0] - model.nodes[j][0]) < 1e-9 &&
          std::abs(model.nodes[i][1] - model.nodes[j][1]) < 1e-9)
        throw GeometryError("coincident nodes in ten-bar design");
  return model;
}

ReduceResult reduce_topology(const TrussModel& model,
                             const std::vector<MemberState>& states,
                             double area_threshold,
                             const ConstraintLimits& limits) {
  (void)states;
  ReduceResult result{model, {}, false, ""};
  std::vector<int> removable;
  for (std::size_t e = 0; e < model.members.size(); ++e)
    if (model.members[e].area <= area_threshold * (1.0 + 1e-12))
      removable.push_back(static_cast<int>(e));
  if (removable.empty()) {
    result.diagnostic = "no minimum-area members";
    return result;
  }

  TrussModel reduced = model;
  reduced.members.clear();
  for (std::size_t e = 0; e < model.members.size(); ++e)
    if (!std::binary_search(removable.begin(), removable.end(), static_cast<int>(e)))
      reduced.members.push_back(model.members[e]);

  try {
    const SolveResult solved = solve(reduced);
    const ConstraintReport report = check_constraints(reduced, solved.members, limits);
    if (!report.feasible()) {
      result.diagnostic = "removal violates constraints (stress " +
                          std::to_string(report.total_stress) + " N/cm^2, buckling " +
                          std::to_string(report.total_buckling) + " N, length " +
                          std::to_string(report.total_length) + " cm over limits)";
      return result;
    }
  } catch (const MechanismError& err) {
    result.diagnostic = std::string("removal creates a mechanism: ") + err.what();
    return result;
  } catch (const GeometryError& err) {
    result.diagnostic = std::string("degenerate geometry after removal: ") + err.what();
    return result;
  }

  result.model = std::move(reduced);
  result.removed = std::move(removable);
  result.reduced = true;
  result.diagnostic = "removed minimum-area members";
  return result;
}

PenaltyConfig ten_bar_penalty() {
  return PenaltyConfig{{0.1, 0.01, 1.0}, 2.0};
}

ProblemDefinition make_ten_bar_problem(const TenBarConfig& cfg,
                                       std::shared_ptr<SolveStats> stats) {
  ProblemDefinition p;
  p.name = "tenbar";
  const auto nominal = ten_bar_nominal_coords(cfg);
  for (double c : nominal) {
    p.lower_bounds.push_back(c - cfg.coord_box_half_width);
    p.upper_bounds.push_back(c + cfg.coord_box_half_width);
    p.min_steps.push_back(cfg.coord_step);
  }
  for (int i = 0; i < 10; ++i) {
    p.lower_bounds.push_back(cfg.area_min);
    p.upper_bounds.push_back(cfg.area_max);
    p.min_steps.push_back(cfg.area_step);
  }
  p.constraint_count = 3;
  p.evaluator = [cfg, stats](const SolutionVector& x) -> RawEvaluation {
    const TenBarDesign d = TenBarDesign::from_vector(x);
    const TrussModel model = build_ten_bar(d, cfg);
    const SolveResult solved = solve(model, stats.get());
    const ConstraintReport report =
        check_constraints(model, solved.members, cfg.limits);
    return {mass(model), report.totals()};
  };

  // Start from the nominal layout with every area at the maximum: the
  // heaviest design in the box, feasible under the default load, and free of
  // any knowledge of where the optimum lies.
  TenBarDesign start;
  for (std::size_t i = 0; i < 6; ++i) start.coords[i] = nominal[i];
  start.areas.fill(cfg.start_area);
  p.start = Quantizer(p).quantize(start.to_vector().values);
  return p;
}

}  // namespace tabuforge::truss
