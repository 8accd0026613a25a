#include "tabuforge/registry.hpp"

#include <cstdlib>
#include <stdexcept>

#include "tabuforge/pole.hpp"
#include "tabuforge/two_basin.hpp"

namespace tabuforge {

namespace {

double parse_number(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("option " + key + ": cannot parse '" + text + "'");
  return v;
}

// Consumes recognized keys; anything left over is a typo worth failing on.
void reject_leftovers(const std::string& name,
                      const std::map<std::string, std::string>& leftover) {
  if (leftover.empty()) return;
  throw std::invalid_argument("unknown option '" + leftover.begin()->first +
                              "' for problem " + name);
}

Benchmark make_tenbar(std::map<std::string, std::string> options) {
  truss::TenBarConfig cfg;
  if (auto it = options.find("load"); it != options.end()) {
    cfg.load[1] = -std::abs(parse_number("load", it->second));
    options.erase(it);
  }
  if (auto it = options.find("area_max"); it != options.end()) {
    cfg.area_max = parse_number("area_max", it->second);
    cfg.start_area = cfg.area_max;
    options.erase(it);
  }
  if (auto it = options.find("coord_box"); it != options.end()) {
    cfg.coord_box_half_width = parse_number("coord_box", it->second);
    options.erase(it);
  }
  if (auto it = options.find("length_limit"); it != options.end()) {
    cfg.limits.length_limit = parse_number("length_limit", it->second);
    options.erase(it);
  }
  if (auto it = options.find("stress_limit"); it != options.end()) {
    cfg.limits.stress_limit = parse_number("stress_limit", it->second);
    options.erase(it);
  }
  if (auto it = options.find("start_area"); it != options.end()) {
    cfg.start_area = parse_number("start_area", it->second);
    options.erase(it);
  }
  reject_leftovers("tenbar", options);

  Benchmark b;
  b.solve_stats = std::make_shared<truss::SolveStats>();
  b.problem = truss::make_ten_bar_problem(cfg, b.solve_stats);
  b.penalty = truss::ten_bar_penalty();
  // Coordinates use the engine-default range/20; the area ladder starts
  // coarser (area_max * 0.15) — the default 1/20 rung converges noticeably
  // heavier on this problem.
  b.initial_step.assign(6, cfg.coord_box_half_width / 10.0);
  b.initial_step.insert(b.initial_step.end(), 10, cfg.area_max * 0.15);
  return b;
}

Benchmark make_pole(int ramps, std::map<std::string, std::string> options) {
  pole::FieldModel fm;
  if (auto it = options.find("n_ring"); it != options.end()) {
    fm.n_ring = static_cast<int>(parse_number("n_ring", it->second));
    if (fm.n_ring < 1) throw std::invalid_argument("n_ring must be positive");
    options.erase(it);
  }
  reject_leftovers("pole", options);

  Benchmark b;
  b.problem = pole::make_pole_problem(ramps, fm);
  b.penalty = pole::pole_penalty();
  b.plot_writer = [fm](const SolutionVector& x, std::ostream& out) {
    pole::write_profile_csv(pole::profile_from_params(x.values, fm), out);
  };
  return b;
}

}  // namespace

Benchmark make_benchmark(const std::string& name,
                         const std::map<std::string, std::string>& options) {
  if (name == "twobasin") {
    reject_leftovers(name, options);
    Benchmark b;
    b.problem = make_two_basin_problem();
    b.penalty = PenaltyConfig{{}, 2.0};
    return b;
  }
  if (name == "tenbar") return make_tenbar(options);
  if (name == "pole1") return make_pole(1, options);
  if (name == "pole2") return make_pole(2, options);
  if (name == "pole3") return make_pole(3, options);
  if (name == "pole4") return make_pole(4, options);
  throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<std::string> benchmark_names() {
  return {"twobasin", "tenbar", "pole1", "pole2", "pole3", "pole4"};
}

}  // namespace tabuforge
