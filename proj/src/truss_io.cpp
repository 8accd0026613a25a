#include "tabuforge/truss_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tabuforge/fmt.hpp"

namespace tabuforge::truss {

void export_model(const TrussModel& model, std::ostream& out) {
  out << "# truss model\n";
  out << "nodes " << model.nodes.size() << "\n";
  for (const auto& n : model.nodes)
    out << format_double(n[0]) << " " << format_double(n[1]) << "\n";
  out << "members " << model.members.size() << "\n";
  for (const auto& m : model.members)
    out << m.node_a << " " << m.node_b << " " << format_double(m.area) << "\n";
  std::size_t n_supports = 0, n_loads = 0;
  for (const auto& s : model.supports)
    if (s[0] || s[1]) ++n_supports;
  for (const auto& l : model.loads)
    if (l[0] != 0.0 || l[1] != 0.0) ++n_loads;
  out << "supports " << n_supports << "\n";
  for (std::size_t i = 0; i < model.supports.size(); ++i)
    if (model.supports[i][0] || model.supports[i][1])
      out << i << " " << (model.supports[i][0] ? 1 : 0) << " "
          << (model.supports[i][1] ? 1 : 0) << "\n";
  out << "loads " << n_loads << "\n";
  for (std::size_t i = 0; i < model.loads.size(); ++i)
    if (model.loads[i][0] != 0.0 || model.loads[i][1] != 0.0)
      out << i << " " << format_double(model.loads[i][0]) << " "
          << format_double(model.loads[i][1]) << "\n";
  out << "material " << format_double(model.youngs_modulus) << " "
      << format_double(model.density) << "\n";
}

void export_model(const TrussModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write truss model: " + path);
  export_model(model, out);
}

namespace {

// Strips comments so the reader can be purely token-based.
std::stringstream strip_comments(std::istream& in) {
  std::stringstream tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    tokens << line << "\n";
  }
  return tokens;
}

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("truss model parse error: " + what);
}

}  // namespace

TrussModel import_model(std::istream& in) {
  std::stringstream tokens = strip_comments(in);
  TrussModel model;
  std::string section;
  bool saw_nodes = false;
  while (tokens >> section) {
    if (section == "nodes") {
      std::size_t count = 0;
      if (!(tokens >> count)) fail("missing node count");
      model.nodes.resize(count);
      for (auto& n : model.nodes)
        if (!(tokens >> n[0] >> n[1])) fail("bad node line");
      model.supports.assign(count, {false, false});
      model.loads.assign(count, {0.0, 0.0});
      saw_nodes = true;
    } else if (section == "members") {
      if (!saw_nodes) fail("members before nodes");
      std::size_t count = 0;
      if (!(tokens >> count)) fail("missing member count");
      model.members.resize(count);
      for (auto& m : model.members)
        if (!(tokens >> m.node_a >> m.node_b >> m.area)) fail("bad member line");
    } else if (section == "supports") {
      if (!saw_nodes) fail("supports before nodes");
      std::size_t count = 0;
      if (!(tokens >> count)) fail("missing support count");
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t node = 0;
        int fx = 0, fy = 0;
        if (!(tokens >> node >> fx >> fy)) fail("bad support line");
        if (node >= model.nodes.size()) fail("support references missing node");
        model.supports[node] = {fx != 0, fy != 0};
      }
    } else if (section == "loads") {
      if (!saw_nodes) fail("loads before nodes");
      std::size_t count = 0;
      if (!(tokens >> count)) fail("missing load count");
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t node = 0;
        double fx = 0, fy = 0;
        if (!(tokens >> node >> fx >> fy)) fail("bad load line");
        if (node >= model.nodes.size()) fail("load references missing node");
        model.loads[node] = {fx, fy};
      }
    } else if (section == "material") {
      if (!(tokens >> model.youngs_modulus >> model.density))
        fail("bad material line");
    } else {
      fail("unknown section '" + section + "'");
    }
  }
  if (!saw_nodes) fail("no nodes section");
  return model;
}

TrussModel import_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read truss model: " + path);
  return import_model(in);
}

}  // namespace tabuforge::truss
