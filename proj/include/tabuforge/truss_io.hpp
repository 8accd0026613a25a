#pragma once

#include <iosfwd>
#include <string>

#include "tabuforge/truss.hpp"

namespace tabuforge::truss {

// Plain-text model format, one section per structural aspect. '#' starts a
// comment anywhere on a line. All doubles round-trip exactly.
//
//   nodes <count>        followed by <x> <y> per node (cm)
//   members <count>      followed by <node_a> <node_b> <area> (0-based, cm^2)
//   supports <count>     followed by <node> <fix_x 0|1> <fix_y 0|1>
//   loads <count>        followed by <node> <Fx> <Fy> (N)
//   material <E> <density>
//
// Nodes without a supports/loads line are free/unloaded.
void export_model(const TrussModel& model, std::ostream& out);
void export_model(const TrussModel& model, const std::string& path);

// Throws std::runtime_error on syntax errors or unreadable files.
TrussModel import_model(std::istream& in);
TrussModel import_model(const std::string& path);

}  // namespace tabuforge::truss
