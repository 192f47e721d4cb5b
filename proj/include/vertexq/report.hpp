// One verified identity: what was checked, how far off it was, and whether
// it met its pinned tolerance.
#pragma once

#include <string>
#include <vector>

namespace vertexq {

struct Report {
  std::string id;      // stable dotted name, e.g. "baxter.quasi.qr_u1"
  std::string anchor;  // the identity in plain math text
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

}  // namespace vertexq
