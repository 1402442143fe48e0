#pragma once

// Multiplication traces: which (i,j,k) scalar products each processor
// performed. Classical schedules assign each processor an axis-aligned box
// of lattice points, so traces store boxes, not individual points.

#include <cstdint>
#include <string>
#include <vector>

namespace mmscale {

struct Box {
  std::int64_t i0 = 0, i1 = 0;  // half-open row range of A / C
  std::int64_t j0 = 0, j1 = 0;  // half-open column range of B / C
  std::int64_t k0 = 0, k1 = 0;  // half-open inner-dimension range

  std::int64_t volume() const {
    return (i1 - i0) * (j1 - j0) * (k1 - k0);
  }
  bool empty() const { return volume() == 0; }
};

struct MultTrace {
  std::string run_id;
  std::int64_t n = 0;
  // One entry per processor; a processor may own several boxes.
  std::vector<std::vector<Box>> boxes;
};

}  // namespace mmscale
