#pragma once

// Strassen multiplication: the sequential recursion, and a CAPS-style
// parallel version over P = 7^b processors that interleaves BFS steps
// (split the 7 subproblems across 7 processor subgroups) with DFS steps
// (the whole group walks the 7 subproblems one at a time). BFS spends
// memory to avoid communication; DFS spends communication to save memory.
//
// Data layout. Matrices are linearized in Morton (quadrant-recursive)
// order, so each of the four quadrants is one contiguous quarter of the
// index space and every processor share is a plain interval. Encode steps
// form the seven operand combinations T_i = sum of +/- quadrants; each
// source presums the quadrant pieces it holds locally and ships one
// contiguous run per destination, which is what keeps the exchange at the
// minimum word count. Decode mirrors this from the subproblem results back
// into the parent's quadrants.

#include <cstdint>
#include <optional>
#include <string>

#include "mmscale/machine.hpp"
#include "mmscale/matrix.hpp"

namespace mmscale {

struct SequentialResult {
  Matrix product;
  std::int64_t multiplications = 0;
};

// Recursive 7-product multiplication; blocks of dimension <= base fall back
// to the cubic kernel. base = 1 gives exactly 7^(lg n) scalar products.
SequentialResult strassen_sequential(const Matrix& a, const Matrix& b,
                                     std::int64_t base = 1);

struct StrassenPlan {
  std::int64_t n = 0;
  std::string schedule;       // e.g. "DDBBBB"; one char per recursion level
  std::int64_t leaf_dim = 0;  // n >> schedule.size()
};

// Validates P = 7^(number of B steps), schedule length <= lg n, and the
// character set; throws ConfigError with the nearest power of 7 otherwise.
StrassenPlan make_strassen_plan(std::int64_t n, std::int64_t p,
                                const std::string& schedule);

// Minimal-DFS schedule: k leading D steps followed by all B steps, with k
// the smallest count whose peak per-processor footprint (measured by a
// count-only dry run) fits m. Unbounded m gives k = 0. Throws ConfigError
// when even the deepest admissible k does not fit.
StrassenPlan auto_schedule(std::int64_t n, std::int64_t p,
                           std::optional<std::int64_t> m);

struct StrassenResult {
  Matrix product;  // empty in count-only mode
  CommLedger ledger;
  StrassenPlan plan;
  std::int64_t peak_resident = 0;
};

// Runs the plan on a machine built from `machine_cfg`. schedule = nullopt
// means auto_schedule. Exact integer product in data mode; identical
// ledger in count-only mode.
StrassenResult run_strassen_parallel(const Matrix& a, const Matrix& b,
                                     const MachineConfig& machine_cfg,
                                     std::optional<std::string> schedule,
                                     const std::string& run_id = "caps");

// Count-only entry point without operand construction.
StrassenResult run_strassen_counts(std::int64_t n,
                                   const MachineConfig& machine_cfg,
                                   std::optional<std::string> schedule,
                                   const std::string& run_id = "caps");

}  // namespace mmscale
