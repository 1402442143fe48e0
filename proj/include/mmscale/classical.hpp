#pragma once

// Classical O(n^3) parallel multiplication on a q x q x c grid: the 2.5D
// family with replication factor c (c = 1 degenerates to a Cannon-style 2D
// schedule, c = P^(1/3) to the 3D algorithm).
//
// Schedule. Processor (i,j,l) computes C block (i,j) over the k-range of
// layer l. Each layer's k-range is cut into q slices; at step u the
// processor multiplies with slice (i+j+u) mod q, so the initial layout is
// skewed and holds exactly one copy of A and B across the machine
// (2n^2/P words per processor). Between steps the current A slice moves one
// hop left along the grid row and the B slice one hop up along the column;
// after the last step the c layers reduce-scatter their partial C blocks so
// each processor ends owning n^2/P output words. Every word a processor
// receives is one it provably needs (its Loomis-Whitney projection total
// minus what it started with), which is why the audit passes with equality
// on the received side.

#include <cstdint>
#include <optional>

#include "mmscale/machine.hpp"
#include "mmscale/matrix.hpp"
#include "mmscale/trace.hpp"

namespace mmscale {

struct ClassicalPlan {
  std::int64_t n = 0;
  std::int64_t q = 0;  // grid side; P = q^2 * c
  std::int64_t c = 0;  // replication factor
};

// Largest useful replication factor: min over the 3D cap P^(1/3) and the
// memory cap from 3cn^2/P <= m; at least 1. Pure arithmetic — grid
// realizability (q^2 = P/c integral) is the planner's job.
std::int64_t choose_c(std::int64_t n, std::int64_t p,
                      std::optional<std::int64_t> m);

// Resolves (n, P, c-or-auto) to a concrete grid. Auto-c starts from
// choose_c's cap and walks down to the largest c whose quotient P/c is a
// perfect square. Explicit c must satisfy q^2 c = P outright. Data-mode
// plans additionally require q | n so blocks are exact; count-only plans
// use balanced integer splits instead. Throws ConfigError when no grid
// exists or the 3cn^2/P <= m precondition fails.
ClassicalPlan make_classical_plan(std::int64_t n, std::int64_t p,
                                  std::optional<std::int64_t> c,
                                  std::optional<std::int64_t> m, SimMode mode);

struct ClassicalResult {
  Matrix product;  // empty in count-only mode
  CommLedger ledger;
  MultTrace trace;
  ClassicalPlan plan;
  std::int64_t peak_resident = 0;
};

// Runs the schedule on a fresh machine built from `machine_cfg`. In data
// mode the returned product is exact; in count-only mode only the ledger,
// trace, and residency accounting are produced (same control flow, so the
// ledgers of the two modes are identical).
ClassicalResult run_classical(const Matrix& a, const Matrix& b,
                              const MachineConfig& machine_cfg,
                              std::optional<std::int64_t> c,
                              const std::string& run_id = "classical");

// Count-only entry point that skips operand construction entirely.
ClassicalResult run_classical_counts(std::int64_t n,
                                     const MachineConfig& machine_cfg,
                                     std::optional<std::int64_t> c,
                                     const std::string& run_id = "classical");

}  // namespace mmscale
