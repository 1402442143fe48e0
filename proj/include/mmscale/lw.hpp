#pragma once

// Loomis-Whitney verification: the lattice inequality itself (exact integer
// arithmetic) and the per-processor audit of classical run traces against
// the projection-based communication lower bounds.

#include <array>
#include <cstdint>
#include <vector>

#include "mmscale/machine.hpp"
#include "mmscale/trace.hpp"

namespace mmscale {

struct LatticePoint {
  std::int64_t i = 0, j = 0, k = 0;
  auto operator<=>(const LatticePoint&) const = default;
};

struct LwCheck {
  std::int64_t lhs = 0;                     // |V|
  std::array<std::int64_t, 3> proj{};       // |V_ik|, |V_kj|, |V_ij|
  double rhs = 0;                           // sqrt of projection product
  bool holds = false;                       // decided exactly: |V|^2 <= prod
};

// |V| <= sqrt(|V_ik| * |V_kj| * |V_ij|). `holds` is computed by comparing
// |V|^2 against the projection product in integers, no rounding anywhere.
LwCheck lw_check(const std::vector<LatticePoint>& points);

struct AuditRow {
  std::int64_t proc = 0;
  std::int64_t volume = 0;           // lattice points multiplied here
  std::int64_t proj_sum = 0;         // |V_ik| + |V_kj| + |V_ij|
  std::int64_t required_surface = 0; // max(0, ceil(6^(1/3) |V|^(2/3)) - I - O)
  std::int64_t required_tight = 0;   // max(0, proj_sum - I - O)
  std::int64_t actual = 0;           // words sent + received
  std::int64_t slack = 0;            // actual - max(required)
  bool ok = false;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  bool all_ok = true;
  std::int64_t max_required_tight = 0;
};

// Audits every processor of a classical run: words sent+received must cover
// both the surface form and the tighter raw projection sum, each less the
// initially resident words I and designated outputs O. A failure means the
// simulator undercounted communication — the bound is a theorem. Throws
// ContractError if trace and ledger come from different runs.
AuditReport audit_trace(const MultTrace& trace, const CommLedger& ledger);

}  // namespace mmscale
