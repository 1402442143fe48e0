#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "mmscale/classical.hpp"
#include "mmscale/lw.hpp"
#include "mmscale/matrix.hpp"

using namespace mmscale;

namespace {

MachineConfig data_cfg(std::int64_t procs) {
  MachineConfig c;
  c.procs = procs;
  c.mode = SimMode::data;
  return c;
}

}  // namespace

TEST_CASE("lattice inequality is tight on a full cube") {
  std::vector<LatticePoint> cube;
  for (std::int64_t i = 0; i < 3; ++i)
    for (std::int64_t j = 0; j < 3; ++j)
      for (std::int64_t k = 0; k < 3; ++k) cube.push_back({i, j, k});
  const LwCheck r = lw_check(cube);
  CHECK(r.lhs == 27);
  CHECK(r.proj[0] == 9);
  CHECK(r.proj[1] == 9);
  CHECK(r.proj[2] == 9);
  CHECK(r.rhs == doctest::Approx(27.0));
  CHECK(r.holds);
}

TEST_CASE("lattice inequality on degenerate sets") {
  CHECK(lw_check({}).holds);
  CHECK(lw_check({}).lhs == 0);
  const LwCheck one = lw_check({{5, 7, 9}});
  CHECK(one.lhs == 1);
  CHECK(one.proj == std::array<std::int64_t, 3>{1, 1, 1});
  CHECK(one.holds);
  // duplicates collapse
  const LwCheck dup = lw_check({{1, 1, 1}, {1, 1, 1}});
  CHECK(dup.lhs == 1);
}

TEST_CASE("lattice inequality holds for every subset of the 2-cube") {
  std::vector<LatticePoint> pts;
  for (std::int64_t i = 0; i < 2; ++i)
    for (std::int64_t j = 0; j < 2; ++j)
      for (std::int64_t k = 0; k < 2; ++k) pts.push_back({i, j, k});
  for (unsigned mask = 0; mask < 256; ++mask) {
    std::vector<LatticePoint> subset;
    for (unsigned b = 0; b < 8; ++b)
      if (mask & (1u << b)) subset.push_back(pts[b]);
    const LwCheck r = lw_check(subset);
    CAPTURE(mask);
    CHECK(r.holds);
    CHECK(static_cast<double>(r.lhs) <= r.rhs + 1e-9);
  }
}

TEST_CASE("lattice inequality survives random fuzzing") {
  std::mt19937_64 rng(20240917);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<LatticePoint> pts;
    const int count = static_cast<int>(rng() % 32);
    for (int t = 0; t < count; ++t)
      pts.push_back({static_cast<std::int64_t>(rng() % 6),
                     static_cast<std::int64_t>(rng() % 6),
                     static_cast<std::int64_t>(rng() % 6)});
    const LwCheck r = lw_check(pts);
    CAPTURE(trial);
    REQUIRE(r.holds);
  }
}

TEST_CASE("audit of the square-grid exchange run") {
  Matrix a = random_matrix(4, seed_for_operand(3, 0));
  Matrix b = random_matrix(4, seed_for_operand(3, 1));
  const ClassicalResult r = run_classical(a, b, data_cfg(4), 1, "cannon");
  const AuditReport report = audit_trace(r.trace, r.ledger);
  CHECK(report.all_ok);
  CHECK(report.rows.size() == 4);
  CHECK(report.max_required_tight == 8);
  for (const AuditRow& row : report.rows) {
    // each processor multiplies a 2x2x4 box: 16 points, projections
    // 8 + 8 + 4 = 20, with I = 8 and O = 4 already resident
    CHECK(row.volume == 16);
    CHECK(row.proj_sum == 20);
    CHECK(row.required_tight == 8);
    CHECK(row.required_surface == 0);
    CHECK(row.actual == 16);
    CHECK(row.slack == 8);
    CHECK(row.ok);
  }
}

TEST_CASE("audit accepts a serial run with zero communication") {
  Matrix a = random_matrix(4, seed_for_operand(1, 0));
  Matrix b = random_matrix(4, seed_for_operand(1, 1));
  const ClassicalResult r = run_classical(a, b, data_cfg(1), 1, "serial");
  const AuditReport report = audit_trace(r.trace, r.ledger);
  CHECK(report.all_ok);
  CHECK(report.rows[0].volume == 64);
  CHECK(report.rows[0].required_tight == 0);
  CHECK(report.rows[0].required_surface == 0);
  CHECK(report.rows[0].actual == 0);
}

TEST_CASE("tight requirement dominates the surface form on real runs") {
  for (std::int64_t p : {4, 16}) {
    Matrix a = random_matrix(8, seed_for_operand(4, 0));
    Matrix b = random_matrix(8, seed_for_operand(4, 1));
    const ClassicalResult r = run_classical(a, b, data_cfg(p), {}, "dom");
    for (const AuditRow& row : audit_trace(r.trace, r.ledger).rows)
      CHECK(row.required_tight >= row.required_surface);
  }
}

TEST_CASE("audit rejects mismatched artifacts") {
  Matrix a = random_matrix(4, seed_for_operand(3, 0));
  Matrix b = random_matrix(4, seed_for_operand(3, 1));
  const ClassicalResult r1 = run_classical(a, b, data_cfg(4), 1, "one");
  const ClassicalResult r2 = run_classical(a, b, data_cfg(4), 1, "two");
  CHECK_THROWS_AS(audit_trace(r1.trace, r2.ledger), ContractError);

  MultTrace wrong = r1.trace;
  wrong.boxes.pop_back();
  CHECK_THROWS_AS(audit_trace(wrong, r1.ledger), ContractError);
}

TEST_CASE("processors with no work need no communication") {
  MultTrace trace;
  trace.run_id = "idle";
  trace.n = 4;
  trace.boxes.resize(2);
  trace.boxes[0].push_back(Box{0, 4, 0, 4, 0, 4});
  CommLedger ledger;
  ledger.run_id = "idle";
  ledger.procs.resize(2);
  ledger.procs[0].initial_words = 32;
  ledger.procs[0].final_words = 16;
  const AuditReport report = audit_trace(trace, ledger);
  CHECK(report.rows[1].volume == 0);
  CHECK(report.rows[1].required_tight == 0);
  CHECK(report.rows[1].required_surface == 0);
  CHECK(report.rows[1].ok);
}

TEST_CASE("audit flags undercounted communication") {
  // a processor claims a 4x4x4 box but the ledger shows no traffic and no
  // resident data: the projection bound says that is impossible
  MultTrace trace;
  trace.run_id = "liar";
  trace.n = 4;
  trace.boxes.resize(1);
  trace.boxes[0].push_back(Box{0, 4, 0, 4, 0, 4});
  CommLedger ledger;
  ledger.run_id = "liar";
  ledger.procs.resize(1);
  const AuditReport report = audit_trace(trace, ledger);
  CHECK_FALSE(report.all_ok);
  CHECK(report.rows[0].required_tight == 48);
  CHECK(report.rows[0].slack == -48);
}
