#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "mmscale/classical.hpp"
#include "mmscale/matrix.hpp"

using namespace mmscale;

namespace {

MachineConfig cfg(std::int64_t procs, std::optional<std::int64_t> mem = {},
                  SimMode mode = SimMode::data) {
  MachineConfig c;
  c.procs = procs;
  c.mem_words = mem;
  c.mode = mode;
  return c;
}

bool same_ledger(const CommLedger& x, const CommLedger& y) {
  if (x.procs.size() != y.procs.size() || x.flops != y.flops) return false;
  for (std::size_t i = 0; i < x.procs.size(); ++i) {
    const auto& a = x.procs[i];
    const auto& b = y.procs[i];
    if (a.words_sent != b.words_sent || a.words_received != b.words_received ||
        a.msgs_sent != b.msgs_sent || a.msgs_received != b.msgs_received ||
        a.initial_words != b.initial_words || a.final_words != b.final_words)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("replication factor selection") {
  // memory-limited: 12 procs with 1024 words barely hold 3*64^2 words
  CHECK(choose_c(64, 12, 1024) == 1);
  // unbounded memory: capped by p^(1/3)
  CHECK(choose_c(64, 512, std::nullopt) == 8);
  // memory allows 5 copies but p^(1/3) caps at 4
  CHECK(choose_c(64, 64, 1024) == 4);
  // not enough total memory for even one copy of the three matrices
  CHECK_THROWS_AS(choose_c(64, 4, 1024), ConfigError);
  CHECK_THROWS_AS(choose_c(0, 4, std::nullopt), ConfigError);
}

TEST_CASE("plan construction") {
  // p=12 admits no q*q*c grid with c <= choose_c
  CHECK_THROWS_AS(make_classical_plan(64, 12, std::nullopt, 1024,
                                      SimMode::data),
                  ConfigError);
  // explicit c must produce an exact grid
  const ClassicalPlan plan =
      make_classical_plan(64, 16, 4, std::nullopt, SimMode::data);
  CHECK(plan.q == 2);
  CHECK(plan.c == 4);
  CHECK_THROWS_AS(make_classical_plan(64, 16, 3, std::nullopt, SimMode::data),
                  ConfigError);
  // auto mode walks down to the largest feasible c
  const ClassicalPlan auto_plan =
      make_classical_plan(64, 64, std::nullopt, std::nullopt, SimMode::data);
  CHECK(auto_plan.c == 4);
  CHECK(auto_plan.q == 4);
  // explicit replication bumping the footprint over the budget is rejected
  CHECK_THROWS_AS(make_classical_plan(64, 16, 4, 1024, SimMode::data),
                  ConfigError);
}

TEST_CASE("square grid exchange on 4 processors") {
  // n=4 on a 2x2 grid, one copy of the data: every processor ships its
  // operand slices around the ring once and keeps its own C block.
  Matrix a = random_matrix(4, seed_for_operand(3, 0));
  Matrix b = random_matrix(4, seed_for_operand(3, 1));
  const ClassicalResult r = run_classical(a, b, cfg(4), 1, "cannon");
  CHECK(r.product == multiply_reference(a, b));
  CHECK(r.plan.q == 2);
  CHECK(r.plan.c == 1);
  CHECK(r.ledger.max_words() == 16);
  for (const auto& p : r.ledger.procs) {
    CHECK(p.words_sent == 8);
    CHECK(p.words_received == 8);
    CHECK(p.initial_words == 8);
    CHECK(p.final_words == 4);
  }
  for (auto f : r.ledger.flops) CHECK(f == 16);  // n^3 / P
}

TEST_CASE("products are exact across grid shapes") {
  struct Case {
    std::int64_t n, p;
    std::optional<std::int64_t> c;
  };
  for (const Case& t : {Case{8, 4, 1}, Case{8, 16, std::nullopt},
                        Case{16, 32, 2}, Case{16, 1, 1}}) {
    CAPTURE(t.n);
    CAPTURE(t.p);
    Matrix a = random_matrix(t.n, seed_for_operand(9, 0));
    Matrix b = random_matrix(t.n, seed_for_operand(9, 1));
    const ClassicalResult r = run_classical(a, b, cfg(t.p), t.c, "x");
    CHECK(r.product == multiply_reference(a, b));
    CHECK(r.ledger.total_sent() == r.ledger.total_received());
  }
}

TEST_CASE("count-only runs produce the same ledger as data runs") {
  Matrix a = random_matrix(16, seed_for_operand(5, 0));
  Matrix b = random_matrix(16, seed_for_operand(5, 1));
  const ClassicalResult data = run_classical(a, b, cfg(16, 512), {}, "m");
  const ClassicalResult counts = run_classical_counts(16, cfg(16, 512), {}, "m");
  CHECK(same_ledger(data.ledger, counts.ledger));
  CHECK(data.peak_resident == counts.peak_resident);
  CHECK(data.plan.q == counts.plan.q);
  CHECK(data.plan.c == counts.plan.c);
}

TEST_CASE("grids that do not divide n are count-only territory") {
  // p = 10584 = 42^2 * 6: q = 42 does not divide n = 1024, so data-mode
  // planning must refuse while count-only planning accepts.
  CHECK_THROWS_AS(
      make_classical_plan(1024, 10584, std::nullopt, 4096, SimMode::data),
      ConfigError);
  const ClassicalPlan plan = make_classical_plan(1024, 10584, std::nullopt,
                                                 4096, SimMode::count_only);
  CHECK(plan.q == 42);
  CHECK(plan.c == 6);
  const ClassicalResult r =
      run_classical_counts(1024, cfg(10584, 4096, SimMode::count_only), {},
                           "u");
  CHECK(r.ledger.max_words() == 17825);
}

TEST_CASE("per-processor volume shrinks as processors are added") {
  // frozen from the closed form 2*(2(q-1)+(c-1))*n^2/P at n=64
  const std::vector<std::pair<std::int64_t, std::int64_t>> expect = {
      {16, 3072}, {64, 1152}, {256, 544}, {1024, 264}};
  std::int64_t prev = -1;
  for (auto [p, want] : expect) {
    const ClassicalResult r =
        run_classical_counts(64, cfg(p, std::nullopt, SimMode::count_only),
                             {}, "mono");
    CHECK(r.ledger.max_words() == want);
    if (prev >= 0) CHECK(r.ledger.max_words() < prev);
    prev = r.ledger.max_words();
  }
}

TEST_CASE("traces tile the full lattice cube") {
  Matrix a = random_matrix(8, seed_for_operand(11, 0));
  Matrix b = random_matrix(8, seed_for_operand(11, 1));
  const ClassicalResult r = run_classical(a, b, cfg(16), {}, "tile");
  // every (i,j,k) point appears in exactly one processor's box
  std::vector<int> hits(8 * 8 * 8, 0);
  for (const auto& proc_boxes : r.trace.boxes)
    for (const Box& box : proc_boxes)
      for (std::int64_t i = box.i0; i < box.i1; ++i)
        for (std::int64_t j = box.j0; j < box.j1; ++j)
          for (std::int64_t k = box.k0; k < box.k1; ++k)
            ++hits[static_cast<std::size_t>((i * 8 + j) * 8 + k)];
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("ring schedule peaks exactly at the working-set bound") {
  // n=64 on 16 processors, one copy: 3 slices + 1 block = 4 * 256 = 1024
  // words, which is exactly the per-processor budget here.
  const ClassicalResult r =
      run_classical_counts(64, cfg(16, 1024, SimMode::count_only), 1, "fit");
  CHECK(r.peak_resident == 1024);
  // one word less must blow the budget
  CHECK_THROWS_AS(
      run_classical_counts(64, cfg(16, 1023, SimMode::count_only), 1, "f2"),
      ContractError);
}

TEST_CASE("runs are deterministic") {
  Matrix a = random_matrix(16, seed_for_operand(2, 0));
  Matrix b = random_matrix(16, seed_for_operand(2, 1));
  const ClassicalResult r1 = run_classical(a, b, cfg(32), 2, "d");
  const ClassicalResult r2 = run_classical(a, b, cfg(32), 2, "d");
  CHECK(r1.product == r2.product);
  CHECK(same_ledger(r1.ledger, r2.ledger));
  CHECK(r1.peak_resident == r2.peak_resident);
}

TEST_CASE("operands must be square and matching") {
  Matrix a(4, 4), b(8, 8);
  CHECK_THROWS_AS(run_classical(a, b, cfg(4), 1, "bad"), ConfigError);
  Matrix c(4, 8);
  CHECK_THROWS_AS(run_classical(c, c, cfg(4), 1, "bad"), ConfigError);
}
