#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mmscale/machine.hpp"

using namespace mmscale;

namespace {

MachineConfig cfg(std::int64_t procs, std::optional<std::int64_t> mem = {},
                  SimMode mode = SimMode::count_only) {
  MachineConfig c;
  c.procs = procs;
  c.mem_words = mem;
  c.mode = mode;
  return c;
}

}  // namespace

TEST_CASE("send updates both sides of the ledger") {
  Machine m(cfg(3));
  m.send(0, 1, 10);
  m.send(0, 2, 5);
  m.send(2, 0, 7);

  const auto& led = m.ledger();
  CHECK(led.procs[0].words_sent == 15);
  CHECK(led.procs[0].msgs_sent == 2);
  CHECK(led.procs[0].words_received == 7);
  CHECK(led.procs[0].msgs_received == 1);
  CHECK(led.procs[1].words_received == 10);
  CHECK(led.procs[1].msgs_received == 1);
  CHECK(led.procs[2].words_received == 5);
  CHECK(led.procs[2].words_sent == 7);

  CHECK(led.total_sent() == led.total_received());
  CHECK(led.total_sent() == 22);
  // max over processors of sent + received
  CHECK(led.max_words() == 22);
}

TEST_CASE("messages never outnumber words") {
  Machine m(cfg(4));
  m.send(0, 1, 3);
  m.send(1, 2, 1);
  m.send(3, 0, 100);
  for (const auto& p : m.ledger().procs) {
    CHECK(p.msgs_sent <= p.words_sent);
    CHECK(p.msgs_received <= p.words_received);
  }
}

TEST_CASE("send argument validation") {
  Machine m(cfg(2));
  CHECK_THROWS_AS(m.send(0, 0, 4), ContractError);
  CHECK_THROWS_AS(m.send(0, 1, 0), ContractError);
  CHECK_THROWS_AS(m.send(0, 1, -3), ContractError);
  CHECK_THROWS_AS(m.send(0, 2, 4), ConfigError);
  CHECK_THROWS_AS(m.send(-1, 0, 4), ConfigError);
}

TEST_CASE("machine construction validation") {
  CHECK_THROWS_AS(Machine(cfg(0)), ConfigError);
  CHECK_THROWS_AS(Machine(cfg(2, 0)), ConfigError);
  CHECK_NOTHROW(Machine(cfg(1, 1)));
}

TEST_CASE("residency and peak tracking") {
  Machine m(cfg(2, 100));
  m.alloc(0, 40);
  m.alloc(0, 30);
  CHECK(m.resident(0) == 70);
  m.dealloc(0, 50);
  CHECK(m.resident(0) == 20);
  CHECK(m.peak_resident(0) == 70);
  m.alloc(1, 10);
  CHECK(m.max_peak_resident() == 70);

  // zero-word requests are no-ops, negative are contract violations
  m.alloc(0, 0);
  m.dealloc(0, 0);
  CHECK(m.resident(0) == 20);
  CHECK_THROWS_AS(m.alloc(0, -1), ContractError);
  CHECK_THROWS_AS(m.dealloc(0, -1), ContractError);
}

TEST_CASE("memory budget enforced in both modes") {
  for (SimMode mode : {SimMode::data, SimMode::count_only}) {
    CAPTURE(to_string(mode));
    Machine m(cfg(2, 64, mode));
    m.alloc(0, 64);  // exactly at the budget is fine
    CHECK_THROWS_AS(m.alloc(0, 1), ContractError);
    // incoming payload counts against the receiver's budget too
    Machine m2(cfg(2, 64, mode));
    m2.alloc(1, 60);
    CHECK_THROWS_AS(m2.send(0, 1, 8), ContractError);
  }
}

TEST_CASE("releasing more than resident is a contract violation") {
  Machine m(cfg(1));
  m.alloc(0, 5);
  CHECK_THROWS_AS(m.dealloc(0, 6), ContractError);
}

TEST_CASE("unbounded machine accepts large footprints") {
  Machine m(cfg(1));
  m.alloc(0, 1'000'000'000);
  CHECK(m.peak_resident(0) == 1'000'000'000);
}

TEST_CASE("flat broadcast and reduce charge the root per peer") {
  Machine m(cfg(4));
  m.broadcast(0, {0, 1, 2, 3}, 9);
  CHECK(m.ledger().procs[0].words_sent == 27);
  CHECK(m.ledger().procs[0].msgs_sent == 3);
  CHECK(m.ledger().procs[1].words_received == 9);

  Machine r(cfg(4));
  r.reduce(2, {0, 1, 2, 3}, 5);
  CHECK(r.ledger().procs[2].words_received == 15);
  CHECK(r.ledger().procs[2].msgs_received == 3);
  CHECK(r.ledger().procs[0].words_sent == 5);
}

TEST_CASE("initial and final word bookkeeping") {
  Machine m(cfg(2));
  m.alloc(0, 12);
  m.alloc(1, 8);
  m.mark_initial();
  m.alloc(0, 100);  // scratch after the snapshot does not count as input
  m.set_final_words(0, 4);
  CHECK(m.ledger().procs[0].initial_words == 12);
  CHECK(m.ledger().procs[1].initial_words == 8);
  CHECK(m.ledger().procs[0].final_words == 4);
  CHECK(m.ledger().procs[1].final_words == 0);
  CHECK_THROWS_AS(m.set_final_words(0, -1), ContractError);
}

TEST_CASE("flop accounting") {
  Machine m(cfg(2));
  m.add_flops(0, 100);
  m.add_flops(0, 20);
  m.add_flops(1, 7);
  CHECK(m.ledger().flops[0] == 120);
  CHECK(m.ledger().flops[1] == 7);
  CHECK(m.ledger().max_flops() == 120);
  CHECK_THROWS_AS(m.add_flops(0, -1), ContractError);
}

TEST_CASE("mode names round-trip") {
  CHECK(to_string(SimMode::data) == "data");
  CHECK(to_string(SimMode::count_only) == "count-only");
  CHECK(sim_mode_from_string("data") == SimMode::data);
  CHECK(sim_mode_from_string("count-only") == SimMode::count_only);
  CHECK(sim_mode_from_string("count_only") == SimMode::count_only);
  CHECK(sim_mode_from_string("count") == SimMode::count_only);
  CHECK_THROWS_AS(sim_mode_from_string("fast"), ConfigError);
}
