#include "mmscale/machine.hpp"

#include <algorithm>

namespace mmscale {

std::string to_string(SimMode mode) {
  return mode == SimMode::data ? "data" : "count-only";
}

SimMode sim_mode_from_string(const std::string& name) {
  if (name == "data") return SimMode::data;
  if (name == "count-only" || name == "count_only" || name == "count")
    return SimMode::count_only;
  throw ConfigError("unknown simulation mode: " + name);
}

std::int64_t CommLedger::max_words() const {
  std::int64_t best = 0;
  for (const auto& p : procs)
    best = std::max(best, p.words_sent + p.words_received);
  return best;
}

std::int64_t CommLedger::total_sent() const {
  std::int64_t sum = 0;
  for (const auto& p : procs) sum += p.words_sent;
  return sum;
}

std::int64_t CommLedger::total_received() const {
  std::int64_t sum = 0;
  for (const auto& p : procs) sum += p.words_received;
  return sum;
}

std::int64_t CommLedger::max_flops() const {
  std::int64_t best = 0;
  for (auto f : flops) best = std::max(best, f);
  return best;
}

Machine::Machine(MachineConfig cfg) : cfg_(cfg) {
  if (cfg_.procs < 1) throw ConfigError("machine needs at least one processor");
  if (cfg_.mem_words && *cfg_.mem_words < 1)
    throw ConfigError("per-processor memory must be positive");
  ledger_.procs.resize(static_cast<std::size_t>(cfg_.procs));
  ledger_.flops.assign(static_cast<std::size_t>(cfg_.procs), 0);
  resident_.assign(static_cast<std::size_t>(cfg_.procs), 0);
  peak_.assign(static_cast<std::size_t>(cfg_.procs), 0);
}

void Machine::check_proc(std::int64_t p, const char* who) const {
  if (p < 0 || p >= cfg_.procs)
    throw ConfigError(std::string(who) + ": processor id " + std::to_string(p) +
                      " out of range [0, " + std::to_string(cfg_.procs) + ")");
}

void Machine::charge_resident(std::int64_t proc, std::int64_t delta,
                              const char* ev) {
  auto& r = resident_[static_cast<std::size_t>(proc)];
  r += delta;
  if (r < 0)
    throw ContractError(std::string(ev) + ": processor " +
                        std::to_string(proc) + " released more than resident");
  if (cfg_.mem_words && r > *cfg_.mem_words)
    throw ContractError(std::string(ev) + ": processor " +
                        std::to_string(proc) + " exceeds memory budget (" +
                        std::to_string(r) + " > " +
                        std::to_string(*cfg_.mem_words) + " words)");
  auto& pk = peak_[static_cast<std::size_t>(proc)];
  pk = std::max(pk, r);
}

void Machine::send(std::int64_t src, std::int64_t dst, std::int64_t words) {
  check_proc(src, "send");
  check_proc(dst, "send");
  if (src == dst) throw ContractError("send: src == dst");
  if (words <= 0) throw ContractError("send: words must be positive");
  auto& s = ledger_.procs[static_cast<std::size_t>(src)];
  auto& d = ledger_.procs[static_cast<std::size_t>(dst)];
  s.words_sent += words;
  s.msgs_sent += 1;
  d.words_received += words;
  d.msgs_received += 1;
  charge_resident(dst, words, "send");
}

void Machine::broadcast(std::int64_t root,
                        const std::vector<std::int64_t>& peers,
                        std::int64_t words) {
  for (auto p : peers)
    if (p != root) send(root, p, words);
}

void Machine::reduce(std::int64_t root, const std::vector<std::int64_t>& peers,
                     std::int64_t words) {
  for (auto p : peers)
    if (p != root) send(p, root, words);
}

void Machine::alloc(std::int64_t proc, std::int64_t words) {
  check_proc(proc, "alloc");
  if (words < 0) throw ContractError("alloc: negative size");
  if (words == 0) return;
  charge_resident(proc, words, "alloc");
}

void Machine::dealloc(std::int64_t proc, std::int64_t words) {
  check_proc(proc, "dealloc");
  if (words < 0) throw ContractError("dealloc: negative size");
  if (words == 0) return;
  charge_resident(proc, -words, "dealloc");
}

std::int64_t Machine::max_peak_resident() const {
  std::int64_t best = 0;
  for (auto p : peak_) best = std::max(best, p);
  return best;
}

void Machine::mark_initial() {
  for (std::int64_t p = 0; p < cfg_.procs; ++p)
    ledger_.procs[static_cast<std::size_t>(p)].initial_words =
        resident_[static_cast<std::size_t>(p)];
}

void Machine::set_final_words(std::int64_t proc, std::int64_t words) {
  check_proc(proc, "set_final_words");
  if (words < 0) throw ContractError("set_final_words: negative size");
  ledger_.procs[static_cast<std::size_t>(proc)].final_words = words;
}

void Machine::add_flops(std::int64_t proc, std::int64_t flops) {
  check_proc(proc, "add_flops");
  if (flops < 0) throw ContractError("add_flops: negative count");
  ledger_.flops[static_cast<std::size_t>(proc)] += flops;
}

}  // namespace mmscale
