#pragma once

// Simulated distributed-memory machine: P processors, optional per-processor
// word budget, and a communication ledger. No timing model; costs are counts.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmscale {

// Raised when a request is malformed (bad grid, bad processor count, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a simulation or audit violates a model contract.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

enum class SimMode { data, count_only };

std::string to_string(SimMode mode);
SimMode sim_mode_from_string(const std::string& name);

struct MachineConfig {
  std::int64_t procs = 1;
  std::optional<std::int64_t> mem_words;  // nullopt = unbounded
  SimMode mode = SimMode::data;
};

struct ProcLedger {
  std::int64_t words_sent = 0;
  std::int64_t words_received = 0;
  std::int64_t msgs_sent = 0;
  std::int64_t msgs_received = 0;
  std::int64_t initial_words = 0;  // resident input words at the start
  std::int64_t final_words = 0;    // designated output words at the end
};

struct CommLedger {
  std::string run_id;
  std::vector<ProcLedger> procs;
  std::vector<std::int64_t> flops;

  // Largest per-processor communication volume, counting both directions.
  std::int64_t max_words() const;
  std::int64_t total_sent() const;
  std::int64_t total_received() const;
  std::int64_t max_flops() const;
};

class Machine {
 public:
  explicit Machine(MachineConfig cfg);

  std::int64_t procs() const { return cfg_.procs; }
  SimMode mode() const { return cfg_.mode; }
  const MachineConfig& config() const { return cfg_; }

  // Point-to-point transfer of `words` payload words. The payload becomes
  // resident at dst; src residency is unchanged until the caller releases it.
  void send(std::int64_t src, std::int64_t dst, std::int64_t words);

  // Flat collectives: the root pays one message per peer, no tree.
  void broadcast(std::int64_t root, const std::vector<std::int64_t>& peers,
                 std::int64_t words);
  void reduce(std::int64_t root, const std::vector<std::int64_t>& peers,
              std::int64_t words);

  // Residency bookkeeping. Tracked in both modes so that count-only runs can
  // be used as footprint dry-runs; the budget is enforced in both.
  void alloc(std::int64_t proc, std::int64_t words);
  void dealloc(std::int64_t proc, std::int64_t words);
  std::int64_t resident(std::int64_t proc) const { return resident_[proc]; }
  std::int64_t peak_resident(std::int64_t proc) const { return peak_[proc]; }
  std::int64_t max_peak_resident() const;

  // Snapshot current residency as the initial-data words I_p.
  void mark_initial();
  void set_final_words(std::int64_t proc, std::int64_t words);
  void add_flops(std::int64_t proc, std::int64_t flops);

  void set_run_id(const std::string& id) { ledger_.run_id = id; }
  const CommLedger& ledger() const { return ledger_; }

 private:
  void check_proc(std::int64_t p, const char* who) const;
  void charge_resident(std::int64_t proc, std::int64_t delta, const char* ev);

  MachineConfig cfg_;
  CommLedger ledger_;
  std::vector<std::int64_t> resident_;
  std::vector<std::int64_t> peak_;
};

}  // namespace mmscale
