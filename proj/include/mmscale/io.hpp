#pragma once

// Trace serialization: a completed run's configuration, per-processor
// ledger, and (for classical runs) the multiplication boxes, as one JSON
// document. The loader reconstructs exactly what the audit needs.

#include <cstdint>
#include <optional>
#include <string>

#include "mmscale/machine.hpp"
#include "mmscale/trace.hpp"

namespace mmscale {

struct RunArtifacts {
  std::string algo;  // "classical25d" or "caps"
  std::int64_t n = 0;
  std::int64_t p = 0;
  std::optional<std::int64_t> m;
  std::string param;  // "c=4" or the BFS/DFS schedule string
  SimMode mode = SimMode::data;
  std::uint64_t seed = 0;
  CommLedger ledger;
  std::optional<MultTrace> trace;  // classical runs only
};

std::string trace_to_json(const RunArtifacts& run);
RunArtifacts trace_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace mmscale
