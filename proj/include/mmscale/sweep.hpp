#pragma once

// Strong-scaling sweeps: run both algorithm families across a processor
// range at fixed n and m, collect measured per-processor communication next
// to the closed-form bounds, fit log-log slopes on each side of the
// perfect-scaling threshold, and serialize results (CSV, JSON, gnuplot).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmscale/bounds.hpp"

namespace mmscale {

struct SweepRow {
  std::int64_t p = 0;
  Algo algo = Algo::classical;
  std::string param;  // replication factor "c=4" or schedule "DDBB"
  std::int64_t max_words = 0;
  std::int64_t flops_per_proc = 0;
  double md_bound = 0;
  double mi_bound = 0;
  Regime regime = Regime::memory_independent;
};

struct SweepResult {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::vector<SweepRow> rows;
  std::vector<std::string> dropped;  // p values skipped, with the reason
};

// Runs every admissible p in p_set for each family. Inadmissible values
// (no grid, over the memory floor, not a power of 7, ...) are recorded in
// `dropped` rather than failing the sweep. Runs use full data payloads up
// to n = 256 and count-only accounting above.
SweepResult sweep(std::int64_t n, std::int64_t m,
                  const std::vector<std::int64_t>& p_set,
                  const std::vector<Algo>& algos);

struct SegmentFit {
  bool performed = false;
  std::string notice;     // set when the fit is skipped
  std::int64_t points = 0;
  double slope = 0;
  double intercept = 0;   // in log10 space
  double stderr_slope = 0;
  double max_abs_residual = 0;
};

struct SlopeReport {
  Algo algo = Algo::classical;
  double p_split = 0;  // theoretical perfect-scaling limit used as the knee
  SegmentFit below;    // p <= p_split
  SegmentFit above;    // p > p_split
};

// Least-squares fit of log10(max_words) against log10(p), split at the
// family's p_max. Segments with under two distinct p values are reported
// as skipped, never extrapolated.
std::vector<SlopeReport> fit_slopes(const SweepResult& result);

// CSV with the fixed column set; rows in sweep order.
std::string to_csv(const SweepResult& result);

// Gnuplot companion script plotting measured words against both bounds.
std::string to_gnuplot(const SweepResult& result, const std::string& csv_path);

std::string to_json(const SweepResult& result,
                    const std::vector<SlopeReport>& fits);

// Writes csv (and a .gp sidecar next to it) or json per `format`.
void emit_report(const SweepResult& result,
                 const std::vector<SlopeReport>& fits,
                 const std::string& format, const std::string& path);

}  // namespace mmscale
