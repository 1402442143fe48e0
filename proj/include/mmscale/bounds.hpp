#pragma once

// Closed-form communication lower bounds for classical and Strassen matrix
// multiplication, the perfect-strong-scaling thresholds they imply, and the
// generalized (G, D) bound for arbitrary computation counts. All constants
// are 1; callers compare shapes (slopes, crossovers), not absolute values.

#include <cstdint>
#include <optional>
#include <string>

namespace mmscale {

// Exponent of Strassen's recursion, log2(7) ~ 2.807.
double omega0();

enum class Algo { classical, strassen };

std::string to_string(Algo algo);

enum class Regime { memory_dependent, memory_independent };

std::string to_string(Regime regime);

// The four Table-style bound expressions. m may be unbounded (nullopt), in
// which case the memory-dependent forms vanish (infinite memory, no
// per-word reuse limit).
double md_classical(double n, double p, std::optional<double> m);
double mi_classical(double n, double p);
double md_strassen(double n, double p, std::optional<double> m);
double mi_strassen(double n, double p);

struct BoundReport {
  double md_classical = 0;
  double md_strassen = 0;
  double mi_classical = 0;
  double mi_strassen = 0;
  Regime dominating_classical = Regime::memory_independent;
  Regime dominating_strassen = Regime::memory_independent;
  double p_min = 0;            // smallest P whose aggregate memory holds A,B,C
  double p_max_classical = 0;  // crossover of the classical bound pair
  double p_max_strassen = 0;   // crossover of the Strassen bound pair
};

BoundReport eval_bounds(std::int64_t n, std::int64_t p,
                        std::optional<std::int64_t> m);

// Per-family helpers used by the sweep driver.
double lower_bound(Algo algo, double n, double p, std::optional<double> m);
Regime dominating_regime(Algo algo, double n, double p,
                         std::optional<double> m);

struct ScalingRange {
  std::int64_t p_min = 1;        // max(1, ceil(3n^2/m))
  double p_max_classical = 0;    // n^3 / m^(3/2)
  double p_max_strassen = 0;     // n^omega0 / m^(omega0/2)
  bool window_empty = false;     // p_min exceeds both p_max values
};

ScalingRange scaling_range(std::int64_t n, std::int64_t m);

// Bound for an arbitrary computation with g elementwise products over d
// nonzero inputs/outputs on p processors: max(0, (g/p)^(2/3) - d/p).
double generalized_bound(double g, double d, double p);

// Lower bound a measured run must respect. A single processor holding all
// inputs never communicates, and the underlying per-processor bounds subtract
// resident I/O, which swallows the whole expression at p = 1 (the dense-case
// generalized bound is n^2 - 3n^2 < 0 there); so p = 1 maps to zero.
double soundness_floor(Algo algo, double n, double p,
                       std::optional<double> m);

}  // namespace mmscale
