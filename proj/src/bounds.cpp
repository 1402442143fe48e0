#include "mmscale/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace mmscale {

double omega0() {
  static const double w = std::log2(7.0);
  return w;
}

std::string to_string(Algo algo) {
  return algo == Algo::classical ? "classical25d" : "caps";
}

std::string to_string(Regime regime) {
  return regime == Regime::memory_dependent ? "memory-dependent"
                                            : "memory-independent";
}

double md_classical(double n, double p, std::optional<double> m) {
  if (!m) return 0.0;
  return n * n * n / (p * std::sqrt(*m));
}

double mi_classical(double n, double p) {
  return n * n / std::pow(p, 2.0 / 3.0);
}

double md_strassen(double n, double p, std::optional<double> m) {
  if (!m) return 0.0;
  return std::pow(n, omega0()) / (p * std::pow(*m, omega0() / 2.0 - 1.0));
}

double mi_strassen(double n, double p) {
  return n * n / std::pow(p, 2.0 / omega0());
}

BoundReport eval_bounds(std::int64_t n, std::int64_t p,
                        std::optional<std::int64_t> m) {
  const double dn = static_cast<double>(n);
  const double dp = static_cast<double>(p);
  std::optional<double> dm;
  if (m) dm = static_cast<double>(*m);

  BoundReport r;
  r.md_classical = md_classical(dn, dp, dm);
  r.mi_classical = mi_classical(dn, dp);
  r.md_strassen = md_strassen(dn, dp, dm);
  r.mi_strassen = mi_strassen(dn, dp);
  r.dominating_classical = r.md_classical > r.mi_classical
                               ? Regime::memory_dependent
                               : Regime::memory_independent;
  r.dominating_strassen = r.md_strassen > r.mi_strassen
                              ? Regime::memory_dependent
                              : Regime::memory_independent;
  if (dm) {
    r.p_min = std::max(1.0, std::ceil(3.0 * dn * dn / *dm));
    r.p_max_classical = dn * dn * dn / std::pow(*dm, 1.5);
    r.p_max_strassen = std::pow(dn, omega0()) / std::pow(*dm, omega0() / 2.0);
  } else {
    r.p_min = 1.0;
  }
  return r;
}

double lower_bound(Algo algo, double n, double p, std::optional<double> m) {
  if (algo == Algo::classical)
    return std::max(md_classical(n, p, m), mi_classical(n, p));
  return std::max(md_strassen(n, p, m), mi_strassen(n, p));
}

Regime dominating_regime(Algo algo, double n, double p,
                         std::optional<double> m) {
  if (algo == Algo::classical)
    return md_classical(n, p, m) > mi_classical(n, p)
               ? Regime::memory_dependent
               : Regime::memory_independent;
  return md_strassen(n, p, m) > mi_strassen(n, p)
             ? Regime::memory_dependent
             : Regime::memory_independent;
}

ScalingRange scaling_range(std::int64_t n, std::int64_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  ScalingRange r;
  r.p_min = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(3.0 * dn * dn / dm)));
  r.p_max_classical = dn * dn * dn / std::pow(dm, 1.5);
  r.p_max_strassen = std::pow(dn, omega0()) / std::pow(dm, omega0() / 2.0);
  r.window_empty = static_cast<double>(r.p_min) > r.p_max_classical &&
                   static_cast<double>(r.p_min) > r.p_max_strassen;
  return r;
}

double generalized_bound(double g, double d, double p) {
  return std::max(0.0, std::pow(g / p, 2.0 / 3.0) - d / p);
}

double soundness_floor(Algo algo, double n, double p,
                       std::optional<double> m) {
  if (p <= 1.0) return 0.0;
  return lower_bound(algo, n, p, m);
}

}  // namespace mmscale
