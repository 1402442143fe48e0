#include "mmscale/cdag.hpp"

#include <algorithm>
#include <bit>

#include "mmscale/machine.hpp"

namespace mmscale {

namespace {

std::int64_t ipow(std::int64_t b, std::int32_t e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

constexpr std::int32_t kMaxK = 6;

}  // namespace

std::int64_t dec_vertex_count(std::int32_t k) {
  return ipow(7, k) + 8 * (ipow(7, k) - ipow(4, k)) / 3;
}

std::int64_t dec_edge_count(std::int32_t k) {
  return 16 * (ipow(7, k) - ipow(4, k)) / 3;
}

Cdag build_dec(std::int32_t k) {
  if (k < 1 || k > kMaxK)
    throw ConfigError("build_dec: k must be in [1, " +
                      std::to_string(kMaxK) + "]");
  Cdag g;
  g.k = k;
  g.num_inputs = ipow(7, k);
  g.num_outputs = ipow(4, k);
  g.vertices.reserve(static_cast<std::size_t>(dec_vertex_count(k)));
  g.edges.reserve(static_cast<std::size_t>(dec_edge_count(k)));

  for (std::int64_t i = 0; i < g.num_inputs; ++i)
    g.vertices.push_back(CdagVertex{VertexKind::input, 0, false, i, i + 1});

  // Frontier: 7^(k-level) value vectors of length 4^level, stored flat. The
  // four quadrant outputs of each combine step concatenate into the next
  // level's vector, so vector index == product-slot index mod 7 throughout.
  std::vector<std::int64_t> frontier(static_cast<std::size_t>(g.num_inputs));
  for (std::int64_t i = 0; i < g.num_inputs; ++i)
    frontier[static_cast<std::size_t>(i)] = i;
  std::int64_t nvec = g.num_inputs, veclen = 1;

  for (std::int32_t level = 1; level <= k; ++level) {
    const std::int64_t nnew = nvec / 7;
    const std::int64_t newlen = 4 * veclen;
    const std::int64_t span = ipow(7, level);
    std::vector<std::int64_t> next(static_cast<std::size_t>(nnew * newlen));
    for (std::int64_t grp = 0; grp < nnew; ++grp) {
      const std::int64_t dep_lo = grp * span;
      const std::int64_t dep_hi = dep_lo + span;
      for (std::int64_t x = 0; x < veclen; ++x) {
        auto slot = [&](std::int64_t s) {
          return frontier[static_cast<std::size_t>((grp * 7 + s) * veclen +
                                                   x)];
        };
        auto add = [&](std::int64_t u, std::int64_t v, bool out) {
          const std::int64_t id =
              static_cast<std::int64_t>(g.vertices.size());
          g.vertices.push_back(CdagVertex{VertexKind::addition, level,
                                          out && level == k, dep_lo, dep_hi});
          g.edges.emplace_back(u, id);
          g.edges.emplace_back(v, id);
          return id;
        };
        // Quadrant chains of the 7-product decode, left-associated:
        //   out0 = ((m0 + m3) - m4) + m6
        //   out1 = m2 + m4
        //   out2 = m1 + m3
        //   out3 = ((m0 - m1) + m2) + m5
        const std::int64_t a1 = add(slot(0), slot(3), false);
        const std::int64_t a2 = add(a1, slot(4), false);
        const std::int64_t out0 = add(a2, slot(6), true);
        const std::int64_t out1 = add(slot(2), slot(4), true);
        const std::int64_t out2 = add(slot(1), slot(3), true);
        const std::int64_t a6 = add(slot(0), slot(1), false);
        const std::int64_t a7 = add(a6, slot(2), false);
        const std::int64_t out3 = add(a7, slot(5), true);
        next[static_cast<std::size_t>(grp * newlen + 0 * veclen + x)] = out0;
        next[static_cast<std::size_t>(grp * newlen + 1 * veclen + x)] = out1;
        next[static_cast<std::size_t>(grp * newlen + 2 * veclen + x)] = out2;
        next[static_cast<std::size_t>(grp * newlen + 3 * veclen + x)] = out3;
      }
    }
    frontier = std::move(next);
    nvec = nnew;
    veclen = newlen;
  }

  std::vector<std::int64_t> outdeg(g.vertices.size(), 0);
  for (const auto& [u, v] : g.edges) ++outdeg[static_cast<std::size_t>(u)];
  g.max_out_degree = *std::max_element(outdeg.begin(), outdeg.end());
  return g;
}

ExpansionResult exact_expansion(const Cdag& g, std::int64_t s_max) {
  const std::int64_t V = static_cast<std::int64_t>(g.vertices.size());
  if (V > 22)
    throw ConfigError(
        "exact_expansion: " + std::to_string(V) +
        " vertices is beyond exhaustive reach; use witness_expansion");
  const std::int64_t half = V / 2;
  const std::int64_t cap = std::min(s_max, half);

  ExpansionResult out;
  std::vector<double> best_by_size(static_cast<std::size_t>(cap + 1),
                                   -1.0);
  double best = -1.0;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < (1u << V); ++mask) {
    const int size = std::popcount(mask);
    if (size > half) continue;
    std::int64_t crossing = 0;
    for (const auto& [u, v] : g.edges)
      crossing += ((mask >> u) & 1u) != ((mask >> v) & 1u);
    const double ratio = static_cast<double>(crossing) / size;
    if (best < 0 || ratio < best) {
      best = ratio;
      best_mask = mask;
    }
    if (size <= cap) {
      auto& slot = best_by_size[static_cast<std::size_t>(size)];
      if (slot < 0 || ratio < slot) slot = ratio;
    }
  }
  out.h = best;
  for (std::int64_t v = 0; v < V; ++v)
    if ((best_mask >> v) & 1u) out.witness.push_back(v);
  double running = -1.0;
  for (std::int64_t s = 1; s <= cap; ++s) {
    const double at = best_by_size[static_cast<std::size_t>(s)];
    if (at >= 0 && (running < 0 || at < running)) running = at;
    if (running >= 0) out.h_table.emplace_back(s, running);
  }
  return out;
}

std::vector<WitnessRow> witness_expansion(const Cdag& g) {
  std::vector<WitnessRow> rows;
  for (std::int32_t j = 1; j < g.k; ++j) {
    // Base of the input range whose every ancestor slot is the last
    // product (out-degree 1), so only the subtree's outputs escape.
    std::int64_t base = 0;
    for (std::int32_t l = j; l < g.k; ++l) base += 6 * ipow(7, l);
    const std::int64_t lo = base, hi = base + ipow(7, j);
    auto inside = [&](std::int64_t v) {
      const auto& vx = g.vertices[static_cast<std::size_t>(v)];
      return vx.dep_lo >= lo && vx.dep_hi <= hi;
    };
    WitnessRow row;
    row.j = j;
    for (std::int64_t v = 0;
         v < static_cast<std::int64_t>(g.vertices.size()); ++v)
      row.size += inside(v);
    for (const auto& [u, v] : g.edges) row.crossing += inside(u) != inside(v);
    row.ratio = static_cast<double>(row.crossing) / row.size;
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::int64_t> crossing_cost(
    const Cdag& g, const std::vector<std::int64_t>& partition,
    std::int64_t num_parts) {
  if (partition.size() != g.vertices.size())
    throw ContractError("crossing_cost: partition size != vertex count");
  for (const auto p : partition)
    if (p < 0 || p >= num_parts)
      throw ContractError(
          "crossing_cost: every vertex must be assigned to one part");
  std::vector<std::int64_t> per_part(static_cast<std::size_t>(num_parts), 0);
  for (const auto& [u, v] : g.edges) {
    const std::int64_t pu = partition[static_cast<std::size_t>(u)];
    const std::int64_t pv = partition[static_cast<std::size_t>(v)];
    if (pu != pv) {
      ++per_part[static_cast<std::size_t>(pu)];
      ++per_part[static_cast<std::size_t>(pv)];
    }
  }
  return per_part;
}

std::string export_edge_list(const Cdag& g) {
  std::string out = "# dec k=" + std::to_string(g.k) +
                    " vertices=" + std::to_string(g.vertices.size()) +
                    " edges=" + std::to_string(g.edges.size()) + "\n";
  for (const auto& [u, v] : g.edges)
    out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

}  // namespace mmscale
