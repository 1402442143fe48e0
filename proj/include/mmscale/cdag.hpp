#pragma once

// The decode graph of recursive 2x2 block multiplication with 7 products:
// Dec_k maps the 7^k leaf products to the 4^k output entries through k
// levels of fixed addition chains. Built explicitly so edge expansion and
// partition crossing costs can be measured rather than assumed.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mmscale {

enum class VertexKind { input, addition };

struct CdagVertex {
  VertexKind kind = VertexKind::addition;
  std::int32_t level = 0;   // 0 for inputs, 1..k for addition layers
  bool is_output = false;   // final-level quadrant results
  // Contiguous range of leaf-input indices this vertex depends on; lets
  // subtree subsets be identified in O(1).
  std::int64_t dep_lo = 0, dep_hi = 0;
};

struct Cdag {
  std::int32_t k = 0;
  std::vector<CdagVertex> vertices;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;  // u -> v
  std::int64_t num_inputs = 0;
  std::int64_t num_outputs = 0;
  std::int64_t max_out_degree = 0;
};

// Closed-form counts: 7^k + 8(7^k - 4^k)/3 vertices, 16(7^k - 4^k)/3 edges.
std::int64_t dec_vertex_count(std::int32_t k);
std::int64_t dec_edge_count(std::int32_t k);

// Builds Dec_k for 1 <= k <= 6.
Cdag build_dec(std::int32_t k);

struct ExpansionResult {
  double h = 0;  // min over nonempty S, |S| <= |V|/2, of crossing(S)/|S|
  std::vector<std::int64_t> witness;  // a minimizing subset
  // h_s: for each s, min ratio over subsets of size <= s.
  std::vector<std::pair<std::int64_t, double>> h_table;
};

// Exhaustive edge expansion; requires |V| <= 22 (every subset enumerated).
// Throws ConfigError on larger graphs, directing callers to the witness
// family instead.
ExpansionResult exact_expansion(const Cdag& g, std::int64_t s_max);

struct WitnessRow {
  std::int32_t j = 0;           // subtree depth
  std::int64_t size = 0;        // |S_j|
  std::int64_t crossing = 0;    // |E(S_j, complement)| counted on the graph
  double ratio = 0;             // crossing / size, an upper bound on h_|S_j|
};

// The canonical near-minimizing family: S_j is the full sub-decode of depth
// j whose outputs feed the out-degree-1 product slot at every level above,
// so its only escaping edges are the 4^j output links. Rows for j = 1..k-1
// (S_k would be the whole graph). These are upper-bound witnesses on h_s;
// exhaustive verification beyond k = 1 is out of reach and not claimed.
std::vector<WitnessRow> witness_expansion(const Cdag& g);

// Crossing edges per part for a total assignment vertex -> processor.
// Throws ContractError if any vertex is unassigned (< 0) or out of range.
std::vector<std::int64_t> crossing_cost(
    const Cdag& g, const std::vector<std::int64_t>& partition,
    std::int64_t num_parts);

// Edge-list text format: "# dec k=<k> vertices=<V> edges=<E>" header, then
// one "u v" line per edge.
std::string export_edge_list(const Cdag& g);

}  // namespace mmscale
