#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "mmscale/cdag.hpp"
#include "mmscale/machine.hpp"

using namespace mmscale;
using doctest::Approx;

TEST_CASE("vertex and edge counts match the closed forms") {
  const std::int64_t want_v[] = {15, 137, 1087, 8121, 58895};
  const std::int64_t want_e[] = {16, 176, 1488, 11440, 84176};
  for (std::int32_t k = 1; k <= 5; ++k) {
    CAPTURE(k);
    CHECK(dec_vertex_count(k) == want_v[k - 1]);
    CHECK(dec_edge_count(k) == want_e[k - 1]);
    const Cdag g = build_dec(k);
    CHECK(static_cast<std::int64_t>(g.vertices.size()) == want_v[k - 1]);
    CHECK(static_cast<std::int64_t>(g.edges.size()) == want_e[k - 1]);
    CHECK(g.num_inputs == static_cast<std::int64_t>(std::pow(7.0, k) + 0.5));
    CHECK(g.num_outputs == static_cast<std::int64_t>(std::pow(4.0, k) + 0.5));
  }
}

TEST_CASE("depth-1 decode graph structure") {
  const Cdag g = build_dec(1);
  CHECK(g.num_inputs == 7);
  CHECK(g.num_outputs == 4);
  CHECK(g.max_out_degree == 2);

  std::int64_t inputs = 0, additions = 0, outputs = 0;
  for (const auto& v : g.vertices) {
    if (v.kind == VertexKind::input) ++inputs;
    else ++additions;
    if (v.is_output) ++outputs;
  }
  CHECK(inputs == 7);
  CHECK(additions == 8);
  CHECK(outputs == 4);

  // every addition has exactly two in-edges
  std::vector<int> indeg(g.vertices.size(), 0);
  for (const auto& [u, v] : g.edges) {
    CHECK(u >= 0);
    CHECK(v > u);  // topological by construction
    CHECK(v < static_cast<std::int64_t>(g.vertices.size()));
    ++indeg[static_cast<std::size_t>(v)];
  }
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    if (g.vertices[i].kind == VertexKind::input) CHECK(indeg[i] == 0);
    else CHECK(indeg[i] == 2);
  }
}

TEST_CASE("depth bounds are enforced") {
  CHECK_THROWS_AS(build_dec(0), ConfigError);
  CHECK_THROWS_AS(build_dec(7), ConfigError);
  CHECK_NOTHROW(build_dec(6));
}

TEST_CASE("exhaustive expansion of the depth-1 graph") {
  const Cdag g = build_dec(1);
  const ExpansionResult r = exact_expansion(g, 7);
  // minimizer: both chain heads with their private inputs plus one spare
  // output; only two edges escape a set of six vertices
  CHECK(r.h == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.witness.size() == 6);

  // the witness really does have crossing/size == h
  std::vector<std::int64_t> part(g.vertices.size(), 0);
  for (std::int64_t v : r.witness) part[static_cast<std::size_t>(v)] = 1;
  const auto per_part = crossing_cost(g, part, 2);
  CHECK(per_part[1] == 2);
  CHECK(static_cast<double>(per_part[1]) /
            static_cast<double>(r.witness.size()) ==
        Approx(r.h));

  // size-capped table: prefix minimum, non-increasing, reaching 1/3 at 6
  const std::vector<std::pair<std::int64_t, double>> want = {
      {1, 1.0},       {2, 0.5},       {3, 0.5},      {4, 0.5},
      {5, 2.0 / 5.0}, {6, 1.0 / 3.0}, {7, 1.0 / 3.0}};
  REQUIRE(r.h_table.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(r.h_table[i].first == want[i].first);
    CHECK(r.h_table[i].second == Approx(want[i].second).epsilon(1e-12));
    if (i > 0) CHECK(r.h_table[i].second <= r.h_table[i - 1].second + 1e-15);
  }
}

TEST_CASE("exhaustive expansion caps the table, not the optimum") {
  const Cdag g = build_dec(1);
  const ExpansionResult r = exact_expansion(g, 2);
  // h stays the global minimum over all subsets up to |V|/2; s_max only
  // truncates the per-size table.
  CHECK(r.h == Approx(1.0 / 3.0).epsilon(1e-12));
  REQUIRE(r.h_table.size() == 2);
  CHECK(r.h_table[0].first == 1);
  CHECK(r.h_table[0].second == Approx(1.0).epsilon(1e-12));
  CHECK(r.h_table[1].first == 2);
  CHECK(r.h_table[1].second == Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(exact_expansion(build_dec(2), 5), ConfigError);
}

TEST_CASE("witness family on the depth-5 graph") {
  const Cdag g = build_dec(5);
  const auto rows = witness_expansion(g);
  REQUIRE(rows.size() == 4);
  const std::int64_t want_size[] = {15, 137, 1087, 8121};
  const std::int64_t want_cross[] = {4, 16, 64, 256};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(i);
    CHECK(rows[i].j == static_cast<std::int32_t>(i + 1));
    CHECK(rows[i].size == want_size[i]);
    CHECK(rows[i].crossing == want_cross[i]);
    CHECK(rows[i].ratio ==
          Approx(static_cast<double>(want_cross[i]) /
                 static_cast<double>(want_size[i]))
              .epsilon(1e-12));
  }
  // the ratio decays roughly geometrically with factor 4/7 per level
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double decay = rows[i].ratio / rows[i - 1].ratio;
    CHECK(decay >= 0.5 * 4.0 / 7.0);
    CHECK(decay <= 2.0 * 4.0 / 7.0);
  }
}

TEST_CASE("witness family is empty at depth 1") {
  CHECK(witness_expansion(build_dec(1)).empty());
}

TEST_CASE("crossing cost of the inputs-versus-additions cut") {
  const Cdag g = build_dec(1);
  std::vector<std::int64_t> part(g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    part[i] = g.vertices[i].kind == VertexKind::input ? 0 : 1;
  const auto per_part = crossing_cost(g, part, 2);
  REQUIRE(per_part.size() == 2);
  // every input->addition edge crosses; counted once on each side
  CHECK(per_part[0] == 12);
  CHECK(per_part[1] == 12);
}

TEST_CASE("crossing cost input validation") {
  const Cdag g = build_dec(1);
  std::vector<std::int64_t> short_part(3, 0);
  CHECK_THROWS_AS(crossing_cost(g, short_part, 1), ContractError);
  std::vector<std::int64_t> bad(g.vertices.size(), 0);
  bad[0] = -1;
  CHECK_THROWS_AS(crossing_cost(g, bad, 2), ContractError);
  bad[0] = 5;
  CHECK_THROWS_AS(crossing_cost(g, bad, 2), ContractError);
}

TEST_CASE("expansion of a single edge is one") {
  Cdag g;
  g.k = 0;
  g.vertices.resize(2);
  g.vertices[0].kind = VertexKind::input;
  g.vertices[1].kind = VertexKind::addition;
  g.edges = {{0, 1}};
  g.num_inputs = 1;
  const ExpansionResult r = exact_expansion(g, 1);
  CHECK(r.h == Approx(1.0));
  CHECK(r.witness.size() == 1);
}

TEST_CASE("edge list export") {
  const Cdag g = build_dec(1);
  const std::string text = export_edge_list(g);
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  CHECK(header == "# dec k=1 vertices=15 edges=16");
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::int64_t u, v;
  while (in >> u >> v) seen.emplace(u, v);
  CHECK(seen.size() == 16);
  for (const auto& e : g.edges) CHECK(seen.count(e) == 1);
}
