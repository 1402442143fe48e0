#include "mmscale/classical.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace mmscale {

namespace {

// Balanced integer split of [0, total) into `parts` ranges.
std::int64_t split_point(std::int64_t total, std::int64_t parts,
                         std::int64_t idx) {
  return total * idx / parts;
}

std::int64_t icbrt(std::int64_t v) {
  std::int64_t t = 0;
  while ((t + 1) * (t + 1) * (t + 1) <= v) ++t;
  return t;
}

std::int64_t isqrt_exact(std::int64_t v) {
  std::int64_t t = 0;
  while (t * t < v) ++t;
  return t * t == v ? t : -1;
}

struct Geometry {
  std::int64_t n, q, c;

  std::int64_t procs() const { return q * q * c; }
  std::int64_t pid(std::int64_t i, std::int64_t j, std::int64_t l) const {
    return l * q * q + i * q + j;
  }
  std::int64_t row0(std::int64_t i) const { return split_point(n, q, i); }
  std::int64_t col0(std::int64_t j) const { return split_point(n, q, j); }
  std::int64_t rows(std::int64_t i) const { return row0(i + 1) - row0(i); }
  std::int64_t cols(std::int64_t j) const { return col0(j + 1) - col0(j); }
  std::int64_t layer_k0(std::int64_t l) const { return split_point(n, c, l); }
  // Slice t of layer l's k-range.
  std::pair<std::int64_t, std::int64_t> slice(std::int64_t l,
                                              std::int64_t t) const {
    const std::int64_t base = layer_k0(l);
    const std::int64_t width = layer_k0(l + 1) - base;
    return {base + split_point(width, q, t),
            base + split_point(width, q, t + 1)};
  }
};

// Per-processor state. Data mode fills the value vectors; count-only mode
// tracks word counts alone through the same control flow, which is what
// makes the two modes' ledgers identical.
struct ProcState {
  std::vector<std::int64_t> a, b, c_partial;
  std::int64_t a_words = 0, b_words = 0;
};

}  // namespace

std::int64_t choose_c(std::int64_t n, std::int64_t p,
                      std::optional<std::int64_t> m) {
  if (n < 1 || p < 1) throw ConfigError("choose_c: n and p must be >= 1");
  std::int64_t cap = icbrt(p);
  if (m) {
    if (3 * n * n > *m * p)
      throw ConfigError("choose_c: " + std::to_string(p) +
                        " processors with " + std::to_string(*m) +
                        " words each cannot hold the three matrices");
    cap = std::min(cap, *m * p / (3 * n * n));
  }
  return std::max<std::int64_t>(1, cap);
}

ClassicalPlan make_classical_plan(std::int64_t n, std::int64_t p,
                                  std::optional<std::int64_t> c,
                                  std::optional<std::int64_t> m,
                                  SimMode mode) {
  if (n < 1) throw ConfigError("classical plan: n must be >= 1");
  if (p < 1) throw ConfigError("classical plan: p must be >= 1");

  auto admissible = [&](std::int64_t cand, std::int64_t* q_out) {
    if (cand < 1 || p % cand != 0) return false;
    const std::int64_t q = isqrt_exact(p / cand);
    if (q < 0) return false;
    if (mode == SimMode::data && n % q != 0) return false;
    *q_out = q;
    return true;
  };

  std::int64_t q = 0;
  std::int64_t chosen = 0;
  if (c) {
    if (!admissible(*c, &q)) {
      std::string options;
      for (std::int64_t cand = 1; cand <= p; ++cand) {
        std::int64_t qq = 0;
        if (admissible(cand, &qq)) options += " " + std::to_string(cand);
      }
      throw ConfigError("classical plan: no q x q x c grid with c=" +
                        std::to_string(*c) + " and P=" + std::to_string(p) +
                        (options.empty() ? " (no admissible c at all)"
                                         : "; admissible c:" + options));
    }
    chosen = *c;
  } else {
    for (std::int64_t cand = choose_c(n, p, m); cand >= 1; --cand) {
      if (admissible(cand, &q)) {
        chosen = cand;
        break;
      }
    }
    if (chosen == 0)
      throw ConfigError(
          "classical plan: P=" + std::to_string(p) +
          " admits no square grid with replication within the memory cap");
  }
  if (m && 3 * chosen * n * n > *m * p)
    throw ConfigError("classical plan: footprint 3cn^2/P exceeds memory " +
                      std::to_string(*m) + " words");
  return ClassicalPlan{n, q, chosen};
}

namespace {

ClassicalResult run_impl(const Matrix* a, const Matrix* b, std::int64_t n,
                         const MachineConfig& machine_cfg,
                         std::optional<std::int64_t> c_req,
                         const std::string& run_id) {
  const bool data = machine_cfg.mode == SimMode::data;
  const ClassicalPlan plan = make_classical_plan(
      n, machine_cfg.procs, c_req, machine_cfg.mem_words, machine_cfg.mode);
  const Geometry g{plan.n, plan.q, plan.c};
  const std::int64_t q = g.q, c = g.c, P = g.procs();

  Machine machine(machine_cfg);
  machine.set_run_id(run_id);
  std::vector<ProcState> st(static_cast<std::size_t>(P));

  MultTrace trace;
  trace.run_id = run_id;
  trace.n = n;
  trace.boxes.resize(static_cast<std::size_t>(P));

  auto each_proc = [&](auto&& fn) {
    for (std::int64_t l = 0; l < c; ++l)
      for (std::int64_t i = 0; i < q; ++i)
        for (std::int64_t j = 0; j < q; ++j) fn(i, j, l);
  };
  auto state = [&](std::int64_t i, std::int64_t j,
                   std::int64_t l) -> ProcState& {
    return st[static_cast<std::size_t>(g.pid(i, j, l))];
  };

  // Initial skewed layout: processor (i,j,l) starts with the A and B pieces
  // of slice (i+j) mod q, one machine-wide copy of each operand in total.
  each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
    const std::int64_t id = g.pid(i, j, l);
    const auto [k0, k1] = g.slice(l, (i + j) % q);
    const std::int64_t w = k1 - k0;
    ProcState& s = state(i, j, l);
    s.a_words = g.rows(i) * w;
    s.b_words = w * g.cols(j);
    machine.alloc(id, s.a_words + s.b_words);
    if (data) {
      s.a.resize(static_cast<std::size_t>(s.a_words));
      s.b.resize(static_cast<std::size_t>(s.b_words));
      for (std::int64_t r = 0; r < g.rows(i); ++r)
        for (std::int64_t k = k0; k < k1; ++k)
          s.a[static_cast<std::size_t>(r * w + (k - k0))] =
              a->at(g.row0(i) + r, k);
      for (std::int64_t k = k0; k < k1; ++k)
        for (std::int64_t col = 0; col < g.cols(j); ++col)
          s.b[static_cast<std::size_t>((k - k0) * g.cols(j) + col)] =
              b->at(k, g.col0(j) + col);
    }
  });
  machine.mark_initial();

  // Partial C blocks.
  each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
    machine.alloc(g.pid(i, j, l), g.rows(i) * g.cols(j));
    if (data)
      state(i, j, l).c_partial.assign(
          static_cast<std::size_t>(g.rows(i) * g.cols(j)), 0);
    trace.boxes[static_cast<std::size_t>(g.pid(i, j, l))].push_back(
        Box{g.row0(i), g.row0(i + 1), g.col0(j), g.col0(j + 1),
            g.layer_k0(l), g.layer_k0(l + 1)});
  });

  // One ring hop of the A (axis 'col') or B (axis 'row') slices. All sends
  // of the phase land before the superseded slices are released, keeping the
  // transient to one extra slice per processor.
  auto ring_hop = [&](bool move_a) {
    std::vector<std::int64_t> words_before(static_cast<std::size_t>(P));
    for (std::int64_t id = 0; id < P; ++id) {
      const ProcState& s = st[static_cast<std::size_t>(id)];
      words_before[static_cast<std::size_t>(id)] =
          move_a ? s.a_words : s.b_words;
    }
    std::vector<std::vector<std::int64_t>> incoming(
        static_cast<std::size_t>(P));
    each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
      const std::int64_t src = move_a ? g.pid(i, (j + 1) % q, l)
                                      : g.pid((i + 1) % q, j, l);
      const std::int64_t dst = g.pid(i, j, l);
      const std::int64_t w = words_before[static_cast<std::size_t>(src)];
      if (w > 0 && src != dst) machine.send(src, dst, w);
      if (data) {
        const ProcState& from = st[static_cast<std::size_t>(src)];
        incoming[static_cast<std::size_t>(dst)] = move_a ? from.a : from.b;
      }
    });
    each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
      const std::int64_t id = g.pid(i, j, l);
      const std::int64_t src = move_a ? g.pid(i, (j + 1) % q, l)
                                      : g.pid((i + 1) % q, j, l);
      if (src != id)
        machine.dealloc(id, words_before[static_cast<std::size_t>(id)]);
      ProcState& s = st[static_cast<std::size_t>(id)];
      (move_a ? s.a_words : s.b_words) =
          words_before[static_cast<std::size_t>(src)];
      if (data)
        (move_a ? s.a : s.b) =
            std::move(incoming[static_cast<std::size_t>(id)]);
    });
  };

  for (std::int64_t u = 0; u < q; ++u) {
    if (u > 0) {
      ring_hop(true);
      ring_hop(false);
    }
    // Local products against the current slice.
    each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
      const auto [k0, k1] = g.slice(l, (i + j + u) % q);
      const std::int64_t w = k1 - k0;
      machine.add_flops(g.pid(i, j, l), g.rows(i) * g.cols(j) * w);
      if (data && w > 0) {
        ProcState& s = state(i, j, l);
        for (std::int64_t r = 0; r < g.rows(i); ++r)
          for (std::int64_t kk = 0; kk < w; ++kk) {
            const std::int64_t av = s.a[static_cast<std::size_t>(r * w + kk)];
            if (av == 0) continue;
            for (std::int64_t col = 0; col < g.cols(j); ++col)
              s.c_partial[static_cast<std::size_t>(r * g.cols(j) + col)] +=
                  av * s.b[static_cast<std::size_t>(kk * g.cols(j) + col)];
          }
      }
    });
  }

  // Operand slices are dead; release them before the reduce-scatter.
  for (std::int64_t id = 0; id < P; ++id) {
    ProcState& s = st[static_cast<std::size_t>(id)];
    machine.dealloc(id, s.a_words + s.b_words);
    s.a_words = s.b_words = 0;
    s.a.clear();
    s.b.clear();
  }

  // Reduce-scatter each (i,j) fiber: layer l ends up owning row slice l of
  // its block. Rounds proceed by ring distance; after each round both the
  // handed-off piece and the consumed incoming copy are released, so a
  // processor holds at most one piece beyond its shrinking partial block.
  for (std::int64_t d = 1; d < c; ++d) {
    each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
      const std::int64_t owner = (l + d) % c;
      const std::int64_t r0 = split_point(g.rows(i), c, owner);
      const std::int64_t r1 = split_point(g.rows(i), c, owner + 1);
      const std::int64_t words = (r1 - r0) * g.cols(j);
      if (words == 0) return;
      machine.send(g.pid(i, j, l), g.pid(i, j, owner), words);
      if (data) {
        ProcState& from = state(i, j, l);
        ProcState& to = state(i, j, owner);
        for (std::int64_t r = r0; r < r1; ++r)
          for (std::int64_t col = 0; col < g.cols(j); ++col)
            to.c_partial[static_cast<std::size_t>(r * g.cols(j) + col)] +=
                from.c_partial[static_cast<std::size_t>(r * g.cols(j) +
                                                        col)];
      }
    });
    each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
      const std::int64_t sent_owner = (l + d) % c;
      const std::int64_t sent = (split_point(g.rows(i), c, sent_owner + 1) -
                                 split_point(g.rows(i), c, sent_owner)) *
                                g.cols(j);
      const std::int64_t got =
          (split_point(g.rows(i), c, l + 1) - split_point(g.rows(i), c, l)) *
          g.cols(j);
      machine.dealloc(g.pid(i, j, l), sent);
      machine.dealloc(g.pid(i, j, l), got);
    });
  }

  // Designate outputs: layer l owns row slice l of block (i,j).
  Matrix product;
  if (data) product = Matrix(n, n);
  each_proc([&](std::int64_t i, std::int64_t j, std::int64_t l) {
    const std::int64_t r0 = split_point(g.rows(i), c, l);
    const std::int64_t r1 = split_point(g.rows(i), c, l + 1);
    machine.set_final_words(g.pid(i, j, l), (r1 - r0) * g.cols(j));
    if (data) {
      const ProcState& s = state(i, j, l);
      for (std::int64_t r = r0; r < r1; ++r)
        for (std::int64_t col = 0; col < g.cols(j); ++col)
          product.at(g.row0(i) + r, g.col0(j) + col) =
              s.c_partial[static_cast<std::size_t>(r * g.cols(j) + col)];
    }
  });

  ClassicalResult result;
  result.product = std::move(product);
  result.ledger = machine.ledger();
  result.trace = std::move(trace);
  result.plan = plan;
  result.peak_resident = machine.max_peak_resident();
  return result;
}

}  // namespace

ClassicalResult run_classical(const Matrix& a, const Matrix& b,
                              const MachineConfig& machine_cfg,
                              std::optional<std::int64_t> c,
                              const std::string& run_id) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ConfigError("run_classical: operands must be square and same size");
  if (machine_cfg.mode == SimMode::count_only)
    return run_impl(nullptr, nullptr, a.rows(), machine_cfg, c, run_id);
  return run_impl(&a, &b, a.rows(), machine_cfg, c, run_id);
}

ClassicalResult run_classical_counts(std::int64_t n,
                                     const MachineConfig& machine_cfg,
                                     std::optional<std::int64_t> c,
                                     const std::string& run_id) {
  MachineConfig cfg = machine_cfg;
  cfg.mode = SimMode::count_only;
  return run_impl(nullptr, nullptr, n, cfg, c, run_id);
}

}  // namespace mmscale
