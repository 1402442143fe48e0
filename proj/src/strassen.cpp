#include "mmscale/strassen.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mmscale {
namespace {

bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

std::int64_t lg2(std::int64_t v) {
  std::int64_t r = 0;
  while ((std::int64_t{1} << r) < v) ++r;
  return r;
}

std::int64_t pow7(std::int64_t e) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < e; ++i) r *= 7;
  return r;
}

// The seven products, as +/-1 coefficients over the quadrants
// [top-left, top-right, bottom-left, bottom-right]:
//   M1 = (A11+A22)(B11+B22)   M2 = (A21+A22) B11
//   M3 = A11 (B12-B22)        M4 = A22 (B21-B11)
//   M5 = (A11+A12) B22        M6 = (A21-A11)(B11+B12)
//   M7 = (A12-A22)(B21+B22)
// and the recombination
//   C11 = M1+M4-M5+M7  C12 = M3+M5  C21 = M2+M4  C22 = M1-M2+M3+M6.
constexpr int kEncA[7][4] = {{1, 0, 0, 1}, {0, 0, 1, 1}, {1, 0, 0, 0},
                             {0, 0, 0, 1}, {1, 1, 0, 0}, {-1, 0, 1, 0},
                             {0, 1, 0, -1}};
constexpr int kEncB[7][4] = {{1, 0, 0, 1}, {1, 0, 0, 0},  {0, 1, 0, -1},
                             {-1, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 0, 0},
                             {0, 0, 1, 1}};
// kDec[quad][i]: coefficient of M_{i+1} in output quadrant `quad`.
constexpr int kDec[4][7] = {{1, 0, 0, 1, -1, 0, 1},
                            {0, 0, 1, 0, 1, 0, 0},
                            {0, 1, 0, 1, 0, 0, 0},
                            {1, -1, 1, 0, 0, 1, 0}};

// ---------------------------------------------------------------------------
// Plain in-memory recursion.

void add_into_quadrant(Matrix& m, int q, const Matrix& part, int coeff) {
  const std::int64_t h = m.rows() / 2;
  const std::int64_t r0 = (q / 2) * h, c0 = (q % 2) * h;
  for (std::int64_t i = 0; i < h; ++i)
    for (std::int64_t j = 0; j < h; ++j)
      m.at(r0 + i, c0 + j) += coeff * part.at(i, j);
}

Matrix combine(const Matrix& m, const int coeff[4]) {
  const std::int64_t h = m.rows() / 2;
  Matrix out(h, h);
  for (int q = 0; q < 4; ++q) {
    if (coeff[q] == 0) continue;
    const std::int64_t r0 = (q / 2) * h, c0 = (q % 2) * h;
    for (std::int64_t i = 0; i < h; ++i)
      for (std::int64_t j = 0; j < h; ++j)
        out.at(i, j) += coeff[q] * m.at(r0 + i, c0 + j);
  }
  return out;
}

Matrix seq_recurse(const Matrix& a, const Matrix& b, std::int64_t base,
                   std::int64_t& mults) {
  if (a.rows() <= base) {
    mults += a.rows() * a.rows() * a.rows();
    return multiply_reference(a, b);
  }
  Matrix c(a.rows(), a.rows());
  for (int i = 0; i < 7; ++i) {
    Matrix mi = seq_recurse(combine(a, kEncA[i]), combine(b, kEncB[i]), base,
                            mults);
    for (int q = 0; q < 4; ++q)
      if (kDec[q][i] != 0) add_into_quadrant(c, q, mi, kDec[q][i]);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Distributed representation.
//
// A DistOp is a vector of `count` words in Morton order, spread over the
// contiguous processor range [g0, g0+gsz). Rank r's share is the interval
// [share_lo(r), share_lo(r+1)); boundaries are rounded to multiples of 4 so
// that shares stay aligned with quadrant boundaries all the way down.

std::int64_t share_lo(std::int64_t count, std::int64_t gsz, std::int64_t r) {
  if (count >= 4) return 4 * ((count / 4) * r / gsz);
  return count * r / gsz;
}

struct DistOp {
  std::int64_t count = 0;
  std::int64_t g0 = 0;
  std::int64_t gsz = 1;
  std::vector<std::vector<std::int64_t>> local;  // empty in count-only mode

  std::int64_t lo(std::int64_t r) const { return share_lo(count, gsz, r); }
  std::int64_t size_of(std::int64_t r) const { return lo(r + 1) - lo(r); }
};

// First rank whose share extends past position x (i.e. owns x or later).
std::int64_t rank_at(const DistOp& op, std::int64_t x) {
  std::int64_t lo = 0, hi = op.gsz - 1;
  while (lo < hi) {
    const std::int64_t mid = (lo + hi) / 2;
    if (op.lo(mid + 1) > x)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

struct Ctx {
  Machine* machine = nullptr;
  bool data = false;
};

DistOp alloc_dist(Ctx& ctx, std::int64_t count, std::int64_t g0,
                  std::int64_t gsz) {
  DistOp op;
  op.count = count;
  op.g0 = g0;
  op.gsz = gsz;
  if (ctx.data) op.local.resize(static_cast<std::size_t>(gsz));
  for (std::int64_t r = 0; r < gsz; ++r) {
    const std::int64_t words = op.size_of(r);
    if (words > 0) ctx.machine->alloc(g0 + r, words);
    if (ctx.data)
      op.local[static_cast<std::size_t>(r)].assign(
          static_cast<std::size_t>(words), 0);
  }
  return op;
}

void dealloc_dist(Ctx& ctx, DistOp& op) {
  for (std::int64_t r = 0; r < op.gsz; ++r) {
    const std::int64_t words = op.size_of(r);
    if (words > 0) ctx.machine->dealloc(op.g0 + r, words);
  }
  op.local.clear();
  op.count = 0;
}

// Delivers `words` values produced on `src` into dst's share of `dest`,
// starting at global position `pos`. Transfer transients are charged and
// released immediately after the accumulate, so a receiver never holds more
// than one in-flight piece on top of its live buffers.
void deliver(Ctx& ctx, std::int64_t src, std::int64_t dst, DistOp& dest,
             std::int64_t pos, const std::vector<std::int64_t>& vals,
             std::int64_t words) {
  if (words == 0) return;  // interior ranks may hold empty shares
  if (src != dst) {
    ctx.machine->send(src, dst, words);
    ctx.machine->dealloc(dst, words);
  }
  if (!ctx.data) return;
  const std::int64_t r = dst - dest.g0;
  auto& buf = dest.local[static_cast<std::size_t>(r)];
  const std::int64_t off = pos - dest.lo(r);
  for (std::int64_t x = 0; x < words; ++x)
    buf[static_cast<std::size_t>(off + x)] += vals[static_cast<std::size_t>(x)];
}

// T[x] += sum_q coeff[q] * X[q*Q + x] for x in [0, Q), Q = X.count/4.
// Each source rank presums the quadrant copies it holds and ships one
// contiguous run per destination rank.
void encode_scatter(Ctx& ctx, const DistOp& x_op, const int coeff[4],
                    DistOp& t_op) {
  const std::int64_t q_sz = x_op.count / 4;
  for (std::int64_t r = 0; r < x_op.gsz; ++r) {
    const std::int64_t s0 = x_op.lo(r), s1 = x_op.lo(r + 1);
    if (s0 == s1) continue;
    // Overlaps of this share with the active quadrants, in T coordinates.
    std::vector<std::pair<std::int64_t, std::int64_t>> runs;
    for (int q = 0; q < 4; ++q) {
      if (coeff[q] == 0) continue;
      const std::int64_t lo = std::max(s0, q * q_sz);
      const std::int64_t hi = std::min(s1, (q + 1) * q_sz);
      if (lo < hi) runs.emplace_back(lo - q * q_sz, hi - q * q_sz);
    }
    if (runs.empty()) continue;
    std::sort(runs.begin(), runs.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> merged;
    for (const auto& run : runs) {
      if (!merged.empty() && run.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, run.second);
      else
        merged.push_back(run);
    }
    std::vector<std::int64_t> vals;
    for (const auto& [a, b] : merged) {
      std::int64_t t = rank_at(t_op, a);
      std::int64_t pos = a;
      while (pos < b) {
        const std::int64_t piece_hi = std::min(b, t_op.lo(t + 1));
        const std::int64_t words = piece_hi - pos;
        if (ctx.data) {
          vals.assign(static_cast<std::size_t>(words), 0);
          const auto& src_buf = x_op.local[static_cast<std::size_t>(r)];
          for (int q = 0; q < 4; ++q) {
            if (coeff[q] == 0) continue;
            for (std::int64_t xi = 0; xi < words; ++xi) {
              const std::int64_t gpos = q * q_sz + pos + xi;
              if (gpos >= s0 && gpos < s1)
                vals[static_cast<std::size_t>(xi)] +=
                    coeff[q] *
                    src_buf[static_cast<std::size_t>(gpos - s0)];
            }
          }
        }
        deliver(ctx, x_op.g0 + r, t_op.g0 + t, t_op, pos, vals, words);
        pos = piece_hi;
        ++t;
      }
    }
  }
}

// C[quad*Q + x] += coeff * Ci[x] for x in [0, Ci.count), Q = C.count/4.
void decode_scatter(Ctx& ctx, const DistOp& ci, int quad, int coeff,
                    DistOp& c_op) {
  const std::int64_t base = quad * (c_op.count / 4);
  std::vector<std::int64_t> vals;
  for (std::int64_t r = 0; r < ci.gsz; ++r) {
    const std::int64_t s0 = ci.lo(r), s1 = ci.lo(r + 1);
    if (s0 == s1) continue;
    std::int64_t t = rank_at(c_op, base + s0);
    std::int64_t pos = base + s0;
    const std::int64_t end = base + s1;
    while (pos < end) {
      const std::int64_t piece_hi = std::min(end, c_op.lo(t + 1));
      const std::int64_t words = piece_hi - pos;
      if (ctx.data) {
        const auto& src_buf = ci.local[static_cast<std::size_t>(r)];
        vals.assign(static_cast<std::size_t>(words), 0);
        for (std::int64_t xi = 0; xi < words; ++xi)
          vals[static_cast<std::size_t>(xi)] =
              coeff * src_buf[static_cast<std::size_t>(pos - base - s0 + xi)];
      }
      deliver(ctx, ci.g0 + r, c_op.g0 + t, c_op, pos, vals, words);
      pos = piece_hi;
      ++t;
    }
  }
}

// ---------------------------------------------------------------------------
// Machine-resident sequential leaf. The workspace recurrence allocates the
// two operand combinations once per level and one product buffer at a time,
// so the transient above the C buffer is w(d) = 3(d/2)^2 + w(d/2) = d^2 - 1.

void leaf_recurse(Ctx& ctx, std::int64_t proc, const Matrix& a,
                  const Matrix& b, Matrix& c) {
  const std::int64_t d = a.rows();
  if (d == 1) {
    c.at(0, 0) += a.at(0, 0) * b.at(0, 0);
    ctx.machine->add_flops(proc, 1);
    return;
  }
  const std::int64_t h = d / 2;
  ctx.machine->alloc(proc, 2 * h * h);  // the T1/T2 combination buffers
  for (int i = 0; i < 7; ++i) {
    Matrix t1 = combine(a, kEncA[i]);
    Matrix t2 = combine(b, kEncB[i]);
    ctx.machine->alloc(proc, h * h);
    Matrix mi(h, h);
    leaf_recurse(ctx, proc, t1, t2, mi);
    for (int q = 0; q < 4; ++q)
      if (kDec[q][i] != 0) add_into_quadrant(c, q, mi, kDec[q][i]);
    ctx.machine->dealloc(proc, h * h);
  }
  ctx.machine->dealloc(proc, 2 * h * h);
}

// Morton linearization of a square matrix: the index's base-4 digits from
// the top are the quadrant path, so every block of the recursion is a
// contiguous range.
std::int64_t morton_of(std::int64_t i, std::int64_t j, std::int64_t d) {
  std::int64_t m = 0;
  while (d > 1) {
    const std::int64_t h = d / 2;
    m = 4 * m + 2 * (i >= h ? 1 : 0) + (j >= h ? 1 : 0);
    if (i >= h) i -= h;
    if (j >= h) j -= h;
    d = h;
  }
  return m;
}

std::vector<std::int64_t> to_morton(const Matrix& m) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(m.rows() * m.rows()));
  for (std::int64_t i = 0; i < m.rows(); ++i)
    for (std::int64_t j = 0; j < m.rows(); ++j)
      out[static_cast<std::size_t>(morton_of(i, j, m.rows()))] = m.at(i, j);
  return out;
}

Matrix from_morton(const std::vector<std::int64_t>& v, std::int64_t d) {
  Matrix out(d, d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j)
      out.at(i, j) = v[static_cast<std::size_t>(morton_of(i, j, d))];
  return out;
}

DistOp run_leaf(Ctx& ctx, std::int64_t proc, std::int64_t d, DistOp& a,
                DistOp& b) {
  DistOp c;
  c.count = d * d;
  c.g0 = proc;
  c.gsz = 1;
  if (ctx.data) {
    Matrix am = from_morton(a.local[0], d);
    Matrix bm = from_morton(b.local[0], d);
    Matrix cm(d, d);
    ctx.machine->alloc(proc, d * d);
    leaf_recurse(ctx, proc, am, bm, cm);
    c.local.assign(1, to_morton(cm));
  } else {
    // Same footprint as the recursion: the C buffer plus a w(d) = d^2 - 1
    // workspace transient, and 7^(lg d) scalar products.
    ctx.machine->alloc(proc, d * d + (d * d - 1));
    ctx.machine->add_flops(proc, pow7(lg2(d)));
    ctx.machine->dealloc(proc, d * d - 1);
  }
  dealloc_dist(ctx, a);
  dealloc_dist(ctx, b);
  return c;
}

// ---------------------------------------------------------------------------
// The scheduled recursion. `steps[depth]` says whether this level runs BFS
// (split the group 7 ways, one subproblem each) or DFS (whole group walks
// the subproblems in sequence). Operands are consumed: a BFS level drops
// its inputs as soon as the seven combinations are formed, a DFS level must
// keep them live until the last subproblem.

DistOp schedule_recurse(Ctx& ctx, const std::string& steps,
                        std::size_t depth, std::int64_t g0, std::int64_t gsz,
                        std::int64_t d, DistOp a, DistOp b) {
  if (depth == steps.size()) return run_leaf(ctx, g0, d, a, b);
  const std::int64_t q_cnt = (d / 2) * (d / 2);

  if (steps[depth] == 'B') {
    const std::int64_t sub = gsz / 7;
    std::array<DistOp, 7> ta, tb, ci;
    for (int i = 0; i < 7; ++i) {
      ta[static_cast<std::size_t>(i)] =
          alloc_dist(ctx, q_cnt, g0 + i * sub, sub);
      encode_scatter(ctx, a, kEncA[i], ta[static_cast<std::size_t>(i)]);
    }
    dealloc_dist(ctx, a);
    for (int i = 0; i < 7; ++i) {
      tb[static_cast<std::size_t>(i)] =
          alloc_dist(ctx, q_cnt, g0 + i * sub, sub);
      encode_scatter(ctx, b, kEncB[i], tb[static_cast<std::size_t>(i)]);
    }
    dealloc_dist(ctx, b);
    for (int i = 0; i < 7; ++i)
      ci[static_cast<std::size_t>(i)] = schedule_recurse(
          ctx, steps, depth + 1, g0 + i * sub, sub, d / 2,
          std::move(ta[static_cast<std::size_t>(i)]),
          std::move(tb[static_cast<std::size_t>(i)]));
    DistOp c = alloc_dist(ctx, d * d, g0, gsz);
    for (int i = 0; i < 7; ++i) {
      for (int q = 0; q < 4; ++q)
        if (kDec[q][i] != 0)
          decode_scatter(ctx, ci[static_cast<std::size_t>(i)], q, kDec[q][i],
                         c);
      dealloc_dist(ctx, ci[static_cast<std::size_t>(i)]);
    }
    return c;
  }

  // DFS: inputs and the output accumulator stay live across all seven
  // subproblems; only one subproblem's operands exist at a time.
  DistOp c = alloc_dist(ctx, d * d, g0, gsz);
  for (int i = 0; i < 7; ++i) {
    DistOp ta = alloc_dist(ctx, q_cnt, g0, gsz);
    encode_scatter(ctx, a, kEncA[i], ta);
    DistOp tb = alloc_dist(ctx, q_cnt, g0, gsz);
    encode_scatter(ctx, b, kEncB[i], tb);
    DistOp ci = schedule_recurse(ctx, steps, depth + 1, g0, gsz, d / 2,
                                 std::move(ta), std::move(tb));
    for (int q = 0; q < 4; ++q)
      if (kDec[q][i] != 0) decode_scatter(ctx, ci, q, kDec[q][i], c);
    dealloc_dist(ctx, ci);
  }
  dealloc_dist(ctx, a);
  dealloc_dist(ctx, b);
  return c;
}

StrassenResult run_impl(const Matrix* a, const Matrix* b, std::int64_t n,
                        const MachineConfig& machine_cfg,
                        std::optional<std::string> schedule,
                        const std::string& run_id) {
  StrassenPlan plan =
      schedule ? make_strassen_plan(n, machine_cfg.procs, *schedule)
               : auto_schedule(n, machine_cfg.procs, machine_cfg.mem_words);

  Machine machine(machine_cfg);
  machine.set_run_id(run_id);
  Ctx ctx{&machine, machine_cfg.mode == SimMode::data};

  DistOp a0 = alloc_dist(ctx, n * n, 0, machine_cfg.procs);
  DistOp b0 = alloc_dist(ctx, n * n, 0, machine_cfg.procs);
  if (ctx.data) {
    const auto am = to_morton(*a);
    const auto bm = to_morton(*b);
    for (std::int64_t r = 0; r < machine_cfg.procs; ++r) {
      const std::int64_t lo = a0.lo(r), hi = a0.lo(r + 1);
      a0.local[static_cast<std::size_t>(r)].assign(
          am.begin() + lo, am.begin() + hi);
      b0.local[static_cast<std::size_t>(r)].assign(
          bm.begin() + lo, bm.begin() + hi);
    }
  }
  machine.mark_initial();

  DistOp c = schedule_recurse(ctx, plan.schedule, 0, 0, machine_cfg.procs, n,
                              std::move(a0), std::move(b0));

  for (std::int64_t r = 0; r < machine_cfg.procs; ++r)
    machine.set_final_words(r, c.size_of(r));

  StrassenResult result;
  result.plan = plan;
  result.peak_resident = machine.max_peak_resident();
  if (ctx.data) {
    std::vector<std::int64_t> cm(static_cast<std::size_t>(n * n));
    for (std::int64_t r = 0; r < machine_cfg.procs; ++r)
      std::copy(c.local[static_cast<std::size_t>(r)].begin(),
                c.local[static_cast<std::size_t>(r)].end(),
                cm.begin() + c.lo(r));
    result.product = from_morton(cm, n);
  }
  result.ledger = machine.ledger();
  return result;
}

}  // namespace

SequentialResult strassen_sequential(const Matrix& a, const Matrix& b,
                                     std::int64_t base) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ConfigError("operands must be square and equally sized");
  if (!is_pow2(a.rows())) throw ConfigError("dimension must be a power of two");
  if (base < 1) throw ConfigError("base must be positive");
  SequentialResult result;
  result.product = seq_recurse(a, b, base, result.multiplications);
  return result;
}

StrassenPlan make_strassen_plan(std::int64_t n, std::int64_t p,
                                const std::string& schedule) {
  if (!is_pow2(n)) throw ConfigError("dimension must be a power of two");
  std::int64_t b = 0;
  std::int64_t pw = 1;
  while (pw < p) {
    pw *= 7;
    ++b;
  }
  if (pw != p)
    throw ConfigError("processor count " + std::to_string(p) +
                      " is not a power of 7; nearest below is " +
                      std::to_string(pw / 7));
  std::int64_t bfs = 0;
  for (char ch : schedule) {
    if (ch == 'B')
      ++bfs;
    else if (ch != 'D')
      throw ConfigError("schedule may contain only B and D steps");
  }
  if (bfs != b)
    throw ConfigError("schedule needs exactly " + std::to_string(b) +
                      " B steps for " + std::to_string(p) + " processors");
  if (static_cast<std::int64_t>(schedule.size()) > lg2(n))
    throw ConfigError("schedule is deeper than lg n = " +
                      std::to_string(lg2(n)));
  StrassenPlan plan;
  plan.n = n;
  plan.schedule = schedule;
  plan.leaf_dim = n >> schedule.size();
  return plan;
}

StrassenPlan auto_schedule(std::int64_t n, std::int64_t p,
                           std::optional<std::int64_t> m) {
  if (!is_pow2(n)) throw ConfigError("dimension must be a power of two");
  std::int64_t b = 0;
  std::int64_t pw = 1;
  while (pw < p) {
    pw *= 7;
    ++b;
  }
  if (pw != p)
    throw ConfigError("processor count " + std::to_string(p) +
                      " is not a power of 7; nearest below is " +
                      std::to_string(pw / 7));
  const std::int64_t max_depth = lg2(n);
  if (b > max_depth)
    throw ConfigError("need at least " + std::to_string(b) +
                      " recursion levels for " + std::to_string(p) +
                      " processors but lg n = " + std::to_string(max_depth));
  std::string tail(static_cast<std::size_t>(b), 'B');
  if (!m) return make_strassen_plan(n, p, tail);

  std::int64_t last_peak = -1;
  for (std::int64_t k = 0; k + b <= max_depth; ++k) {
    const std::string steps = std::string(static_cast<std::size_t>(k), 'D') +
                              tail;
    MachineConfig probe;
    probe.procs = p;
    probe.mem_words = std::nullopt;
    probe.mode = SimMode::count_only;
    StrassenResult dry = run_strassen_counts(n, probe, steps, "autoprobe");
    last_peak = dry.peak_resident;
    if (dry.peak_resident <= *m) return dry.plan;
  }
  throw ConfigError(
      "no schedule fits " + std::to_string(*m) +
      " words per processor (deepest DFS prefix still peaks at " +
      std::to_string(last_peak) + ")");
}

StrassenResult run_strassen_parallel(const Matrix& a, const Matrix& b,
                                     const MachineConfig& machine_cfg,
                                     std::optional<std::string> schedule,
                                     const std::string& run_id) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ConfigError("operands must be square and equally sized");
  if (machine_cfg.mode != SimMode::data)
    throw ConfigError("use run_strassen_counts for count-only runs");
  return run_impl(&a, &b, a.rows(), machine_cfg, std::move(schedule), run_id);
}

StrassenResult run_strassen_counts(std::int64_t n,
                                   const MachineConfig& machine_cfg,
                                   std::optional<std::string> schedule,
                                   const std::string& run_id) {
  if (machine_cfg.mode != SimMode::count_only)
    throw ConfigError("count-only runner requires count_only mode");
  return run_impl(nullptr, nullptr, n, machine_cfg, std::move(schedule),
                  run_id);
}

}  // namespace mmscale
