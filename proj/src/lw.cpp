#include "mmscale/lw.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace mmscale {

namespace {

using Pair = std::pair<std::int64_t, std::int64_t>;

// Area of the union of axis-aligned rectangles, via coordinate compression.
// Classical traces have one box per processor, so this stays tiny.
std::int64_t rect_union_area(
    const std::vector<std::array<std::int64_t, 4>>& rects) {
  std::vector<std::int64_t> xs, ys;
  for (const auto& r : rects) {
    if (r[0] >= r[1] || r[2] >= r[3]) continue;
    xs.push_back(r[0]);
    xs.push_back(r[1]);
    ys.push_back(r[2]);
    ys.push_back(r[3]);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::int64_t area = 0;
  for (std::size_t xi = 0; xi + 1 < xs.size(); ++xi)
    for (std::size_t yi = 0; yi + 1 < ys.size(); ++yi) {
      const std::int64_t cx = xs[xi], cy = ys[yi];
      for (const auto& r : rects)
        if (r[0] <= cx && cx < r[1] && r[2] <= cy && cy < r[3]) {
          area += (xs[xi + 1] - cx) * (ys[yi + 1] - cy);
          break;
        }
    }
  return area;
}

// Smallest t with t^3 >= 6 v^2, i.e. ceil(cbrt(6) * v^(2/3)) computed
// without floating-point rounding in the comparison.
std::int64_t ceil_surface_term(std::int64_t v) {
  if (v == 0) return 0;
  const unsigned __int128 target = static_cast<unsigned __int128>(6) *
                                   static_cast<unsigned __int128>(v) *
                                   static_cast<unsigned __int128>(v);
  auto cube = [](std::int64_t t) {
    return static_cast<unsigned __int128>(t) * static_cast<unsigned __int128>(t) *
           static_cast<unsigned __int128>(t);
  };
  std::int64_t t = static_cast<std::int64_t>(
      std::cbrt(6.0 * static_cast<double>(v) * static_cast<double>(v)));
  t = std::max<std::int64_t>(t - 2, 0);
  while (cube(t) < target) ++t;
  return t;
}

}  // namespace

LwCheck lw_check(const std::vector<LatticePoint>& points) {
  std::set<LatticePoint> v(points.begin(), points.end());
  std::set<Pair> ik, kj, ij;
  for (const auto& p : v) {
    ik.emplace(p.i, p.k);
    kj.emplace(p.k, p.j);
    ij.emplace(p.i, p.j);
  }
  LwCheck out;
  out.lhs = static_cast<std::int64_t>(v.size());
  out.proj = {static_cast<std::int64_t>(ik.size()),
              static_cast<std::int64_t>(kj.size()),
              static_cast<std::int64_t>(ij.size())};
  const unsigned __int128 prod = static_cast<unsigned __int128>(out.proj[0]) *
                                 static_cast<unsigned __int128>(out.proj[1]) *
                                 static_cast<unsigned __int128>(out.proj[2]);
  out.rhs = std::sqrt(static_cast<double>(out.proj[0]) *
                      static_cast<double>(out.proj[1]) *
                      static_cast<double>(out.proj[2]));
  out.holds = static_cast<unsigned __int128>(out.lhs) *
                  static_cast<unsigned __int128>(out.lhs) <=
              prod;
  return out;
}

AuditReport audit_trace(const MultTrace& trace, const CommLedger& ledger) {
  if (trace.run_id != ledger.run_id)
    throw ContractError("audit_trace: trace is from run '" + trace.run_id +
                        "' but ledger is from run '" + ledger.run_id + "'");
  if (trace.boxes.size() != ledger.procs.size())
    throw ContractError("audit_trace: trace and ledger disagree on P");

  AuditReport report;
  report.rows.reserve(ledger.procs.size());
  for (std::size_t p = 0; p < ledger.procs.size(); ++p) {
    const auto& boxes = trace.boxes[p];
    AuditRow row;
    row.proc = static_cast<std::int64_t>(p);
    std::vector<std::array<std::int64_t, 4>> ik, kj, ij;
    for (const auto& b : boxes) {
      row.volume += b.volume();
      ik.push_back({b.i0, b.i1, b.k0, b.k1});
      kj.push_back({b.k0, b.k1, b.j0, b.j1});
      ij.push_back({b.i0, b.i1, b.j0, b.j1});
    }
    row.proj_sum = rect_union_area(ik) + rect_union_area(kj) +
                   rect_union_area(ij);
    const auto& led = ledger.procs[p];
    const std::int64_t io = led.initial_words + led.final_words;
    row.required_surface =
        std::max<std::int64_t>(0, ceil_surface_term(row.volume) - io);
    row.required_tight = std::max<std::int64_t>(0, row.proj_sum - io);
    row.actual = led.words_sent + led.words_received;
    const std::int64_t needed =
        std::max(row.required_surface, row.required_tight);
    row.slack = row.actual - needed;
    row.ok = row.actual >= needed;
    report.all_ok = report.all_ok && row.ok;
    report.max_required_tight =
        std::max(report.max_required_tight, row.required_tight);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mmscale
