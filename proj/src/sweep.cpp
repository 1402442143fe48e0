#include "mmscale/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "mmscale/classical.hpp"
#include "mmscale/matrix.hpp"
#include "mmscale/strassen.hpp"

namespace mmscale {
namespace {

constexpr std::int64_t kDataModeLimit = 256;  // larger n runs count-only
constexpr std::uint64_t kSweepSeed = 1;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

SweepRow make_row(Algo algo, std::int64_t n, std::int64_t p, std::int64_t m,
                  std::string param, const CommLedger& ledger) {
  SweepRow row;
  row.p = p;
  row.algo = algo;
  row.param = std::move(param);
  row.max_words = ledger.max_words();
  row.flops_per_proc = ledger.max_flops();
  const auto nd = static_cast<double>(n);
  const auto pd = static_cast<double>(p);
  const std::optional<double> md = static_cast<double>(m);
  row.md_bound = algo == Algo::classical ? md_classical(nd, pd, md)
                                         : md_strassen(nd, pd, md);
  row.mi_bound =
      algo == Algo::classical ? mi_classical(nd, pd) : mi_strassen(nd, pd);
  row.regime = dominating_regime(algo, nd, pd, md);
  return row;
}

struct FitInput {
  std::vector<double> x, y;  // log10 p, log10 words
  std::int64_t distinct = 0;
};

FitInput collect(const std::vector<const SweepRow*>& rows) {
  FitInput in;
  std::vector<std::int64_t> ps;
  for (const auto* row : rows) {
    if (row->max_words <= 0) continue;
    in.x.push_back(std::log10(static_cast<double>(row->p)));
    in.y.push_back(std::log10(static_cast<double>(row->max_words)));
    ps.push_back(row->p);
  }
  std::sort(ps.begin(), ps.end());
  in.distinct = std::unique(ps.begin(), ps.end()) - ps.begin();
  return in;
}

SegmentFit fit_segment(const FitInput& in) {
  SegmentFit fit;
  fit.points = static_cast<std::int64_t>(in.x.size());
  if (in.distinct < 2) {
    fit.notice = "segment has " + std::to_string(in.distinct) +
                 " distinct processor count(s); need 2 to fit a line";
    return fit;
  }
  const auto n = static_cast<double>(in.x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    sx += in.x[i];
    sy += in.y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    sxx += (in.x[i] - mx) * (in.x[i] - mx);
    sxy += (in.x[i] - mx) * (in.y[i] - my);
  }
  fit.performed = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    const double r = in.y[i] - (fit.intercept + fit.slope * in.x[i]);
    rss += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  fit.stderr_slope =
      in.x.size() > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace

SweepResult sweep(std::int64_t n, std::int64_t m,
                  const std::vector<std::int64_t>& p_set,
                  const std::vector<Algo>& algos) {
  if (n < 1 || m < 1) throw ConfigError("sweep needs n >= 1 and m >= 1");
  if (p_set.empty()) throw ConfigError("sweep needs a non-empty p set");

  std::vector<std::int64_t> ps = p_set;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  const SimMode mode =
      n <= kDataModeLimit ? SimMode::data : SimMode::count_only;
  Matrix a, b;
  if (mode == SimMode::data) {
    a = random_matrix(n, seed_for_operand(kSweepSeed, 0));
    b = random_matrix(n, seed_for_operand(kSweepSeed, 1));
  }

  SweepResult result;
  result.n = n;
  result.m = m;
  std::int64_t admissible = 0;
  for (Algo algo : algos) {
    for (std::int64_t p : ps) {
      MachineConfig cfg{p, m, mode};
      try {
        if (algo == Algo::classical) {
          ClassicalResult run =
              mode == SimMode::data
                  ? run_classical(a, b, cfg, std::nullopt)
                  : run_classical_counts(n, cfg, std::nullopt);
          result.rows.push_back(make_row(
              algo, n, p, m, "c=" + std::to_string(run.plan.c), run.ledger));
        } else {
          StrassenResult run =
              mode == SimMode::data
                  ? run_strassen_parallel(a, b, cfg, std::nullopt)
                  : run_strassen_counts(n, cfg, std::nullopt);
          result.rows.push_back(make_row(
              algo, n, p, m,
              run.plan.schedule.empty() ? "local" : run.plan.schedule,
              run.ledger));
        }
        ++admissible;
      } catch (const ConfigError& err) {
        result.dropped.push_back("p=" + std::to_string(p) + " " +
                                 to_string(algo) + ": " + err.what());
      }
    }
  }
  if (admissible == 0)
    throw ConfigError("no admissible processor count in the sweep set");
  return result;
}

std::vector<SlopeReport> fit_slopes(const SweepResult& result) {
  std::vector<SlopeReport> reports;
  for (Algo algo : {Algo::classical, Algo::strassen}) {
    std::vector<const SweepRow*> below, above;
    const double p_split =
        algo == Algo::classical
            ? std::pow(static_cast<double>(result.n), 3.0) /
                  std::pow(static_cast<double>(result.m), 1.5)
            : std::pow(static_cast<double>(result.n), omega0()) /
                  std::pow(static_cast<double>(result.m), omega0() / 2.0);
    for (const auto& row : result.rows) {
      if (row.algo != algo) continue;
      (static_cast<double>(row.p) <= p_split ? below : above)
          .push_back(&row);
    }
    if (below.empty() && above.empty()) continue;
    SlopeReport report;
    report.algo = algo;
    report.p_split = p_split;
    report.below = fit_segment(collect(below));
    report.above = fit_segment(collect(above));
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string to_csv(const SweepResult& result) {
  std::string out = "p,algo,param,max_words,md_bound,mi_bound,regime\n";
  for (const auto& row : result.rows) {
    out += std::to_string(row.p);
    out += ',';
    out += to_string(row.algo);
    out += ',';
    out += row.param;
    out += ',';
    out += std::to_string(row.max_words);
    out += ',';
    out += format_double(row.md_bound);
    out += ',';
    out += format_double(row.mi_bound);
    out += ',';
    out += to_string(row.regime);
    out += '\n';
  }
  return out;
}

std::string to_gnuplot(const SweepResult& result,
                       const std::string& csv_path) {
  const ScalingRange range = scaling_range(result.n, result.m);
  std::string out;
  out += "# strong-scaling plot for n=" + std::to_string(result.n) +
         ", m=" + std::to_string(result.m) + "\n";
  out += "set datafile separator ','\n";
  out += "set logscale xy\n";
  out += "set xlabel 'processors P'\n";
  out += "set ylabel 'max words sent+received'\n";
  out += "set key left bottom\n";
  out += "set arrow 1 from " + std::to_string(range.p_min) +
         ",graph 0 to " + std::to_string(range.p_min) +
         ",graph 1 nohead dt 3 lc 'gray40'\n";
  out += "set arrow 2 from " + format_double(range.p_max_classical) +
         ",graph 0 to " + format_double(range.p_max_classical) +
         ",graph 1 nohead dt 2 lc 'blue'\n";
  out += "set arrow 3 from " + format_double(range.p_max_strassen) +
         ",graph 0 to " + format_double(range.p_max_strassen) +
         ",graph 1 nohead dt 2 lc 'red'\n";
  out += "csv = '" + csv_path + "'\n";
  out += "cl(v) = (strcol(2) eq 'classical25d' ? v : NaN)\n";
  out += "st(v) = (strcol(2) eq 'caps' ? v : NaN)\n";
  out += "plot csv using (cl($1)):4 w lp pt 7 lc 'blue' t 'classical measured', \\\n";
  out += "     csv using (cl($1)):5 w l dt 2 lc 'blue' t 'classical md bound', \\\n";
  out += "     csv using (cl($1)):6 w l dt 3 lc 'blue' t 'classical mi bound', \\\n";
  out += "     csv using (st($1)):4 w lp pt 5 lc 'red' t 'strassen measured', \\\n";
  out += "     csv using (st($1)):5 w l dt 2 lc 'red' t 'strassen md bound', \\\n";
  out += "     csv using (st($1)):6 w l dt 3 lc 'red' t 'strassen mi bound'\n";
  return out;
}

std::string to_json(const SweepResult& result,
                    const std::vector<SlopeReport>& fits) {
  nlohmann::json doc;
  doc["n"] = result.n;
  doc["m"] = result.m;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    doc["rows"].push_back({{"p", row.p},
                           {"algo", to_string(row.algo)},
                           {"param", row.param},
                           {"max_words", row.max_words},
                           {"flops_per_proc", row.flops_per_proc},
                           {"md_bound", row.md_bound},
                           {"mi_bound", row.mi_bound},
                           {"regime", to_string(row.regime)}});
  }
  doc["dropped"] = result.dropped;
  doc["fits"] = nlohmann::json::array();
  auto seg = [](const SegmentFit& fit) {
    nlohmann::json out{{"performed", fit.performed}, {"points", fit.points}};
    if (fit.performed) {
      out["slope"] = fit.slope;
      out["intercept"] = fit.intercept;
      out["stderr"] = fit.stderr_slope;
      out["max_abs_residual"] = fit.max_abs_residual;
    } else {
      out["notice"] = fit.notice;
    }
    return out;
  };
  for (const auto& fit : fits)
    doc["fits"].push_back({{"algo", to_string(fit.algo)},
                           {"p_split", fit.p_split},
                           {"below", seg(fit.below)},
                           {"above", seg(fit.above)}});
  return doc.dump(2) + "\n";
}

void emit_report(const SweepResult& result,
                 const std::vector<SlopeReport>& fits,
                 const std::string& format, const std::string& path) {
  auto write_file = [](const std::string& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + p);
    out << text;
    if (!out.good()) throw std::runtime_error("write failed: " + p);
  };
  if (format == "csv") {
    write_file(path, to_csv(result));
    std::string gp = path;
    if (gp.size() > 4 && gp.substr(gp.size() - 4) == ".csv")
      gp = gp.substr(0, gp.size() - 4);
    gp += ".gp";
    write_file(gp, to_gnuplot(result, path));
  } else if (format == "json") {
    write_file(path, to_json(result, fits));
  } else {
    throw ConfigError("unknown report format: " + format +
                      " (expected csv or json)");
  }
}

}  // namespace mmscale
