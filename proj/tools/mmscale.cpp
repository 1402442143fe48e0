// Command-line front end: single-run simulation, bound evaluation, strong
// scaling sweeps, expansion/Loomis-Whitney verification, and CDAG export.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mmscale/bounds.hpp"
#include "mmscale/cdag.hpp"
#include "mmscale/classical.hpp"
#include "mmscale/io.hpp"
#include "mmscale/lw.hpp"
#include "mmscale/machine.hpp"
#include "mmscale/matrix.hpp"
#include "mmscale/strassen.hpp"
#include "mmscale/sweep.hpp"

namespace {

using namespace mmscale;

std::optional<std::int64_t> parse_auto(const std::string& text,
                                       const char* what) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const std::int64_t value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + " must be an integer or 'auto', got '" +
                      text + "'");
  }
}

void print_bounds_block(std::int64_t n, std::int64_t p,
                        std::optional<std::int64_t> m) {
  const BoundReport report = eval_bounds(n, p, m);
  std::cout << "bounds for n=" << n << " p=" << p << " m="
            << (m ? std::to_string(*m) : std::string("unbounded")) << "\n";
  std::cout << "  classical: md=" << report.md_classical
            << " mi=" << report.mi_classical
            << " dominant=" << to_string(report.dominating_classical) << "\n";
  std::cout << "  strassen:  md=" << report.md_strassen
            << " mi=" << report.mi_strassen
            << " dominant=" << to_string(report.dominating_strassen) << "\n";
  std::cout << "  p_min=" << report.p_min
            << " p_max_classical=" << report.p_max_classical
            << " p_max_strassen=" << report.p_max_strassen << "\n";
}

int cmd_simulate(const std::string& algo, std::int64_t n, std::int64_t p,
                 std::optional<std::int64_t> m, const std::string& c_text,
                 const std::string& schedule_text, const std::string& mode_text,
                 std::uint64_t seed, const std::string& trace_path) {
  const SimMode mode = sim_mode_from_string(mode_text);
  MachineConfig cfg{p, m, mode};

  RunArtifacts artifacts;
  artifacts.n = n;
  artifacts.p = p;
  artifacts.m = m;
  artifacts.mode = mode;
  artifacts.seed = seed;

  Matrix a, b;
  if (mode == SimMode::data) {
    a = random_matrix(n, seed_for_operand(seed, 0));
    b = random_matrix(n, seed_for_operand(seed, 1));
  }

  bool audit_ok = true;
  if (algo == "classical25d" || algo == "cannon") {
    std::optional<std::int64_t> c = parse_auto(c_text, "--c");
    if (algo == "cannon") {
      if (c && *c != 1)
        throw ConfigError("cannon is the c=1 schedule; use --algo classical25d "
                          "for c > 1");
      c = 1;
    }
    ClassicalResult run = mode == SimMode::data
                              ? run_classical(a, b, cfg, c)
                              : run_classical_counts(n, cfg, c);
    artifacts.algo = "classical25d";
    artifacts.param = "c=" + std::to_string(run.plan.c);
    artifacts.ledger = run.ledger;
    artifacts.trace = run.trace;
    std::cout << "run: algo=" << artifacts.algo << " n=" << n << " p=" << p
              << " q=" << run.plan.q << " c=" << run.plan.c
              << " mode=" << to_string(mode) << "\n";
    std::cout << "max_words=" << run.ledger.max_words()
              << " total_sent=" << run.ledger.total_sent()
              << " flops_per_proc=" << run.ledger.max_flops()
              << " peak_resident=" << run.peak_resident << "\n";
    const AuditReport audit = audit_trace(run.trace, run.ledger);
    std::int64_t ok_rows = 0;
    for (const auto& row : audit.rows) ok_rows += row.ok ? 1 : 0;
    std::cout << "audit: " << ok_rows << "/" << audit.rows.size()
              << " processors ok; max required (tight) = "
              << audit.max_required_tight << "\n";
    audit_ok = audit.all_ok;
  } else if (algo == "caps") {
    std::optional<std::string> schedule;
    if (schedule_text != "auto") schedule = schedule_text;
    StrassenResult run = mode == SimMode::data
                             ? run_strassen_parallel(a, b, cfg, schedule)
                             : run_strassen_counts(n, cfg, schedule);
    artifacts.algo = "caps";
    artifacts.param = run.plan.schedule.empty() ? "local" : run.plan.schedule;
    artifacts.ledger = run.ledger;
    std::cout << "run: algo=caps n=" << n << " p=" << p << " schedule="
              << (run.plan.schedule.empty() ? "local" : run.plan.schedule)
              << " leaf=" << run.plan.leaf_dim << " mode=" << to_string(mode)
              << "\n";
    std::cout << "max_words=" << run.ledger.max_words()
              << " total_sent=" << run.ledger.total_sent()
              << " flops_per_proc=" << run.ledger.max_flops()
              << " peak_resident=" << run.peak_resident << "\n";
  } else {
    throw ConfigError("unknown algorithm: " + algo);
  }

  print_bounds_block(n, p, m);
  if (!trace_path.empty()) {
    write_text_file(trace_path, trace_to_json(artifacts));
    std::cout << "trace written to " << trace_path << "\n";
  }
  if (!audit_ok) {
    std::cerr << "audit failure: a processor communicated less than the "
                 "projection bound requires\n";
    return 1;
  }
  return 0;
}

int cmd_sweep(std::int64_t n, std::int64_t m, std::int64_t p_min,
              std::int64_t p_max, const std::vector<std::string>& algo_names,
              const std::string& out_path, const std::string& format) {
  if (p_min < 1 || p_max < p_min)
    throw ConfigError("need 1 <= p-min <= p-max");
  std::vector<Algo> algos;
  for (const auto& name : algo_names) {
    if (name == "classical25d" || name == "classical")
      algos.push_back(Algo::classical);
    else if (name == "caps" || name == "strassen")
      algos.push_back(Algo::strassen);
    else
      throw ConfigError("unknown algorithm in --algos: " + name);
  }
  if (algos.empty()) throw ConfigError("--algos selected nothing");

  std::vector<std::int64_t> p_set;
  const bool want_classical =
      std::find(algos.begin(), algos.end(), Algo::classical) != algos.end();
  const bool want_strassen =
      std::find(algos.begin(), algos.end(), Algo::strassen) != algos.end();
  if (want_classical)
    for (std::int64_t p = 1; p <= p_max; p *= 2)
      if (p >= p_min) p_set.push_back(p);
  if (want_strassen)
    for (std::int64_t p = 1; p <= p_max; p *= 7)
      if (p >= p_min) p_set.push_back(p);

  SweepResult result = sweep(n, m, p_set, algos);
  const std::vector<SlopeReport> fits = fit_slopes(result);
  emit_report(result, fits, format, out_path);

  std::cout << "sweep n=" << n << " m=" << m << ": " << result.rows.size()
            << " rows written to " << out_path << " (" << format << ")\n";
  for (const auto& note : result.dropped)
    std::cout << "dropped " << note << "\n";
  for (const auto& fit : fits) {
    std::cout << to_string(fit.algo) << " split at p=" << fit.p_split << "\n";
    auto show = [](const char* name, const SegmentFit& seg) {
      if (seg.performed)
        std::cout << "  " << name << ": slope=" << seg.slope
                  << " stderr=" << seg.stderr_slope
                  << " points=" << seg.points << "\n";
      else
        std::cout << "  " << name << ": not fitted (" << seg.notice << ")\n";
    };
    show("below", fit.below);
    show("above", fit.above);
  }
  return 0;
}

int cmd_verify_expansion(std::int32_t k) {
  const Cdag g = build_dec(k);
  std::cout << "dec k=" << k << ": vertices=" << g.vertices.size()
            << " edges=" << g.edges.size() << " inputs=" << g.num_inputs
            << " outputs=" << g.num_outputs << "\n";
  if (static_cast<std::int64_t>(g.vertices.size()) <= 22) {
    const ExpansionResult exact =
        exact_expansion(g, static_cast<std::int64_t>(g.vertices.size()) / 2);
    std::cout << "exact edge expansion h = " << exact.h << " (witness size "
              << exact.witness.size() << ")\n";
    for (const auto& [s, h] : exact.h_table)
      std::cout << "  h_" << s << " = " << h << "\n";
  } else {
    std::cout << "graph too large for exhaustive expansion; reporting the "
                 "subtree witness family (upper bounds on h_s only)\n";
  }
  const auto rows = witness_expansion(g);
  if (rows.empty()) {
    std::cout << "no witness rows (need k >= 2)\n";
    return 0;
  }
  for (const auto& row : rows)
    std::cout << "witness j=" << row.j << ": size=" << row.size
              << " crossing=" << row.crossing << " ratio=" << row.ratio
              << "\n";
  for (std::size_t i = 1; i < rows.size(); ++i)
    std::cout << "decay ratio j=" << rows[i - 1].j << "->" << rows[i].j
              << ": " << rows[i].ratio / rows[i - 1].ratio << "\n";
  return 0;
}

int cmd_verify_lw(const std::string& trace_path) {
  const RunArtifacts run = trace_from_json(read_text_file(trace_path));
  if (!run.trace) {
    std::cout << "trace " << trace_path << " is a " << run.algo
              << " run; lattice semantics do not apply, not audited\n";
    return 0;
  }
  const AuditReport report = audit_trace(*run.trace, run.ledger);
  std::int64_t ok_rows = 0;
  for (const auto& row : report.rows) {
    ok_rows += row.ok ? 1 : 0;
    if (!row.ok)
      std::cout << "processor " << row.proc << ": required "
                << row.required_tight << " (tight) / " << row.required_surface
                << " (surface), actual " << row.actual << " FAIL\n";
  }
  std::cout << "audit: " << ok_rows << "/" << report.rows.size()
            << " processors ok; max required (tight) = "
            << report.max_required_tight << "\n";
  return report.all_ok ? 0 : 1;
}

int cmd_cdag_export(std::int32_t k, const std::string& out_path) {
  const std::string text = export_edge_list(build_dec(k));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
    std::cout << "edge list written to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"communication-cost simulator and bound checker for parallel "
               "matrix multiplication"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one schedule and report");
  std::string sim_algo;
  std::int64_t sim_n = 0, sim_p = 0;
  std::int64_t sim_m_raw = -1;
  std::string sim_c = "auto", sim_schedule = "auto", sim_mode = "data";
  std::uint64_t sim_seed = 1;
  std::string sim_trace;
  sim->add_option("--algo", sim_algo, "classical25d | cannon | caps")
      ->required();
  sim->add_option("--n", sim_n, "matrix dimension")->required();
  sim->add_option("--p", sim_p, "processor count")->required();
  sim->add_option("--m", sim_m_raw, "words of memory per processor");
  sim->add_option("--c", sim_c, "replication factor or 'auto'");
  sim->add_option("--schedule", sim_schedule, "BFS/DFS step string or 'auto'");
  sim->add_option("--mode", sim_mode, "data | count-only");
  sim->add_option("--seed", sim_seed, "operand seed");
  sim->add_option("--trace", sim_trace, "write the run trace as JSON");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate the lower bounds");
  std::int64_t bnd_n = 0, bnd_p = 0, bnd_m_raw = -1;
  double bnd_g = -1, bnd_d = -1;
  bnd->add_option("--n", bnd_n, "matrix dimension")->required();
  bnd->add_option("--p", bnd_p, "processor count")->required();
  bnd->add_option("--m", bnd_m_raw, "words of memory per processor");
  bnd->add_option("--g", bnd_g, "elementwise product count (generalized)");
  bnd->add_option("--d", bnd_d, "nonzero input+output count (generalized)");

  // sweep
  auto* swp = app.add_subcommand("sweep", "strong-scaling sweep over P");
  std::int64_t swp_n = 0, swp_m = 0, swp_pmin = 1, swp_pmax = 0;
  std::vector<std::string> swp_algos{"classical25d", "caps"};
  std::string swp_out = "sweep.csv", swp_format = "csv";
  swp->add_option("--n", swp_n, "matrix dimension")->required();
  swp->add_option("--m", swp_m, "words of memory per processor")->required();
  swp->add_option("--p-min", swp_pmin, "smallest processor count");
  swp->add_option("--p-max", swp_pmax, "largest processor count")->required();
  swp->add_option("--algos", swp_algos, "families to sweep")
      ->delimiter(',');
  swp->add_option("--out", swp_out, "output path");
  swp->add_option("--format", swp_format, "csv | json");

  // verify expansion / verify lw
  auto* ver = app.add_subcommand("verify", "check model-side theorems");
  ver->require_subcommand(1);
  auto* vex = ver->add_subcommand("expansion", "edge expansion of Dec_k");
  std::int32_t vex_k = 1;
  vex->add_option("--k", vex_k, "recursion depth")->required();
  auto* vlw = ver->add_subcommand("lw", "audit a run trace");
  std::string vlw_trace;
  vlw->add_option("--trace", vlw_trace, "trace JSON path")->required();

  // cdag export
  auto* cd = app.add_subcommand("cdag", "CDAG utilities");
  cd->require_subcommand(1);
  auto* cdx = cd->add_subcommand("export", "write the Dec_k edge list");
  std::int32_t cdx_k = 1;
  std::string cdx_out;
  cdx->add_option("--k", cdx_k, "recursion depth")->required();
  cdx->add_option("--out", cdx_out, "output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      std::optional<std::int64_t> m;
      if (sim->count("--m")) m = sim_m_raw;
      return cmd_simulate(sim_algo, sim_n, sim_p, m, sim_c, sim_schedule,
                          sim_mode, sim_seed, sim_trace);
    }
    if (bnd->parsed()) {
      std::optional<std::int64_t> m;
      if (bnd->count("--m")) m = bnd_m_raw;
      print_bounds_block(bnd_n, bnd_p, m);
      if (bnd->count("--g") || bnd->count("--d")) {
        if (bnd_g < 0 || bnd_d < 0)
          throw ConfigError("generalized bound needs both --g and --d");
        std::cout << "generalized bound: "
                  << generalized_bound(bnd_g, bnd_d,
                                       static_cast<double>(bnd_p))
                  << "\n";
      }
      return 0;
    }
    if (swp->parsed())
      return cmd_sweep(swp_n, swp_m, swp_pmin, swp_pmax, swp_algos, swp_out,
                       swp_format);
    if (vex->parsed()) return cmd_verify_expansion(vex_k);
    if (vlw->parsed()) return cmd_verify_lw(vlw_trace);
    if (cdx->parsed()) return cmd_cdag_export(cdx_k, cdx_out);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const ConfigError& err) {
    std::cerr << "configuration error: " << err.what() << "\n";
    return 2;
  } catch (const ContractError& err) {
    std::cerr << "contract violation: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
