#include "mmscale/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmscale {

std::string trace_to_json(const RunArtifacts& run) {
  nlohmann::json doc;
  doc["config"] = {{"algo", run.algo},
                   {"n", run.n},
                   {"p", run.p},
                   {"m", run.m ? nlohmann::json(*run.m) : nlohmann::json()},
                   {"param", run.param},
                   {"mode", to_string(run.mode)},
                   {"seed", run.seed}};
  doc["run_id"] = run.ledger.run_id;
  doc["perproc"] = nlohmann::json::array();
  for (std::size_t i = 0; i < run.ledger.procs.size(); ++i) {
    const auto& proc = run.ledger.procs[i];
    doc["perproc"].push_back(
        {{"id", i},
         {"sent", proc.words_sent},
         {"recv", proc.words_received},
         {"msgs_sent", proc.msgs_sent},
         {"msgs_recv", proc.msgs_received},
         {"I", proc.initial_words},
         {"O", proc.final_words}});
  }
  doc["max_words"] = run.ledger.max_words();
  doc["flops_per_proc"] = run.ledger.max_flops();
  if (run.trace) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& proc_boxes : run.trace->boxes) {
      nlohmann::json list = nlohmann::json::array();
      for (const auto& box : proc_boxes)
        list.push_back({box.i0, box.i1, box.j0, box.j1, box.k0, box.k1});
      boxes.push_back(std::move(list));
    }
    doc["trace"] = {{"n", run.trace->n}, {"boxes", std::move(boxes)}};
  }
  return doc.dump(2) + "\n";
}

RunArtifacts trace_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError(std::string("trace is not valid JSON: ") + err.what());
  }
  try {
    RunArtifacts run;
    const auto& cfg = doc.at("config");
    run.algo = cfg.at("algo").get<std::string>();
    run.n = cfg.at("n").get<std::int64_t>();
    run.p = cfg.at("p").get<std::int64_t>();
    if (!cfg.at("m").is_null()) run.m = cfg.at("m").get<std::int64_t>();
    run.param = cfg.at("param").get<std::string>();
    run.mode = sim_mode_from_string(cfg.at("mode").get<std::string>());
    run.seed = cfg.at("seed").get<std::uint64_t>();
    run.ledger.run_id = doc.at("run_id").get<std::string>();
    for (const auto& entry : doc.at("perproc")) {
      ProcLedger proc;
      proc.words_sent = entry.at("sent").get<std::int64_t>();
      proc.words_received = entry.at("recv").get<std::int64_t>();
      proc.msgs_sent = entry.at("msgs_sent").get<std::int64_t>();
      proc.msgs_received = entry.at("msgs_recv").get<std::int64_t>();
      proc.initial_words = entry.at("I").get<std::int64_t>();
      proc.final_words = entry.at("O").get<std::int64_t>();
      run.ledger.procs.push_back(proc);
    }
    run.ledger.flops.assign(run.ledger.procs.size(), 0);
    if (doc.contains("trace")) {
      MultTrace trace;
      trace.run_id = run.ledger.run_id;
      trace.n = doc["trace"].at("n").get<std::int64_t>();
      for (const auto& list : doc["trace"].at("boxes")) {
        std::vector<Box> proc_boxes;
        for (const auto& entry : list) {
          if (!entry.is_array() || entry.size() != 6)
            throw ConfigError("trace box must be [i0,i1,j0,j1,k0,k1]");
          Box box{entry[0].get<std::int64_t>(), entry[1].get<std::int64_t>(),
                  entry[2].get<std::int64_t>(), entry[3].get<std::int64_t>(),
                  entry[4].get<std::int64_t>(), entry[5].get<std::int64_t>()};
          proc_boxes.push_back(box);
        }
        trace.boxes.push_back(std::move(proc_boxes));
      }
      run.trace = std::move(trace);
    }
    return run;
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError(std::string("trace document is malformed: ") +
                      err.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace mmscale
