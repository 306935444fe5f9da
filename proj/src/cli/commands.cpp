#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flexrepair/cli.hpp"
#include "flexrepair/frontend.hpp"
#include "flexrepair/pdg.hpp"
#include "json.hpp"

namespace flexrepair {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SourceProgram source(const std::string& path) { return SourceProgram{slurp(path), path}; }

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

struct Options {
  std::string file, correct, incorrect, tests, corpus, json, function;
  std::string aligner = "flex-label-edge";
  std::vector<std::string> sideEffecting;
  std::vector<std::string> techniques{"rigid", "flex-label-edge"};
  size_t maxPerms = 1000;
  double alignTimeout = 60.0;
  double pairTimeout = 300.0;
  double overallTimeout = 0.0;
  double proceedThreshold = 0.6;
  double alpha = 0.5;
  double k = 1.5;
  unsigned jobs = 1;
};

RepairConfig repair_config(const Options& o) {
  RepairConfig c;
  for (const auto& name : o.sideEffecting) {
    if (!name.empty()) c.model.sideEffecting.insert(name);
  }
  c.align.maxPermutations = o.maxPerms;
  c.align.perAlignTimeout = o.alignTimeout;
  c.align.overallTimeout = o.pairTimeout;
  c.align.proceedThreshold = o.proceedThreshold;
  if (o.aligner != "pdg") c.mode = technique_named(o.aligner).config.mode;
  return c;
}

Model load_model(const std::string& path, const RepairConfig& config) {
  return build_model(parse(source(path)), config.model);
}

void write_json_out(const Options& o, const std::string& text) {
  if (o.json.empty()) return;
  std::ofstream f(o.json, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.json);
  f << text;
}

// Functions of `correct` paired by name with `incorrect`. With `byOrder`, name
// sets that differ but have the same size pair up in definition order.
std::vector<std::pair<const ModelFunction*, const ModelFunction*>> paired(const Model& correct,
                                                                         const Model& incorrect, bool byOrder) {
  std::vector<std::pair<const ModelFunction*, const ModelFunction*>> out;
  bool same = incorrect.functions.size() == correct.functions.size();
  for (const auto& fn : correct.functions) same = same && incorrect.find(fn.name);
  if (!same && byOrder && incorrect.functions.size() == correct.functions.size()) {
    for (size_t k = 0; k < correct.functions.size(); ++k) {
      out.emplace_back(&correct.functions[k], &incorrect.functions[k]);
    }
    return out;
  }
  if (!same) throw std::runtime_error("the programs define different functions");
  for (const auto& fn : correct.functions) out.emplace_back(&fn, incorrect.find(fn.name));
  return out;
}

nlohmann::json pdg_report(const ModelFunction& c, const ModelFunction& i, const Options& o) {
  Pdg gc = build_pdg(c), gi = build_pdg(i);
  PdgConfig config;
  config.alpha = o.alpha;
  config.k = o.k;
  PdgAlignment a = pdg_align(gc, gi, config);
  nlohmann::json j{{"function", c.name},   {"mode", "pdg"},        {"score", a.mean},
                   {"stddev", a.stddev},   {"edgeCorrectness", a.edgeCorrectness},
                   {"edits", nlohmann::json::array()}, {"warnings", nlohmann::json::array()}};
  for (const auto& [u, v] : a.replacements) {
    j["edits"].push_back({{"kind", "replace"},
                          {"correct", gc.node(u).description},
                          {"incorrect", gi.node(v).description},
                          {"similarity", a.pairSim.at({u, v})}});
  }
  for (int u : a.additions) j["edits"].push_back({{"kind", "add"}, {"correct", gc.node(u).description}});
  for (int v : a.removals) j["edits"].push_back({{"kind", "remove"}, {"incorrect", gi.node(v).description}});
  return j;
}

int cmd_parse(const Options& o, std::ostream& out) {
  out << dump(parse(source(o.file)));
  return kExitOk;
}

int cmd_model(const Options& o, std::ostream& out) {
  out << pretty_print(load_model(o.file, repair_config(o)));
  return kExitOk;
}

int cmd_cfg(const Options& o, std::ostream& out) {
  Model m = load_model(o.file, repair_config(o));
  bool any = false;
  for (const auto& fn : m.functions) {
    if (!o.function.empty() && fn.name != o.function) continue;
    out << to_dot(build_cfg(fn), fn.name);
    any = true;
  }
  if (!any) throw std::runtime_error("no function named " + o.function);
  return kExitOk;
}

int cmd_align(const Options& o, std::ostream& out) {
  RepairConfig config = repair_config(o);
  Model mc = load_model(o.correct, config), mi = load_model(o.incorrect, config);
  int status = kExitOk;
  std::string lines;
  for (auto [c, i] : paired(mc, mi, true)) {
    nlohmann::json j;
    if (o.aligner == "pdg") {
      j = pdg_report(*c, *i, o);
    } else {
      Cfg gc = build_cfg(*c), gi = build_cfg(*i);
      auto result = align(gc, gi, config.mode, config.align);
      j = {{"function", c->name}, {"mode", o.aligner}};
      if (!result) {
        j["status"] = "Mismatch";
        status = kExitDomain;
      } else {
        bool proceed = gate(*result, config.align) == GateDecision::Proceed;
        j["score"] = result->normalizedScore;
        j["rawScore"] = result->rawScore;
        j["gate"] = proceed ? "Proceed" : "Reject";
        j["timedOut"] = result->timedOut;
        j["mapping"] = nlohmann::json::array();
        for (auto [u, v] : result->mapping) j["mapping"].push_back({u, v});
        j["unmappedIncorrect"] = result->unmapped_incorrect(gi);
        if (!proceed) status = kExitDomain;
      }
    }
    if (c->name != i->name) j["warnings"] = {"paired " + c->name + " with " + i->name + " by position"};
    lines += j.dump() + "\n";
  }
  out << lines;
  write_json_out(o, lines);
  return status;
}

int cmd_repair(const Options& o, std::ostream& out) {
  if (o.aligner == "pdg") {
    RepairConfig config = repair_config(o);
    Model mc = load_model(o.correct, config), mi = load_model(o.incorrect, config);
    std::string lines;
    for (auto [c, i] : paired(mc, mi, false)) {
      auto j = pdg_report(*c, *i, o);
      j["correct"] = stem(o.correct);
      j["incorrect"] = stem(o.incorrect);
      lines += j.dump() + "\n";
    }
    out << lines;
    write_json_out(o, lines);
    return kExitOk;
  }
  if (o.tests.empty()) throw UsageError("repair needs a test directory");
  auto tests = load_tests(o.tests);
  PairRecord rec{o.aligner, "", stem(o.correct), stem(o.incorrect),
                 repair_and_verify(source(o.correct), source(o.incorrect), tests, repair_config(o))};
  std::string line = record_json(rec) + "\n";
  out << line;
  write_json_out(o, line);
  return rec.outcome.status == RepairStatus::FullyRepaired ? kExitOk : kExitDomain;
}

int cmd_verify(const Options& o, std::ostream& out) {
  RepairConfig config = repair_config(o);
  Model m = load_model(o.file, config);
  bool all = true;
  for (const auto& t : load_tests(o.tests)) {
    Trace tr = run(m, t, config.limits);
    bool pass = verdict(tr, t) == TestVerdict::Pass;
    all = all && pass;
    nlohmann::json j{{"test", t.id}, {"verdict", pass ? "Pass" : "Fail"}, {"stdout", tr.stdout_lines}};
    if (tr.verdict != Verdict::Ok) j["error"] = tr.message;
    out << j.dump() << "\n";
  }
  return all ? kExitOk : kExitDomain;
}

int cmd_batch(const Options& o, std::ostream& out) {
  BatchConfig config;
  config.base = repair_config(o);
  config.jobs = o.jobs;
  config.overallTimeout = o.overallTimeout;
  config.techniques.clear();
  for (const auto& t : o.techniques) {
    if (t.empty()) continue;
    technique_named(t);
    config.techniques.push_back(t);
  }
  if (config.techniques.empty()) throw UsageError("no technique selected");
  BatchReport report = run_batch(load_corpus(o.corpus), config);
  std::string summary = summary_json(report);
  out << summary << "\n";
  if (!o.json.empty()) {
    std::string all;
    for (const auto& r : report.records) all += record_json(r) + "\n";
    for (const auto& f : report.filtered) {
      all += nlohmann::json{{"mode", f.technique},
                            {"problem", f.problem},
                            {"correct", f.correct},
                            {"incorrect", f.incorrect},
                            {"filtered", f.reason}}
                 .dump() +
             "\n";
    }
    write_json_out(o, all + summary + "\n");
  }
  return report.partial ? kExitDomain : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Program repair through flexible alignment of program models", "flexrepair"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> aligners{"rigid", "flex-label", "flex-label-edge", "sarfgen-sim", "pdg"};

  auto model_flags = [&](CLI::App* sub) {
    sub->add_option("--side-effecting", o.sideEffecting, "Calls evaluated once per location (input always is)")
        ->delimiter(',');
  };
  auto align_flags = [&](CLI::App* sub) {
    sub->add_option("--aligner", o.aligner, "rigid, flex-label, flex-label-edge, sarfgen-sim or pdg")
        ->check(CLI::IsMember(aligners));
    sub->add_option("--max-perms", o.maxPerms, "Permutation cap, 0 for none");
    sub->add_option("--align-timeout", o.alignTimeout, "Seconds per alignment");
    sub->add_option("--proceed-threshold", o.proceedThreshold, "Normalized score needed to repair")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--alpha", o.alpha, "PDG topology weight")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--k", o.k, "PDG replacement threshold in standard deviations");
    model_flags(sub);
  };

  auto* parse_cmd = app.add_subcommand("parse", "Print the syntax tree");
  parse_cmd->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  auto* model_cmd = app.add_subcommand("model", "Print the program model");
  model_cmd->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  model_flags(model_cmd);
  auto* cfg_cmd = app.add_subcommand("cfg", "Print control flow graphs in DOT");
  cfg_cmd->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  cfg_cmd->add_option("--function", o.function, "Only this function");
  model_flags(cfg_cmd);

  auto* align_cmd = app.add_subcommand("align", "Align two programs function by function");
  align_cmd->add_option("correct", o.correct)->required()->check(CLI::ExistingFile);
  align_cmd->add_option("incorrect", o.incorrect)->required()->check(CLI::ExistingFile);
  align_cmd->add_option("--json", o.json, "Also write the report here");
  align_flags(align_cmd);

  auto* repair_cmd = app.add_subcommand("repair", "Repair the incorrect program against the correct one");
  repair_cmd->add_option("correct", o.correct)->required()->check(CLI::ExistingFile);
  repair_cmd->add_option("incorrect", o.incorrect)->required()->check(CLI::ExistingFile);
  repair_cmd->add_option("testdir", o.tests, "Directory of JSON test cases")->check(CLI::ExistingDirectory);
  repair_cmd->add_option("--tests", o.tests, "Directory of JSON test cases")->check(CLI::ExistingDirectory);
  repair_cmd->add_option("--pair-timeout", o.pairTimeout, "Seconds for the whole repair");
  repair_cmd->add_option("--json", o.json, "Also write the report here");
  align_flags(repair_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Run a program on test cases");
  verify_cmd->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("tests", o.tests)->required()->check(CLI::ExistingDirectory);
  model_flags(verify_cmd);

  auto* batch_cmd = app.add_subcommand("batch", "Repair every pair of a corpus");
  batch_cmd->add_option("corpus", o.corpus)->required()->check(CLI::ExistingDirectory);
  batch_cmd->add_option("--techniques", o.techniques, "Comma-separated techniques")->delimiter(',');
  batch_cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--json", o.json, "Write per-pair records and the summary here");
  batch_cmd->add_option("--pair-timeout", o.pairTimeout, "Seconds per pair");
  batch_cmd->add_option("--overall-timeout", o.overallTimeout, "Seconds for the whole batch, 0 for none");
  align_flags(batch_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*parse_cmd) return cmd_parse(o, out);
    if (*model_cmd) return cmd_model(o, out);
    if (*cfg_cmd) return cmd_cfg(o, out);
    if (*align_cmd) return cmd_align(o, out);
    if (*repair_cmd) return cmd_repair(o, out);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*batch_cmd) return cmd_batch(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace flexrepair
