#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "flexrepair/cli.hpp"
#include "flexrepair/frontend.hpp"
#include "json.hpp"

namespace flexrepair {

namespace {

using Clock = std::chrono::steady_clock;

std::string kind_name(RepairEdit::Kind kind) {
  switch (kind) {
    case RepairEdit::Kind::AddBinding: return "add";
    case RepairEdit::Kind::DeleteBinding: return "delete";
    case RepairEdit::Kind::ChangeBinding: return "change";
  }
  return "?";
}

// Empty when the program lowers to a model, else the filter reason.
std::string screen(const CorpusProgram& p, const std::vector<TestCase>* mustPass, const RepairConfig& config) {
  Model m;
  try {
    m = build_model(parse(SourceProgram{p.text, p.id}), config.model);
  } catch (const std::exception&) {
    return "unsupported-construct";
  }
  if (mustPass) {
    for (const auto& t : *mustPass) {
      if (verdict(run(m, t, config.limits), t) != TestVerdict::Pass) return "correct-fails-tests";
    }
  }
  return "";
}

struct Job {
  size_t technique;
  const CorpusProblem* problem;
  const CorpusProgram* correct;
  const CorpusProgram* incorrect;
  std::string filter;
};

}  // namespace

BatchReport run_batch(const Corpus& corpus, const BatchConfig& config) {
  if (config.techniques.empty()) throw std::invalid_argument("no technique selected");
  std::vector<Technique> techniques;
  for (const auto& name : config.techniques) techniques.push_back(technique_named(name, config.base));

  // Screening depends only on the model options and limits, shared by all techniques.
  std::map<const CorpusProgram*, std::string> reason;
  for (const auto& [id, p] : corpus.problems) {
    for (const auto& c : p.correct) reason[&c] = screen(c, &p.tests, config.base);
    for (const auto& i : p.incorrect) reason[&i] = screen(i, nullptr, config.base);
  }

  std::vector<Job> jobs;
  for (size_t t = 0; t < techniques.size(); ++t) {
    for (const auto& [id, p] : corpus.problems) {
      for (const auto& i : p.incorrect) {
        for (const auto& c : p.correct) {
          std::string filter = p.tests.empty() ? "no-tests" : !reason[&i].empty() ? reason[&i] : reason[&c];
          jobs.push_back(Job{t, &p, &c, &i, filter});
        }
      }
    }
  }

  const auto start = Clock::now();
  auto out_of_time = [&] {
    return config.overallTimeout > 0 &&
           std::chrono::duration<double>(Clock::now() - start).count() > config.overallTimeout;
  };
  std::vector<std::optional<RepairOutcome>> results(jobs.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> partial{false};
  auto worker = [&] {
    for (size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      if (!job.filter.empty()) continue;
      if (out_of_time()) {
        partial = true;
        continue;
      }
      results[k] = repair_and_verify(SourceProgram{job.correct->text, job.correct->id},
                                     SourceProgram{job.incorrect->text, job.incorrect->id}, job.problem->tests,
                                     techniques[job.technique].config);
    }
  };
  unsigned n = std::max(1u, config.jobs);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchReport report;
  report.partial = partial;
  size_t totalIncorrect = 0;
  for (const auto& [id, p] : corpus.problems) totalIncorrect += p.incorrect.size();
  for (size_t k = 0; k < jobs.size(); ++k) {
    const Job& job = jobs[k];
    const std::string& name = techniques[job.technique].name;
    if (!results[k]) {
      report.filtered.push_back(FilteredPair{name, job.problem->id, job.correct->id, job.incorrect->id,
                                             job.filter.empty() ? "budget" : job.filter});
      continue;
    }
    report.records.push_back(PairRecord{name, job.problem->id, job.correct->id, job.incorrect->id, *results[k]});
  }

  for (const auto& t : techniques) {
    auto& s = report.summary[t.name];
    auto& best = report.best[t.name];
    s.totalIncorrect = totalIncorrect;
    for (size_t r = 0; r < report.records.size(); ++r) {
      const auto& rec = report.records[r];
      if (rec.technique != t.name) continue;
      if (rec.outcome.status == RepairStatus::Timeout) ++s.timeoutCount;
      if (rec.outcome.status == RepairStatus::Rejected) ++s.rejectedCount;
      if (rec.outcome.status != RepairStatus::FullyRepaired) continue;
      auto key = std::make_pair(rec.problem, rec.incorrect);
      auto it = best.find(key);
      if (it == best.end()) {
        best.emplace(key, r);
        continue;
      }
      const auto& cur = report.records[it->second].outcome;
      if (std::make_pair(rec.outcome.numRepairs, rec.outcome.changePercentage) <
          std::make_pair(cur.numRepairs, cur.changePercentage)) {
        it->second = r;
      }
    }
    s.fullyRepaired = best.size();
    s.successRate = totalIncorrect ? static_cast<double>(best.size()) / static_cast<double>(totalIncorrect) : 0.0;
    for (const auto& [key, r] : best) {
      s.meanNumRepairs += static_cast<double>(report.records[r].outcome.numRepairs);
      s.meanChangePercentage += report.records[r].outcome.changePercentage;
    }
    if (!best.empty()) {
      s.meanNumRepairs /= static_cast<double>(best.size());
      s.meanChangePercentage /= static_cast<double>(best.size());
    }
  }
  return report;
}

std::string record_json(const PairRecord& record) {
  const auto& o = record.outcome;
  nlohmann::json j{{"mode", record.technique},
                   {"correct", record.correct},
                   {"incorrect", record.incorrect},
                   {"score", o.alignmentScore},
                   {"status", to_string(o.status)},
                   {"numRepairs", o.numRepairs},
                   {"changePercentage", o.changePercentage},
                   {"edits", nlohmann::json::array()},
                   {"warnings", o.warnings}};
  for (const auto& e : o.plan.edits) {
    j["edits"].push_back({{"kind", kind_name(e.kind)},
                          {"function", e.function},
                          {"location", e.location},
                          {"variable", e.variable},
                          {"expr", e.kind == RepairEdit::Kind::DeleteBinding ? "" : e.newExpr.str()},
                          {"cost", e.cost},
                          {"description", e.describe()}});
  }
  if (!record.problem.empty()) j["problem"] = record.problem;
  if (!o.message.empty()) j["message"] = o.message;
  return j.dump();
}

std::string summary_json(const BatchReport& report) {
  nlohmann::json j{{"partial", report.partial}, {"records", report.records.size()}};
  j["techniques"] = nlohmann::json::object();
  for (const auto& [name, s] : report.summary) {
    j["techniques"][name] = {{"totalIncorrect", s.totalIncorrect},     {"fullyRepaired", s.fullyRepaired},
                             {"successRate", s.successRate},           {"meanNumRepairs", s.meanNumRepairs},
                             {"meanChangePercentage", s.meanChangePercentage}, {"timeoutCount", s.timeoutCount},
                             {"rejectedCount", s.rejectedCount}};
  }
  j["filtered"] = nlohmann::json::object();
  for (const auto& f : report.filtered) {
    j["filtered"][f.reason] = j["filtered"].value(f.reason, 0) + 1;
  }
  return j.dump();
}

}  // namespace flexrepair
