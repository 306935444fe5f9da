#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexrepair/interp.hpp"
#include "flexrepair/repair.hpp"

namespace flexrepair {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Reads `{"id", "stdin": [...], "stdout": [...]}`. A missing id falls back to `fallbackId`.
TestCase parse_test_case(const std::string& json, const std::string& fallbackId = "");
/// Every *.json file in `dir`, in file-name order.
std::vector<TestCase> load_tests(const std::filesystem::path& dir);

struct CorpusProgram {
  std::string id;  // file stem
  std::string text;
};

struct CorpusProblem {
  std::string id;
  std::vector<CorpusProgram> correct;
  std::vector<CorpusProgram> incorrect;
  std::vector<TestCase> tests;
};

struct Corpus {
  std::map<std::string, CorpusProblem> problems;
};

/// Loads `problems/<id>/{correct,incorrect,tests}` below `root`. Programs are
/// the `.ml` files of each directory. Throws std::runtime_error if a problem has
/// no correct program or no test.
Corpus load_corpus(const std::filesystem::path& root);

/// A named repair configuration compared in batch mode.
struct Technique {
  std::string name;
  RepairConfig config;
};

/// rigid, sarfgen-sim, flex-label or flex-label-edge. Throws std::invalid_argument otherwise.
Technique technique_named(const std::string& name, const RepairConfig& base = {});

struct PairRecord {
  std::string technique;
  std::string problem;
  std::string correct;
  std::string incorrect;
  RepairOutcome outcome;
};

struct FilteredPair {
  std::string technique;
  std::string problem;
  std::string correct;
  std::string incorrect;
  std::string reason;  // unsupported-construct, correct-fails-tests, no-tests, budget
};

struct TechniqueSummary {
  size_t totalIncorrect = 0;
  size_t fullyRepaired = 0;  // unique incorrect programs
  double successRate = 0.0;
  double meanNumRepairs = 0.0;        // over repaired programs, best partner each
  double meanChangePercentage = 0.0;  // of that same partner
  size_t timeoutCount = 0;
  size_t rejectedCount = 0;
};

struct BatchConfig {
  std::vector<std::string> techniques{"rigid", "flex-label-edge"};
  RepairConfig base;
  unsigned jobs = 1;
  double overallTimeout = 0.0;  // seconds over the whole batch, <= 0 disables
};

struct BatchReport {
  std::vector<PairRecord> records;  // ordered by technique, problem, incorrect, correct
  std::vector<FilteredPair> filtered;
  std::map<std::string, TechniqueSummary> summary;
  /// For each technique, the best fully repairing partner per incorrect program:
  /// (problem, incorrect) -> index into records.
  std::map<std::string, std::map<std::pair<std::string, std::string>, size_t>> best;
  bool partial = false;  // the overall budget ran out
};

/// Runs every (incorrect, correct) pair of every problem under each technique.
/// Throws std::invalid_argument on an empty technique list.
BatchReport run_batch(const Corpus& corpus, const BatchConfig& config);

std::string record_json(const PairRecord& record);
std::string summary_json(const BatchReport& report);

/// Whole command line: parse, model, cfg, align, repair, verify, batch.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flexrepair
