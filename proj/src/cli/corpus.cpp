#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "flexrepair/cli.hpp"
#include "json.hpp"

namespace flexrepair {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> files_with(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CorpusProgram> load_programs(const fs::path& dir) {
  std::vector<CorpusProgram> out;
  for (const auto& p : files_with(dir, ".ml")) out.push_back({p.stem().string(), slurp(p)});
  return out;
}

}  // namespace

TestCase parse_test_case(const std::string& json, const std::string& fallbackId) {
  auto j = nlohmann::json::parse(json);
  TestCase t;
  t.id = j.value("id", fallbackId);
  for (const auto& line : j.at("stdin")) t.stdinLines.push_back(line.get<std::string>());
  for (const auto& line : j.at("stdout")) t.expectedStdout.push_back(line.get<std::string>());
  return t;
}

std::vector<TestCase> load_tests(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a test directory: " + dir.string());
  std::vector<TestCase> out;
  for (const auto& p : files_with(dir, ".json")) {
    try {
      out.push_back(parse_test_case(slurp(p), p.stem().string()));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(p.string() + ": " + e.what());
    }
  }
  return out;
}

Corpus load_corpus(const fs::path& root) {
  fs::path problems = root / "problems";
  if (!fs::is_directory(problems)) throw std::runtime_error("no problems/ directory in " + root.string());
  Corpus corpus;
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(problems)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    CorpusProblem p;
    p.id = dir.filename().string();
    p.correct = load_programs(dir / "correct");
    p.incorrect = load_programs(dir / "incorrect");
    p.tests = load_tests(dir / "tests");
    if (p.correct.empty()) throw std::runtime_error("problem " + p.id + " has no correct program");
    if (p.tests.empty()) throw std::runtime_error("problem " + p.id + " has no test case");
    corpus.problems.emplace(p.id, std::move(p));
  }
  return corpus;
}

Technique technique_named(const std::string& name, const RepairConfig& base) {
  Technique t{name, base};
  if (name == "rigid") {
    t.config.mode = AlignMode::Rigid;
  } else if (name == "sarfgen-sim") {
    t.config.mode = AlignMode::SarfgenSim;
  } else if (name == "flex-label") {
    t.config.mode = AlignMode::FlexLabel;
  } else if (name == "flex-label-edge") {
    t.config.mode = AlignMode::FlexLabelEdge;
  } else {
    throw std::invalid_argument("unknown technique " + name);
  }
  return t;
}

}  // namespace flexrepair
