#pragma once

#include <map>
#include <string>
#include <vector>

#include "flexrepair/model.hpp"
#include "flexrepair/value.hpp"

namespace flexrepair {

struct TestCase {
  std::string id;
  std::vector<std::string> stdinLines;
  std::vector<std::string> expectedStdout;
};

struct StepLimits {
  size_t maxSteps = 100000;
  int maxDepth = 200;
};

using Env = std::map<std::string, Value>;

/// One location visit. `pre` is the environment on entry, `post` after all
/// bindings of the location executed.
struct TraceStep {
  std::string function;
  int location = 0;
  int frame = 0;  // invocation counter, distinguishes recursive calls
  Env pre;
  Env post;
};

enum class Verdict { Ok, RuntimeError, StepLimit };

struct Trace {
  std::vector<TraceStep> steps;
  std::vector<std::string> stdout_lines;
  Verdict verdict = Verdict::Ok;
  std::string message;
  int errorLine = 0;
  size_t inputsConsumed = 0;
};

enum class TestVerdict { Pass, Fail };

/// Executes `main` of the model against one test case.
Trace run(const Model& model, const TestCase& test, const StepLimits& limits = {});

/// Evaluates one expression outside a run: unprimed names read `pre`,
/// primed names read `post`, and `$out` is an ordinary variable. input()
/// fails. Calls to user functions of `model` run normally.
Value evaluate(const Model& model, const Expr& e, const Env& pre, const Env& post,
               const StepLimits& limits = {5000, 50});

/// Evaluates a builtin on already-evaluated arguments. `input` and calls
/// taking function values need an interpreter and are not available here.
Value call_builtin(const std::string& name, const std::vector<Value>& args,
                   const ImportTable& imports = {});

TestVerdict verdict(const Trace& trace, const TestCase& test);

/// Trims trailing whitespace per line and drops trailing blank lines.
std::vector<std::string> normalize_output(const std::vector<std::string>& lines);

/// Splits captured print output into lines.
std::vector<std::string> split_lines(const std::string& text);

}  // namespace flexrepair
