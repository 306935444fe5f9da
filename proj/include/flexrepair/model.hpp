#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flexrepair/ast.hpp"
#include "flexrepair/expr.hpp"

namespace flexrepair {

using Binding = std::pair<std::string, Expr>;

struct Location {
  int id = 0;
  std::string description;
  int line = 0;
  std::vector<Binding> bindings;  // at most one binding per variable
  std::optional<int> trueNext;
  std::optional<int> falseNext;

  const Expr* find(const std::string& var) const;
  Expr* find(const std::string& var);
  bool binds(const std::string& var) const { return find(var) != nullptr; }
  bool conditional() const { return falseNext.has_value(); }

  bool operator==(const Location&) const = default;
};

struct ModelFunction {
  std::string name;
  std::vector<std::string> params;
  int entry = 1;
  std::map<int, Location> locations;
  int line = 0;

  // Generated-name counters: iter#k/ind#k, $call#k, input_val#k.
  int loopCounter = 0;
  int callCounter = 0;
  int hoistCounter = 0;

  const Location& at(int id) const;
  Location& at(int id);
  int max_id() const { return locations.empty() ? 0 : locations.rbegin()->first; }
  /// Every variable bound somewhere in the function.
  std::set<std::string> variables() const;
};

struct Model {
  std::vector<ModelFunction> functions;  // definition order
  ImportTable imports;

  const ModelFunction* find(const std::string& name) const;
  ModelFunction* find(const std::string& name);
};

struct ModelOptions {
  bool ternaryOptimization = false;
  // Calls evaluated once into a fresh variable; `input` is always included.
  std::set<std::string> sideEffecting = {"input"};
};

class LoweringError : public std::runtime_error {
 public:
  LoweringError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Model build_model(const Ast& ast, const ModelOptions& opts = {});

/// Site-based hoisting for models lowered without it: every call to a name in
/// `sideEffecting` is evaluated once per location into `<name>_val#k`.
Model hoist_side_effecting_calls(const Model& model, const std::set<std::string>& sideEffecting);

std::string pretty_print(const Model& model);
std::string pretty_print(const ModelFunction& fn);

/// Builtin call names with fixed semantics in the interpreter.
const std::set<std::string>& builtin_names();

/// True for the generated variables `$cond`, `$out`, `$ret` and `$call#k`.
bool is_special_var(const std::string& var);

}  // namespace flexrepair
