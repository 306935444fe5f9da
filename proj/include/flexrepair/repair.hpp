#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "flexrepair/align.hpp"
#include "flexrepair/frontend.hpp"
#include "flexrepair/interp.hpp"
#include "flexrepair/model.hpp"

namespace flexrepair {

/// Marker used in reports for a variable that does not exist yet.
inline const std::string kFresh = "*";

struct CostEntry {
  int location = 0;  // correct location id
  std::string correctVar;
  std::string incorrectVar;  // kFresh for a new variable
  std::map<std::string, std::string> dependencySubstitution;  // correct -> incorrect
  double cost = 0.0;
};

/// Costs of matching the variables of one correct function against one
/// (aligned) incorrect function. Expressions of the incorrect function are
/// renamed into correct variables and evaluated on the correct program's
/// trace; agreement at every visit makes a match free.
class CostTable {
 public:
  /// `locations` maps correct location ids to incorrect location ids and must
  /// cover every correct location.
  CostTable(const Model& correct, const ModelFunction& correct_fn, const ModelFunction& incorrect_fn,
            std::map<int, int> locations, const Trace& correct_trace);

  const std::vector<std::string>& correct_vars() const { return correct_vars_; }
  const std::vector<std::string>& incorrect_vars() const { return incorrect_vars_; }
  const std::map<int, int>& locations() const { return locations_; }
  const ModelFunction& correct_function() const { return correct_fn_; }
  const ModelFunction& incorrect_function() const { return incorrect_fn_; }

  /// Special variables only pair with the same name, parameters by position.
  bool allowed(const std::string& v, const std::string& w) const;
  /// False for a parameter that has a counterpart at the same position.
  bool may_be_fresh(const std::string& v) const;

  /// Cost at one correct location of mapping v to w (an incorrect variable,
  /// or kFresh) given the rest of the mapping. `mapping` sends correct
  /// variables to incorrect variables or kFresh; missing entries are free.
  double cost(int loc, const std::string& v, const std::string& w,
              const std::map<std::string, std::string>& mapping) const;

  /// Sum over locations of the cheapest cost over all mappings with v -> w.
  double lower_bound(const std::string& v, const std::string& w) const;

  /// Number of bindings removed when w has no counterpart.
  double deletion_cost(const std::string& w) const;

  /// Name a fresh counterpart of v gets in the incorrect program.
  std::string fresh_name(const std::string& v) const;

  /// Rows for reporting: zero-cost substitutions plus the default cost of
  /// every pair, one block per location.
  std::vector<CostEntry> entries() const;

  /// Number of (location, pair) cells whose substitution search was truncated.
  size_t truncated() const { return truncated_; }

 private:
  struct Cell {
    bool trivial = false;  // free for every substitution
    // Accepted substitutions: incorrect var -> correct var.
    std::vector<std::map<std::string, std::string>> zero;
  };

  const Expr& correct_expr(int loc, const std::string& v, Expr& scratch) const;
  const Expr& incorrect_expr(int loc, const std::string& w, Expr& scratch) const;
  bool agrees(int loc, const std::string& v, const Expr& renamed) const;
  void fill(int loc, const std::string& v, const std::string& w);
  double change_cost(int loc, const std::string& v, const std::string& target,
                     const std::map<std::string, std::string>& mapping) const;

  const Model& correct_;
  ModelFunction correct_fn_;
  ModelFunction incorrect_fn_;
  std::map<int, int> locations_;
  std::vector<TraceStep> steps_;
  std::map<int, std::vector<size_t>> visits_;
  std::vector<std::string> correct_vars_;
  std::vector<std::string> incorrect_vars_;
  std::map<std::tuple<int, std::string, std::string>, Cell> cells_;
  size_t truncated_ = 0;
};

struct VariableMapping {
  std::map<std::string, std::string> targets;  // correct var -> incorrect var or fresh name
  std::set<std::string> fresh;                 // correct vars whose target is new
  std::vector<std::string> deletions;          // incorrect vars without a counterpart
  double cost = 0.0;
  bool exact = true;  // false if the candidate budget ran out

  /// {correct -> incorrect or kFresh} as used by CostTable::cost.
  std::map<std::string, std::string> as_cost_mapping() const;
};

struct SolveOptions {
  size_t maxCandidates = 20000;
};

/// Minimum-cost one-to-one mapping; ties go to the lexically smallest target
/// sequence over correct variables in order.
VariableMapping solve_matching(const CostTable& costs, const SolveOptions& opts = {});

/// Exact total cost of a complete mapping.
double mapping_cost(const CostTable& costs, const std::map<std::string, std::string>& mapping);

struct RepairEdit {
  enum class Kind { AddBinding, DeleteBinding, ChangeBinding };
  Kind kind = Kind::ChangeBinding;
  std::string function;
  int location = 0;  // incorrect location id
  std::string variable;
  Expr newExpr;
  double cost = 0.0;
  std::optional<std::string> after;  // insert after this variable's binding

  std::string describe() const;
};

struct RepairPlan {
  std::vector<RepairEdit> edits;
  double totalCost = 0.0;
  std::map<std::string, VariableMapping> variableMapping;  // per function
};

std::vector<RepairEdit> generate_repairs(const CostTable& costs, const VariableMapping& mapping);

class UnresolvableOrder : public std::runtime_error {
 public:
  explicit UnresolvableOrder(const std::string& what) : std::runtime_error(what) {}
};

/// Applies edits, deferring additions and changes whose inputs are not
/// defined yet; deletions go last. `applied` receives plan indices in the
/// order they were applied.
Model apply_repairs(const Model& incorrect, const RepairPlan& plan, std::vector<size_t>* applied = nullptr);

enum class RepairStatus { FullyRepaired, PartiallyRepaired, NotRepaired, Rejected, Timeout };

std::string to_string(RepairStatus status);

struct RepairConfig {
  AlignMode mode = AlignMode::FlexLabelEdge;
  AlignConfig align;
  ModelOptions model;
  StepLimits limits;
  SolveOptions solve;
};

struct RepairOutcome {
  RepairStatus status = RepairStatus::NotRepaired;
  std::vector<std::pair<std::string, TestVerdict>> perTestVerdicts;
  double changePercentage = 0.0;
  size_t numRepairs = 0;
  double alignmentScore = 0.0;
  RepairPlan plan;
  std::vector<std::string> warnings;
  std::string message;
  std::optional<Model> repaired;
};

/// Full pipeline from source text to a verified repaired model.
RepairOutcome repair_and_verify(const SourceProgram& correct, const SourceProgram& incorrect,
                                const std::vector<TestCase>& tests, const RepairConfig& config = {});

}  // namespace flexrepair
