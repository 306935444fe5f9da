#include <algorithm>
#include <sstream>

#include "flexrepair/repair.hpp"

namespace flexrepair {

namespace {

Expr rename(const Expr& e, const std::map<std::string, std::string>& names) {
  return e.map([&](const Expr& n) {
    if (!n.is_var()) return n;
    auto it = names.find(n.name);
    if (it == names.end()) return n;
    Expr out = n;
    out.name = it->second;
    return out;
  });
}

std::set<std::string> names_in(const Expr& e) {
  std::set<std::string> out = e.vars(false);
  for (const auto& n : e.vars(true)) out.insert(n);
  return out;
}

}  // namespace

std::string RepairEdit::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::AddBinding: os << "add " << variable << " := " << newExpr.str(); break;
    case Kind::ChangeBinding: os << "change " << variable << " := " << newExpr.str(); break;
    case Kind::DeleteBinding: os << "delete " << variable; break;
  }
  os << " at location " << location << " of " << function;
  return os.str();
}

std::vector<RepairEdit> generate_repairs(const CostTable& costs, const VariableMapping& mapping) {
  const ModelFunction& pc = costs.correct_function();
  const ModelFunction& qi = costs.incorrect_function();
  const auto m = mapping.as_cost_mapping();
  std::vector<RepairEdit> edits;

  for (const auto& [loc, q] : costs.locations()) {
    const Location& lc = pc.at(loc);
    const Location& li = qi.at(q);
    // Walk correct bindings in order so additions can name their predecessor.
    std::vector<std::string> order;
    for (const auto& [v, e] : lc.bindings) order.push_back(v);
    for (const auto& v : costs.correct_vars()) {
      if (!lc.binds(v)) order.push_back(v);
    }
    std::optional<std::string> prev;
    for (const auto& v : order) {
      const std::string& w = m.at(v);
      const std::string& target = mapping.targets.at(v);
      double c = costs.cost(loc, v, w, m);
      bool bound = lc.binds(v);
      if (c > 0) {
        RepairEdit edit;
        edit.function = pc.name;
        edit.location = q;
        edit.variable = target;
        edit.cost = c;
        if (bound) {
          edit.newExpr = rename(*lc.find(v), mapping.targets);
          edit.after = prev;
          bool exists = w != kFresh && li.binds(w);
          edit.kind = exists ? RepairEdit::Kind::ChangeBinding : RepairEdit::Kind::AddBinding;
          bool self = edit.newExpr.is_var() && !edit.newExpr.primed && edit.newExpr.name == target;
          if (!self) edits.push_back(std::move(edit));
        } else if (w != kFresh && li.binds(w)) {
          edit.kind = RepairEdit::Kind::DeleteBinding;
          edits.push_back(std::move(edit));
        }
      }
      if (bound) prev = target;
    }
  }

  for (const auto& w : mapping.deletions) {
    for (const auto& [id, loc] : qi.locations) {
      if (!loc.binds(w)) continue;
      RepairEdit edit;
      edit.kind = RepairEdit::Kind::DeleteBinding;
      edit.function = pc.name;
      edit.location = id;
      edit.variable = w;
      edit.cost = 1.0;
      edits.push_back(std::move(edit));
    }
  }
  return edits;
}

namespace {

std::set<std::string> defined_names(const Model& model, const ModelFunction& fn) {
  std::set<std::string> out = fn.variables();
  out.insert(fn.params.begin(), fn.params.end());
  if (fn.name != "main") {
    if (const ModelFunction* top = model.find("main")) {
      auto globals = top->variables();
      out.insert(globals.begin(), globals.end());
    }
  }
  return out;
}

void place(Location& loc, const RepairEdit& edit) {
  if (Expr* e = loc.find(edit.variable)) {
    *e = edit.newExpr;
    return;
  }
  Binding b{edit.variable, edit.newExpr};
  if (!edit.after) {
    loc.bindings.insert(loc.bindings.begin(), std::move(b));
    return;
  }
  auto it = std::find_if(loc.bindings.begin(), loc.bindings.end(),
                         [&](const Binding& x) { return x.first == *edit.after; });
  if (it == loc.bindings.end()) {
    // Keep the condition last when the anchor is missing.
    auto cond = std::find_if(loc.bindings.begin(), loc.bindings.end(),
                             [](const Binding& x) { return x.first == "$cond"; });
    loc.bindings.insert(cond, std::move(b));
    return;
  }
  loc.bindings.insert(it + 1, std::move(b));
}

void normalize(Location& loc) {
  for (auto& [var, e] : loc.bindings) {
    e = e.map([&](const Expr& n) {
      if (!n.is_var() || !n.primed || loc.binds(n.name)) return n;
      Expr out = n;
      out.primed = false;
      return out;
    });
  }
  // Stable topological order over primed uses.
  const size_t n = loc.bindings.size();
  std::vector<std::set<size_t>> deps(n);
  for (size_t i = 0; i < n; ++i) {
    for (const auto& u : loc.bindings[i].second.vars(true)) {
      for (size_t j = 0; j < n; ++j) {
        if (j != i && loc.bindings[j].first == u) deps[i].insert(j);
      }
    }
  }
  std::vector<bool> done(n, false);
  std::vector<Binding> out;
  while (out.size() < n) {
    bool progress = false;
    for (size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      bool ready = std::all_of(deps[i].begin(), deps[i].end(), [&](size_t j) { return done[j]; });
      if (!ready) continue;
      done[i] = true;
      out.push_back(loc.bindings[i]);
      progress = true;
      break;
    }
    if (!progress) {
      throw UnresolvableOrder("cyclic dependencies among bindings at location " + std::to_string(loc.id));
    }
  }
  loc.bindings = std::move(out);
}

}  // namespace

Model apply_repairs(const Model& incorrect, const RepairPlan& plan, std::vector<size_t>* applied) {
  Model out = incorrect;
  std::set<std::pair<std::string, int>> touched;
  auto function_of = [&](const RepairEdit& e) -> ModelFunction& {
    ModelFunction* fn = out.find(e.function);
    if (!fn) throw UnresolvableOrder("no function named " + e.function);
    return *fn;
  };

  std::vector<size_t> pending;
  for (size_t k = 0; k < plan.edits.size(); ++k) {
    if (plan.edits[k].kind != RepairEdit::Kind::DeleteBinding) pending.push_back(k);
  }
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const RepairEdit& e = plan.edits[*it];
      ModelFunction& fn = function_of(e);
      auto defined = defined_names(out, fn);
      bool ready = true;
      for (const auto& u : names_in(e.newExpr)) {
        if (u != e.variable && !defined.count(u) && !is_special_var(u)) ready = false;
      }
      if (!ready) {
        ++it;
        continue;
      }
      place(fn.at(e.location), e);
      touched.insert({e.function, e.location});
      if (applied) applied->push_back(*it);
      it = pending.erase(it);
      progress = true;
    }
    if (!progress) {
      std::string names;
      for (size_t k : pending) names += (names.empty() ? "" : "; ") + plan.edits[k].describe();
      throw UnresolvableOrder("edits use undefined variables: " + names);
    }
  }

  for (size_t k = 0; k < plan.edits.size(); ++k) {
    const RepairEdit& e = plan.edits[k];
    if (e.kind != RepairEdit::Kind::DeleteBinding) continue;
    Location& loc = function_of(e).at(e.location);
    auto it = std::find_if(loc.bindings.begin(), loc.bindings.end(),
                           [&](const Binding& b) { return b.first == e.variable; });
    if (it != loc.bindings.end()) loc.bindings.erase(it);
    touched.insert({e.function, e.location});
    if (applied) applied->push_back(k);
  }

  for (const auto& [name, id] : touched) normalize(out.find(name)->at(id));
  return out;
}

}  // namespace flexrepair
