#include <sstream>

#include "flexrepair/model.hpp"

namespace flexrepair {

const Expr* Location::find(const std::string& var) const {
  for (const auto& b : bindings) {
    if (b.first == var) return &b.second;
  }
  return nullptr;
}

Expr* Location::find(const std::string& var) {
  for (auto& b : bindings) {
    if (b.first == var) return &b.second;
  }
  return nullptr;
}

const Location& ModelFunction::at(int id) const {
  auto it = locations.find(id);
  if (it == locations.end()) throw std::out_of_range("no location " + std::to_string(id));
  return it->second;
}

Location& ModelFunction::at(int id) {
  auto it = locations.find(id);
  if (it == locations.end()) throw std::out_of_range("no location " + std::to_string(id));
  return it->second;
}

std::set<std::string> ModelFunction::variables() const {
  std::set<std::string> out;
  for (const auto& [id, loc] : locations) {
    for (const auto& b : loc.bindings) out.insert(b.first);
  }
  return out;
}

const ModelFunction* Model::find(const std::string& name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

ModelFunction* Model::find(const std::string& name) {
  for (auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const std::set<std::string>& builtin_names() {
  static const std::set<std::string> names = {
      "print", "input", "len",    "range",  "map",   "int",  "float",
      "str",   "list",  "sum",    "max",    "min",   "abs",  "sorted",
      "split", "join",  "format", "sqrt",   "ceil",  "floor"};
  return names;
}

bool is_special_var(const std::string& var) {
  return var == "$cond" || var == "$out" || var == "$ret" || var.rfind("$call#", 0) == 0;
}

std::string pretty_print(const ModelFunction& fn) {
  static const std::string kRule(35, '-');
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, loc] : fn.locations) {
    if (!first) os << "\n";
    first = false;
    os << "Loc " << id << " (" << loc.description << ")\n" << kRule << "\n";
    for (const auto& [var, e] : loc.bindings) os << "  " << var << " := " << e.str() << "\n";
    auto target = [](const std::optional<int>& t) {
      return t ? std::to_string(*t) : std::string("None");
    };
    os << kRule << "\n  True -> " << target(loc.trueNext) << ", False -> "
       << target(loc.falseNext) << "\n";
  }
  return os.str();
}

std::string pretty_print(const Model& model) {
  if (model.functions.size() == 1 && model.functions[0].name == "main") {
    return pretty_print(model.functions[0]);
  }
  std::ostringstream os;
  for (size_t i = 0; i < model.functions.size(); ++i) {
    const auto& fn = model.functions[i];
    if (i) os << "\n";
    os << "Function " << fn.name << "(";
    for (size_t p = 0; p < fn.params.size(); ++p) os << (p ? ", " : "") << fn.params[p];
    os << ")\n\n" << pretty_print(fn);
  }
  return os.str();
}

Model hoist_side_effecting_calls(const Model& model, const std::set<std::string>& names) {
  std::set<std::string> effecting = names;
  effecting.insert("input");
  Model out = model;
  for (auto& fn : out.functions) {
    for (auto& [id, loc] : fn.locations) {
      std::map<int, std::string> hoisted;  // site -> variable
      std::vector<Binding> rebuilt;
      for (const auto& [var, e] : loc.bindings) {
        Expr rewritten = e.map([&](const Expr& node) {
          if (!node.is_op() || !effecting.count(node.name) || node.site < 0) return node;
          auto it = hoisted.find(node.site);
          if (it == hoisted.end()) {
            std::string fresh = node.name + "_val#" + std::to_string(fn.hoistCounter++);
            it = hoisted.emplace(node.site, fresh).first;
            rebuilt.emplace_back(fresh, node);
          }
          return Expr::var(it->second, true);
        });
        rebuilt.emplace_back(var, rewritten);
      }
      loc.bindings = std::move(rebuilt);
    }
  }
  return out;
}

}  // namespace flexrepair
