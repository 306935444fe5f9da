#include "flexrepair/cfg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace flexrepair {

namespace {

bool loop_name(const std::string& name) {
  return name.rfind("iter#", 0) == 0 || name.rfind("ind#", 0) == 0;
}

std::string loop_label(const std::string& name, const CfgOptions& opts) {
  if (!opts.normalizeLoopNames) return name;
  return name.substr(0, name.find('#') + 1);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

LabelMultiset extract_labels(const Expr& e, const CfgOptions& opts) {
  LabelMultiset out;
  e.walk([&](const Expr& n) {
    switch (n.kind) {
      case Expr::Kind::Op:
      case Expr::Kind::Const:
        ++out[n.name];
        break;
      case Expr::Kind::Var:
        if (n.name == "$cond") ++out["cond"];
        else if (loop_name(n.name)) ++out[loop_label(n.name, opts)];
        break;
    }
  });
  return out;
}

LabelMultiset binding_labels(const Binding& b, const CfgOptions& opts) {
  LabelMultiset out = extract_labels(b.second, opts);
  if (b.first == "$cond") ++out["cond"];
  else if (loop_name(b.first)) ++out[loop_label(b.first, opts)];
  return out;
}

void add_labels(LabelMultiset& into, const LabelMultiset& more) {
  for (const auto& [label, n] : more) into[label] += n;
}

double jaccard(const LabelMultiset& a, const LabelMultiset& b) {
  long lo = 0, hi = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      hi += i->second;
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      hi += j->second;
      ++j;
    } else {
      lo += std::min(i->second, j->second);
      hi += std::max(i->second, j->second);
      ++i;
      ++j;
    }
  }
  if (hi == 0) return 1.0;
  return static_cast<double>(lo) / static_cast<double>(hi);
}

std::string format_labels(const LabelMultiset& labels) {
  std::string out = "{";
  bool first = true;
  for (const auto& [label, n] : labels) {
    for (int k = 0; k < n; ++k) {
      out += (first ? "" : ", ") + label;
      first = false;
    }
  }
  return out + "}";
}

const CfgNode& Cfg::node(int id) const { return nodes.at(index_of(id)); }

size_t Cfg::index_of(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("no CFG node " + std::to_string(id));
  return it->second;
}

int Cfg::true_next(int id) const {
  for (const auto& e : edges) {
    if (e.src == id && e.polarity) return e.dst;
  }
  return kSinkId;
}

int Cfg::false_next(int id) const {
  for (const auto& e : edges) {
    if (e.src == id && !e.polarity) return e.dst;
  }
  return kSinkId;
}

std::vector<int> Cfg::location_ids() const {
  std::vector<int> ids;
  for (const auto& n : nodes) {
    if (!n.sink()) ids.push_back(n.id);
  }
  return ids;
}

Cfg build_cfg(const ModelFunction& fn, const CfgOptions& opts) {
  Cfg cfg;
  CfgNode sink;
  sink.description = "None";
  cfg.nodes.push_back(sink);
  cfg.index_[kSinkId] = 0;
  for (const auto& [id, loc] : fn.locations) {
    CfgNode n;
    n.id = id;
    n.line = loc.line;
    n.description = loc.description;
    n.bindings = loc.bindings;
    for (const auto& b : loc.bindings) add_labels(n.labels, binding_labels(b, opts));
    cfg.index_[id] = cfg.nodes.size();
    cfg.nodes.push_back(std::move(n));
    cfg.edges.push_back(CfgEdge{id, loc.trueNext.value_or(kSinkId), true});
    cfg.edges.push_back(CfgEdge{id, loc.falseNext.value_or(kSinkId), false});
  }
  cfg.entry = fn.locations.count(fn.entry) ? fn.entry : kSinkId;
  return cfg;
}

std::string to_dot(const Cfg& cfg, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(name) << "\" {\n";
  for (const auto& n : cfg.nodes) {
    std::string text = n.sink() ? "None" : std::to_string(n.id) + "\\n" +
                       dot_escape(n.labels.empty() ? "Empty" : format_labels(n.labels));
    out << "  n" << n.id << " [label=\"" << text << "\"";
    if (n.sink()) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (const auto& e : cfg.edges) {
    out << "  n" << e.src << " -> n" << e.dst;
    if (!e.polarity) out << " [style=dotted]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace flexrepair
