#include <algorithm>

#include "flexrepair/frontend.hpp"
#include "flexrepair/model.hpp"

namespace flexrepair {
namespace {

const std::map<std::string, std::string> kBinOps = {
    {"+", "Add"}, {"-", "Sub"}, {"*", "Mul"}, {"/", "Div"},
    {"//", "FloorDiv"}, {"%", "Mod"}, {"**", "Pow"}};

const std::map<std::string, std::string> kAugOps = {
    {"+", "AssAdd"}, {"-", "AssSub"}, {"*", "AssMul"}, {"/", "AssDiv"},
    {"//", "AssFloorDiv"}, {"%", "AssMod"}, {"**", "AssPow"}};

const std::map<std::string, std::string> kCmpOps = {
    {"<", "Lt"}, {">", "Gt"}, {"<=", "Le"}, {">=", "Ge"},
    {"==", "Eq"}, {"!=", "NotEq"}, {"in", "In"}, {"not in", "NotIn"}};

// Method calls that rebind their receiver when used as statements.
const std::set<std::string> kMutatingMethods = {"append", "extend", "insert",
                                                "sort",   "reverse", "remove"};

void collect_assigned(const std::vector<Stmt>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::Assign || s.kind == StmtKind::AugAssign ||
        s.kind == StmtKind::For) {
      out.insert(s.targets.begin(), s.targets.end());
    }
    if (s.kind == StmtKind::ExprStmt && s.value->kind == AstExprKind::Call &&
        s.value->children[0]->kind == AstExprKind::Attribute &&
        kMutatingMethods.count(s.value->children[0]->text) &&
        s.value->children[0]->children[0]->kind == AstExprKind::Name) {
      out.insert(s.value->children[0]->children[0]->text);
    }
    collect_assigned(s.body, out);
    for (const auto& c : s.elifs) collect_assigned(c.body, out);
    collect_assigned(s.orelse, out);
  }
}

void collect_names(const AstExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == AstExprKind::Name) out.insert(e->text);
  for (const auto& c : e->children) collect_names(c, out);
}

bool calls_any(const AstExprPtr& e, const std::set<std::string>& names) {
  if (!e) return false;
  if (e->kind == AstExprKind::Call) {
    const auto& callee = e->children[0];
    if ((callee->kind == AstExprKind::Name || callee->kind == AstExprKind::Attribute) &&
        names.count(callee->text)) {
      return true;
    }
  }
  for (const auto& c : e->children) {
    if (calls_any(c, names)) return true;
  }
  return false;
}

struct FoldAbort {};

class Lowerer {
 public:
  Lowerer(const Stmt& def, const ModelOptions& opts, const ImportTable& imports,
          const std::set<std::string>& functions, int& site)
      : def_(def), opts_(opts), imports_(imports), functions_(functions), site_(site) {
    locals_.insert(def.params.begin(), def.params.end());
    collect_assigned(def.body, locals_);
    side_effecting_ = opts.sideEffecting;
    side_effecting_.insert("input");
  }

  ModelFunction run() {
    fn_.name = def_.name;
    fn_.params = def_.params;
    fn_.line = def_.line;
    int entry_line = def_.line;
    if (entry_line == 0 && !def_.body.empty()) entry_line = def_.body.front().line;
    fn_.line = entry_line;
    cur_ = new_loc("around the beginning of function " + def_.name, entry_line);
    fn_.entry = cur_;
    block(def_.body);
    return std::move(fn_);
  }

 private:
  Location& loc() { return fn_.locations.at(cur_); }

  int new_loc(std::string desc, int line) {
    int id = fn_.max_id() + 1;
    Location l;
    l.id = id;
    l.description = std::move(desc);
    l.line = line;
    fn_.locations.emplace(id, std::move(l));
    return id;
  }

  // Binding management ------------------------------------------------------

  // Binds var in the current location. Earlier uses of var' (including in
  // `pending` and in `value` itself) receive the previous expression inline.
  void assign(const std::string& var, Expr value, std::vector<Expr>* pending = nullptr) {
    Location& l = loc();
    auto it = std::find_if(l.bindings.begin(), l.bindings.end(),
                           [&](const Binding& b) { return b.first == var; });
    if (it != l.bindings.end()) {
      Expr old = it->second;
      l.bindings.erase(it);
      for (auto& b : l.bindings) b.second = b.second.substitute(var, true, old);
      if (pending) {
        for (auto& p : *pending) p = p.substitute(var, true, old);
      }
      value = value.substitute(var, true, old);
    }
    l.bindings.emplace_back(var, std::move(value));
  }

  void assign_all(const std::vector<std::string>& targets, std::vector<Expr> values) {
    for (size_t i = 0; i < targets.size(); ++i) {
      Expr v = values[i];
      std::vector<Expr> rest(values.begin() + i + 1, values.end());
      assign(targets[i], v, &rest);
      std::copy(rest.begin(), rest.end(), values.begin() + i + 1);
    }
  }

  // Expressions ---------------------------------------------------------------

  Expr ref(const std::string& name, int line) {
    if (const Expr* bound = loc().find(name)) {
      if (targets_.count(name)) return *bound;
      Expr v = Expr::var(name, true);
      v.line = line;
      return v;
    }
    if (!locals_.count(name) && (functions_.count(name) || builtin_names().count(name))) {
      Expr c = Expr::constant(name, Expr::ConstType::Func);
      c.line = line;
      return c;
    }
    Expr v = Expr::var(name, false);
    v.line = line;
    return v;
  }

  Expr op(std::string name, std::vector<Expr> args, int line) {
    Expr e = Expr::op(std::move(name), std::move(args));
    e.line = line;
    return e;
  }

  Expr expr(const AstExprPtr& e) {
    const auto& ch = e->children;
    int line = e->line;
    switch (e->kind) {
      case AstExprKind::Name:
        return ref(e->text, line);
      case AstExprKind::Number: {
        bool is_float = e->text.find_first_of(".eE") != std::string::npos;
        Expr c = Expr::constant(e->text, is_float ? Expr::ConstType::Float : Expr::ConstType::Int);
        c.line = line;
        return c;
      }
      case AstExprKind::String: {
        Expr c = Expr::constant(e->text, Expr::ConstType::Str);
        c.line = line;
        return c;
      }
      case AstExprKind::Bool: {
        Expr c = Expr::constant(e->text, Expr::ConstType::Bool);
        c.line = line;
        return c;
      }
      case AstExprKind::NoneLit: {
        Expr c = Expr::none();
        c.line = line;
        return c;
      }
      case AstExprKind::List:
      case AstExprKind::Tuple:
        return op(e->kind == AstExprKind::List ? "ListInit" : "TupleInit", exprs(ch, 0), line);
      case AstExprKind::BinOp:
        return op(kBinOps.at(e->text), {expr(ch[0]), expr(ch[1])}, line);
      case AstExprKind::UnaryOp: {
        std::string name = e->text == "not" ? "Not" : (e->text == "-" ? "USub" : "UAdd");
        return op(name, {expr(ch[0])}, line);
      }
      case AstExprKind::Compare: {
        std::vector<Expr> operands = exprs(ch, 0);
        std::vector<Expr> parts;
        for (size_t i = 0; i < e->ops.size(); ++i) {
          parts.push_back(op(kCmpOps.at(e->ops[i]), {operands[i], operands[i + 1]}, line));
        }
        return parts.size() == 1 ? parts[0] : op("And", parts, line);
      }
      case AstExprKind::BoolOp:
        return op(e->text == "and" ? "And" : "Or", exprs(ch, 0), line);
      case AstExprKind::Call:
        return call(e);
      case AstExprKind::Attribute:
        throw LoweringError(line, "attribute access outside a call is not supported");
      case AstExprKind::Subscript:
        return op("GetElement", {expr(ch[0]), expr(ch[1])}, line);
      case AstExprKind::Ternary: {
        Expr body = expr(ch[0]);
        Expr cond = expr(ch[1]);
        Expr orelse = expr(ch[2]);
        return op("ite", {cond, body, orelse}, line);
      }
    }
    throw LoweringError(line, "unknown expression");
  }

  std::vector<Expr> exprs(const std::vector<AstExprPtr>& xs, size_t from) {
    std::vector<Expr> out;
    for (size_t i = from; i < xs.size(); ++i) out.push_back(expr(xs[i]));
    return out;
  }

  // Resolves the operator name and leading receiver argument of a call.
  std::string callee_name(const AstExprPtr& callee, std::vector<Expr>& args) {
    if (callee->kind == AstExprKind::Name) {
      auto it = imports_.bindings.find(callee->text);
      if (it != imports_.bindings.end() && !it->second.member.empty() &&
          it->second.member != "*" && !locals_.count(callee->text)) {
        return it->second.member;
      }
      return callee->text;
    }
    if (callee->kind == AstExprKind::Attribute) {
      const auto& object = callee->children[0];
      if (object->kind == AstExprKind::Name && !locals_.count(object->text)) {
        auto it = imports_.bindings.find(object->text);
        if (it != imports_.bindings.end() && it->second.member.empty()) return callee->text;
      }
      args.push_back(expr(object));
      return callee->text;
    }
    throw LoweringError(callee->line, "unsupported call target");
  }

  Expr call(const AstExprPtr& e) {
    std::vector<Expr> args;
    std::string name = callee_name(e->children[0], args);
    for (size_t i = 1; i < e->children.size(); ++i) args.push_back(expr(e->children[i]));
    Expr c = op(name, std::move(args), e->line);
    c.site = site_++;
    if (!side_effecting_.count(name) || locals_.count(name)) return c;
    std::string var = name + "_val#" + std::to_string(fn_.hoistCounter++);
    assign(var, c);
    Expr v = Expr::var(var, true);
    v.line = e->line;
    return v;
  }

  // Statements --------------------------------------------------------------

  void block(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      if (terminated_) break;
      stmt(s);
    }
  }

  Expr lowered(const AstExprPtr& e, std::set<std::string> targets) {
    targets_ = std::move(targets);
    Expr out = expr(e);
    targets_.clear();
    return out;
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Assign:
        assign_stmt(s);
        break;
      case StmtKind::AugAssign: {
        const std::string& t = s.targets[0];
        targets_ = {t};
        Expr current = ref(t, s.line);
        Expr value = expr(s.value);
        targets_.clear();
        assign(t, op(kAugOps.at(s.op), {current, value}, s.line));
        break;
      }
      case StmtKind::ExprStmt:
        expr_stmt(s);
        break;
      case StmtKind::Return: {
        Expr value = s.value ? lowered(s.value, {"$ret"}) : Expr::none();
        assign("$ret", value);
        loc().trueNext.reset();
        terminated_ = true;
        break;
      }
      case StmtKind::Break:
      case StmtKind::Continue: {
        if (loops_.empty()) {
          throw LoweringError(s.line, std::string("'") +
                                          (s.kind == StmtKind::Break ? "break" : "continue") +
                                          "' outside loop");
        }
        loc().trueNext = s.kind == StmtKind::Break ? loops_.back().second : loops_.back().first;
        terminated_ = true;
        break;
      }
      case StmtKind::If:
        if_stmt(s);
        break;
      case StmtKind::While:
      case StmtKind::For:
        loop(s);
        break;
      case StmtKind::FunctionDef:
        throw LoweringError(s.line, "nested function");
      case StmtKind::Import:
      case StmtKind::Pass:
        break;
    }
  }

  void assign_stmt(const Stmt& s) {
    std::set<std::string> targets(s.targets.begin(), s.targets.end());
    if (!s.tupleTarget) {
      assign(s.targets[0], lowered(s.value, targets));
      return;
    }
    std::vector<Expr> values;
    const auto& v = s.value;
    if ((v->kind == AstExprKind::Tuple || v->kind == AstExprKind::List) &&
        v->children.size() == s.targets.size()) {
      targets_ = targets;
      values = exprs(v->children, 0);
      targets_.clear();
    } else {
      Expr rhs = lowered(v, targets);
      for (size_t i = 0; i < s.targets.size(); ++i) {
        Expr idx = Expr::constant(std::to_string(i), Expr::ConstType::Int);
        values.push_back(op("GetElement", {rhs, idx}, s.line));
      }
    }
    assign_all(s.targets, std::move(values));
  }

  void expr_stmt(const Stmt& s) {
    const auto& v = s.value;
    if (v->kind != AstExprKind::Call) return;
    const auto& callee = v->children[0];
    if (callee->kind == AstExprKind::Name && callee->text == "print" &&
        !locals_.count("print") && !functions_.count("print")) {
      targets_ = {"$out"};
      std::vector<Expr> args{ref("$out", s.line)};
      for (size_t i = 1; i < v->children.size(); ++i) args.push_back(expr(v->children[i]));
      targets_.clear();
      Expr p = op("print", std::move(args), s.line);
      p.site = site_++;
      assign("$out", p);
      return;
    }
    if (callee->kind == AstExprKind::Attribute && kMutatingMethods.count(callee->text) &&
        callee->children[0]->kind == AstExprKind::Name &&
        !imports_.bindings.count(callee->children[0]->text)) {
      const std::string& target = callee->children[0]->text;
      assign(target, lowered(v, {target}));
      return;
    }
    std::string var = "$call#" + std::to_string(fn_.callCounter++);
    assign(var, lowered(v, {}));
  }

  std::string kind_word(const Stmt& s) const { return s.kind == StmtKind::For ? "for" : "while"; }

  void loop(const Stmt& s) {
    std::string kw = kind_word(s);
    std::string line = std::to_string(s.line);
    int k = -1;
    std::string iter, ind;
    if (s.kind == StmtKind::For) {
      k = fn_.loopCounter++;
      iter = "iter#" + std::to_string(k);
      ind = "ind#" + std::to_string(k);
      assign(iter, lowered(s.value, {iter}));
      assign(ind, Expr::constant("0", Expr::ConstType::Int));
    }
    int guard = new_loc("the condition of the '" + kw + "' loop at line " + line, s.line);
    int exit = new_loc("*after* the '" + kw + "' loop starting at line " + line, s.line);
    int body_line = s.body.empty() ? s.line : s.body.front().line;
    int body = new_loc("inside the body of the '" + kw + "' loop beginning at line " +
                           std::to_string(body_line),
                       body_line);
    loc().trueNext = guard;

    cur_ = guard;
    if (s.kind == StmtKind::For) {
      Expr len = op("len", {Expr::var(iter)}, s.line);
      assign("$cond", op("Lt", {Expr::var(ind), len}, s.line));
    } else {
      assign("$cond", lowered(s.value, {}));
    }
    loc().trueNext = body;
    loc().falseNext = exit;

    cur_ = body;
    if (s.kind == StmtKind::For) {
      Expr element = op("GetElement", {Expr::var(iter), Expr::var(ind)}, s.line);
      if (!s.tupleTarget) {
        assign(s.targets[0], element);
      } else {
        std::vector<Expr> parts;
        for (size_t i = 0; i < s.targets.size(); ++i) {
          Expr idx = Expr::constant(std::to_string(i), Expr::ConstType::Int);
          parts.push_back(op("GetElement", {element, idx}, s.line));
        }
        assign_all(s.targets, parts);
      }
      assign(ind, op("Add", {Expr::var(ind), Expr::constant("1", Expr::ConstType::Int)}, s.line));
    }
    loops_.emplace_back(guard, exit);
    block(s.body);
    loops_.pop_back();
    if (!terminated_) loc().trueNext = guard;
    terminated_ = false;
    cur_ = exit;
  }

  static bool foldable(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      switch (s.kind) {
        case StmtKind::Assign:
        case StmtKind::AugAssign:
        case StmtKind::ExprStmt:
        case StmtKind::Pass:
        case StmtKind::Import:
          break;
        case StmtKind::If: {
          std::set<std::string> assigned, used;
          collect_assigned(s.body, assigned);
          for (const auto& c : s.elifs) collect_assigned(c.body, assigned);
          collect_assigned(s.orelse, assigned);
          collect_names(s.value, used);
          for (const auto& c : s.elifs) collect_names(c.cond, used);
          for (const auto& n : used) {
            if (assigned.count(n)) return false;
          }
          if (!foldable(s.body) || !foldable(s.orelse)) return false;
          for (const auto& c : s.elifs) {
            if (!foldable(c.body)) return false;
          }
          break;
        }
        default:
          return false;
      }
    }
    return true;
  }

  bool mentions_side_effects(const std::vector<Stmt>& body) const {
    for (const auto& s : body) {
      if (calls_any(s.value, side_effecting_)) return true;
      if (mentions_side_effects(s.body) || mentions_side_effects(s.orelse)) return true;
      for (const auto& c : s.elifs) {
        if (calls_any(c.cond, side_effecting_) || mentions_side_effects(c.body)) return true;
      }
    }
    return false;
  }

  // elif chains become an If nested in the else branch.
  static Stmt else_part(const Stmt& s, std::vector<Stmt>& holder) {
    Stmt nested;
    nested.kind = StmtKind::If;
    nested.line = s.elifs[0].line;
    nested.value = s.elifs[0].cond;
    nested.body = s.elifs[0].body;
    nested.elifs.assign(s.elifs.begin() + 1, s.elifs.end());
    nested.orelse = s.orelse;
    holder = {nested};
    return nested;
  }

  bool try_fold(const Stmt& s) {
    Stmt whole = s;
    if (!opts_.ternaryOptimization || !foldable({whole}) || mentions_side_effects({whole})) {
      return false;
    }
    const ModelFunction snapshot = fn_;
    const int snapshot_cur = cur_;
    auto rollback = [&] {
      fn_ = snapshot;
      cur_ = snapshot_cur;
      if (folding_ > 0) throw FoldAbort{};
      return false;
    };
    Expr cond = lowered(s.value, {});
    const Location saved = loc();

    ++folding_;
    try {
      block(s.body);
    } catch (const FoldAbort&) {
      --folding_;
      return rollback();
    }
    Location then_loc = loc();
    loc() = saved;
    try {
      if (!s.elifs.empty()) {
        std::vector<Stmt> holder;
        else_part(s, holder);
        block(holder);
      } else {
        block(s.orelse);
      }
    } catch (const FoldAbort&) {
      --folding_;
      return rollback();
    }
    --folding_;
    Location else_loc = loc();
    loc() = saved;

    auto changed_in = [&](const Location& branch, const std::string& var) {
      const Expr* now = branch.find(var);
      const Expr* before = saved.find(var);
      return now && (!before || *now != *before);
    };
    std::vector<std::string> order;
    for (const Location* branch : {&then_loc, &else_loc}) {
      for (const auto& b : branch->bindings) {
        if (changed_in(*branch, b.first) &&
            std::find(order.begin(), order.end(), b.first) == order.end()) {
          order.push_back(b.first);
        }
      }
    }
    auto branch_value = [&](const Location& branch, const std::string& var) {
      if (changed_in(branch, var)) return *branch.find(var);
      return Expr::var(var, saved.binds(var));
    };
    std::vector<Expr> merged;
    for (size_t i = 0; i < order.size(); ++i) {
      Expr value = op("ite", {cond, branch_value(then_loc, order[i]),
                              branch_value(else_loc, order[i])},
                      s.line);
      for (const auto& used : value.vars(true)) {
        auto pos = std::find(order.begin(), order.end(), used);
        if (pos != order.end() && static_cast<size_t>(pos - order.begin()) > i) {
          return rollback();
        }
      }
      merged.push_back(value);
    }
    for (size_t i = 0; i < order.size(); ++i) assign(order[i], merged[i]);
    return true;
  }

  void if_stmt(const Stmt& s) {
    if (try_fold(s)) return;
    std::string line = std::to_string(s.line);
    int cond = new_loc("the condition of the if-statement at line " + line, s.line);
    int after = new_loc("*after* the if-statement beginning at line " + line, s.line);
    int then_line = s.body.empty() ? s.line : s.body.front().line;
    int then_loc = new_loc("inside the if-branch starting at line " + std::to_string(then_line),
                           then_line);
    bool has_else = !s.elifs.empty() || !s.orelse.empty();
    int else_loc = 0;
    if (has_else) {
      int else_line = !s.elifs.empty() ? s.elifs.front().line : s.orelse.front().line;
      else_loc = new_loc("inside the else-branch starting at line " + std::to_string(else_line),
                         else_line);
    }
    loc().trueNext = cond;

    cur_ = cond;
    assign("$cond", lowered(s.value, {}));
    loc().trueNext = then_loc;
    loc().falseNext = has_else ? else_loc : after;

    cur_ = then_loc;
    block(s.body);
    if (!terminated_) loc().trueNext = after;
    terminated_ = false;

    if (has_else) {
      cur_ = else_loc;
      if (!s.elifs.empty()) {
        std::vector<Stmt> holder;
        else_part(s, holder);
        block(holder);
      } else {
        block(s.orelse);
      }
      if (!terminated_) loc().trueNext = after;
      terminated_ = false;
    }
    cur_ = after;
  }

  const Stmt& def_;
  const ModelOptions& opts_;
  const ImportTable& imports_;
  const std::set<std::string>& functions_;
  int& site_;
  std::set<std::string> locals_;
  std::set<std::string> side_effecting_;
  std::set<std::string> targets_;
  std::vector<std::pair<int, int>> loops_;  // (guard, exit)
  ModelFunction fn_;
  int cur_ = 0;
  bool terminated_ = false;
  int folding_ = 0;
};

}  // namespace

Model build_model(const Ast& ast, const ModelOptions& opts) {
  Model model;
  model.imports = collect_imports(ast);
  std::set<std::string> functions;
  for (const auto& item : ast.items) {
    if (!functions.insert(item.name).second) {
      throw LoweringError(item.line, "duplicate function '" + item.name + "'");
    }
  }
  int site = 0;
  for (const auto& item : ast.items) {
    model.functions.push_back(Lowerer(item, opts, model.imports, functions, site).run());
  }
  return model;
}

}  // namespace flexrepair
