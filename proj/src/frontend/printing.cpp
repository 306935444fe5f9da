#include <sstream>

#include "flexrepair/frontend.hpp"

namespace flexrepair {
namespace {

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\0': out += "\\0"; break;
      default: out += c;
    }
  }
  return out + "'";
}

std::string expr_src(const AstExprPtr& e, bool nested);

std::string join_src(const std::vector<AstExprPtr>& xs, size_t from) {
  std::string out;
  for (size_t i = from; i < xs.size(); ++i) {
    if (i > from) out += ", ";
    out += expr_src(xs[i], false);
  }
  return out;
}

std::string expr_src(const AstExprPtr& e, bool nested) {
  auto wrap = [&](const std::string& s) { return nested ? "(" + s + ")" : s; };
  const auto& ch = e->children;
  switch (e->kind) {
    case AstExprKind::Name:
    case AstExprKind::Number:
    case AstExprKind::Bool:
    case AstExprKind::NoneLit:
      return e->text;
    case AstExprKind::String:
      return quote(e->text);
    case AstExprKind::List:
      return "[" + join_src(ch, 0) + "]";
    case AstExprKind::Tuple:
      if (ch.size() == 1) return "(" + expr_src(ch[0], false) + ",)";
      return "(" + join_src(ch, 0) + ")";
    case AstExprKind::BinOp:
      return wrap(expr_src(ch[0], true) + " " + e->text + " " + expr_src(ch[1], true));
    case AstExprKind::UnaryOp:
      return wrap(e->text + (e->text == "not" ? " " : "") + expr_src(ch[0], true));
    case AstExprKind::Compare: {
      std::string s = expr_src(ch[0], true);
      for (size_t i = 0; i < e->ops.size(); ++i) {
        s += " " + e->ops[i] + " " + expr_src(ch[i + 1], true);
      }
      return wrap(s);
    }
    case AstExprKind::BoolOp: {
      std::string s;
      for (size_t i = 0; i < ch.size(); ++i) {
        if (i) s += " " + e->text + " ";
        s += expr_src(ch[i], true);
      }
      return wrap(s);
    }
    case AstExprKind::Call:
      return expr_src(ch[0], true) + "(" + join_src(ch, 1) + ")";
    case AstExprKind::Attribute:
      return expr_src(ch[0], true) + "." + e->text;
    case AstExprKind::Subscript:
      return expr_src(ch[0], true) + "[" + expr_src(ch[1], false) + "]";
    case AstExprKind::Ternary:
      return wrap(expr_src(ch[0], true) + " if " + expr_src(ch[1], true) + " else " +
                  expr_src(ch[2], true));
  }
  return "";
}

std::string targets_src(const Stmt& s) {
  std::string out;
  for (size_t i = 0; i < s.targets.size(); ++i) {
    if (i) out += ", ";
    out += s.targets[i];
  }
  if (s.tupleTarget && s.targets.size() == 1) out += ",";
  return out;
}

void body_src(std::ostringstream& os, const std::vector<Stmt>& body, int indent);

void stmt_src(std::ostringstream& os, const Stmt& s, int indent) {
  std::string pad(indent * 4, ' ');
  switch (s.kind) {
    case StmtKind::FunctionDef: {
      os << pad << "def " << s.name << "(";
      for (size_t i = 0; i < s.params.size(); ++i) os << (i ? ", " : "") << s.params[i];
      os << "):\n";
      body_src(os, s.body, indent + 1);
      break;
    }
    case StmtKind::Assign:
      os << pad << targets_src(s) << " = " << expr_src(s.value, false) << "\n";
      break;
    case StmtKind::AugAssign:
      os << pad << s.targets[0] << " " << s.op << "= " << expr_src(s.value, false) << "\n";
      break;
    case StmtKind::If:
      os << pad << "if " << expr_src(s.value, false) << ":\n";
      body_src(os, s.body, indent + 1);
      for (const auto& c : s.elifs) {
        os << pad << "elif " << expr_src(c.cond, false) << ":\n";
        body_src(os, c.body, indent + 1);
      }
      if (!s.orelse.empty()) {
        os << pad << "else:\n";
        body_src(os, s.orelse, indent + 1);
      }
      break;
    case StmtKind::While:
      os << pad << "while " << expr_src(s.value, false) << ":\n";
      body_src(os, s.body, indent + 1);
      break;
    case StmtKind::For:
      os << pad << "for " << targets_src(s) << " in " << expr_src(s.value, false) << ":\n";
      body_src(os, s.body, indent + 1);
      break;
    case StmtKind::ExprStmt:
      os << pad << expr_src(s.value, false) << "\n";
      break;
    case StmtKind::Return:
      os << pad << "return";
      if (s.value) os << " " << expr_src(s.value, false);
      os << "\n";
      break;
    case StmtKind::Import:
      for (const auto& b : s.imports) {
        os << pad;
        if (b.member.empty()) {
          os << "import " << b.module;
          if (b.alias != b.module) os << " as " << b.alias;
        } else if (b.member == "*") {
          os << "from " << b.module << " import *";
        } else {
          os << "from " << b.module << " import " << b.member;
          if (b.alias != b.member) os << " as " << b.alias;
        }
        os << "\n";
      }
      break;
    case StmtKind::Break:
      os << pad << "break\n";
      break;
    case StmtKind::Continue:
      os << pad << "continue\n";
      break;
    case StmtKind::Pass:
      os << pad << "pass\n";
      break;
  }
}

void body_src(std::ostringstream& os, const std::vector<Stmt>& body, int indent) {
  if (body.empty()) {
    os << std::string(indent * 4, ' ') << "pass\n";
    return;
  }
  for (const auto& s : body) stmt_src(os, s, indent);
}

bool same_expr(const AstExprPtr& a, const AstExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->text != b->text || a->ops != b->ops ||
      a->children.size() != b->children.size()) {
    return false;
  }
  for (size_t i = 0; i < a->children.size(); ++i) {
    if (!same_expr(a->children[i], b->children[i])) return false;
  }
  return true;
}

bool same_body(const std::vector<Stmt>& a, const std::vector<Stmt>& b);

bool same_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.params != b.params ||
      a.targets != b.targets || a.tupleTarget != b.tupleTarget || a.op != b.op ||
      a.imports != b.imports || !same_expr(a.value, b.value) || !same_body(a.body, b.body) ||
      !same_body(a.orelse, b.orelse) || a.elifs.size() != b.elifs.size()) {
    return false;
  }
  for (size_t i = 0; i < a.elifs.size(); ++i) {
    if (!same_expr(a.elifs[i].cond, b.elifs[i].cond) ||
        !same_body(a.elifs[i].body, b.elifs[i].body)) {
      return false;
    }
  }
  return true;
}

bool same_body(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!same_stmt(a[i], b[i])) return false;
  }
  return true;
}

const char* kind_name(AstExprKind k) {
  switch (k) {
    case AstExprKind::Name: return "Name";
    case AstExprKind::Number: return "Number";
    case AstExprKind::String: return "String";
    case AstExprKind::Bool: return "Bool";
    case AstExprKind::NoneLit: return "None";
    case AstExprKind::List: return "List";
    case AstExprKind::Tuple: return "Tuple";
    case AstExprKind::BinOp: return "BinOp";
    case AstExprKind::UnaryOp: return "UnaryOp";
    case AstExprKind::Compare: return "Compare";
    case AstExprKind::BoolOp: return "BoolOp";
    case AstExprKind::Call: return "Call";
    case AstExprKind::Attribute: return "Attribute";
    case AstExprKind::Subscript: return "Subscript";
    case AstExprKind::Ternary: return "Ternary";
  }
  return "?";
}

const char* kind_name(StmtKind k) {
  switch (k) {
    case StmtKind::FunctionDef: return "FunctionDef";
    case StmtKind::Assign: return "Assign";
    case StmtKind::AugAssign: return "AugAssign";
    case StmtKind::If: return "If";
    case StmtKind::While: return "While";
    case StmtKind::For: return "For";
    case StmtKind::ExprStmt: return "ExprStmt";
    case StmtKind::Return: return "Return";
    case StmtKind::Import: return "Import";
    case StmtKind::Break: return "Break";
    case StmtKind::Continue: return "Continue";
    case StmtKind::Pass: return "Pass";
  }
  return "?";
}

void dump_expr(std::ostringstream& os, const AstExprPtr& e, int depth) {
  os << std::string(depth * 2, ' ') << kind_name(e->kind);
  if (e->kind == AstExprKind::String) {
    os << " " << quote(e->text);
  } else if (!e->text.empty()) {
    os << " " << e->text;
  }
  for (const auto& op : e->ops) os << " [" << op << "]";
  os << "  @" << e->line << "\n";
  for (const auto& c : e->children) dump_expr(os, c, depth + 1);
}

void dump_body(std::ostringstream& os, const std::vector<Stmt>& body, int depth);

void dump_stmt(std::ostringstream& os, const Stmt& s, int depth) {
  std::string pad(depth * 2, ' ');
  os << pad << kind_name(s.kind);
  if (!s.name.empty()) os << " " << s.name;
  if (s.kind == StmtKind::FunctionDef) {
    os << "(";
    for (size_t i = 0; i < s.params.size(); ++i) os << (i ? ", " : "") << s.params[i];
    os << ")";
  }
  if (!s.targets.empty()) os << " " << targets_src(s);
  if (!s.op.empty()) os << " " << s.op << "=";
  for (const auto& b : s.imports) {
    os << " {" << b.alias << ": " << (b.member.empty() ? "" : b.member + ", ") << b.module << "}";
  }
  os << "  @" << s.line << "\n";
  if (s.value) dump_expr(os, s.value, depth + 1);
  dump_body(os, s.body, depth + 1);
  for (const auto& c : s.elifs) {
    os << pad << "Elif  @" << c.line << "\n";
    dump_expr(os, c.cond, depth + 1);
    dump_body(os, c.body, depth + 1);
  }
  if (!s.orelse.empty()) {
    os << pad << "Else\n";
    dump_body(os, s.orelse, depth + 1);
  }
}

void dump_body(std::ostringstream& os, const std::vector<Stmt>& body, int depth) {
  for (const auto& s : body) dump_stmt(os, s, depth);
}

void imports_in(const std::vector<Stmt>& body, ImportTable& table) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::Import) {
      for (const auto& b : s.imports) table.bindings[b.alias] = b;
    }
    imports_in(s.body, table);
    for (const auto& c : s.elifs) imports_in(c.body, table);
    imports_in(s.orelse, table);
  }
}

}  // namespace

ImportTable collect_imports(const Ast& ast) {
  ImportTable table;
  imports_in(ast.items, table);
  return table;
}

std::string to_source(const Ast& ast) {
  std::ostringstream os;
  for (size_t i = 0; i < ast.items.size(); ++i) {
    if (i) os << "\n";
    stmt_src(os, ast.items[i], 0);
  }
  return os.str();
}

bool same_structure(const Ast& a, const Ast& b) { return same_body(a.items, b.items); }

std::string dump(const Ast& ast) {
  std::ostringstream os;
  dump_body(os, ast.items, 0);
  return os.str();
}

}  // namespace flexrepair
