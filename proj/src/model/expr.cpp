#include "flexrepair/expr.hpp"

#include <tuple>

namespace flexrepair {

Expr Expr::var(std::string name, bool primed) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  e.primed = primed;
  return e;
}

Expr Expr::constant(std::string lexeme, ConstType type) {
  Expr e;
  e.kind = Kind::Const;
  e.name = std::move(lexeme);
  e.ctype = type;
  return e;
}

Expr Expr::none() { return constant("None", ConstType::None); }

Expr Expr::op(std::string name, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::Op;
  e.name = std::move(name);
  e.args = std::move(args);
  return e;
}

bool Expr::operator==(const Expr& o) const {
  if (kind != o.kind || name != o.name) return false;
  switch (kind) {
    case Kind::Var:
      return primed == o.primed;
    case Kind::Const:
      return ctype == o.ctype;
    case Kind::Op:
      return args == o.args;
  }
  return false;
}

bool Expr::operator<(const Expr& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (name != o.name) return name < o.name;
  if (kind == Kind::Var) return primed < o.primed;
  if (kind == Kind::Const) return ctype < o.ctype;
  return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(), o.args.end());
}

std::string py_repr(const std::string& s) {
  char q = (s.find('\'') != std::string::npos && s.find('"') == std::string::npos) ? '"' : '\'';
  std::string out(1, q);
  static const char* hex = "0123456789abcdef";
  for (unsigned char c : s) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == static_cast<unsigned char>(q)) {
      out += '\\';
      out += q;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else if (c == '\r') {
      out += "\\r";
    } else if (c < 0x20 || c == 0x7f) {
      out += "\\x";
      out += hex[c >> 4];
      out += hex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  out += q;
  return out;
}

std::string Expr::str() const {
  switch (kind) {
    case Kind::Var:
      return primed ? name + "'" : name;
    case Kind::Const:
      return ctype == ConstType::Str ? py_repr(name) : name;
    case Kind::Op: {
      std::string out = name + "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += args[i].str();
      }
      return out + ")";
    }
  }
  return "";
}

void Expr::walk(const std::function<void(const Expr&)>& fn) const {
  fn(*this);
  for (const auto& a : args) a.walk(fn);
}

std::set<std::string> Expr::vars(bool want_primed) const {
  std::set<std::string> out;
  walk([&](const Expr& e) {
    if (e.kind == Kind::Var && e.primed == want_primed) out.insert(e.name);
  });
  return out;
}

bool Expr::uses(const std::string& var_name, bool want_primed) const {
  if (kind == Kind::Var) return name == var_name && primed == want_primed;
  for (const auto& a : args) {
    if (a.uses(var_name, want_primed)) return true;
  }
  return false;
}

Expr Expr::substitute(const std::string& var_name, bool want_primed, const Expr& with) const {
  if (kind == Kind::Var) {
    return (name == var_name && primed == want_primed) ? with : *this;
  }
  if (kind == Kind::Const) return *this;
  Expr out = *this;
  for (auto& a : out.args) a = a.substitute(var_name, want_primed, with);
  return out;
}

Expr Expr::map(const std::function<Expr(const Expr&)>& fn) const {
  Expr out = *this;
  for (auto& a : out.args) a = a.map(fn);
  return fn(out);
}

}  // namespace flexrepair
