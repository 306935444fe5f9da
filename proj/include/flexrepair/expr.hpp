#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace flexrepair {

/// Model expression: a variable use, a constant, or an operator application.
struct Expr {
  enum class Kind { Var, Const, Op };
  enum class ConstType { Int, Float, Str, Bool, None, Func };

  Kind kind = Kind::Const;
  // Variable name, constant lexeme (strings unquoted) or operator name.
  std::string name;
  bool primed = false;
  ConstType ctype = ConstType::None;
  std::vector<Expr> args;
  // Syntactic call-site id, shared by copies made during nesting. -1 if none.
  int site = -1;
  int line = 0;

  static Expr var(std::string name, bool primed = false);
  static Expr constant(std::string lexeme, ConstType type);
  static Expr none();
  static Expr op(std::string name, std::vector<Expr> args);

  bool is_var() const { return kind == Kind::Var; }
  bool is_const() const { return kind == Kind::Const; }
  bool is_op() const { return kind == Kind::Op; }

  /// Structural equality; ignores site and line.
  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }
  bool operator<(const Expr& other) const;

  /// Rendering used by the pretty printer, e.g. `AssAdd(b, x')`.
  std::string str() const;

  /// Visits every node in pre-order.
  void walk(const std::function<void(const Expr&)>& fn) const;

  /// Names of variables used, split by primed flag.
  std::set<std::string> vars(bool primed) const;
  bool uses(const std::string& name, bool primed) const;

  /// Replaces every Var(name, primed) with `with`.
  Expr substitute(const std::string& name, bool primed, const Expr& with) const;

  /// Applies fn bottom-up to every node.
  Expr map(const std::function<Expr(const Expr&)>& fn) const;
};

/// Python-style repr of a string: single quotes unless the text contains a
/// single quote and no double quote.
std::string py_repr(const std::string& s);

}  // namespace flexrepair
