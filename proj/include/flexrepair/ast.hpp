#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexrepair {

/// Raw source text plus a label used in diagnostics.
struct SourceProgram {
  std::string text;
  std::string origin;
};

enum class AstExprKind {
  Name,
  Number,
  String,
  Bool,
  NoneLit,
  List,
  Tuple,
  BinOp,
  UnaryOp,
  Compare,
  BoolOp,
  Call,
  Attribute,
  Subscript,
  Ternary,
};

struct AstExpr;
using AstExprPtr = std::shared_ptr<const AstExpr>;

// Layout of `children` per kind:
//   BinOp      {lhs, rhs}, text = operator
//   UnaryOp    {operand}, text = "-", "+" or "not"
//   Compare    {first, rest...}, ops[i] joins children[i] and children[i+1]
//   BoolOp     {operands...}, text = "and" / "or"
//   Call       {callee, args...}
//   Attribute  {object}, text = attribute name
//   Subscript  {object, index}
//   Ternary    {body, cond, orelse}
struct AstExpr {
  AstExprKind kind = AstExprKind::Name;
  std::string text;
  std::vector<std::string> ops;
  std::vector<AstExprPtr> children;
  int line = 0;
};

enum class StmtKind {
  FunctionDef,
  Assign,
  AugAssign,
  If,
  While,
  For,
  ExprStmt,
  Return,
  Import,
  Break,
  Continue,
  Pass,
};

/// One `import` form. `member` is empty for whole-module imports and "*" for
/// wildcard imports.
struct ImportBinding {
  std::string alias;
  std::string member;
  std::string module;

  bool operator==(const ImportBinding&) const = default;
};

struct Stmt;

struct ElifClause {
  AstExprPtr cond;
  std::vector<Stmt> body;
  int line = 0;
};

struct Stmt {
  StmtKind kind = StmtKind::Pass;
  int line = 0;

  // FunctionDef
  std::string name;
  std::vector<std::string> params;

  // Assign / For targets. A single plain name has tupleTarget == false.
  std::vector<std::string> targets;
  bool tupleTarget = false;

  // AugAssign operator ("+", "-", ...).
  std::string op;

  // Assign/AugAssign value, If/While condition, For iterable, ExprStmt call,
  // Return value (may be null).
  AstExprPtr value;

  std::vector<Stmt> body;
  std::vector<ElifClause> elifs;
  std::vector<Stmt> orelse;

  std::vector<ImportBinding> imports;
};

/// Parsed program. Top-level statements are wrapped into a function named
/// `main`, so every item is a FunctionDef.
struct Ast {
  std::vector<Stmt> items;
};

/// alias -> binding. Wildcard imports use the alias "*".
struct ImportTable {
  std::map<std::string, ImportBinding> bindings;

  bool empty() const { return bindings.empty(); }
  bool operator==(const ImportTable&) const = default;
};

class FrontendError : public std::runtime_error {
 public:
  FrontendError(int line, const std::string& what)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class SyntaxError : public FrontendError {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : FrontendError(line, "line " + std::to_string(line) + ":" +
                                std::to_string(column) + ": " + message),
        column_(column),
        message_(message) {}
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int column_;
  std::string message_;
};

class UnsupportedConstruct : public FrontendError {
 public:
  UnsupportedConstruct(int line, std::string construct)
      : FrontendError(line, "line " + std::to_string(line) +
                                ": unsupported construct: " + construct),
        construct_(std::move(construct)) {}
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

}  // namespace flexrepair
