#include <set>

#include "flexrepair/frontend.hpp"

namespace flexrepair {
namespace {

const std::set<std::string> kReserved = {
    "False", "None",   "True",  "and",    "as",       "assert", "async", "await",
    "break", "class",  "continue", "def", "del",      "elif",   "else",  "except",
    "finally", "for",  "from",  "global", "if",       "import", "in",    "is",
    "lambda", "nonlocal", "not", "or",    "pass",     "raise",  "return", "try",
    "while", "with",   "yield"};

const std::set<std::string> kUnsupportedKeywords = {
    "class", "try", "with", "global", "nonlocal", "del", "assert", "raise",
    "yield", "async", "await", "lambda", "except", "finally"};

const std::set<std::string> kAugOps = {"+=", "-=", "*=", "/=", "//=", "%=", "**="};

AstExprPtr make(AstExprKind kind, std::string text, int line,
                std::vector<AstExprPtr> children = {}) {
  auto e = std::make_shared<AstExpr>();
  e->kind = kind;
  e->text = std::move(text);
  e->line = line;
  e->children = std::move(children);
  return e;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Ast program() {
    Ast ast;
    Stmt implicit;
    implicit.kind = StmtKind::FunctionDef;
    implicit.name = "main";
    bool user_main = false;
    while (!at(TokenKind::End)) {
      if (at(TokenKind::Newline)) {
        next();
        continue;
      }
      if (at(TokenKind::Indent)) error("unexpected indent");
      if (is_kw("def")) {
        Stmt fn = funcdef();
        if (fn.name == "main") user_main = true;
        ast.items.push_back(std::move(fn));
      } else {
        statement(implicit.body);
      }
    }
    if (!implicit.body.empty()) {
      if (user_main) {
        throw SyntaxError(implicit.body.front().line, 1,
                          "top-level statements conflict with a function named main");
      }
      implicit.line = implicit.body.front().line;
      ast.items.push_back(std::move(implicit));
    }
    if (ast.items.empty()) throw SyntaxError(1, 1, "empty program");
    return ast;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek_tok(size_t off) const {
    return toks_[std::min(pos_ + off, toks_.size() - 1)];
  }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool is_op(const char* op) const { return cur().kind == TokenKind::Op && cur().text == op; }
  bool is_kw(const char* kw) const {
    return cur().kind == TokenKind::Name && cur().text == kw;
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const std::string& msg) const {
    throw SyntaxError(cur().line, cur().column, msg);
  }
  void expect_op(const char* op) {
    if (!is_op(op)) error(std::string("expected '") + op + "'");
    next();
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) error(std::string("expected '") + kw + "'");
    next();
  }
  std::string expect_name() {
    if (!at(TokenKind::Name) || kReserved.count(cur().text)) error("expected identifier");
    return next().text;
  }
  void check_unsupported_keyword() const {
    if (at(TokenKind::Name) && kUnsupportedKeywords.count(cur().text)) {
      throw UnsupportedConstruct(cur().line, cur().text);
    }
  }

  Stmt funcdef() {
    Stmt fn;
    fn.kind = StmtKind::FunctionDef;
    fn.line = cur().line;
    expect_kw("def");
    fn.name = expect_name();
    expect_op("(");
    while (!is_op(")")) {
      if (is_op("*") || is_op("**")) throw UnsupportedConstruct(cur().line, "star parameter");
      fn.params.push_back(expect_name());
      if (is_op("=")) throw UnsupportedConstruct(cur().line, "default argument");
      if (is_op(":")) throw UnsupportedConstruct(cur().line, "annotation");
      if (!is_op(")")) expect_op(",");
    }
    expect_op(")");
    if (is_op("->")) throw UnsupportedConstruct(cur().line, "annotation");
    expect_op(":");
    ++fn_depth_;
    fn.body = suite();
    --fn_depth_;
    return fn;
  }

  std::vector<Stmt> suite() {
    std::vector<Stmt> body;
    if (!at(TokenKind::Newline)) {
      simple_statements(body);
      return body;
    }
    next();
    if (!at(TokenKind::Indent)) error("expected an indented block");
    next();
    while (!at(TokenKind::Dedent) && !at(TokenKind::End)) statement(body);
    if (at(TokenKind::Dedent)) next();
    return body;
  }

  void statement(std::vector<Stmt>& out) {
    check_unsupported_keyword();
    if (is_op("@")) throw UnsupportedConstruct(cur().line, "decorator");
    if (is_kw("def")) {
      if (fn_depth_ > 0) throw UnsupportedConstruct(cur().line, "nested function");
      out.push_back(funcdef());
    } else if (is_kw("if")) {
      out.push_back(if_stmt());
    } else if (is_kw("while")) {
      Stmt s;
      s.kind = StmtKind::While;
      s.line = next().line;
      s.value = test();
      expect_op(":");
      s.body = suite();
      if (is_kw("else")) throw UnsupportedConstruct(cur().line, "loop else");
      out.push_back(std::move(s));
    } else if (is_kw("for")) {
      Stmt s;
      s.kind = StmtKind::For;
      s.line = next().line;
      target_list(s, "in");
      expect_kw("in");
      s.value = testlist();
      expect_op(":");
      s.body = suite();
      if (is_kw("else")) throw UnsupportedConstruct(cur().line, "loop else");
      out.push_back(std::move(s));
    } else if (is_kw("elif") || is_kw("else")) {
      error("unexpected '" + cur().text + "'");
    } else {
      simple_statements(out);
    }
  }

  Stmt if_stmt() {
    Stmt s;
    s.kind = StmtKind::If;
    s.line = next().line;
    s.value = test();
    expect_op(":");
    s.body = suite();
    while (is_kw("elif")) {
      ElifClause c;
      c.line = next().line;
      c.cond = test();
      expect_op(":");
      c.body = suite();
      s.elifs.push_back(std::move(c));
    }
    if (is_kw("else")) {
      next();
      expect_op(":");
      s.orelse = suite();
    }
    return s;
  }

  void simple_statements(std::vector<Stmt>& out) {
    while (true) {
      out.push_back(simple_statement());
      if (!is_op(";")) break;
      next();
      if (at(TokenKind::Newline) || at(TokenKind::End)) break;
    }
    if (at(TokenKind::Newline)) {
      next();
    } else if (!at(TokenKind::End)) {
      error("expected end of statement");
    }
  }

  Stmt simple_statement() {
    check_unsupported_keyword();
    Stmt s;
    s.line = cur().line;
    if (is_kw("pass")) {
      next();
      s.kind = StmtKind::Pass;
      return s;
    }
    if (is_kw("break")) {
      next();
      s.kind = StmtKind::Break;
      return s;
    }
    if (is_kw("continue")) {
      next();
      s.kind = StmtKind::Continue;
      return s;
    }
    if (is_kw("return")) {
      next();
      s.kind = StmtKind::Return;
      if (!at(TokenKind::Newline) && !at(TokenKind::End) && !is_op(";")) s.value = testlist();
      return s;
    }
    if (is_kw("import") || is_kw("from")) return import_stmt();
    if (is_kw("def") || is_kw("if") || is_kw("while") || is_kw("for")) {
      error("compound statement not allowed here");
    }

    AstExprPtr first = testlist();
    if (is_op("=")) {
      next();
      s.kind = StmtKind::Assign;
      assign_targets(s, first);
      s.value = testlist();
      if (is_op("=")) throw UnsupportedConstruct(s.line, "chained assignment");
      return s;
    }
    if (cur().kind == TokenKind::Op && kAugOps.count(cur().text)) {
      std::string op = next().text;
      s.kind = StmtKind::AugAssign;
      s.op = op.substr(0, op.size() - 1);
      assign_targets(s, first);
      if (s.tupleTarget) error("illegal expression for augmented assignment");
      s.value = testlist();
      return s;
    }
    if (cur().kind == TokenKind::Op &&
        (cur().text == "&=" || cur().text == "|=" || cur().text == "<<" || cur().text == ">>")) {
      throw UnsupportedConstruct(s.line, "bitwise operator");
    }
    if (is_op(":")) throw UnsupportedConstruct(s.line, "annotation");
    s.kind = StmtKind::ExprStmt;
    s.value = first;
    return s;
  }

  void assign_targets(Stmt& s, const AstExprPtr& e) {
    auto check_name = [&](const AstExprPtr& t) {
      switch (t->kind) {
        case AstExprKind::Name:
          return t->text;
        case AstExprKind::Subscript:
          throw UnsupportedConstruct(t->line, "subscript assignment");
        case AstExprKind::Attribute:
          throw UnsupportedConstruct(t->line, "attribute assignment");
        case AstExprKind::Tuple:
        case AstExprKind::List:
          throw UnsupportedConstruct(t->line, "nested unpacking");
        default:
          throw SyntaxError(t->line, 1, "cannot assign to expression");
      }
    };
    if (e->kind == AstExprKind::Tuple || e->kind == AstExprKind::List) {
      s.tupleTarget = true;
      for (const auto& c : e->children) s.targets.push_back(check_name(c));
      if (s.targets.empty()) throw SyntaxError(e->line, 1, "cannot assign to ()");
    } else {
      s.targets.push_back(check_name(e));
    }
  }

  // For-loop targets; stops before `stop` keyword.
  void target_list(Stmt& s, const char* stop) {
    std::vector<AstExprPtr> items;
    bool comma = false;
    while (!is_kw(stop)) {
      items.push_back(or_expr());
      if (!is_op(",")) break;
      comma = true;
      next();
    }
    if (items.empty()) error("expected loop target");
    AstExprPtr t = items.size() == 1 && !comma
                       ? items[0]
                       : make(AstExprKind::Tuple, "", items[0]->line, items);
    assign_targets(s, t);
  }

  Stmt import_stmt() {
    Stmt s;
    s.kind = StmtKind::Import;
    s.line = cur().line;
    if (is_kw("import")) {
      next();
      while (true) {
        std::string module = dotted_name();
        std::string alias = module;
        if (is_kw("as")) {
          next();
          alias = expect_name();
        }
        s.imports.push_back(ImportBinding{alias, "", module});
        if (!is_op(",")) break;
        next();
      }
      return s;
    }
    expect_kw("from");
    if (is_op(".")) throw UnsupportedConstruct(s.line, "relative import");
    std::string module = dotted_name();
    expect_kw("import");
    if (is_op("*")) {
      next();
      s.imports.push_back(ImportBinding{"*", "*", module});
      return s;
    }
    bool paren = is_op("(");
    if (paren) next();
    while (true) {
      std::string member = expect_name();
      std::string alias = member;
      if (is_kw("as")) {
        next();
        alias = expect_name();
      }
      s.imports.push_back(ImportBinding{alias, member, module});
      if (!is_op(",")) break;
      next();
      if (paren && is_op(")")) break;
    }
    if (paren) expect_op(")");
    return s;
  }

  std::string dotted_name() {
    std::string name = expect_name();
    while (is_op(".")) {
      next();
      name += "." + expect_name();
    }
    return name;
  }

  // Expressions ------------------------------------------------------------

  AstExprPtr testlist() {
    int line = cur().line;
    AstExprPtr first = test();
    if (!is_op(",")) return first;
    std::vector<AstExprPtr> items{first};
    while (is_op(",")) {
      next();
      if (ends_expression()) break;
      items.push_back(test());
    }
    return make(AstExprKind::Tuple, "", line, items);
  }

  bool ends_expression() const {
    if (at(TokenKind::Newline) || at(TokenKind::End)) return true;
    if (cur().kind != TokenKind::Op) return false;
    const std::string& t = cur().text;
    return t == "=" || t == ")" || t == "]" || t == ":" || t == ";" || kAugOps.count(t);
  }

  AstExprPtr test() {
    if (is_kw("lambda")) throw UnsupportedConstruct(cur().line, "lambda");
    int line = cur().line;
    AstExprPtr body = or_test();
    if (!is_kw("if")) return body;
    next();
    AstExprPtr cond = or_test();
    expect_kw("else");
    AstExprPtr orelse = test();
    return make(AstExprKind::Ternary, "", line, {body, cond, orelse});
  }

  AstExprPtr bool_chain(const char* kw, AstExprPtr (Parser::*sub)()) {
    int line = cur().line;
    AstExprPtr first = (this->*sub)();
    if (!is_kw(kw)) return first;
    std::vector<AstExprPtr> items{first};
    while (is_kw(kw)) {
      next();
      items.push_back((this->*sub)());
    }
    return make(AstExprKind::BoolOp, kw, line, items);
  }

  AstExprPtr or_test() { return bool_chain("or", &Parser::and_test); }
  AstExprPtr and_test() { return bool_chain("and", &Parser::not_test); }

  AstExprPtr not_test() {
    if (is_kw("not")) {
      int line = next().line;
      return make(AstExprKind::UnaryOp, "not", line, {not_test()});
    }
    return comparison();
  }

  bool comparison_op(std::string& op) {
    if (cur().kind == TokenKind::Op) {
      const std::string& t = cur().text;
      if (t == "<" || t == ">" || t == "<=" || t == ">=" || t == "==" || t == "!=") {
        op = next().text;
        return true;
      }
      return false;
    }
    if (is_kw("in")) {
      next();
      op = "in";
      return true;
    }
    if (is_kw("not") && peek_tok(1).kind == TokenKind::Name && peek_tok(1).text == "in") {
      next();
      next();
      op = "not in";
      return true;
    }
    if (is_kw("is")) throw UnsupportedConstruct(cur().line, "is");
    return false;
  }

  AstExprPtr comparison() {
    int line = cur().line;
    AstExprPtr first = or_expr();
    std::string op;
    if (!comparison_op(op)) return first;
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExprKind::Compare;
    e->line = line;
    e->children.push_back(first);
    do {
      e->ops.push_back(op);
      e->children.push_back(or_expr());
    } while (comparison_op(op));
    return e;
  }

  AstExprPtr or_expr() {
    AstExprPtr e = arith();
    if (cur().kind == TokenKind::Op) {
      const std::string& t = cur().text;
      if (t == "|" || t == "^" || t == "&" || t == "<<" || t == ">>") {
        throw UnsupportedConstruct(cur().line, "bitwise operator");
      }
    }
    return e;
  }

  AstExprPtr arith() {
    AstExprPtr lhs = term();
    while (is_op("+") || is_op("-")) {
      std::string op = next().text;
      lhs = make(AstExprKind::BinOp, op, lhs->line, {lhs, term()});
    }
    return lhs;
  }

  AstExprPtr term() {
    AstExprPtr lhs = factor();
    while (is_op("*") || is_op("/") || is_op("//") || is_op("%") || is_op("@")) {
      if (is_op("@")) throw UnsupportedConstruct(cur().line, "matrix multiplication");
      std::string op = next().text;
      lhs = make(AstExprKind::BinOp, op, lhs->line, {lhs, factor()});
    }
    return lhs;
  }

  AstExprPtr factor() {
    if (is_op("-") || is_op("+")) {
      Token t = next();
      return make(AstExprKind::UnaryOp, t.text, t.line, {factor()});
    }
    if (is_op("~")) throw UnsupportedConstruct(cur().line, "bitwise operator");
    return power();
  }

  AstExprPtr power() {
    AstExprPtr base = atom_expr();
    if (is_op("**")) {
      next();
      return make(AstExprKind::BinOp, "**", base->line, {base, factor()});
    }
    return base;
  }

  AstExprPtr atom_expr() {
    AstExprPtr e = atom();
    while (true) {
      if (is_op("(")) {
        next();
        std::vector<AstExprPtr> children{e};
        while (!is_op(")")) {
          if (is_op("*") || is_op("**")) throw UnsupportedConstruct(cur().line, "star argument");
          if (at(TokenKind::Name) && peek_tok(1).kind == TokenKind::Op &&
              peek_tok(1).text == "=") {
            throw UnsupportedConstruct(cur().line, "keyword argument");
          }
          children.push_back(test());
          if (is_kw("for")) throw UnsupportedConstruct(cur().line, "comprehension");
          if (!is_op(")")) expect_op(",");
        }
        next();
        e = make(AstExprKind::Call, "", e->line, children);
      } else if (is_op("[")) {
        next();
        if (is_op(":")) throw UnsupportedConstruct(cur().line, "slice");
        AstExprPtr index = testlist();
        if (is_op(":")) throw UnsupportedConstruct(cur().line, "slice");
        expect_op("]");
        e = make(AstExprKind::Subscript, "", e->line, {e, index});
      } else if (is_op(".")) {
        next();
        if (!at(TokenKind::Name)) error("expected attribute name");
        std::string attr = next().text;
        e = make(AstExprKind::Attribute, attr, e->line, {e});
      } else {
        return e;
      }
    }
  }

  AstExprPtr atom() {
    const Token& t = cur();
    int line = t.line;
    switch (t.kind) {
      case TokenKind::Number:
        return make(AstExprKind::Number, next().text, line);
      case TokenKind::String: {
        std::string text = next().text;
        while (at(TokenKind::String)) text += next().text;
        return make(AstExprKind::String, text, line);
      }
      case TokenKind::Name: {
        if (t.text == "True" || t.text == "False") {
          return make(AstExprKind::Bool, next().text, line);
        }
        if (t.text == "None") {
          next();
          return make(AstExprKind::NoneLit, "None", line);
        }
        check_unsupported_keyword();
        if (kReserved.count(t.text)) error("invalid syntax near '" + t.text + "'");
        return make(AstExprKind::Name, next().text, line);
      }
      case TokenKind::Op:
        break;
      default:
        error("invalid syntax");
    }
    if (is_op("(")) {
      next();
      if (is_op(")")) {
        next();
        return make(AstExprKind::Tuple, "", line);
      }
      AstExprPtr first = test();
      if (is_kw("for")) throw UnsupportedConstruct(cur().line, "comprehension");
      if (is_op(")")) {
        next();
        return first;
      }
      std::vector<AstExprPtr> items{first};
      while (is_op(",")) {
        next();
        if (is_op(")")) break;
        items.push_back(test());
      }
      expect_op(")");
      return make(AstExprKind::Tuple, "", line, items);
    }
    if (is_op("[")) {
      next();
      std::vector<AstExprPtr> items;
      while (!is_op("]")) {
        items.push_back(test());
        if (is_kw("for")) throw UnsupportedConstruct(cur().line, "comprehension");
        if (!is_op("]")) expect_op(",");
      }
      next();
      return make(AstExprKind::List, "", line, items);
    }
    if (is_op("{")) throw UnsupportedConstruct(line, "dict or set literal");
    if (is_op("...")) throw UnsupportedConstruct(line, "ellipsis");
    error("invalid syntax");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int fn_depth_ = 0;
};

}  // namespace

Ast parse(const SourceProgram& src) {
  if (src.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos) {
    throw SyntaxError(1, 1, "empty program");
  }
  return Parser(tokenize(src.text)).program();
}

}  // namespace flexrepair
