#include <random>

#include "doctest.h"
#include "flexrepair/frontend.hpp"

using namespace flexrepair;

namespace {

Ast parse_text(const std::string& text) { return parse(SourceProgram{text, "test"}); }

const Stmt& main_body(const Ast& ast, size_t i) {
  REQUIRE(!ast.items.empty());
  const Stmt& fn = ast.items.back();
  REQUIRE(fn.name == "main");
  REQUIRE(i < fn.body.size());
  return fn.body[i];
}

// Random well-formed ASTs for the round-trip property.
class AstGen {
 public:
  explicit AstGen(uint32_t seed) : rng_(seed) {}

  Ast program() {
    Ast ast;
    int fns = pick(0, 2);
    for (int i = 0; i < fns; ++i) {
      Stmt fn;
      fn.kind = StmtKind::FunctionDef;
      fn.name = "f" + std::to_string(i);
      int np = pick(0, 3);
      for (int p = 0; p < np; ++p) fn.params.push_back("p" + std::to_string(p));
      in_fn_ = true;
      fn.body = block(0);
      in_fn_ = false;
      ast.items.push_back(std::move(fn));
    }
    Stmt main;
    main.kind = StmtKind::FunctionDef;
    main.name = "main";
    main.body = block(0);
    ast.items.push_back(std::move(main));
    return ast;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string name() {
    static const char* names[] = {"a", "b", "c", "x", "y", "total", "n", "i_1", "_t"};
    return names[pick(0, 8)];
  }

  AstExprPtr leaf() {
    auto e = std::make_shared<AstExpr>();
    switch (pick(0, 5)) {
      case 0:
        e->kind = AstExprKind::Number;
        e->text = std::to_string(pick(0, 1000));
        break;
      case 1:
        e->kind = AstExprKind::Number;
        e->text = std::to_string(pick(0, 99)) + "." + std::to_string(pick(0, 9));
        break;
      case 2: {
        e->kind = AstExprKind::String;
        static const std::string alphabet = "ab Z'\"\\\n\t%{}#";
        int len = pick(0, 6);
        for (int i = 0; i < len; ++i) e->text += alphabet[pick(0, alphabet.size() - 1)];
        break;
      }
      case 3:
        e->kind = AstExprKind::Bool;
        e->text = pick(0, 1) ? "True" : "False";
        break;
      case 4:
        e->kind = AstExprKind::NoneLit;
        e->text = "None";
        break;
      default:
        e->kind = AstExprKind::Name;
        e->text = name();
    }
    return e;
  }

  AstExprPtr named() {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExprKind::Name;
    e->text = name();
    return e;
  }

  AstExprPtr expr(int depth) {
    if (depth > 3) return leaf();
    auto e = std::make_shared<AstExpr>();
    static const char* binops[] = {"+", "-", "*", "/", "//", "%", "**"};
    static const char* cmps[] = {"<", ">", "<=", ">=", "==", "!=", "in", "not in"};
    switch (pick(0, 12)) {
      case 0:
        e->kind = AstExprKind::BinOp;
        e->text = binops[pick(0, 6)];
        e->children = {expr(depth + 1), expr(depth + 1)};
        break;
      case 1:
        e->kind = AstExprKind::UnaryOp;
        e->text = pick(0, 2) == 0 ? "not" : (pick(0, 1) ? "-" : "+");
        e->children = {expr(depth + 1)};
        break;
      case 2: {
        e->kind = AstExprKind::Compare;
        int n = pick(1, 3);
        e->children.push_back(expr(depth + 1));
        for (int i = 0; i < n; ++i) {
          e->ops.push_back(cmps[pick(0, 7)]);
          e->children.push_back(expr(depth + 1));
        }
        break;
      }
      case 3:
        e->kind = AstExprKind::BoolOp;
        e->text = pick(0, 1) ? "and" : "or";
        e->children = {expr(depth + 1), expr(depth + 1)};
        if (pick(0, 1)) e->children.push_back(expr(depth + 1));
        break;
      case 4: {
        e->kind = AstExprKind::Call;
        if (pick(0, 1)) {
          e->children.push_back(named());
        } else {
          auto attr = std::make_shared<AstExpr>();
          attr->kind = AstExprKind::Attribute;
          attr->text = "split";
          attr->children = {named()};
          e->children.push_back(attr);
        }
        int n = pick(0, 3);
        for (int i = 0; i < n; ++i) e->children.push_back(expr(depth + 1));
        break;
      }
      case 5:
        e->kind = AstExprKind::Subscript;
        e->children = {named(), expr(depth + 1)};
        break;
      case 6:
        e->kind = AstExprKind::Ternary;
        e->children = {expr(depth + 1), expr(depth + 1), expr(depth + 1)};
        break;
      case 7:
      case 8: {
        e->kind = pick(0, 1) ? AstExprKind::List : AstExprKind::Tuple;
        int n = pick(0, 3);
        for (int i = 0; i < n; ++i) e->children.push_back(expr(depth + 1));
        break;
      }
      default:
        return leaf();
    }
    return e;
  }

  Stmt simple() {
    Stmt s;
    switch (pick(0, 6)) {
      case 0:
      case 1:
        s.kind = StmtKind::Assign;
        s.targets.push_back(name());
        if (pick(0, 3) == 0) {
          s.tupleTarget = true;
          s.targets.push_back(name());
        }
        s.value = expr(0);
        break;
      case 2:
        s.kind = StmtKind::AugAssign;
        s.targets.push_back(name());
        s.op = std::vector<std::string>{"+", "-", "*", "/", "//", "%", "**"}[pick(0, 6)];
        s.value = expr(1);
        break;
      case 3: {
        s.kind = StmtKind::ExprStmt;
        auto call = std::make_shared<AstExpr>();
        call->kind = AstExprKind::Call;
        auto callee = std::make_shared<AstExpr>();
        callee->kind = AstExprKind::Name;
        callee->text = "print";
        call->children = {callee, expr(1)};
        s.value = call;
        break;
      }
      case 4:
        if (in_fn_) {
          s.kind = StmtKind::Return;
          if (pick(0, 1)) s.value = expr(1);
          break;
        }
        [[fallthrough]];
      case 5:
        if (loop_depth_ > 0) {
          s.kind = pick(0, 1) ? StmtKind::Break : StmtKind::Continue;
          break;
        }
        [[fallthrough]];
      default:
        if (pick(0, 1)) {
          s.kind = StmtKind::Pass;
        } else {
          s.kind = StmtKind::Import;
          s.imports.push_back(pick(0, 1) ? ImportBinding{"math", "", "math"}
                                         : ImportBinding{"sq", "sqrt", "math"});
        }
    }
    return s;
  }

  std::vector<Stmt> block(int depth) {
    std::vector<Stmt> out;
    int n = pick(1, 4);
    for (int i = 0; i < n; ++i) out.push_back(depth < 2 && pick(0, 3) == 0 ? compound(depth) : simple());
    return out;
  }

  Stmt compound(int depth) {
    Stmt s;
    switch (pick(0, 2)) {
      case 0:
        s.kind = StmtKind::If;
        s.value = expr(1);
        s.body = block(depth + 1);
        for (int i = pick(0, 2); i > 0; --i) {
          ElifClause c;
          c.cond = expr(1);
          c.body = block(depth + 1);
          s.elifs.push_back(std::move(c));
        }
        if (pick(0, 1)) s.orelse = block(depth + 1);
        break;
      case 1:
        s.kind = StmtKind::While;
        s.value = expr(1);
        ++loop_depth_;
        s.body = block(depth + 1);
        --loop_depth_;
        break;
      default:
        s.kind = StmtKind::For;
        s.targets.push_back(name());
        if (pick(0, 2) == 0) {
          s.tupleTarget = true;
          s.targets.push_back(name());
        }
        s.value = expr(1);
        ++loop_depth_;
        s.body = block(depth + 1);
        --loop_depth_;
    }
    return s;
  }

  std::mt19937 rng_;
  bool in_fn_ = false;
  int loop_depth_ = 0;
};

int line_count(const std::string& text) {
  int n = 1;
  for (char c : text) n += c == '\n';
  return n;
}

bool lines_in_range(const AstExprPtr& e, int max_line) {
  if (!e) return true;
  if (e->line < 1 || e->line > max_line) return false;
  for (const auto& c : e->children) {
    if (!lines_in_range(c, max_line)) return false;
  }
  return true;
}

bool lines_in_range(const std::vector<Stmt>& body, int max_line) {
  for (const auto& s : body) {
    if (s.line < 1 || s.line > max_line) return false;
    if (!lines_in_range(s.value, max_line) || !lines_in_range(s.body, max_line) ||
        !lines_in_range(s.orelse, max_line)) {
      return false;
    }
    for (const auto& c : s.elifs) {
      if (c.line < 1 || c.line > max_line || !lines_in_range(c.cond, max_line) ||
          !lines_in_range(c.body, max_line)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("sample program parses into list literal and tuple unpacking") {
  Ast ast = parse_text("a = [5, 6]\nb, c = a\n");
  REQUIRE(ast.items.size() == 1);
  const Stmt& first = main_body(ast, 0);
  CHECK(first.kind == StmtKind::Assign);
  CHECK(first.targets == std::vector<std::string>{"a"});
  CHECK(first.value->kind == AstExprKind::List);
  CHECK(first.value->children.size() == 2);
  const Stmt& second = main_body(ast, 1);
  CHECK(second.kind == StmtKind::Assign);
  CHECK(second.tupleTarget);
  CHECK(second.targets == std::vector<std::string>{"b", "c"});
  CHECK(second.line == 2);
}

TEST_CASE("empty and whitespace-only input is a syntax error") {
  CHECK_THROWS_AS(parse_text(""), SyntaxError);
  CHECK_THROWS_AS(parse_text("   \n\t\n"), SyntaxError);
  CHECK_THROWS_AS(parse_text("# only a comment\n"), SyntaxError);
}

TEST_CASE("lambda is rejected as unsupported") {
  try {
    parse_text("x = lambda y: y");
    FAIL("expected UnsupportedConstruct");
  } catch (const UnsupportedConstruct& e) {
    CHECK(e.line() == 1);
    CHECK(e.construct() == "lambda");
  }
}

TEST_CASE("other unsupported constructs") {
  auto construct_of = [](const std::string& text) {
    try {
      parse_text(text);
    } catch (const UnsupportedConstruct& e) {
      return e.construct();
    }
    return std::string("<none>");
  };
  CHECK(construct_of("class A:\n    pass\n") == "class");
  CHECK(construct_of("try:\n    x = 1\nexcept:\n    pass\n") == "try");
  CHECK(construct_of("print(1, end='')\n") == "keyword argument");
  CHECK(construct_of("a = [1, 2]\nb = a[0:1]\n") == "slice");
  CHECK(construct_of("a = [i for i in range(3)]\n") == "comprehension");
  CHECK(construct_of("d = {1: 2}\n") == "dict or set literal");
  CHECK(construct_of("a = [1]\na[0] = 2\n") == "subscript assignment");
  CHECK(construct_of("a = b = 1\n") == "chained assignment");
  CHECK(construct_of("x = 1 | 2\n") == "bitwise operator");
  CHECK(construct_of("x = f'{y}'\n") == "f-string");
  CHECK(construct_of("def f():\n    def g():\n        pass\n") == "nested function");
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_text("x = 1\ny = (2\n");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() >= 2);
    CHECK(e.column() >= 1);
  }
  CHECK_THROWS_AS(parse_text("if x\n    y = 1\n"), SyntaxError);
  CHECK_THROWS_AS(parse_text("x = 1\n  y = 2\n"), SyntaxError);
  CHECK_THROWS_AS(parse_text("def main():\n    pass\nx = 1\n"), SyntaxError);
}

TEST_CASE("top-level statements are wrapped into main after user functions") {
  Ast ast = parse_text("def f(a, b):\n    return a + b\nprint(f(1, 2))\n");
  REQUIRE(ast.items.size() == 2);
  CHECK(ast.items[0].name == "f");
  CHECK(ast.items[0].params == std::vector<std::string>{"a", "b"});
  CHECK(ast.items[1].name == "main");
  CHECK(ast.items[1].body.size() == 1);
}

TEST_CASE("elif chains, loops and control statements") {
  Ast ast = parse_text(
      "n = int(input())\n"
      "for i in range(n):\n"
      "    if i % 2 == 0:\n"
      "        continue\n"
      "    elif i > 5:\n"
      "        break\n"
      "    else:\n"
      "        print(i)\n"
      "while n > 0: n -= 1\n");
  const Stmt& loop = main_body(ast, 1);
  CHECK(loop.kind == StmtKind::For);
  REQUIRE(loop.body.size() == 1);
  const Stmt& branch = loop.body[0];
  CHECK(branch.kind == StmtKind::If);
  CHECK(branch.elifs.size() == 1);
  CHECK(branch.elifs[0].line == 5);
  CHECK(branch.orelse.size() == 1);
  const Stmt& wl = main_body(ast, 2);
  CHECK(wl.kind == StmtKind::While);
  REQUIRE(wl.body.size() == 1);
  CHECK(wl.body[0].kind == StmtKind::AugAssign);
  CHECK(wl.body[0].op == "-");
}

TEST_CASE("expression precedence") {
  Ast ast = parse_text("x = 1 + 2 * 3 ** 2\ny = -2 ** 2\nz = a < b < c\n");
  auto x = main_body(ast, 0).value;
  CHECK(x->kind == AstExprKind::BinOp);
  CHECK(x->text == "+");
  CHECK(x->children[1]->text == "*");
  CHECK(x->children[1]->children[1]->text == "**");
  auto y = main_body(ast, 1).value;
  CHECK(y->kind == AstExprKind::UnaryOp);
  CHECK(y->children[0]->text == "**");
  auto z = main_body(ast, 2).value;
  CHECK(z->kind == AstExprKind::Compare);
  CHECK(z->ops == std::vector<std::string>{"<", "<"});
}

TEST_CASE("bracket continuation, backslash joins and semicolons") {
  Ast ast = parse_text("a = [1,\n     2,\n     3]\nb = 1 + \\\n    2; c = 3\n");
  CHECK(main_body(ast, 0).value->children.size() == 3);
  CHECK(main_body(ast, 1).line == 4);
  CHECK(main_body(ast, 2).targets[0] == "c");
}

TEST_CASE("string escapes and adjacent literal concatenation") {
  Ast ast = parse_text("s = 'a\\'b' \"c\\n\"\n");
  CHECK(main_body(ast, 0).value->text == "a'bc\n");
}

TEST_CASE("collect_imports covers all five forms") {
  Ast ast = parse_text(
      "import math\n"
      "import math as m\n"
      "from math import sqrt\n"
      "from math import *\n"
      "from math import sqrt as sq\n");
  ImportTable t = collect_imports(ast);
  CHECK(t.bindings.size() == 5);
  CHECK(t.bindings.at("math") == ImportBinding{"math", "", "math"});
  CHECK(t.bindings.at("m") == ImportBinding{"m", "", "math"});
  CHECK(t.bindings.at("sqrt") == ImportBinding{"sqrt", "sqrt", "math"});
  CHECK(t.bindings.at("*") == ImportBinding{"*", "*", "math"});
  CHECK(t.bindings.at("sq") == ImportBinding{"sq", "sqrt", "math"});
}

TEST_CASE("member alias import maps alias to member and module") {
  ImportTable t = collect_imports(parse_text("from math import sqrt as sq\n"));
  REQUIRE(t.bindings.size() == 1);
  CHECK(t.bindings.at("sq").member == "sqrt");
  CHECK(t.bindings.at("sq").module == "math");
}

TEST_CASE("program without imports has an empty table") {
  CHECK(collect_imports(parse_text("x = 1\n")).empty());
}

TEST_CASE("property: pretty-print then re-parse is structurally identical") {
  for (uint32_t seed = 0; seed < 1500; ++seed) {
    Ast original = AstGen(seed).program();
    std::string text = to_source(original);
    Ast reparsed;
    try {
      reparsed = parse_text(text);
    } catch (const std::exception& e) {
      FAIL_CHECK("seed " << seed << ": " << e.what() << "\n" << text);
      continue;
    }
    CHECK_MESSAGE(same_structure(original, reparsed), "seed " << seed << "\n" << text);
    CHECK(to_source(reparsed) == text);
  }
}

TEST_CASE("property: parsed line numbers lie within the source") {
  for (uint32_t seed = 0; seed < 1000; ++seed) {
    std::string text = to_source(AstGen(seed + 7919).program());
    Ast ast = parse_text(text);
    CHECK(lines_in_range(ast.items, line_count(text)));
  }
}

TEST_CASE("property: parse is total over mutated inputs") {
  std::mt19937 rng(42);
  static const std::string noise = "()[]{}:,.=+-*/%<>!'\"\\\n\t #abcxy019_";
  int outcomes = 0;
  for (uint32_t seed = 0; seed < 1000; ++seed) {
    std::string text = to_source(AstGen(seed).program());
    int edits = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < edits && !text.empty(); ++i) {
      size_t at = std::uniform_int_distribution<size_t>(0, text.size() - 1)(rng);
      char c = noise[std::uniform_int_distribution<size_t>(0, noise.size() - 1)(rng)];
      if (rng() % 2) {
        text[at] = c;
      } else {
        text.insert(text.begin() + at, c);
      }
    }
    try {
      parse_text(text);
      ++outcomes;
    } catch (const SyntaxError&) {
      ++outcomes;
    } catch (const UnsupportedConstruct&) {
      ++outcomes;
    } catch (const std::exception& e) {
      FAIL_CHECK("unexpected exception for seed " << seed << ": " << e.what());
    }
  }
  CHECK(outcomes == 1000);
}
