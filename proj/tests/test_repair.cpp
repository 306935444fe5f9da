#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "flexrepair/frontend.hpp"
#include "flexrepair/repair.hpp"
#include "repair_oracle.hpp"

using namespace flexrepair;
using namespace testgen;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kWorkedCorrect = "a = 1\nb = 2\nc = a + 1\n";
const char* kWorkedIncorrect = "x = 1\ny = 2\nz = y + 1\n";

TestCase test_of(std::string id, std::vector<std::string> in, std::vector<std::string> out) {
  return TestCase{std::move(id), std::move(in), std::move(out)};
}

RepairEdit edit(RepairEdit::Kind kind, int loc, std::string var, Expr e = Expr::none()) {
  RepairEdit out;
  out.kind = kind;
  out.function = "main";
  out.location = loc;
  out.variable = std::move(var);
  out.newExpr = std::move(e);
  return out;
}

Expr num(int k) { return Expr::constant(std::to_string(k), Expr::ConstType::Int); }

}  // namespace

TEST_CASE("worked example cost rows") {
  Table t(kWorkedCorrect, kWorkedIncorrect);
  const CostTable& c = *t.costs;
  std::map<std::string, std::string> none;
  CHECK(c.cost(1, "a", kFresh, none) == 2.0);
  CHECK(c.cost(1, "a", "x", none) == 0.0);
  // c -> y holds on values alone: both are 2.
  CHECK(c.cost(1, "c", "y", none) == 0.0);
  // c -> z depends on where y comes from.
  CHECK(c.cost(1, "c", "z", {{"a", "x"}}) == 1.0);
  CHECK(c.cost(1, "c", "z", {{"a", "y"}}) == 0.0);
  CHECK(c.cost(1, "b", "z", {{"a", "y"}}) == 0.0);

  bool found = false;
  for (const auto& e : c.entries()) {
    if (e.correctVar == "b" && e.incorrectVar == "z" && e.cost == 0.0 &&
        e.dependencySubstitution == std::map<std::string, std::string>{{"a", "y"}}) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("worked example optimum and repair") {
  Table t(kWorkedCorrect, kWorkedIncorrect);
  VariableMapping m = solve_matching(*t.costs);
  CHECK(m.targets == std::map<std::string, std::string>{{"a", "x"}, {"b", "y"}, {"c", "z"}});
  CHECK(m.cost == 1.0);
  CHECK(m.exact);
  CHECK(m.deletions.empty());

  auto edits = generate_repairs(*t.costs, m);
  REQUIRE(edits.size() == 1);
  CHECK(edits[0].kind == RepairEdit::Kind::ChangeBinding);
  CHECK(edits[0].location == 1);
  CHECK(edits[0].variable == "z");
  CHECK(edits[0].newExpr.str() == "Add(x', 1)");
  CHECK(edits[0].cost == 1.0);
}

TEST_CASE("identical models give an identity mapping and no edits") {
  std::string src = read_file(FLEXREPAIR_FIXTURES "/sample.py");
  Table t(src, src);
  VariableMapping m = solve_matching(*t.costs);
  CHECK(m.cost == 0.0);
  for (const auto& [v, w] : m.targets) CHECK(v == w);
  CHECK(generate_repairs(*t.costs, m).empty());
  std::map<std::string, std::string> id;
  for (const auto& v : t.costs->correct_vars()) id[v] = v;
  for (const auto& [loc, q] : t.costs->locations()) {
    for (const auto& v : t.costs->correct_vars()) CHECK(t.costs->cost(loc, v, v, id) == 0.0);
  }
}

TEST_CASE("two surplus variables give two deletions") {
  Table t(read_file(FLEXREPAIR_FIXTURES "/cap_correct.py"), read_file(FLEXREPAIR_FIXTURES "/cap_incorrect.py"),
          "cap");
  VariableMapping m = solve_matching(*t.costs);
  CHECK(m.deletions == std::vector<std::string>{"f", "g"});
  auto edits = generate_repairs(*t.costs, m);
  REQUIRE(edits.size() == 2);
  std::set<std::string> deleted;
  for (const auto& e : edits) {
    CHECK(e.kind == RepairEdit::Kind::DeleteBinding);
    deleted.insert(e.variable);
  }
  CHECK(deleted == std::set<std::string>{"f", "g"});
}

TEST_CASE("additions are applied before the changes that need them") {
  Model q = model_of("x = 1\na = x + 5\nprint(a)\n");
  RepairPlan plan;
  plan.edits.push_back(edit(RepairEdit::Kind::ChangeBinding, 1, "a", Expr::op("Add", {Expr::var("m", true), num(5)})));
  plan.edits.push_back(edit(RepairEdit::Kind::AddBinding, 1, "m", num(3)));
  std::vector<size_t> order;
  Model r = apply_repairs(q, plan, &order);
  CHECK(order == std::vector<size_t>{1, 0});
  const Location& loc = r.functions.back().at(1);
  std::vector<std::string> vars;
  for (const auto& [v, e] : loc.bindings) vars.push_back(v);
  auto pos = [&](const std::string& v) { return std::find(vars.begin(), vars.end(), v) - vars.begin(); };
  CHECK(pos("m") < pos("a"));
  Trace tr = run(r, TestCase{"t", {}, {}});
  REQUIRE(tr.verdict == Verdict::Ok);
  CHECK(tr.stdout_lines == std::vector<std::string>{"8"});
}

TEST_CASE("an edit using a variable that is never defined cannot be ordered") {
  Model q = model_of("x = 1\n");
  RepairPlan plan;
  plan.edits.push_back(edit(RepairEdit::Kind::AddBinding, 1, "z", Expr::op("Add", {Expr::var("y"), num(1)})));
  CHECK_THROWS_AS(apply_repairs(q, plan), UnresolvableOrder);
}

TEST_CASE("an empty plan leaves the model unchanged") {
  Model q = model_of(read_file(FLEXREPAIR_FIXTURES "/sample.py"));
  Model r = apply_repairs(q, RepairPlan{});
  REQUIRE(r.functions.size() == q.functions.size());
  for (size_t k = 0; k < q.functions.size(); ++k) CHECK(r.functions[k].locations == q.functions[k].locations);
}

TEST_CASE("primes are recomputed after a deletion") {
  Model q = model_of("a = 1\nb = 2\na = 5\nb = a + 1\nprint(b)\n");
  RepairPlan plan;
  plan.edits.push_back(edit(RepairEdit::Kind::DeleteBinding, 1, "a"));
  Model r = apply_repairs(q, plan);
  const Expr* b = r.functions.back().at(1).find("b");
  REQUIRE(b);
  CHECK(!b->uses("a", true));
}

TEST_CASE("pipeline: correct program against itself") {
  std::string src = "n = int(input())\nprint(n * 2)\n";
  std::vector<TestCase> tests{test_of("1", {"3"}, {"6"}), test_of("2", {"5"}, {"10"})};
  RepairOutcome r = repair_and_verify(SourceProgram{src, "c"}, SourceProgram{src, "i"}, tests);
  CHECK(r.status == RepairStatus::FullyRepaired);
  CHECK(r.numRepairs == 0);
  CHECK(r.plan.edits.empty());
  CHECK(r.changePercentage == 0.0);
}

TEST_CASE("pipeline: worked example needs one edit") {
  std::string c = std::string(kWorkedCorrect) + "print(c)\n";
  std::string i = std::string(kWorkedIncorrect) + "print(z)\n";
  RepairOutcome r = repair_and_verify(SourceProgram{c, "c"}, SourceProgram{i, "i"}, {test_of("1", {}, {"2"})});
  CHECK_MESSAGE(r.status == RepairStatus::FullyRepaired, r.message);
  CHECK(r.numRepairs == 1);
  CHECK(r.changePercentage == doctest::Approx(100.0 / 4));
}

TEST_CASE("pipeline: extra control flow needs flexible alignment") {
  const char* correct =
      "def f(a):\n"
      "    x, m, s = 0, 101, 0\n"
      "    while x < len(a):\n"
      "        s += a[x]\n"
      "        if m > a[x]:\n"
      "            m = a[x]\n"
      "        x += 1\n"
      "    print(str(s) + \",\" + str(m))\n"
      "f(list(map(int, input().split())))\n";
  const char* incorrect =
      "def f(a):\n"
      "    i, m, s = 0, 101, 0\n"
      "    while i < len(a):\n"
      "        s += a[i]\n"
      "        if m < a[i]:\n"
      "            m = a[i]\n"
      "        i += 1\n"
      "        if m == 0:\n"
      "            i -= 1\n"
      "    print(str(s) + \",\" + str(m))\n"
      "f(list(map(int, input().split())))\n";
  std::vector<TestCase> tests{test_of("1", {"3 1 2"}, {"6,1"}), test_of("2", {"5 9"}, {"14,5"}),
                              test_of("3", {"7"}, {"7,7"})};
  RepairOutcome flex = repair_and_verify(SourceProgram{correct, "c"}, SourceProgram{incorrect, "i"}, tests);
  CHECK_MESSAGE(flex.status == RepairStatus::FullyRepaired, flex.message);
  CHECK(flex.numRepairs >= 1);
  RepairConfig rigid;
  rigid.mode = AlignMode::Rigid;
  RepairOutcome r = repair_and_verify(SourceProgram{correct, "c"}, SourceProgram{incorrect, "i"}, tests, rigid);
  CHECK(r.status == RepairStatus::Rejected);
}

TEST_CASE("pipeline: different function sets are rejected") {
  RepairOutcome r = repair_and_verify(SourceProgram{"def f():\n    return 1\nprint(f())\n", "c"},
                                      SourceProgram{"def g():\n    return 1\nprint(g())\n", "i"},
                                      {test_of("1", {}, {"1"})});
  CHECK(r.status == RepairStatus::Rejected);
}

TEST_CASE("property: matching is optimal against brute force") {
  std::mt19937 rng(31);
  for (int round = 0; round < 1000; ++round) {
    int nc = 1 + rng() % 3, ni = 1 + rng() % 3;
    std::vector<std::string> pc{"a", "b", "c"}, pi{"x", "y", "z"};
    pc.resize(nc);
    pi.resize(ni);
    Table t(random_straight_line(rng, pc, 1 + rng() % 4), random_straight_line(rng, pi, 1 + rng() % 4));
    VariableMapping m = solve_matching(*t.costs);
    REQUIRE(m.exact);
    CHECK(m.cost == doctest::Approx(brute_force(*t.costs)));
    CHECK(m.cost == doctest::Approx(mapping_cost(*t.costs, m.as_cost_mapping())));
  }
}

TEST_CASE("property: applying random plans keeps one binding per variable") {
  std::mt19937 rng(32);
  std::vector<std::string> pool{"a", "b", "c", "d"};
  for (int round = 0; round < 1000; ++round) {
    Model q = model_of(random_straight_line(rng, pool, 1 + rng() % 5) + "if a > 0:\n    b = 1\n");
    RepairPlan plan;
    for (int k = rng() % 5; k > 0; --k) {
      auto kind = static_cast<RepairEdit::Kind>(rng() % 3);
      int loc = 1 + static_cast<int>(rng() % q.functions.back().locations.size());
      std::string v = pool[rng() % pool.size()];
      Expr e = rng() % 2 ? num(static_cast<int>(rng() % 5))
                         : Expr::op("Add", {Expr::var(pool[rng() % pool.size()], rng() % 2 == 0), num(1)});
      plan.edits.push_back(edit(kind, loc, v, e));
    }
    try {
      Model r = apply_repairs(q, plan);
      for (const auto& [id, loc] : r.functions.back().locations) {
        std::set<std::string> seen;
        for (const auto& [v, e] : loc.bindings) CHECK(seen.insert(v).second);
        // Primed reads only of variables bound at the same location, and only earlier ones.
        std::set<std::string> before;
        for (const auto& [v, e] : loc.bindings) {
          for (const auto& u : e.vars(true)) {
            CHECK(loc.binds(u));
            if (u != v) CHECK(before.count(u));
          }
          before.insert(v);
        }
      }
    } catch (const UnresolvableOrder&) {
    }
  }
}

TEST_CASE("property: pipeline outcomes are well formed") {
  std::mt19937 rng(33);
  std::vector<std::string> pc{"a", "b", "c"}, pi{"x", "y", "z"};
  std::map<RepairStatus, int> seen;
  for (int round = 0; round < 1000; ++round) {
    std::string c = random_straight_line(rng, pc, 1 + rng() % 4);
    std::string i = random_straight_line(rng, pi, 1 + rng() % 4);
    c = "a = 0\n" + c + "print(a)\n";
    i = "x = 0\n" + i + "print(" + pi[rng() % pi.size()] + ")\n";
    Trace tc = run(model_of(c), TestCase{"t", {}, {}});
    REQUIRE(tc.verdict == Verdict::Ok);
    RepairOutcome r = repair_and_verify(SourceProgram{c, "c"}, SourceProgram{i, "i"},
                                        {test_of("1", {}, tc.stdout_lines)});
    ++seen[r.status];
    CHECK(r.changePercentage >= 0.0);
    CHECK(r.changePercentage <= 100.0);
    CHECK((r.numRepairs == 0) == r.plan.edits.empty());
    if (r.status == RepairStatus::FullyRepaired) {
      REQUIRE(r.repaired);
      for (const auto& [id, v] : r.perTestVerdicts) CHECK(v == TestVerdict::Pass);
    }
  }
  CHECK(seen[RepairStatus::FullyRepaired] > 500);
  CHECK(seen[RepairStatus::NotRepaired] == 0);
}
