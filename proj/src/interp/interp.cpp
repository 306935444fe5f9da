#include "flexrepair/interp.hpp"

#include <cstdlib>
#include <deque>

#include "ops.hpp"

namespace flexrepair {
namespace {

struct StepLimitHit {};

Value const_value(const Expr& e) {
  switch (e.ctype) {
    case Expr::ConstType::Int:
      if (e.name.size() < 18) return Value::integer(std::stoll(e.name));
      return Value::integer(BigInt(e.name));
    case Expr::ConstType::Float:
      return Value::real(std::strtod(e.name.c_str(), nullptr));
    case Expr::ConstType::Str:
      return Value::str(e.name);
    case Expr::ConstType::Bool:
      return Value::boolean(e.name == "True");
    case Expr::ConstType::None:
      return Value::none();
    case Expr::ConstType::Func:
      return Value::func(e.name);
  }
  return Value::none();
}

std::string resolve_alias(const std::string& name, const ImportTable& imports) {
  auto it = imports.bindings.find(name);
  if (it != imports.bindings.end() && !it->second.member.empty() && it->second.member != "*") {
    return it->second.member;
  }
  return name;
}

Value print_value(const std::vector<Value>& args) {
  if (args.empty() || args[0].type != Value::Type::Str) {
    throw ArgumentError("print() expects the output buffer as first argument");
  }
  std::string out = args[0].s;
  for (size_t k = 1; k < args.size(); ++k) {
    if (k > 1) out += ' ';
    out += args[k].to_str();
  }
  return Value::str(out + "\n");
}

class Machine {
 public:
  Machine(const Model& model, const TestCase& test, const StepLimits& limits)
      : model_(model), limits_(limits), input_(test.stdinLines.begin(), test.stdinLines.end()) {}

  Value evaluate_detached(const Expr& e, const Env& pre, const Env& post) {
    detached_ = true;
    auto out = pre.find("$out");
    if (out != pre.end() && out->second.type == Value::Type::Str) out_ = out->second.s;
    return eval(e, pre, post, FunctionScope{nullptr, true});
  }

  Trace run() {
    const ModelFunction* main = model_.find("main");
    try {
      if (!main) throw RuntimeFault("program has no main function");
      invoke(*main, {});
    } catch (const StepLimitHit&) {
      trace_.verdict = Verdict::StepLimit;
      trace_.message = "step limit of " + std::to_string(limits_.maxSteps) + " exceeded";
    } catch (const RuntimeFault& e) {
      trace_.verdict = Verdict::RuntimeError;
      trace_.message = e.what();
      trace_.errorLine = e.line();
    }
    trace_.stdout_lines = split_lines(out_);
    return std::move(trace_);
  }

 private:
  Value invoke(const ModelFunction& fn, std::vector<Value> args) {
    if (depth_ >= limits_.maxDepth) throw RuntimeFault("maximum recursion depth exceeded");
    if (args.size() != fn.params.size()) {
      throw ArgumentError(fn.name + "() takes " + std::to_string(fn.params.size()) +
                          " positional arguments but " + std::to_string(args.size()) +
                          " were given");
    }
    Env env;
    for (size_t k = 0; k < args.size(); ++k) env[fn.params[k]] = std::move(args[k]);
    const bool is_main = depth_ == 0;
    Env* saved_globals = globals_;
    if (is_main) globals_ = &env;
    ++depth_;
    const int frame = frames_++;
    const FunctionScope scope{&fn, is_main};

    int loc_id = fn.entry;
    Value result = Value::none();
    while (true) {
      if (++steps_ > limits_.maxSteps) throw StepLimitHit{};
      const Location& loc = fn.at(loc_id);
      env["$out"] = Value::str(out_);
      Env pre = env;
      for (const auto& [var, e] : loc.bindings) {
        Value v = eval(e, pre, env, scope);
        if (var == "$out") {
          if (v.type != Value::Type::Str) throw RuntimeFault("output buffer corrupted", e.line);
          out_ = v.s;
        }
        env[var] = std::move(v);
      }
      env["$out"] = Value::str(out_);
      trace_.steps.push_back(TraceStep{fn.name, loc_id, frame, std::move(pre), env});

      std::optional<int> next = loc.trueNext;
      if (loc.falseNext) {
        auto it = env.find("$cond");
        if (it == env.end()) throw RuntimeFault("conditional location without $cond", loc.line);
        if (!it->second.truthy()) next = loc.falseNext;
      }
      if (!next) {
        auto ret = env.find("$ret");
        if (ret != env.end()) result = ret->second;
        break;
      }
      loc_id = *next;
    }
    --depth_;
    globals_ = saved_globals;
    return result;
  }

  struct FunctionScope {
    const ModelFunction* fn;
    bool is_main;
  };

  const Value& lookup(const Expr& e, const Env& pre, const Env& cur, const FunctionScope& scope) {
    if (e.primed) {
      auto it = cur.find(e.name);
      if (it != cur.end()) return it->second;
    }
    auto it = pre.find(e.name);
    if (it != pre.end()) return it->second;
    if (!scope.is_main && globals_) {
      auto g = globals_->find(e.name);
      if (g != globals_->end()) return g->second;
    }
    if (e.primed) {
      // A primed use with no earlier binding still falls back to locals.
      auto c = cur.find(e.name);
      if (c != cur.end()) return c->second;
    }
    throw RuntimeFault("name '" + e.name + "' is not defined", e.line);
  }

  Value eval(const Expr& e, const Env& pre, const Env& cur, const FunctionScope& scope) {
    try {
      switch (e.kind) {
        case Expr::Kind::Const:
          return const_value(e);
        case Expr::Kind::Var:
          if (e.name == "$out" && !detached_) return Value::str(out_);
          return lookup(e, pre, cur, scope);
        case Expr::Kind::Op:
          break;
      }
      const std::string& name = e.name;
      if (name == "ite") {
        if (e.args.size() != 3) throw ArgumentError("ite expects 3 arguments");
        return eval(e.args[0], pre, cur, scope).truthy() ? eval(e.args[1], pre, cur, scope)
                                                         : eval(e.args[2], pre, cur, scope);
      }
      if (name == "And" || name == "Or") {
        Value v = Value::boolean(name == "And");
        for (const auto& a : e.args) {
          v = eval(a, pre, cur, scope);
          if (v.truthy() != (name == "And")) return v;
        }
        return v;
      }
      std::vector<Value> args;
      args.reserve(e.args.size());
      for (const auto& a : e.args) args.push_back(eval(a, pre, cur, scope));
      return call(name, std::move(args));
    } catch (RuntimeFault& fault) {
      fault.set_line(e.line);
      throw;
    }
  }

  Value call(const std::string& raw_name, std::vector<Value> args) {
    if (const ModelFunction* user = model_.find(raw_name)) return invoke(*user, std::move(args));
    const std::string name = resolve_alias(raw_name, model_.imports);
    if (name != raw_name) {
      if (const ModelFunction* user = model_.find(name)) return invoke(*user, std::move(args));
    }
    if (name == "input") {
      if (input_.empty()) throw RuntimeFault("EOF when reading a line");
      std::string line = input_.front();
      input_.pop_front();
      ++trace_.inputsConsumed;
      return Value::str(line);
    }
    if (name == "print") return print_value(args);
    if (name == "map") {
      if (args.size() != 2) throw ArgumentError("map() expects 2 arguments");
      std::vector<Value> out;
      for (const auto& x : detail::iterate(args[1])) out.push_back(call_value(args[0], {x}));
      return Value::list(std::move(out));
    }
    Value out;
    if (detail::apply_pure(name, args, out)) return out;
    throw UnknownFunction(raw_name);
  }

  Value call_value(const Value& f, std::vector<Value> args) {
    if (f.type != Value::Type::Func) throw RuntimeFault("'" + f.type_name() + "' object is not callable");
    return call(f.s, std::move(args));
  }

  const Model& model_;
  const StepLimits& limits_;
  std::deque<std::string> input_;
  Trace trace_;
  std::string out_;
  Env* globals_ = nullptr;
  size_t steps_ = 0;
  int depth_ = 0;
  int frames_ = 0;
  bool detached_ = false;
};

std::string rstrip(const std::string& s) {
  size_t end = s.find_last_not_of(" \t\r\n\f\v");
  return end == std::string::npos ? "" : s.substr(0, end + 1);
}

}  // namespace

Trace run(const Model& model, const TestCase& test, const StepLimits& limits) {
  return Machine(model, test, limits).run();
}

Value evaluate(const Model& model, const Expr& e, const Env& pre, const Env& post,
               const StepLimits& limits) {
  return Machine(model, TestCase{}, limits).evaluate_detached(e, pre, post);
}

Value call_builtin(const std::string& raw_name, const std::vector<Value>& args,
                   const ImportTable& imports) {
  const std::string name = resolve_alias(raw_name, imports);
  if (name == "print") return print_value(args);
  if (name == "map") {
    if (args.size() != 2 || args[0].type != Value::Type::Func) {
      throw ArgumentError("map() expects a function and an iterable");
    }
    std::vector<Value> out;
    for (const auto& x : detail::iterate(args[1])) out.push_back(call_builtin(args[0].s, {x}, imports));
    return Value::list(std::move(out));
  }
  if (name == "input") throw ArgumentError("input() needs an interpreter input queue");
  Value out;
  if (detail::apply_pure(name, args, out)) return out;
  throw UnknownFunction(raw_name);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> normalize_output(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  for (const auto& l : lines) {
    // Embedded newlines in expected output are split like printed text.
    for (const auto& piece : split_lines(l.empty() ? std::string("\n") : l + "\n")) {
      out.push_back(rstrip(piece));
    }
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

TestVerdict verdict(const Trace& trace, const TestCase& test) {
  if (trace.verdict != Verdict::Ok) return TestVerdict::Fail;
  return normalize_output(trace.stdout_lines) == normalize_output(test.expectedStdout)
             ? TestVerdict::Pass
             : TestVerdict::Fail;
}

}  // namespace flexrepair
