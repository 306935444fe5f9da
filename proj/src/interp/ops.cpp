#include "ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "flexrepair/expr.hpp"

namespace flexrepair::detail {
namespace {

constexpr size_t kMaxSequence = 10'000'000;

BigInt to_big(const Value& v) {
  if (v.type == Value::Type::Bool) return v.b ? 1 : 0;
  if (v.type == Value::Type::Int) return v.i;
  throw RuntimeFault("expected an integer, got " + v.type_name());
}

bool integral(const Value& v) { return v.type == Value::Type::Bool || v.type == Value::Type::Int; }

long long small_int(const Value& v) {
  BigInt x = to_big(v);
  if (x > BigInt(1'000'000'000'000LL) || x < BigInt(-1'000'000'000'000LL)) {
    throw RuntimeFault("integer too large");
  }
  return x.convert_to<long long>();
}

void arity(const std::string& name, const std::vector<Value>& args, size_t lo, size_t hi) {
  if (args.size() < lo || args.size() > hi) {
    throw ArgumentError(name + "() takes " +
                        (lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi)) +
                        " arguments (" + std::to_string(args.size()) + " given)");
  }
}

Value repeat(const Value& seq, const Value& count) {
  long long n = std::max(0LL, small_int(count));
  if (seq.type == Value::Type::Str) {
    if (seq.s.size() * static_cast<size_t>(n) > kMaxSequence) throw RuntimeFault("sequence too large");
    std::string out;
    for (long long k = 0; k < n; ++k) out += seq.s;
    return Value::str(out);
  }
  const auto& xs = seq.elements();
  if (xs.size() * static_cast<size_t>(n) > kMaxSequence) throw RuntimeFault("sequence too large");
  std::vector<Value> out;
  for (long long k = 0; k < n; ++k) out.insert(out.end(), xs.begin(), xs.end());
  return seq.type == Value::Type::List ? Value::list(out) : Value::tuple(out);
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

double float_mod(double a, double b) {
  double r = std::fmod(a, b);
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

Value parse_int(const std::string& text) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(" \t\r\n"));
  t.erase(t.find_last_not_of(" \t\r\n") + 1);
  size_t start = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
  bool ok = t.size() > start;
  for (size_t k = start; k < t.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(t[k])) && t[k] != '_') ok = false;
  }
  if (!ok) throw RuntimeFault("invalid literal for int() with base 10: " + py_repr(text));
  std::string digits;
  for (char c : t) {
    if (c != '_' && c != '+') digits += c;
  }
  return Value::integer(BigInt(digits));
}

Value parse_float(const std::string& text) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(" \t\r\n"));
  t.erase(t.find_last_not_of(" \t\r\n") + 1);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw RuntimeFault("could not convert string to float: " + py_repr(text));
  }
  return Value::real(v);
}

Value from_double_int(double d) {
  if (std::isnan(d) || std::isinf(d)) throw RuntimeFault("cannot convert float to integer");
  return Value::integer(BigInt(std::trunc(d)));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    size_t start = k;
    while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    if (k > start) out.push_back(s.substr(start, k - start));
  }
  return out;
}

std::string strip(const std::string& s, const std::string& chars, bool left, bool right) {
  size_t b = 0, e = s.size();
  if (left) {
    while (b < e && chars.find(s[b]) != std::string::npos) ++b;
  }
  if (right) {
    while (e > b && chars.find(s[e - 1]) != std::string::npos) --e;
  }
  return s.substr(b, e - b);
}

// Minimal str.format: {}, {N} and a `:` spec with fill/width/precision/f/d.
std::string format_spec(const Value& v, const std::string& spec) {
  if (spec.empty()) return v.to_str();
  size_t k = 0;
  char align = 0;
  char fill = ' ';
  if (spec.size() >= 2 && (spec[1] == '<' || spec[1] == '>' || spec[1] == '^')) {
    fill = spec[0];
    align = spec[1];
    k = 2;
  } else if (spec[0] == '<' || spec[0] == '>' || spec[0] == '^') {
    align = spec[0];
    k = 1;
  }
  bool zero = false;
  if (k < spec.size() && spec[k] == '0') {
    zero = true;
    ++k;
  }
  int width = 0;
  while (k < spec.size() && std::isdigit(static_cast<unsigned char>(spec[k]))) {
    width = width * 10 + (spec[k++] - '0');
  }
  int precision = -1;
  if (k < spec.size() && spec[k] == '.') {
    ++k;
    precision = 0;
    while (k < spec.size() && std::isdigit(static_cast<unsigned char>(spec[k]))) {
      precision = precision * 10 + (spec[k++] - '0');
    }
  }
  char kind = k < spec.size() ? spec[k] : 0;
  std::string body;
  if (kind == 'f' || (kind == 0 && precision >= 0 && v.is_number())) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", precision < 0 ? 6 : std::min(precision, 100), v.as_double());
    body = buf;
  } else if (kind == 'd') {
    body = to_big(v).str();
  } else {
    body = v.to_str();
    if (precision >= 0 && v.type == Value::Type::Str) body = body.substr(0, precision);
  }
  if (static_cast<int>(body.size()) < width) {
    size_t pad = width - body.size();
    if (zero && !align) {
      size_t sign = (!body.empty() && body[0] == '-') ? 1 : 0;
      body.insert(sign, pad, '0');
    } else {
      if (!align) align = (v.is_number() ? '>' : '<');
      if (align == '<') body += std::string(pad, fill);
      else if (align == '>') body = std::string(pad, fill) + body;
      else body = std::string(pad / 2, fill) + body + std::string(pad - pad / 2, fill);
    }
  }
  return body;
}

std::string format_string(const std::string& fmt, const std::vector<Value>& args) {
  std::string out;
  size_t auto_index = 0;
  for (size_t k = 0; k < fmt.size(); ++k) {
    char c = fmt[k];
    if (c == '{' && k + 1 < fmt.size() && fmt[k + 1] == '{') {
      out += '{';
      ++k;
      continue;
    }
    if (c == '}' && k + 1 < fmt.size() && fmt[k + 1] == '}') {
      out += '}';
      ++k;
      continue;
    }
    if (c != '{') {
      out += c;
      continue;
    }
    size_t close = fmt.find('}', k);
    if (close == std::string::npos) throw RuntimeFault("Single '{' encountered in format string");
    std::string field = fmt.substr(k + 1, close - k - 1);
    std::string spec;
    size_t colon = field.find(':');
    if (colon != std::string::npos) {
      spec = field.substr(colon + 1);
      field = field.substr(0, colon);
    }
    if (field.find_first_not_of("0123456789") != std::string::npos || field.size() > 6) {
      throw RuntimeFault("unsupported format field '" + field + "'");
    }
    size_t index = field.empty() ? auto_index++ : std::stoul(field);
    if (index >= args.size()) throw RuntimeFault("Replacement index " + std::to_string(index) + " out of range");
    out += format_spec(args[index], spec);
    k = close;
  }
  return out;
}

}  // namespace


std::vector<Value> iterate(const Value& v) {
  switch (v.type) {
    case Value::Type::List:
    case Value::Type::Tuple:
      return v.elements();
    case Value::Type::Str: {
      std::vector<Value> out;
      for (char c : v.s) out.push_back(Value::str(std::string(1, c)));
      return out;
    }
    default:
      throw RuntimeFault("'" + v.type_name() + "' object is not iterable");
  }
}

Value binary(const std::string& op, const Value& a, const Value& b) {
  const bool ints = integral(a) && integral(b);
  const bool nums = a.is_number() && b.is_number();
  auto type_error = [&]() -> Value {
    throw RuntimeFault("unsupported operand type(s) for " + op + ": '" + a.type_name() +
                       "' and '" + b.type_name() + "'");
  };
  if (op == "Add") {
    if (ints) return Value::integer(to_big(a) + to_big(b));
    if (nums) return Value::real(a.as_double() + b.as_double());
    if (a.type == Value::Type::Str && b.type == Value::Type::Str) return Value::str(a.s + b.s);
    if (a.is_sequence() && a.type == b.type) {
      std::vector<Value> out = a.elements();
      out.insert(out.end(), b.elements().begin(), b.elements().end());
      return a.type == Value::Type::List ? Value::list(out) : Value::tuple(out);
    }
    return type_error();
  }
  if (op == "Sub") {
    if (ints) return Value::integer(to_big(a) - to_big(b));
    if (nums) return Value::real(a.as_double() - b.as_double());
    return type_error();
  }
  if (op == "Mul") {
    if (ints) return Value::integer(to_big(a) * to_big(b));
    if (nums) return Value::real(a.as_double() * b.as_double());
    if ((a.type == Value::Type::Str || a.is_sequence()) && integral(b)) return repeat(a, b);
    if ((b.type == Value::Type::Str || b.is_sequence()) && integral(a)) return repeat(b, a);
    return type_error();
  }
  if (op == "Div") {
    if (!nums) return type_error();
    if (b.as_double() == 0.0) throw RuntimeFault("division by zero");
    if (ints) {
      BigInt x = to_big(a), y = to_big(b);
      if (x % y == 0) return Value::real((x / y).convert_to<double>());
    }
    return Value::real(a.as_double() / b.as_double());
  }
  if (op == "FloorDiv") {
    if (!nums) return type_error();
    if (b.as_double() == 0.0) throw RuntimeFault("integer division or modulo by zero");
    if (ints) return Value::integer(floor_div(to_big(a), to_big(b)));
    return Value::real(std::floor(a.as_double() / b.as_double()));
  }
  if (op == "Mod") {
    if (a.type == Value::Type::Str) {
      std::vector<Value> args = b.type == Value::Type::Tuple ? b.elements() : std::vector<Value>{b};
      std::string out;
      size_t next = 0;
      for (size_t k = 0; k < a.s.size(); ++k) {
        if (a.s[k] != '%' || k + 1 >= a.s.size()) {
          out += a.s[k];
          continue;
        }
        size_t j = k + 1;
        if (a.s[j] == '%') {
          out += '%';
          k = j;
          continue;
        }
        while (j < a.s.size() && std::string("0123456789.-+ ").find(a.s[j]) != std::string::npos) ++j;
        if (j >= a.s.size() || next >= args.size()) throw RuntimeFault("not enough arguments for format string");
        std::string spec = a.s.substr(k + 1, j - k - 1);
        char conv = a.s[j];
        const Value& v = args[next++];
        char buf[512];
        if (conv == 'd' || conv == 'i') {
          std::string digits = (v.type == Value::Type::Float ? from_double_int(v.f) : Value::integer(to_big(v))).to_str();
          std::snprintf(buf, sizeof buf, ("%" + spec + "s").c_str(), digits.c_str());
        } else if (conv == 'f' || conv == 'e' || conv == 'g') {
          std::snprintf(buf, sizeof buf, ("%" + spec + conv).c_str(), v.as_double());
        } else {
          std::snprintf(buf, sizeof buf, ("%" + spec + "s").c_str(), (conv == 'r' ? v.repr() : v.to_str()).c_str());
        }
        out += buf;
        k = j;
      }
      return Value::str(out);
    }
    if (!nums) return type_error();
    if (b.as_double() == 0.0) throw RuntimeFault("integer division or modulo by zero");
    if (ints) return Value::integer(floor_mod(to_big(a), to_big(b)));
    return Value::real(float_mod(a.as_double(), b.as_double()));
  }
  if (op == "Pow") {
    if (!nums) return type_error();
    if (ints) {
      BigInt e = to_big(b);
      BigInt base = to_big(a);
      if (e >= 0) {
        if (e > 100000 && base != 0 && base != 1 && base != -1) throw RuntimeFault("integer power too large");
        return Value::integer(boost::multiprecision::pow(base, e.convert_to<unsigned>()));
      }
      if (base == 0) throw RuntimeFault("0.0 cannot be raised to a negative power");
    }
    double x = a.as_double(), y = b.as_double();
    if (x == 0.0 && y < 0) throw RuntimeFault("0.0 cannot be raised to a negative power");
    double r = std::pow(x, y);
    if (std::isnan(r) && !std::isnan(x) && !std::isnan(y)) throw RuntimeFault("math domain error");
    return Value::real(r);
  }
  throw UnknownFunction(op);
}

bool compare(const std::string& op, const Value& a, const Value& b) {
  if (op == "Eq") return a == b;
  if (op == "NotEq") return a != b;
  if (op == "Lt") return value_less(a, b);
  if (op == "Gt") return value_less(b, a);
  if (op == "Le") return !value_less(b, a);
  if (op == "Ge") return !value_less(a, b);
  if (op == "In" || op == "NotIn") {
    bool found = false;
    if (b.type == Value::Type::Str) {
      if (a.type != Value::Type::Str) throw RuntimeFault("'in <string>' requires string as left operand");
      found = b.s.find(a.s) != std::string::npos;
    } else {
      for (const auto& x : iterate(b)) {
        if (x == a) {
          found = true;
          break;
        }
      }
    }
    return op == "In" ? found : !found;
  }
  throw UnknownFunction(op);
}

bool apply_pure(const std::string& name, const std::vector<Value>& args, Value& out) {
  static const std::map<std::string, std::string> assign_ops = {
      {"AssAdd", "Add"}, {"AssSub", "Sub"}, {"AssMul", "Mul"}, {"AssDiv", "Div"},
      {"AssFloorDiv", "FloorDiv"}, {"AssMod", "Mod"}, {"AssPow", "Pow"}};
  static const std::set<std::string> arith = {"Add", "Sub", "Mul", "Div", "FloorDiv", "Mod", "Pow"};
  static const std::set<std::string> cmps = {"Eq", "NotEq", "Lt", "Gt", "Le", "Ge", "In", "NotIn"};

  if (arith.count(name) || assign_ops.count(name)) {
    arity(name, args, 2, 2);
    out = binary(arith.count(name) ? name : assign_ops.at(name), args[0], args[1]);
    return true;
  }
  if (cmps.count(name)) {
    arity(name, args, 2, 2);
    out = Value::boolean(compare(name, args[0], args[1]));
    return true;
  }
  if (name == "USub" || name == "UAdd") {
    arity(name, args, 1, 1);
    const Value& v = args[0];
    if (integral(v)) out = Value::integer(name == "USub" ? BigInt(-to_big(v)) : to_big(v));
    else if (v.type == Value::Type::Float) out = Value::real(name == "USub" ? -v.f : v.f);
    else throw RuntimeFault("bad operand type for unary " + std::string(name == "USub" ? "-" : "+") + ": '" + v.type_name() + "'");
    return true;
  }
  if (name == "Not") {
    arity(name, args, 1, 1);
    out = Value::boolean(!args[0].truthy());
    return true;
  }
  if (name == "ListInit") {
    out = Value::list(args);
    return true;
  }
  if (name == "TupleInit") {
    out = Value::tuple(args);
    return true;
  }
  if (name == "GetElement") {
    arity(name, args, 2, 2);
    const Value& seq = args[0];
    if (!integral(args[1])) {
      throw RuntimeFault(seq.type_name() + " indices must be integers, not " + args[1].type_name());
    }
    BigInt idx = to_big(args[1]);
    BigInt size;
    if (seq.type == Value::Type::Str) size = seq.s.size();
    else if (seq.is_sequence()) size = seq.elements().size();
    else throw RuntimeFault("'" + seq.type_name() + "' object is not subscriptable");
    if (idx < 0) idx += size;
    if (idx < 0 || idx >= size) throw RuntimeFault(seq.type_name() + " index out of range");
    size_t k = idx.convert_to<size_t>();
    out = seq.type == Value::Type::Str ? Value::str(std::string(1, seq.s[k])) : seq.elements()[k];
    return true;
  }
  if (name == "len") {
    arity(name, args, 1, 1);
    const Value& v = args[0];
    if (v.type == Value::Type::Str) out = Value::integer(v.s.size());
    else if (v.is_sequence()) out = Value::integer(v.elements().size());
    else throw RuntimeFault("object of type '" + v.type_name() + "' has no len()");
    return true;
  }
  if (name == "range") {
    arity(name, args, 1, 3);
    long long start = 0, stop, step = 1;
    if (args.size() == 1) {
      stop = small_int(args[0]);
    } else {
      start = small_int(args[0]);
      stop = small_int(args[1]);
      if (args.size() == 3) step = small_int(args[2]);
    }
    if (step == 0) throw RuntimeFault("range() arg 3 must not be zero");
    std::vector<Value> xs;
    for (long long k = start; step > 0 ? k < stop : k > stop; k += step) {
      if (xs.size() >= kMaxSequence) throw RuntimeFault("range too large");
      xs.push_back(Value::integer(k));
    }
    out = Value::list(std::move(xs));
    return true;
  }
  if (name == "int") {
    arity(name, args, 0, 1);
    if (args.empty()) out = Value::integer(0);
    else if (args[0].type == Value::Type::Str) out = parse_int(args[0].s);
    else if (args[0].type == Value::Type::Float) out = from_double_int(args[0].f);
    else if (integral(args[0])) out = Value::integer(to_big(args[0]));
    else throw RuntimeFault("int() argument must be a string or a number, not '" + args[0].type_name() + "'");
    return true;
  }
  if (name == "float") {
    arity(name, args, 0, 1);
    if (args.empty()) out = Value::real(0.0);
    else if (args[0].type == Value::Type::Str) out = parse_float(args[0].s);
    else out = Value::real(args[0].as_double());
    return true;
  }
  if (name == "str") {
    arity(name, args, 0, 1);
    out = Value::str(args.empty() ? "" : args[0].to_str());
    return true;
  }
  if (name == "list") {
    arity(name, args, 0, 1);
    out = Value::list(args.empty() ? std::vector<Value>{} : iterate(args[0]));
    return true;
  }
  if (name == "sum") {
    arity(name, args, 1, 2);
    Value acc = args.size() == 2 ? args[1] : Value::integer(0);
    for (const auto& x : iterate(args[0])) acc = binary("Add", acc, x);
    out = acc;
    return true;
  }
  if (name == "max" || name == "min") {
    if (args.empty()) throw ArgumentError(name + " expected at least 1 argument, got 0");
    std::vector<Value> xs = args.size() == 1 ? iterate(args[0]) : args;
    if (xs.empty()) throw RuntimeFault(name + "() arg is an empty sequence");
    Value best = xs[0];
    for (size_t k = 1; k < xs.size(); ++k) {
      bool better = name == "max" ? value_less(best, xs[k]) : value_less(xs[k], best);
      if (better) best = xs[k];
    }
    out = best;
    return true;
  }
  if (name == "abs") {
    arity(name, args, 1, 1);
    if (integral(args[0])) out = Value::integer(boost::multiprecision::abs(to_big(args[0])));
    else out = Value::real(std::fabs(args[0].as_double()));
    return true;
  }
  if (name == "sorted" || name == "sort") {
    arity(name, args, 1, 1);
    std::vector<Value> xs = iterate(args[0]);
    std::stable_sort(xs.begin(), xs.end(), value_less);
    out = Value::list(std::move(xs));
    return true;
  }
  if (name == "reverse") {
    arity(name, args, 1, 1);
    std::vector<Value> xs = iterate(args[0]);
    std::reverse(xs.begin(), xs.end());
    out = Value::list(std::move(xs));
    return true;
  }
  if (name == "append" || name == "extend" || name == "insert" || name == "remove") {
    arity(name, args, name == "insert" ? 3 : 2, name == "insert" ? 3 : 2);
    if (args[0].type != Value::Type::List) {
      throw RuntimeFault("'" + args[0].type_name() + "' object has no attribute '" + name + "'");
    }
    std::vector<Value> xs = args[0].elements();
    if (name == "append") {
      xs.push_back(args[1]);
    } else if (name == "extend") {
      auto more = iterate(args[1]);
      xs.insert(xs.end(), more.begin(), more.end());
    } else if (name == "insert") {
      long long n = static_cast<long long>(xs.size());
      long long at = small_int(args[1]);
      if (at < 0) at = std::max(0LL, at + n);
      at = std::min(at, n);
      xs.insert(xs.begin() + at, args[2]);
    } else {
      auto it = std::find(xs.begin(), xs.end(), args[1]);
      if (it == xs.end()) throw RuntimeFault("list.remove(x): x not in list");
      xs.erase(it);
    }
    out = Value::list(std::move(xs));
    return true;
  }
  if (name == "split") {
    arity(name, args, 1, 2);
    if (args[0].type != Value::Type::Str) throw RuntimeFault("split() requires a str receiver");
    std::vector<Value> parts;
    if (args.size() == 1 || args[1].type == Value::Type::None) {
      for (auto& p : split_ws(args[0].s)) parts.push_back(Value::str(p));
    } else {
      const std::string& sep = args[1].s;
      if (sep.empty()) throw RuntimeFault("empty separator");
      size_t start = 0, pos;
      while ((pos = args[0].s.find(sep, start)) != std::string::npos) {
        parts.push_back(Value::str(args[0].s.substr(start, pos - start)));
        start = pos + sep.size();
      }
      parts.push_back(Value::str(args[0].s.substr(start)));
    }
    out = Value::list(std::move(parts));
    return true;
  }
  if (name == "strip" || name == "lstrip" || name == "rstrip") {
    arity(name, args, 1, 2);
    if (args[0].type != Value::Type::Str) throw RuntimeFault(name + "() requires a str receiver");
    std::string chars = args.size() == 2 ? args[1].s : std::string(" \t\n\r\f\v");
    out = Value::str(strip(args[0].s, chars, name != "rstrip", name != "lstrip"));
    return true;
  }
  if (name == "join") {
    arity(name, args, 2, 2);
    if (args[0].type != Value::Type::Str) throw RuntimeFault("join() requires a str receiver");
    std::string s;
    bool first = true;
    for (const auto& x : iterate(args[1])) {
      if (x.type != Value::Type::Str) {
        throw RuntimeFault("sequence item: expected str instance, " + x.type_name() + " found");
      }
      if (!first) s += args[0].s;
      s += x.s;
      first = false;
    }
    out = Value::str(s);
    return true;
  }
  if (name == "format") {
    if (args.empty()) throw ArgumentError("format() missing receiver");
    if (args[0].type == Value::Type::Str) {
      out = Value::str(format_string(args[0].s, std::vector<Value>(args.begin() + 1, args.end())));
    } else {
      arity(name, args, 1, 2);
      out = Value::str(format_spec(args[0], args.size() == 2 ? args[1].s : ""));
    }
    return true;
  }
  if (name == "sqrt" || name == "ceil" || name == "floor") {
    arity(name, args, 1, 1);
    double x = args[0].as_double();
    if (name == "sqrt") {
      if (x < 0) throw RuntimeFault("math domain error");
      out = Value::real(std::sqrt(x));
    } else if (integral(args[0])) {
      out = Value::integer(to_big(args[0]));
    } else {
      out = from_double_int(name == "ceil" ? std::ceil(x) : std::floor(x));
    }
    return true;
  }
  return false;
}

}  // namespace flexrepair::detail
