#include "flexrepair/value.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "flexrepair/expr.hpp"

namespace flexrepair {

Value Value::boolean(bool v) {
  Value out;
  out.type = Type::Bool;
  out.b = v;
  return out;
}

Value Value::integer(BigInt v) {
  Value out;
  out.type = Type::Int;
  out.i = std::move(v);
  return out;
}

Value Value::real(double v) {
  Value out;
  out.type = Type::Float;
  out.f = v;
  return out;
}

Value Value::str(std::string v) {
  Value out;
  out.type = Type::Str;
  out.s = std::move(v);
  return out;
}

Value Value::list(std::vector<Value> v) {
  Value out;
  out.type = Type::List;
  out.items = std::make_shared<const std::vector<Value>>(std::move(v));
  return out;
}

Value Value::tuple(std::vector<Value> v) {
  Value out = list(std::move(v));
  out.type = Type::Tuple;
  return out;
}

Value Value::func(std::string name) {
  Value out;
  out.type = Type::Func;
  out.s = std::move(name);
  return out;
}

bool Value::truthy() const {
  switch (type) {
    case Type::None: return false;
    case Type::Bool: return b;
    case Type::Int: return i != 0;
    case Type::Float: return f != 0.0;
    case Type::Str: return !s.empty();
    case Type::List:
    case Type::Tuple: return !items->empty();
    case Type::Func: return true;
  }
  return false;
}

double Value::as_double() const {
  switch (type) {
    case Type::Bool: return b ? 1.0 : 0.0;
    case Type::Int: return i.convert_to<double>();
    case Type::Float: return f;
    default: throw RuntimeFault("expected a number, got " + type_name());
  }
}

const std::vector<Value>& Value::elements() const {
  static const std::vector<Value> empty;
  return items ? *items : empty;
}

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return std::signbit(v) ? "-0.0" : "0.0";
  // Shortest round-tripping digits, then Python's repr layout.
  char buf[64];
  int precision = 1;
  for (; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*e", precision - 1, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string sci = buf;
  size_t e_pos = sci.find('e');
  int exponent = std::atoi(sci.c_str() + e_pos + 1);
  std::string digits;
  bool negative = sci[0] == '-';
  for (size_t k = 0; k < e_pos; ++k) {
    if (std::isdigit(static_cast<unsigned char>(sci[k]))) digits += sci[k];
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string out = negative ? "-" : "";
  if (exponent >= -5 + 1 && exponent < 16) {
    if (exponent >= 0) {
      std::string int_part = digits.substr(0, std::min<size_t>(digits.size(), exponent + 1));
      while (static_cast<int>(int_part.size()) < exponent + 1) int_part += '0';
      std::string frac = digits.size() > static_cast<size_t>(exponent + 1)
                             ? digits.substr(exponent + 1)
                             : "0";
      out += int_part + "." + frac;
    } else {
      out += "0." + std::string(-exponent - 1, '0') + digits;
    }
    return out;
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  char exp_buf[16];
  std::snprintf(exp_buf, sizeof exp_buf, "e%c%02d", exponent < 0 ? '-' : '+', std::abs(exponent));
  return out + exp_buf;
}

std::string Value::to_str() const {
  switch (type) {
    case Type::None: return "None";
    case Type::Bool: return b ? "True" : "False";
    case Type::Int: return i.str();
    case Type::Float: return format_float(f);
    case Type::Str: return s;
    case Type::Func: return "<built-in function " + s + ">";
    case Type::List:
    case Type::Tuple: {
      std::string out = type == Type::List ? "[" : "(";
      const auto& xs = *items;
      for (size_t k = 0; k < xs.size(); ++k) {
        if (k) out += ", ";
        out += xs[k].repr();
      }
      if (type == Type::Tuple && xs.size() == 1) out += ",";
      return out + (type == Type::List ? "]" : ")");
    }
  }
  return "";
}

std::string Value::repr() const { return type == Type::Str ? py_repr(s) : to_str(); }

std::string Value::type_name() const {
  switch (type) {
    case Type::None: return "NoneType";
    case Type::Bool: return "bool";
    case Type::Int: return "int";
    case Type::Float: return "float";
    case Type::Str: return "str";
    case Type::List: return "list";
    case Type::Tuple: return "tuple";
    case Type::Func: return "builtin_function_or_method";
  }
  return "?";
}

bool Value::operator==(const Value& o) const {
  if (is_number() && o.is_number()) {
    if (type == Type::Float || o.type == Type::Float) return as_double() == o.as_double();
    BigInt a = type == Type::Bool ? BigInt(b ? 1 : 0) : i;
    BigInt c = o.type == Type::Bool ? BigInt(o.b ? 1 : 0) : o.i;
    return a == c;
  }
  if (type != o.type) return false;
  switch (type) {
    case Type::None: return true;
    case Type::Str:
    case Type::Func: return s == o.s;
    case Type::List:
    case Type::Tuple: return items == o.items || *items == *o.items;
    default: return false;
  }
}

bool value_less(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (a.type == Value::Type::Float || b.type == Value::Type::Float) {
      return a.as_double() < b.as_double();
    }
    BigInt x = a.type == Value::Type::Bool ? BigInt(a.b ? 1 : 0) : a.i;
    BigInt y = b.type == Value::Type::Bool ? BigInt(b.b ? 1 : 0) : b.i;
    return x < y;
  }
  if (a.type == Value::Type::Str && b.type == Value::Type::Str) return a.s < b.s;
  if (a.type == b.type && a.is_sequence()) {
    const auto& xs = a.elements();
    const auto& ys = b.elements();
    for (size_t k = 0; k < xs.size() && k < ys.size(); ++k) {
      if (xs[k] != ys[k]) return value_less(xs[k], ys[k]);
    }
    return xs.size() < ys.size();
  }
  throw RuntimeFault("'<' not supported between instances of '" + a.type_name() + "' and '" +
                     b.type_name() + "'");
}

}  // namespace flexrepair
