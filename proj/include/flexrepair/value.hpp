#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexrepair {

using BigInt = boost::multiprecision::cpp_int;

struct Value;
using Items = std::shared_ptr<const std::vector<Value>>;

/// Runtime value. Lists and tuples are immutable and share storage.
struct Value {
  enum class Type { None, Bool, Int, Float, Str, List, Tuple, Func };

  Type type = Type::None;
  bool b = false;
  BigInt i;
  double f = 0.0;
  std::string s;  // Str payload or Func name
  Items items;

  static Value none() { return Value{}; }
  static Value boolean(bool v);
  static Value integer(BigInt v);
  static Value real(double v);
  static Value str(std::string v);
  static Value list(std::vector<Value> v);
  static Value tuple(std::vector<Value> v);
  static Value func(std::string name);

  bool is_number() const { return type == Type::Bool || type == Type::Int || type == Type::Float; }
  bool is_sequence() const { return type == Type::List || type == Type::Tuple; }
  bool truthy() const;
  double as_double() const;
  const std::vector<Value>& elements() const;

  /// Python-style `str()` rendering.
  std::string to_str() const;
  /// Python-style `repr()` rendering.
  std::string repr() const;
  std::string type_name() const;

  /// Python `==`: numbers compare across Bool/Int/Float.
  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
};

/// Raised for Python-level errors during evaluation.
class RuntimeFault : public std::runtime_error {
 public:
  explicit RuntimeFault(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }
  void set_line(int line) { if (line_ == 0) line_ = line; }

 private:
  int line_;
};

class UnknownFunction : public RuntimeFault {
 public:
  explicit UnknownFunction(const std::string& name)
      : RuntimeFault("unknown function '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ArgumentError : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

std::string format_float(double v);

/// Python ordering (`<`); throws RuntimeFault on incomparable types.
bool value_less(const Value& a, const Value& b);

}  // namespace flexrepair
