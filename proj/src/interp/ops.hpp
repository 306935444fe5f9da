#pragma once

#include <string>
#include <vector>

#include "flexrepair/value.hpp"

namespace flexrepair::detail {

/// Strict (non-lazy) operators and pure builtins. Returns false when `name`
/// is not handled here.
bool apply_pure(const std::string& name, const std::vector<Value>& args, Value& out);

Value binary(const std::string& op, const Value& a, const Value& b);
bool compare(const std::string& op, const Value& a, const Value& b);
std::vector<Value> iterate(const Value& v);

}  // namespace flexrepair::detail
