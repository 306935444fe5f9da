#pragma once

// Test-only reader for the pretty-printed model format. Used to check that
// printing is lossless for bindings and transitions.

#include <sstream>
#include <stdexcept>
#include <string>

#include "flexrepair/model.hpp"

namespace testgen {

class ExprReader {
 public:
  explicit ExprReader(const std::string& text) : s_(text) {}

  flexrepair::Expr read() {
    flexrepair::Expr e = expr();
    if (p_ != s_.size()) throw std::runtime_error("trailing text in " + s_);
    return e;
  }

 private:
  using Expr = flexrepair::Expr;

  Expr expr() {
    if (s_[p_] == '\'' || s_[p_] == '"') return string_const();
    size_t start = p_;
    while (p_ < s_.size() && s_[p_] != '(' && s_[p_] != ',' && s_[p_] != ')') ++p_;
    std::string word = s_.substr(start, p_ - start);
    if (p_ < s_.size() && s_[p_] == '(') {
      ++p_;
      std::vector<Expr> args;
      while (s_[p_] != ')') {
        args.push_back(expr());
        if (s_[p_] == ',') p_ += 2;
      }
      ++p_;
      return Expr::op(word, args);
    }
    if (word == "True" || word == "False") return Expr::constant(word, Expr::ConstType::Bool);
    if (word == "None") return Expr::none();
    if (!word.empty() && (std::isdigit(static_cast<unsigned char>(word[0])) || word[0] == '.')) {
      bool is_float = word.find_first_of(".eE") != std::string::npos;
      return Expr::constant(word, is_float ? Expr::ConstType::Float : Expr::ConstType::Int);
    }
    if (!word.empty() && word.back() == '\'') return Expr::var(word.substr(0, word.size() - 1), true);
    if (flexrepair::builtin_names().count(word)) return Expr::constant(word, Expr::ConstType::Func);
    return Expr::var(word, false);
  }

  Expr string_const() {
    char q = s_[p_++];
    std::string out;
    while (s_[p_] != q) {
      char c = s_[p_++];
      if (c == '\\') {
        char n = s_[p_++];
        if (n == 'n') out += '\n';
        else if (n == 't') out += '\t';
        else if (n == 'r') out += '\r';
        else if (n == 'x') {
          out += static_cast<char>(std::stoi(s_.substr(p_, 2), nullptr, 16));
          p_ += 2;
        } else out += n;
      } else {
        out += c;
      }
    }
    ++p_;
    return Expr::constant(out, Expr::ConstType::Str);
  }

  std::string s_;
  size_t p_ = 0;
};

/// Parses the output of pretty_print for a single-function model.
inline flexrepair::ModelFunction read_function(const std::string& text) {
  flexrepair::ModelFunction fn;
  std::istringstream in(text);
  std::string line;
  auto target = [](const std::string& t) -> std::optional<int> {
    if (t == "None") return std::nullopt;
    return std::stoi(t);
  };
  while (std::getline(in, line)) {
    if (line.rfind("Loc ", 0) != 0) continue;
    flexrepair::Location loc;
    size_t paren = line.find(" (");
    loc.id = std::stoi(line.substr(4, paren - 4));
    loc.description = line.substr(paren + 2, line.size() - paren - 3);
    std::getline(in, line);  // rule
    while (std::getline(in, line) && line.rfind("---", 0) != 0) {
      size_t assign = line.find(" := ");
      loc.bindings.emplace_back(line.substr(2, assign - 2), ExprReader(line.substr(assign + 4)).read());
    }
    std::getline(in, line);
    size_t t = line.find("True -> ");
    size_t comma = line.find(", False -> ");
    loc.trueNext = target(line.substr(t + 8, comma - t - 8));
    loc.falseNext = target(line.substr(comma + 11));
    fn.locations.emplace(loc.id, loc);
  }
  return fn;
}

}  // namespace testgen
