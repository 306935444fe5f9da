#include <cctype>

#include "flexrepair/frontend.hpp"

namespace flexrepair {
namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

const char* const kThreeCharOps[] = {"//=", "**=", "..."};
const char* const kTwoCharOps[] = {"==", "!=", "<=", ">=", "//", "**", "+=", "-=",
                                   "*=", "/=", "%=", "->", "<<", ">>", "&=", "|="};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : src_(text) {}

  std::vector<Token> run() {
    indents_.push_back(0);
    while (pos_ < src_.size()) {
      if (at_line_start_) {
        if (!handle_indentation()) continue;
      }
      char c = src_[pos_];
      if (c == '\n') {
        newline();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\\' && peek(1) == '\n') {
        advance();
        advance();
        ++line_;
        col_ = 1;
        continue;
      }
      if (is_ident_start(c)) {
        lex_name();
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number();
        continue;
      }
      if (c == '\'' || c == '"') {
        lex_string();
        continue;
      }
      lex_op();
    }
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline &&
        tokens_.back().kind != TokenKind::Dedent) {
      emit(TokenKind::Newline, "");
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokenKind::Dedent, "");
    }
    emit(TokenKind::End, "");
    return std::move(tokens_);
  }

 private:
  char peek(size_t off) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  void advance() {
    ++pos_;
    ++col_;
  }
  void emit(TokenKind kind, std::string text) {
    tokens_.push_back(Token{kind, std::move(text), tok_line_, tok_col_});
  }
  void mark() {
    tok_line_ = line_;
    tok_col_ = col_;
  }

  void newline() {
    mark();
    advance();
    if (depth_ == 0) {
      if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline &&
          tokens_.back().kind != TokenKind::Indent &&
          tokens_.back().kind != TokenKind::Dedent) {
        emit(TokenKind::Newline, "");
      }
      at_line_start_ = true;
    }
    ++line_;
    col_ = 1;
  }

  // Returns false when the line is blank or comment-only (already consumed).
  bool handle_indentation() {
    int width = 0;
    size_t p = pos_;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t')) {
      width += src_[p] == '\t' ? 8 - (width % 8) : 1;
      ++p;
    }
    if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#' || src_[p] == '\r') {
      while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      if (pos_ < src_.size()) {
        advance();
        ++line_;
        col_ = 1;
      }
      return false;
    }
    col_ += static_cast<int>(p - pos_);
    pos_ = p;
    at_line_start_ = false;
    mark();
    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(TokenKind::Indent, "");
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(TokenKind::Dedent, "");
      }
      if (width != indents_.back()) {
        throw SyntaxError(line_, col_, "unindent does not match any outer level");
      }
    }
    return true;
  }

  void lex_name() {
    mark();
    size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
    std::string word = src_.substr(start, pos_ - start);
    if ((pos_ < src_.size()) && (src_[pos_] == '\'' || src_[pos_] == '"')) {
      std::string lower;
      for (char ch : word) lower += static_cast<char>(std::tolower(ch));
      if (lower == "f" || lower == "rf" || lower == "fr") {
        throw UnsupportedConstruct(line_, "f-string");
      }
      if (lower == "r" || lower == "b" || lower == "u") {
        raw_prefix_pending_ = true;
        lex_string(lower == "r");
        return;
      }
    }
    emit(TokenKind::Name, std::move(word));
  }

  void lex_number() {
    mark();
    size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek(0))) || peek(0) == '_') advance();
    if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
    } else if (peek(0) == '.' && !is_ident_start(peek(1))) {
      advance();
    }
    if (peek(0) == 'e' || peek(0) == 'E') {
      size_t save = pos_;
      int save_col = col_;
      advance();
      if (peek(0) == '+' || peek(0) == '-') advance();
      if (std::isdigit(static_cast<unsigned char>(peek(0)))) {
        while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    std::string text;
    for (size_t i = start; i < pos_; ++i) {
      if (src_[i] != '_') text += src_[i];
    }
    if (is_ident_start(peek(0))) {
      throw SyntaxError(line_, col_, "invalid numeric literal");
    }
    emit(TokenKind::Number, std::move(text));
  }

  void lex_string(bool raw = false) {
    if (!raw_prefix_pending_) mark();
    raw_prefix_pending_ = false;
    char quote = src_[pos_];
    bool triple = peek(1) == quote && peek(2) == quote;
    advance();
    if (triple) {
      advance();
      advance();
    }
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw SyntaxError(tok_line_, tok_col_, "unterminated string");
      char c = src_[pos_];
      if (triple) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
      } else if (c == quote) {
        advance();
        break;
      }
      if (c == '\n') {
        if (!triple) throw SyntaxError(tok_line_, tok_col_, "unterminated string");
        out += c;
        ++pos_;
        ++line_;
        col_ = 1;
        continue;
      }
      if (c == '\\' && !raw) {
        char n = peek(1);
        advance();
        advance();
        switch (n) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '0': out += '\0'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          case '\n': ++line_; col_ = 1; break;
          default:
            out += '\\';
            out += n;
        }
        continue;
      }
      out += c;
      advance();
    }
    emit(TokenKind::String, std::move(out));
  }

  void lex_op() {
    mark();
    for (const char* op : kThreeCharOps) {
      if (src_.compare(pos_, 3, op) == 0) {
        for (int i = 0; i < 3; ++i) advance();
        emit(TokenKind::Op, op);
        return;
      }
    }
    for (const char* op : kTwoCharOps) {
      if (src_.compare(pos_, 2, op) == 0) {
        advance();
        advance();
        emit(TokenKind::Op, op);
        return;
      }
    }
    char c = src_[pos_];
    static const std::string singles = "+-*/%<>=()[]{},:.;!&|^~@";
    if (singles.find(c) == std::string::npos) {
      throw SyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
    }
    if (c == '(' || c == '[' || c == '{') ++depth_;
    if (c == ')' || c == ']' || c == '}') {
      if (depth_ == 0) throw SyntaxError(line_, col_, std::string("unmatched '") + c + "'");
      --depth_;
    }
    advance();
    emit(TokenKind::Op, std::string(1, c));
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int tok_line_ = 1;
  int tok_col_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  bool raw_prefix_pending_ = false;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(const std::string& text) { return Lexer(text).run(); }

}  // namespace flexrepair
