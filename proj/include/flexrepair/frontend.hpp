#pragma once

#include <string>
#include <vector>

#include "flexrepair/ast.hpp"

namespace flexrepair {

enum class TokenKind { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 0;
  int column = 0;
};

// Produces NEWLINE/INDENT/DEDENT tokens the way Python's tokenizer does.
// Newlines inside brackets and after a trailing backslash are joined.
std::vector<Token> tokenize(const std::string& text);

/// Parses MiniLang source. Throws SyntaxError or UnsupportedConstruct.
Ast parse(const SourceProgram& src);

ImportTable collect_imports(const Ast& ast);

/// Renders the Ast back to MiniLang source; parse(to_source(a)) is
/// structurally equal to a.
std::string to_source(const Ast& ast);

/// Structural equality that ignores line numbers.
bool same_structure(const Ast& a, const Ast& b);

/// Indented tree dump used by `flexrepair parse`.
std::string dump(const Ast& ast);

}  // namespace flexrepair
