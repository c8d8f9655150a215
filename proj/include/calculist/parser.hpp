#pragma once

#include <string>

#include "calculist/ast.hpp"

namespace calculist {

// Parses one logical statement. Throws ParseError/LexError for malformed
// input and IncompleteInput when the text ends mid-statement (the REPL keeps
// reading lines in that case). Service commands and output redirection are
// handled from raw text by the session, not here.
Statement parseStatement(const std::string& text);

// Parses a standalone expression (used by tests).
ExprPtr parseExpression(const std::string& text);

}  // namespace calculist
