#pragma once

#include <string>
#include <vector>

#include "calculist/errors.hpp"

namespace calculist {

enum class TokenKind {
    Identifier,
    IntLit,
    DoubleLit,
    CharLit,
    StringLit,
    Punct,     // operators and punctuation, lexeme holds the spelling
    Lambda,
    FileRead,  // <<(path), lexeme holds the path
    End,
};

struct Token {
    TokenKind kind;
    std::string lexeme;
    SourcePos pos;
    // literal payloads
    int32_t intValue = 0;
    double doubleValue = 0.0;
    uint32_t charValue = 0;

    bool is(TokenKind k) const { return kind == k; }
    bool isPunct(const char* p) const { return kind == TokenKind::Punct && lexeme == p; }
};

// Tokenizes one logical statement. Throws LexError for bad input and
// IncompleteInput when a block comment runs past the end of the text.
std::vector<Token> tokenize(const std::string& text);

}  // namespace calculist
