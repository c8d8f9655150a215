#include "calculist/lexer.hpp"

#include <cctype>
#include <cstdlib>

#include "calculist/value_ops.hpp"

namespace calculist {

namespace {

struct Lexer {
    const std::string& text;
    size_t at = 0;
    int line = 1;
    int col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    char peek(size_t ahead = 0) const {
        return at + ahead < text.size() ? text[at + ahead] : '\0';
    }
    char advance() {
        char c = text[at++];
        if (c == '\n') { ++line; col = 1; } else { ++col; }
        return c;
    }
    SourcePos pos() const { return {line, col}; }

    [[noreturn]] void fail(SourcePos p, const std::string& msg) { throw LexError(p, msg); }

    void skipSpaceAndComments() {
        while (at < text.size()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '/' && peek(1) == '*') {
                advance();
                advance();
                bool closed = false;
                while (at < text.size()) {
                    if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        closed = true;
                        break;
                    }
                    advance();
                }
                if (!closed) throw IncompleteInput();  // comment may continue next line
            } else {
                break;
            }
        }
    }

    Token make(TokenKind k, std::string lexeme, SourcePos p) {
        Token t;
        t.kind = k;
        t.lexeme = std::move(lexeme);
        t.pos = p;
        return t;
    }

    uint32_t escapedChar(SourcePos p) {
        char e = advance();
        switch (e) {
            case 'n': return '\n';
            case 't': return '\t';
            case 'r': return '\r';
            case '\\': return '\\';
            case '\'': return '\'';
            case '"': return '"';
            case '0': return '\0';
            default: fail(p, std::string("bad escape sequence '\\") + e + "'");
        }
    }

    Token number() {
        SourcePos p = pos();
        size_t start = at;
        bool isDouble = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        if (peek() == '.' ) {
            // a '.' not followed by a digit still makes this a double ("1.")
            isDouble = true;
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            char sign = peek(1);
            if (std::isdigit(static_cast<unsigned char>(sign)) ||
                ((sign == '+' || sign == '-') &&
                 std::isdigit(static_cast<unsigned char>(peek(2))))) {
                isDouble = true;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            }
        }
        std::string lex = text.substr(start, at - start);
        Token t = make(isDouble ? TokenKind::DoubleLit : TokenKind::IntLit, lex, p);
        if (isDouble) {
            t.doubleValue = std::strtod(lex.c_str(), nullptr);
        } else {
            errno = 0;
            long long v = std::strtoll(lex.c_str(), nullptr, 10);
            if (errno != 0 || v > INT32_MAX)
                fail(p, "integer literal out of range: " + lex);
            t.intValue = static_cast<int32_t>(v);
        }
        return t;
    }

    Token next() {
        skipSpaceAndComments();
        SourcePos p = pos();
        if (at >= text.size()) return make(TokenKind::End, "", p);

        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            if (c == '.') {
                // leading-dot double like .1
                size_t start = at;
                advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
                if (peek() == 'e' || peek() == 'E') {
                    advance();
                    if (peek() == '+' || peek() == '-') advance();
                    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
                }
                std::string lex = text.substr(start, at - start);
                Token t = make(TokenKind::DoubleLit, lex, p);
                t.doubleValue = std::strtod(lex.c_str(), nullptr);
                return t;
            }
            return number();
        }

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = at;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
            std::string word = text.substr(start, at - start);
            if (word == "lambda") return make(TokenKind::Lambda, word, p);
            return make(TokenKind::Identifier, word, p);
        }

        if (c == '"') {
            advance();
            std::string out;
            while (true) {
                if (at >= text.size() || peek() == '\n')
                    fail(p, "unterminated string literal");
                char ch = advance();
                if (ch == '"') break;
                if (ch == '\\') {
                    if (at >= text.size()) fail(p, "unterminated string literal");
                    out += utf8Encode(escapedChar(p));
                } else {
                    out += ch;
                }
            }
            return make(TokenKind::StringLit, out, p);
        }

        if (c == '\'') {
            advance();
            if (at >= text.size()) fail(p, "unterminated char literal");
            uint32_t cp;
            if (peek() == '\\') {
                advance();
                if (at >= text.size()) fail(p, "unterminated char literal");
                cp = escapedChar(p);
            } else {
                unsigned char u = static_cast<unsigned char>(peek());
                size_t len = u < 0x80 ? 1 : (u < 0xE0 ? 2 : (u < 0xF0 ? 3 : 4));
                if (at + len > text.size()) fail(p, "unterminated char literal");
                cp = utf8CodePointAt(text.substr(at, len), 0);
                for (size_t k = 0; k < len; ++k) advance();
            }
            if (peek() != '\'') fail(p, "unterminated char literal");
            advance();
            Token t = make(TokenKind::CharLit, utf8Encode(cp), p);
            t.charValue = cp;
            return t;
        }

        // <<(path): a file-read expression; the path is raw text up to ')'
        // (or a quoted string for paths containing ')').
        if (c == '<' && peek(1) == '<') {
            advance();
            advance();
            skipSpaceAndComments();
            if (peek() != '(') fail(p, "expected '(' after <<");
            advance();
            skipSpaceAndComments();
            std::string path;
            if (peek() == '"') {
                advance();
                while (at < text.size() && peek() != '"') path += advance();
                if (at >= text.size()) fail(p, "unterminated path");
                advance();
                skipSpaceAndComments();
            } else {
                while (at < text.size() && peek() != ')') path += advance();
                while (!path.empty() && (path.back() == ' ' || path.back() == '\t'))
                    path.pop_back();
            }
            if (peek() != ')') fail(p, "expected ')' after file path");
            advance();
            return make(TokenKind::FileRead, path, p);
        }

        static const char* twoChar[] = {"==", "!=", "<=", ">=", "&&", "||", "+=", "-=",
                                        "*=", "/=", "//", "[>", "{!", "!}", "{^", "^}",
                                        ">>"};
        for (const char* op : twoChar) {
            if (c == op[0] && peek(1) == op[1]) {
                advance();
                advance();
                return make(TokenKind::Punct, op, p);
            }
        }

        static const std::string oneChar = "+-*/%=<>!?:;,.|@^()[]{}";
        if (oneChar.find(c) != std::string::npos) {
            advance();
            return make(TokenKind::Punct, std::string(1, c), p);
        }

        fail(p, std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
    Lexer lx(text);
    std::vector<Token> out;
    while (true) {
        Token t = lx.next();
        bool end = t.is(TokenKind::End);
        out.push_back(std::move(t));
        if (end) break;
    }
    return out;
}

}  // namespace calculist
