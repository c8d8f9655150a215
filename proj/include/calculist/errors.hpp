#pragma once

#include <stdexcept>
#include <string>

namespace calculist {

struct SourcePos {
    int line = 0;
    int col = 0;
};

enum class RuntimeErrorKind {
    TypeError,
    EmptyListTail,
    IndexOutOfRange,
    DivisionByZero,
    UserException,
    UnresolvedName,
    ArityMismatch,
    StackOverflow,
    FileIo,
    BadLiteral,
};

const char* runtimeErrorKindName(RuntimeErrorKind k);

struct RuntimeError : std::runtime_error {
    RuntimeErrorKind kind;
    std::string message;
    std::string origin;  // function the error escaped from, filled by the VM

    RuntimeError(RuntimeErrorKind k, std::string msg)
        : std::runtime_error(msg), kind(k), message(std::move(msg)) {}
};

struct LexError : std::runtime_error {
    SourcePos pos;
    LexError(SourcePos p, const std::string& msg) : std::runtime_error(msg), pos(p) {}
};

// Input ended mid-statement; the REPL keeps reading lines.
struct IncompleteInput : std::runtime_error {
    IncompleteInput() : std::runtime_error("incomplete input") {}
};

struct ParseError : std::runtime_error {
    SourcePos pos;
    ParseError(SourcePos p, const std::string& msg) : std::runtime_error(msg), pos(p) {}
};

struct CompileError : std::runtime_error {
    SourcePos pos;
    explicit CompileError(const std::string& msg, SourcePos p = {})
        : std::runtime_error(msg), pos(p) {}
};

struct AsmError : std::runtime_error {
    int line;
    AsmError(int l, const std::string& msg) : std::runtime_error(msg), line(l) {}
};

}  // namespace calculist
