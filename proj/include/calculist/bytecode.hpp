// CLVM instruction set. Cost formulas for every opcode are documented in
// docs/ISA.md; constant base costs live in the opInfo table, input-dependent
// parts are charged through the work accumulator of the value operations.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "calculist/value.hpp"

namespace calculist {

enum class Op : uint8_t {
    // stack / slots
    PUSHC, LOADP, LOADL, LOADG, STOREL, STOREG, STOREP,
    // arithmetic
    ADD, SUB, MUL, DIV, IDIV, MOD, NEG,
    // comparison / logic
    EQ, NE, LT, LE, GT, GE, NOT,
    // control
    JMP, JZ, CALL, TAILCALL, CALLIND, RET, HALT,
    // heap
    NEWLIST, CONS, HEAD, TAIL, SUFFIX, SLICE, INDEX,
    NEWJSON, JGET, JSET, STRCAT, STRSLICE, MKCLOSURE,
    // builtins
    LEN, TYPEOF, EXC,
    // I/O
    PRINT, FWRITE, FREAD,
};

constexpr int kOpCount = static_cast<int>(Op::FREAD) + 1;

struct OpInfo {
    const char* name;
    int operands;   // 0, 1 or 2 instruction operands
    int baseCost;   // constant clops part
};

const OpInfo& opInfo(Op op);
bool opFromName(std::string_view name, Op& out);

struct Instruction {
    Op op;
    int32_t a = 0;
    int32_t b = 0;

    bool operator==(const Instruction& o) const {
        return op == o.op && a == o.a && b == o.b;
    }
};

struct CompileUnit {
    std::vector<Instruction> code;
    std::vector<Value> constants;       // scalars and interned strings
    int nlocals = 0;
    std::vector<int> referencedFunctions;  // slots used by CALL/TAILCALL/MKCLOSURE
};

}  // namespace calculist
