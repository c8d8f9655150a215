#include "calculist/bytecode.hpp"

namespace calculist {

namespace {

// Indexed by Op. Base costs model fetch/decode/execute micro-instructions;
// see docs/ISA.md for the per-opcode formulas including the variable parts.
const OpInfo kOps[kOpCount] = {
    {"PUSHC", 1, 2},   {"LOADP", 1, 3},  {"LOADL", 1, 3},  {"LOADG", 1, 4},
    {"STOREL", 1, 3},  {"STOREG", 1, 4}, {"STOREP", 1, 3},
    {"ADD", 0, 4},     {"SUB", 0, 4},    {"MUL", 0, 4},    {"DIV", 0, 4},
    {"IDIV", 0, 4},    {"MOD", 0, 4},    {"NEG", 0, 3},
    {"EQ", 0, 4},      {"NE", 0, 4},     {"LT", 0, 4},     {"LE", 0, 4},
    {"GT", 0, 4},      {"GE", 0, 4},     {"NOT", 0, 3},
    {"JMP", 1, 2},     {"JZ", 1, 3},     {"CALL", 2, 6},   {"TAILCALL", 2, 6},
    {"CALLIND", 1, 8}, {"RET", 0, 4},    {"HALT", 0, 1},
    {"NEWLIST", 0, 2}, {"CONS", 0, 5},   {"HEAD", 0, 4},   {"TAIL", 0, 4},
    {"SUFFIX", 0, 5},  {"SLICE", 0, 6},  {"INDEX", 0, 5},
    {"NEWJSON", 1, 4}, {"JGET", 0, 5},   {"JSET", 0, 5},   {"STRCAT", 0, 5},
    {"STRSLICE", 0, 6}, {"MKCLOSURE", 2, 5},
    {"LEN", 0, 4},     {"TYPEOF", 0, 3}, {"EXC", 0, 3},
    {"PRINT", 1, 4},   {"FWRITE", 0, 8}, {"FREAD", 0, 8},
};

}  // namespace

const OpInfo& opInfo(Op op) { return kOps[static_cast<int>(op)]; }

bool opFromName(std::string_view name, Op& out) {
    for (int i = 0; i < kOpCount; ++i) {
        if (name == kOps[i].name) {
            out = static_cast<Op>(i);
            return true;
        }
    }
    return false;
}

}  // namespace calculist
