#include "calculist/assembler.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "calculist/value_ops.hpp"

namespace calculist {

namespace {

bool opTakesFunction(Op op) {
    return op == Op::CALL || op == Op::TAILCALL || op == Op::MKCLOSURE;
}
bool opTakesLabel(Op op) { return op == Op::JMP || op == Op::JZ; }

// strip a ';' comment, respecting string/char literals
std::string stripComment(const std::string& line) {
    bool inStr = false, inChar = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (inStr) {
            if (c == '\\') ++i;
            else if (c == '"') inStr = false;
        } else if (inChar) {
            if (c == '\\') ++i;
            else if (c == '\'') inChar = false;
        } else if (c == '"') {
            inStr = true;
        } else if (c == '\'') {
            inChar = true;
        } else if (c == ';') {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct PendingJump {
    size_t addr;
    std::string label;
    int line;
};

struct UnitAssembler {
    SessionState& st;
    CompileUnit unit;
    std::map<std::string, int> labels;
    std::vector<PendingJump> pending;
    std::map<std::string, int> constIndex;

    explicit UnitAssembler(SessionState& s) : st(s) {}

    int internConstant(Value v, const std::string& key) {
        auto it = constIndex.find(key);
        if (it != constIndex.end()) return it->second;
        int idx = static_cast<int>(unit.constants.size());
        unit.constants.push_back(v);
        constIndex.emplace(key, idx);
        return idx;
    }

    int constantFromLiteral(const std::string& text, int lineNo) {
        Value v;
        try {
            v = parseValueLiteral(text, st.heap);
        } catch (const RuntimeError& e) {
            throw AsmError(lineNo, e.message);
        }
        if (v.tag == TypeId::List || v.tag == TypeId::Json || v.tag == TypeId::Function)
            throw AsmError(lineNo, "constants must be scalars or strings");
        std::string key;
        switch (v.tag) {
            case TypeId::String: key = "s:" + st.heap.str(v.ref); break;
            case TypeId::Double: key = "d:" + formatDouble(v.d); break;
            case TypeId::Int: key = "i:" + std::to_string(v.i); break;
            case TypeId::Char: key = "c:" + std::to_string(v.cp); break;
            case TypeId::Bool: key = v.b ? "b:1" : "b:0"; break;
            case TypeId::Null: key = "n"; break;
            default: key = std::string("t:") + typeName(v.ty); break;
        }
        return internConstant(v, key);
    }

    void referenceFunction(int slot) {
        for (int s : unit.referencedFunctions)
            if (s == slot) return;
        unit.referencedFunctions.push_back(slot);
    }

    int functionRef(const std::string& tok, int lineNo) {
        if (!tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-')) {
            int slot = std::stoi(tok);
            if (slot < 0 || static_cast<size_t>(slot) >= st.functions.size())
                throw AsmError(lineNo, "function slot " + tok + " out of range");
            referenceFunction(slot);
            return slot;
        }
        int slot = st.internFunction(tok);
        referenceFunction(slot);
        return slot;
    }

    int intOperand(const std::string& tok, int lineNo) {
        try {
            return std::stoi(tok);
        } catch (...) {
            throw AsmError(lineNo, "expected integer operand, got '" + tok + "'");
        }
    }

    void line(const std::string& raw, int lineNo) {
        std::string text = trim(stripComment(raw));
        if (text.empty()) return;

        // leading labels
        while (true) {
            size_t colon = text.find(':');
            if (colon == std::string::npos) break;
            std::string head = trim(text.substr(0, colon));
            bool isLabel = !head.empty();
            for (char c : head)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') isLabel = false;
            // a label must not look like an opcode mnemonic
            Op probe;
            if (isLabel && !opFromName(head, probe)) {
                if (labels.count(head))
                    throw AsmError(lineNo, "duplicate label '" + head + "'");
                labels[head] = static_cast<int>(unit.code.size());
                text = trim(text.substr(colon + 1));
                if (text.empty()) return;
                continue;
            }
            break;
        }

        std::istringstream in(text);
        std::string mnemonic;
        in >> mnemonic;
        Op op;
        if (!opFromName(mnemonic, op))
            throw AsmError(lineNo, "unknown opcode '" + mnemonic + "'");

        Instruction ins{op, 0, 0};
        if (op == Op::PUSHC) {
            std::string rest;
            std::getline(in, rest);
            rest = trim(rest);
            if (rest.empty()) throw AsmError(lineNo, "PUSHC needs a literal operand");
            ins.a = constantFromLiteral(rest, lineNo);
        } else if (opTakesLabel(op)) {
            std::string tok;
            if (!(in >> tok)) throw AsmError(lineNo, "jump needs a target label");
            if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
                ins.a = intOperand(tok, lineNo);
            } else {
                pending.push_back({unit.code.size(), tok, lineNo});
            }
        } else if (opTakesFunction(op)) {
            std::string tok;
            if (!(in >> tok)) throw AsmError(lineNo, "expected function operand");
            ins.a = functionRef(tok, lineNo);
            std::string n;
            if (!(in >> n)) throw AsmError(lineNo, "expected argument count");
            ins.b = intOperand(n, lineNo);
        } else {
            const OpInfo& info = opInfo(op);
            for (int k = 0; k < info.operands; ++k) {
                std::string tok;
                if (!(in >> tok)) throw AsmError(lineNo, "missing operand for " + mnemonic);
                (k == 0 ? ins.a : ins.b) = intOperand(tok, lineNo);
            }
        }
        std::string extra;
        if (in >> extra) throw AsmError(lineNo, "unexpected operand '" + extra + "'");
        unit.code.push_back(ins);
    }

    CompileUnit finish(int lineNo) {
        for (const auto& p : pending) {
            auto it = labels.find(p.label);
            if (it == labels.end())
                throw AsmError(p.line, "undefined label '" + p.label + "'");
            unit.code[p.addr].a = it->second;
        }
        for (const auto& ins : unit.code) {
            if ((ins.op == Op::JMP || ins.op == Op::JZ) &&
                (ins.a < 0 || static_cast<size_t>(ins.a) > unit.code.size()))
                throw AsmError(lineNo, "jump target out of range");
        }
        return std::move(unit);
    }
};

}  // namespace

CompileUnit assembleUnit(const std::string& text, SessionState& st) {
    UnitAssembler ua(st);
    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        ua.line(raw, lineNo);
    }
    return ua.finish(lineNo);
}

CompileUnit assembleProgram(const std::string& text, SessionState& st) {
    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;

    struct Section {
        std::string header;
        int headerLine;
        std::string body;
    };
    std::vector<Section> sections;
    bool inSection = false;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string t = trim(stripComment(raw));
        if (t.rfind(".func", 0) == 0 || t.rfind(".main", 0) == 0) {
            if (inSection) throw AsmError(lineNo, "missing .end before new section");
            sections.push_back({t, lineNo, ""});
            inSection = true;
        } else if (t == ".end") {
            if (!inSection) throw AsmError(lineNo, ".end without a section");
            inSection = false;
        } else if (inSection) {
            sections.back().body += raw + "\n";
        } else if (!t.empty()) {
            throw AsmError(lineNo, "instructions must appear inside .func or .main sections");
        }
    }
    if (inSection) throw AsmError(lineNo, "missing .end");

    // install function headers first so calls by name resolve in any order
    struct FuncHeader { int slot; int nparams; int nlocals; bool star; size_t section; };
    std::vector<FuncHeader> funcs;
    int mainSection = -1;
    int mainLocals = 0;
    for (size_t i = 0; i < sections.size(); ++i) {
        std::istringstream hs(sections[i].header);
        std::string directive;
        hs >> directive;
        if (directive == ".main") {
            if (mainSection >= 0) throw AsmError(sections[i].headerLine, "duplicate .main");
            mainSection = static_cast<int>(i);
            hs >> mainLocals;
            continue;
        }
        std::string name;
        int nparams = 0, nlocals = 0;
        std::string starTok;
        if (!(hs >> name >> nparams >> nlocals))
            throw AsmError(sections[i].headerLine, ".func needs: name nparams nlocals [*]");
        bool star = (hs >> starTok) && starTok == "*";
        int slot = st.internFunction(name);
        funcs.push_back({slot, nparams, nlocals, star, i});
    }
    if (mainSection < 0) throw AsmError(lineNo, "program has no .main section");

    for (const auto& fh : funcs) {
        CompileUnit u = assembleUnit(sections[fh.section].body, st);
        u.nlocals = fh.nlocals;
        FunctionInfo& fi = st.functions[static_cast<size_t>(fh.slot)];
        fi.defined = true;
        fi.star = fh.star;
        fi.nparams = fh.nparams;
        fi.paramArities.assign(static_cast<size_t>(fh.nparams), 0);
        fi.nlocals = fh.nlocals;
        fi.unit = std::move(u);
        fi.signature = fi.name + (fh.star ? "*" : "") + "/" + std::to_string(fh.nparams);
    }

    CompileUnit main = assembleUnit(sections[static_cast<size_t>(mainSection)].body, st);
    main.nlocals = mainLocals;
    return main;
}

std::string disassemble(const CompileUnit& unit, const SessionState& st) {
    std::set<int> targets;
    for (const auto& ins : unit.code)
        if (ins.op == Op::JMP || ins.op == Op::JZ) targets.insert(ins.a);

    std::string out;
    for (size_t i = 0; i <= unit.code.size(); ++i) {
        if (targets.count(static_cast<int>(i)))
            out += "L" + std::to_string(i) + ":\n";
        if (i == unit.code.size()) break;
        const Instruction& ins = unit.code[i];
        const OpInfo& info = opInfo(ins.op);
        out += "    ";
        out += info.name;
        if (ins.op == Op::PUSHC) {
            out += " " + printValue(unit.constants[static_cast<size_t>(ins.a)], st.heap, true);
        } else if (opTakesLabel(ins.op)) {
            out += " L" + std::to_string(ins.a);
        } else if (opTakesFunction(ins.op)) {
            out += " " + std::to_string(ins.a) + " " + std::to_string(ins.b);
            if (static_cast<size_t>(ins.a) < st.functions.size())
                out += "    ; " + st.functions[static_cast<size_t>(ins.a)].name;
        } else {
            if (info.operands >= 1) out += " " + std::to_string(ins.a);
            if (info.operands >= 2) out += " " + std::to_string(ins.b);
            if ((ins.op == Op::LOADG || ins.op == Op::STOREG) &&
                static_cast<size_t>(ins.a) < st.globalNames.size())
                out += "    ; " + st.globalNames[static_cast<size_t>(ins.a)];
        }
        out += "\n";
    }
    return out;
}

}  // namespace calculist
