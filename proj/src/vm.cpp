#include "calculist/vm.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "calculist/value_ops.hpp"

namespace calculist {

namespace {

struct Frame {
    const CompileUnit* retUnit;
    int retPc;
    size_t valueBase;  // stack is truncated to here on return
    size_t argBase;    // parameter slot 0
    int funcSlot;
    bool star;
};

[[noreturn]] void typeErr(const std::string& msg) {
    throw RuntimeError(RuntimeErrorKind::TypeError, msg);
}

}  // namespace

uint64_t Machine::codeInstructionCount() const {
    uint64_t n = 0;
    for (const auto& f : st_.functions)
        if (f.defined) n += f.unit.code.size();
    return n;
}

ExecResult Machine::execute(const CompileUnit& topUnit) {
    ExecResult result;
    std::vector<Value> stack;
    std::vector<Frame> frames;
    Heap& heap = st_.heap;

    const CompileUnit* unit = &topUnit;
    int pc = 0;
    bool curStar = true;  // the session shell may call star functions
    Value acc;            // return-value register

    uint64_t clops = 0;
    uint64_t maxFrames = 0, maxValues = 0;

    auto pop = [&]() -> Value {
        Value v = stack.back();
        stack.pop_back();
        return v;
    };

    auto currentName = [&]() -> std::string {
        if (frames.empty()) return "";
        int slot = frames.back().funcSlot;
        return slot < 0 ? "" : st_.functions[static_cast<size_t>(slot)].name;
    };

    try {
        while (true) {
            const Instruction& ins = unit->code[static_cast<size_t>(pc)];
            const OpInfo& info = opInfo(ins.op);
            uint64_t work = 0;

            if (traceSink)
                *traceSink << "  [" << pc << "] " << info.name
                           << (info.operands > 0 ? " " + std::to_string(ins.a) : "")
                           << (info.operands > 1 ? " " + std::to_string(ins.b) : "")
                           << "   ; clops=" << clops << "\n";

            int next = pc + 1;
            switch (ins.op) {
                case Op::PUSHC:
                    stack.push_back(unit->constants[static_cast<size_t>(ins.a)]);
                    break;
                case Op::LOADP:
                case Op::LOADL: {
                    if (frames.empty()) typeErr("no active frame for slot load");
                    stack.push_back(stack[frames.back().argBase + static_cast<size_t>(ins.a)]);
                    break;
                }
                case Op::STOREP:
                case Op::STOREL: {
                    if (frames.empty()) typeErr("no active frame for slot store");
                    Value v = pop();
                    stack[frames.back().argBase + static_cast<size_t>(ins.a)] = v;
                    break;
                }
                case Op::LOADG:
                    stack.push_back(st_.globals[static_cast<size_t>(ins.a)]);
                    break;
                case Op::STOREG:
                    st_.globals[static_cast<size_t>(ins.a)] = pop();
                    break;

                case Op::ADD: case Op::SUB: case Op::MUL:
                case Op::DIV: case Op::IDIV: case Op::MOD: {
                    Value rhs = pop(), lhs = pop();
                    ArithOp op = ins.op == Op::ADD   ? ArithOp::Add
                                 : ins.op == Op::SUB ? ArithOp::Sub
                                 : ins.op == Op::MUL ? ArithOp::Mul
                                 : ins.op == Op::DIV ? ArithOp::Div
                                 : ins.op == Op::IDIV ? ArithOp::IntDiv
                                                      : ArithOp::Mod;
                    stack.push_back(arith(op, lhs, rhs, heap, work));
                    break;
                }
                case Op::NEG: stack.push_back(negate(pop())); break;

                case Op::EQ: case Op::NE: case Op::LT:
                case Op::LE: case Op::GT: case Op::GE: {
                    Value rhs = pop(), lhs = pop();
                    CmpOp op = ins.op == Op::EQ   ? CmpOp::Eq
                               : ins.op == Op::NE ? CmpOp::Ne
                               : ins.op == Op::LT ? CmpOp::Lt
                               : ins.op == Op::LE ? CmpOp::Le
                               : ins.op == Op::GT ? CmpOp::Gt
                                                  : CmpOp::Ge;
                    stack.push_back(compare(op, lhs, rhs, heap, work));
                    break;
                }
                case Op::NOT: stack.push_back(logicalNot(pop())); break;

                case Op::JMP: next = ins.a; break;
                case Op::JZ: {
                    Value v = pop();
                    if (!asBool(v, "condition")) next = ins.a;
                    break;
                }

                case Op::CALL: {
                    const FunctionInfo& fi = st_.functions[static_cast<size_t>(ins.a)];
                    if (!fi.defined)
                        throw RuntimeError(RuntimeErrorKind::UnresolvedName,
                                           "function '" + fi.name + "' is not defined");
                    if (ins.b != fi.nparams)
                        throw RuntimeError(RuntimeErrorKind::ArityMismatch,
                                           "function '" + fi.name + "' takes " +
                                               std::to_string(fi.nparams) +
                                               " arguments, called with " +
                                               std::to_string(ins.b));
                    if (!curStar && fi.star)
                        throw RuntimeError(RuntimeErrorKind::TypeError,
                                           "star function '" + fi.name +
                                               "' called from a non-star function");
                    if (frames.size() >= st_.options.stackLimit)
                        throw RuntimeError(RuntimeErrorKind::StackOverflow,
                                           "stack overflow: frame limit " +
                                               std::to_string(st_.options.stackLimit) +
                                               " exceeded");
                    size_t argBase = stack.size() - static_cast<size_t>(ins.b);
                    frames.push_back({unit, next, argBase, argBase, ins.a, fi.star});
                    stack.resize(stack.size() + static_cast<size_t>(fi.nlocals), Value::null());
                    unit = &fi.unit;
                    next = 0;
                    curStar = fi.star;
                    work = static_cast<uint64_t>(fi.nlocals);
                    break;
                }

                case Op::TAILCALL: {
                    const FunctionInfo& fi = st_.functions[static_cast<size_t>(ins.a)];
                    work = static_cast<uint64_t>(ins.b + fi.nlocals);
                    if (st_.options.tailOpt && !frames.empty()) {
                        // reuse the current frame: move the arguments into the
                        // parameter slots and reset the locals
                        Frame& f = frames.back();
                        size_t argsAt = stack.size() - static_cast<size_t>(ins.b);
                        for (int i = 0; i < ins.b; ++i)
                            stack[f.argBase + static_cast<size_t>(i)] =
                                stack[argsAt + static_cast<size_t>(i)];
                        stack.resize(f.argBase + static_cast<size_t>(ins.b));
                        stack.resize(stack.size() + static_cast<size_t>(fi.nlocals),
                                     Value::null());
                        next = 0;
                        break;
                    }
                    // optimizer off: behave as a plain call (same cost model)
                    if (frames.size() >= st_.options.stackLimit)
                        throw RuntimeError(RuntimeErrorKind::StackOverflow,
                                           "stack overflow: frame limit " +
                                               std::to_string(st_.options.stackLimit) +
                                               " exceeded");
                    size_t argBase = stack.size() - static_cast<size_t>(ins.b);
                    frames.push_back({unit, next, argBase, argBase, ins.a, fi.star});
                    stack.resize(stack.size() + static_cast<size_t>(fi.nlocals), Value::null());
                    unit = &fi.unit;
                    next = 0;
                    break;
                }

                case Op::CALLIND: {
                    int nargs = ins.a;
                    size_t calleeAt = stack.size() - static_cast<size_t>(nargs) - 1;
                    Value callee = stack[calleeAt];
                    if (callee.tag != TypeId::Function)
                        typeErr(std::string("call of a non-function value (") +
                                typeName(callee.tag) + ")");
                    const ClosureData& cd = heap.closure(callee.ref);
                    if (nargs != cd.nparams)
                        throw RuntimeError(RuntimeErrorKind::ArityMismatch,
                                           "function expects " + std::to_string(cd.nparams) +
                                               " arguments, called with " +
                                               std::to_string(nargs));
                    if (!curStar && cd.star)
                        throw RuntimeError(RuntimeErrorKind::TypeError,
                                           "star function called from a non-star function");
                    const FunctionInfo& fi = st_.functions[static_cast<size_t>(cd.func)];
                    if (frames.size() >= st_.options.stackLimit)
                        throw RuntimeError(RuntimeErrorKind::StackOverflow,
                                           "stack overflow: frame limit " +
                                               std::to_string(st_.options.stackLimit) +
                                               " exceeded");
                    size_t argBase = calleeAt + 1;
                    frames.push_back({unit, next, calleeAt, argBase, cd.func, cd.star});
                    for (const Value& cap : cd.captures) stack.push_back(cap);
                    stack.resize(stack.size() + static_cast<size_t>(fi.nlocals), Value::null());
                    unit = &fi.unit;
                    next = 0;
                    curStar = cd.star;
                    work = cd.captures.size() + static_cast<uint64_t>(fi.nlocals);
                    break;
                }

                case Op::RET: {
                    if (frames.empty()) typeErr("RET outside of a call");
                    acc = pop();
                    Frame f = frames.back();
                    frames.pop_back();
                    stack.resize(f.valueBase);
                    stack.push_back(acc);
                    unit = f.retUnit;
                    next = f.retPc;
                    curStar = frames.empty() ? true : frames.back().star;
                    break;
                }

                case Op::HALT:
                    result.clops = clops + info.baseCost;
                    result.maxFrameDepth = maxFrames;
                    result.maxStackValues = maxValues;
                    return result;

                case Op::NEWLIST: stack.push_back(Value::emptyList()); break;
                case Op::CONS: {
                    Value tl = pop(), v = pop();
                    if (tl.tag != TypeId::List)
                        typeErr(std::string("type error: the value after '|' must be a list, got ") +
                                typeName(tl.tag));
                    stack.push_back(Value::list(heap.allocCell(v, tl.ref)));
                    break;
                }
                case Op::HEAD: stack.push_back(listHead(pop(), heap)); break;
                case Op::TAIL: stack.push_back(listTail(pop(), heap)); break;
                case Op::SUFFIX: {
                    Value idx = pop(), l = pop();
                    stack.push_back(listSuffix(l, idx, heap, work));
                    break;
                }
                case Op::SLICE: {
                    Value hi = pop(), lo = pop(), t = pop();
                    stack.push_back(slice(t, lo, hi, heap, work));
                    break;
                }
                case Op::STRSLICE: {
                    Value hi = pop(), lo = pop(), t = pop();
                    if (t.tag != TypeId::String)
                        typeErr(std::string("STRSLICE expects a string, got ") + typeName(t.tag));
                    stack.push_back(slice(t, lo, hi, heap, work));
                    break;
                }
                case Op::INDEX: {
                    Value idx = pop(), t = pop();
                    stack.push_back(indexGet(t, idx, heap, work));
                    break;
                }
                case Op::NEWJSON: {
                    int n = ins.a;
                    JsonObject obj;
                    obj.fields.resize(static_cast<size_t>(n));
                    for (int i = n - 1; i >= 0; --i) {
                        Value v = pop(), k = pop();
                        if (k.tag != TypeId::String) typeErr("json key must be a string");
                        obj.fields[static_cast<size_t>(i)] = {heap.str(k.ref), v};
                    }
                    uint64_t scanned = 0;
                    for (size_t i = 0; i < obj.fields.size(); ++i)
                        for (size_t j = i + 1; j < obj.fields.size(); ++j)
                            if (obj.fields[i].first == obj.fields[j].first)
                                typeErr("duplicate json key \"" + obj.fields[i].first + "\"");
                    (void)scanned;
                    stack.push_back(Value::json(heap.allocJson(std::move(obj))));
                    work = 2 * static_cast<uint64_t>(n);
                    break;
                }
                case Op::JGET: {
                    Value k = pop(), j = pop();
                    stack.push_back(jsonGet(j, k, heap, work));
                    break;
                }
                case Op::JSET: {
                    Value v = pop(), idx = pop(), t = pop();
                    indexSet(t, idx, v, heap, work);
                    break;
                }
                case Op::STRCAT: {
                    Value rhs = pop(), lhs = pop();
                    if (lhs.tag != TypeId::String && lhs.tag != TypeId::List)
                        typeErr(std::string("STRCAT expects a string or list, got ") +
                                typeName(lhs.tag));
                    stack.push_back(arith(ArithOp::Add, lhs, rhs, heap, work));
                    break;
                }
                case Op::MKCLOSURE: {
                    const FunctionInfo& fi = st_.functions[static_cast<size_t>(ins.a)];
                    if (!fi.defined)
                        throw RuntimeError(RuntimeErrorKind::UnresolvedName,
                                           "function '" + fi.name + "' is not defined");
                    ClosureData cd;
                    cd.func = ins.a;
                    cd.nparams = fi.nparams;
                    cd.star = fi.star;
                    cd.captures.resize(static_cast<size_t>(ins.b));
                    for (int i = ins.b - 1; i >= 0; --i)
                        cd.captures[static_cast<size_t>(i)] = pop();
                    stack.push_back(Value::function(heap.allocClosure(std::move(cd))));
                    work = static_cast<uint64_t>(ins.b);
                    break;
                }

                case Op::LEN: stack.push_back(Value::ofInt(builtinLen(pop(), heap, work))); break;
                case Op::TYPEOF: stack.push_back(typeOf(pop())); break;
                case Op::EXC: {
                    Value v = pop();
                    if (v.tag != TypeId::String)
                        typeErr(std::string("exc expects a string message, got ") +
                                typeName(v.tag));
                    throw RuntimeError(RuntimeErrorKind::UserException, heap.str(v.ref));
                }

                case Op::PRINT: {
                    Value v = pop();
                    std::string s = printTopLevel(v, heap, ins.a != 0);
                    result.output += s;
                    result.output += '\n';
                    work = s.size();
                    break;
                }
                case Op::FWRITE: {
                    Value path = pop(), v = pop();
                    if (path.tag != TypeId::String) typeErr("file path must be a string");
                    std::string s = printValue(v, heap, true);
                    std::ofstream out(heap.str(path.ref), std::ios::trunc);
                    if (!out)
                        throw RuntimeError(RuntimeErrorKind::FileIo,
                                           "cannot open '" + heap.str(path.ref) +
                                               "' for writing");
                    out << s << "\n";
                    work = s.size();
                    break;
                }
                case Op::FREAD: {
                    Value path = pop();
                    if (path.tag != TypeId::String) typeErr("file path must be a string");
                    std::ifstream in(heap.str(path.ref));
                    if (!in)
                        throw RuntimeError(RuntimeErrorKind::FileIo,
                                           "cannot open '" + heap.str(path.ref) +
                                               "' for reading");
                    std::stringstream buf;
                    buf << in.rdbuf();
                    std::string text = buf.str();
                    stack.push_back(parseValueLiteral(text, heap));
                    work = text.size();
                    break;
                }
            }

            clops += static_cast<uint64_t>(info.baseCost) + work;
            pc = next;
            if (frames.size() > maxFrames) maxFrames = frames.size();
            if (stack.size() > maxValues) maxValues = stack.size();
        }
    } catch (RuntimeError& err) {
        err.origin = currentName();
        result.clops = clops;
        result.maxFrameDepth = maxFrames;
        result.maxStackValues = maxValues;
        result.error = std::move(err);
        return result;
    }
}

}  // namespace calculist
