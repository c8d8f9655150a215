#include "calculist/compiler.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "calculist/value_ops.hpp"

namespace calculist {

namespace {

// ---------------------------------------------------------------------------
// Constant-operand static type checking. Mirrors the runtime rules, including
// short-circuit evaluation; only type errors are promoted to compile errors,
// arithmetic errors (e.g. division by zero) stay dynamic.

std::optional<Value> constEval(const Expr& e, Heap& scratch);

std::optional<Value> constEvalOperator(const Expr& e, Heap& scratch) {
    uint64_t work = 0;
    using K = Expr::Kind;
    try {
        switch (e.kind) {
            case K::Unary: {
                auto v = constEval(*e.a, scratch);
                if (!v) return std::nullopt;
                switch (e.uop) {
                    case UnOp::Minus: return negate(*v);
                    case UnOp::Not: return logicalNot(*v);
                    default: return arith(ArithOp::Add, Value::ofInt(0), *v, scratch, work);
                }
            }
            case K::Binary: {
                auto va = constEval(*e.a, scratch);
                auto vb = constEval(*e.b, scratch);
                if (!va || !vb) return std::nullopt;
                switch (e.bop) {
                    case BinOp::Add: return arith(ArithOp::Add, *va, *vb, scratch, work);
                    case BinOp::Sub: return arith(ArithOp::Sub, *va, *vb, scratch, work);
                    case BinOp::Mul: return arith(ArithOp::Mul, *va, *vb, scratch, work);
                    case BinOp::Div: return arith(ArithOp::Div, *va, *vb, scratch, work);
                    case BinOp::IntDiv: return arith(ArithOp::IntDiv, *va, *vb, scratch, work);
                    case BinOp::Mod: return arith(ArithOp::Mod, *va, *vb, scratch, work);
                    case BinOp::Eq: return compare(CmpOp::Eq, *va, *vb, scratch, work);
                    case BinOp::Ne: return compare(CmpOp::Ne, *va, *vb, scratch, work);
                    case BinOp::Lt: return compare(CmpOp::Lt, *va, *vb, scratch, work);
                    case BinOp::Le: return compare(CmpOp::Le, *va, *vb, scratch, work);
                    case BinOp::Gt: return compare(CmpOp::Gt, *va, *vb, scratch, work);
                    default: return compare(CmpOp::Ge, *va, *vb, scratch, work);
                }
            }
            case K::Logic: {
                auto va = constEval(*e.a, scratch);
                if (!va) return std::nullopt;
                bool a = asBool(*va, "logical operand");
                if (e.lop == LogicOp::And && !a) return Value::ofBool(false);
                if (e.lop == LogicOp::Or && a) return Value::ofBool(true);
                auto vb = constEval(*e.b, scratch);
                if (!vb) return std::nullopt;
                return Value::ofBool(asBool(*vb, "logical operand"));
            }
            case K::Cond: {
                auto vt = constEval(*e.a, scratch);
                if (!vt) return std::nullopt;
                bool t = asBool(*vt, "condition");
                return constEval(t ? *e.b : *e.c, scratch);
            }
            default: return std::nullopt;
        }
    } catch (const RuntimeError& err) {
        if (err.kind == RuntimeErrorKind::TypeError)
            throw CompileError(err.message, e.pos);
        return std::nullopt;  // arithmetic errors stay dynamic
    }
}

std::optional<Value> constEval(const Expr& e, Heap& scratch) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::NullLit: return Value::null();
        case K::IntLit: return Value::ofInt(e.intValue);
        case K::DoubleLit: return Value::ofDouble(e.doubleValue);
        case K::CharLit: return Value::ofChar(e.charValue);
        case K::BoolLit: return Value::ofBool(e.boolValue);
        case K::TypeLit: return Value::ofType(e.typeValue);
        case K::StringLit: return Value::string(scratch.allocString(e.strValue));
        case K::Unary:
        case K::Binary:
        case K::Logic:
        case K::Cond:
            return constEvalOperator(e, scratch);
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------

struct NameRef {
    enum class Kind { Param, Local, Global, Function, Builtin, Unknown };
    Kind kind = Kind::Unknown;
    int index = -1;
};

class UnitCompiler {
public:
    UnitCompiler(SessionState& st) : st_(st) {}

    // --- scope -------------------------------------------------------------
    struct Scope {
        const FunctionDecl* decl = nullptr;  // null at top level
        int selfSlot = -1;
        bool star = true;  // top level may call star functions
        std::unordered_map<std::string, int> paramSlot;
        std::unordered_map<std::string, int> localSlot;
        std::unordered_map<std::string, int> labeledSlot;
        std::unordered_map<std::string, int> paramArity;
        // lambda support
        Scope* parent = nullptr;
        bool isLambda = false;
        int nparams = 0;
        struct Capture { bool fromParam; int outerIndex; std::string name; };
        std::vector<Capture> captures;
    };

    CompileUnit take() { return std::move(unit_); }

    int emit(Op op, int32_t a = 0, int32_t b = 0) {
        unit_.code.push_back({op, a, b});
        return static_cast<int>(unit_.code.size()) - 1;
    }
    void patch(int addr, int32_t target) { unit_.code[addr].a = target; }
    int here() const { return static_cast<int>(unit_.code.size()); }

    int constant(Value v) {
        std::string key;
        switch (v.tag) {
            case TypeId::String: key = "s:" + st_.heap.str(v.ref); break;
            case TypeId::Double: key = "d:" + formatDouble(v.d); break;
            case TypeId::Int: key = "i:" + std::to_string(v.i); break;
            case TypeId::Char: key = "c:" + std::to_string(v.cp); break;
            case TypeId::Bool: key = v.b ? "b:1" : "b:0"; break;
            case TypeId::Null: key = "n"; break;
            default: key = std::string("t:") + typeName(v.ty); break;
        }
        auto it = constIndex_.find(key);
        if (it != constIndex_.end()) return it->second;
        int idx = static_cast<int>(unit_.constants.size());
        unit_.constants.push_back(v);
        constIndex_.emplace(key, idx);
        return idx;
    }
    int stringConstant(const std::string& s) {
        auto it = constIndex_.find("s:" + s);
        if (it != constIndex_.end()) return it->second;
        return constant(Value::string(st_.heap.allocString(s)));
    }

    void pushConst(Value v) { emit(Op::PUSHC, constant(v)); }

    void referenceFunction(int slot) {
        for (int s : unit_.referencedFunctions)
            if (s == slot) return;
        unit_.referencedFunctions.push_back(slot);
    }

    std::vector<FunctionInfo::CallSite> callSites;

    // --- name resolution -----------------------------------------------------
    NameRef resolve(Scope& sc, const std::string& name) {
        if (name == "_len" || name == "exc") return {NameRef::Kind::Builtin, 0};
        auto p = sc.paramSlot.find(name);
        if (p != sc.paramSlot.end()) return {NameRef::Kind::Param, p->second};
        auto l = sc.localSlot.find(name);
        if (l != sc.localSlot.end()) return {NameRef::Kind::Local, l->second};
        auto g = sc.labeledSlot.find(name);
        if (g != sc.labeledSlot.end()) return {NameRef::Kind::Global, g->second};
        if (sc.isLambda) {
            int cap = resolveCapture(sc, name);
            if (cap >= 0) return {NameRef::Kind::Param, cap};
        }
        if (!sc.decl && !sc.isLambda) {
            int gs = st_.globalSlot(name);
            if (gs >= 0) return {NameRef::Kind::Global, gs};
            int fs = st_.functionSlot(name);
            if (fs >= 0 && st_.functions[fs].defined)
                return {NameRef::Kind::Function, fs};
            return {NameRef::Kind::Unknown, -1};
        }
        // inside a function body names may bind to not-yet-defined functions
        return {NameRef::Kind::Function, -2};
    }

    // Returns the frame slot (nparams + captureIdx) or -1 when the name is not
    // visible in any enclosing frame. Transitively adds captures.
    int resolveCapture(Scope& sc, const std::string& name) {
        for (size_t i = 0; i < sc.captures.size(); ++i)
            if (sc.captures[i].name == name)
                return sc.nparams + static_cast<int>(i);
        Scope* par = sc.parent;
        if (!par) return -1;
        auto p = par->paramSlot.find(name);
        if (p != par->paramSlot.end()) {
            sc.captures.push_back({true, p->second, name});
            return sc.nparams + static_cast<int>(sc.captures.size()) - 1;
        }
        auto l = par->localSlot.find(name);
        if (l != par->localSlot.end()) {
            sc.captures.push_back({false, l->second, name});
            return sc.nparams + static_cast<int>(sc.captures.size()) - 1;
        }
        if (par->isLambda) {
            int outer = resolveCapture(*par, name);
            if (outer >= 0) {
                sc.captures.push_back({true, outer, name});
                return sc.nparams + static_cast<int>(sc.captures.size()) - 1;
            }
        }
        return -1;
    }

    // --- expressions ---------------------------------------------------------
    void compileExpr(const Expr& e, Scope& sc) {
        using K = Expr::Kind;
        switch (e.kind) {
            case K::NullLit: pushConst(Value::null()); return;
            case K::IntLit: pushConst(Value::ofInt(e.intValue)); return;
            case K::DoubleLit: pushConst(Value::ofDouble(e.doubleValue)); return;
            case K::CharLit: pushConst(Value::ofChar(e.charValue)); return;
            case K::BoolLit: pushConst(Value::ofBool(e.boolValue)); return;
            case K::TypeLit: pushConst(Value::ofType(e.typeValue)); return;
            case K::StringLit: emit(Op::PUSHC, stringConstant(e.strValue)); return;
            case K::Var: compileVar(e, sc); return;
            case K::LabeledVar: compileLabeledVar(e, sc); return;
            case K::Unary: {
                staticCheck(e);
                if (e.uop == UnOp::Plus) {
                    // unary + promotes char to int and rejects non-numerics,
                    // exactly like adding zero
                    pushConst(Value::ofInt(0));
                    compileExpr(*e.a, sc);
                    emit(Op::ADD);
                } else {
                    compileExpr(*e.a, sc);
                    emit(e.uop == UnOp::Minus ? Op::NEG : Op::NOT);
                }
                return;
            }
            case K::Binary: {
                staticCheck(e);
                compileExpr(*e.a, sc);
                compileExpr(*e.b, sc);
                switch (e.bop) {
                    case BinOp::Add: emit(Op::ADD); break;
                    case BinOp::Sub: emit(Op::SUB); break;
                    case BinOp::Mul: emit(Op::MUL); break;
                    case BinOp::Div: emit(Op::DIV); break;
                    case BinOp::IntDiv: emit(Op::IDIV); break;
                    case BinOp::Mod: emit(Op::MOD); break;
                    case BinOp::Eq: emit(Op::EQ); break;
                    case BinOp::Ne: emit(Op::NE); break;
                    case BinOp::Lt: emit(Op::LT); break;
                    case BinOp::Le: emit(Op::LE); break;
                    case BinOp::Gt: emit(Op::GT); break;
                    default: emit(Op::GE); break;
                }
                return;
            }
            case K::Logic: {
                staticCheck(e);
                // short-circuit branches; JZ/NOT validate operand types
                if (e.lop == LogicOp::And) {
                    compileExpr(*e.a, sc);
                    int j1 = emit(Op::JZ);
                    compileExpr(*e.b, sc);
                    int j2 = emit(Op::JZ);
                    pushConst(Value::ofBool(true));
                    int jEnd = emit(Op::JMP);
                    patch(j1, here());
                    patch(j2, here());
                    pushConst(Value::ofBool(false));
                    patch(jEnd, here());
                } else {
                    compileExpr(*e.a, sc);
                    emit(Op::NOT);
                    int j1 = emit(Op::JZ);
                    compileExpr(*e.b, sc);
                    emit(Op::NOT);
                    int j2 = emit(Op::JZ);
                    pushConst(Value::ofBool(false));
                    int jEnd = emit(Op::JMP);
                    patch(j1, here());
                    patch(j2, here());
                    pushConst(Value::ofBool(true));
                    patch(jEnd, here());
                }
                return;
            }
            case K::Cond: {
                staticCheck(e);
                compileExpr(*e.a, sc);
                int jElse = emit(Op::JZ);
                compileExpr(*e.b, sc);
                int jEnd = emit(Op::JMP);
                patch(jElse, here());
                compileExpr(*e.c, sc);
                patch(jEnd, here());
                return;
            }
            case K::Call: compileCall(e, sc); return;
            case K::Lambda: compileLambda(e, sc); return;
            case K::Index:
                compileExpr(*e.a, sc);
                compileExpr(*e.b, sc);
                emit(Op::INDEX);
                return;
            case K::Slice:
                compileExpr(*e.a, sc);
                if (e.b) compileExpr(*e.b, sc); else pushConst(Value::null());
                if (e.c) compileExpr(*e.c, sc); else pushConst(Value::null());
                emit(Op::SLICE);
                return;
            case K::Head:
                compileExpr(*e.a, sc);
                emit(Op::HEAD);
                return;
            case K::Tail:
                compileExpr(*e.a, sc);
                emit(Op::TAIL);
                return;
            case K::Suffix:
                compileExpr(*e.a, sc);
                compileExpr(*e.b, sc);
                emit(Op::SUFFIX);
                return;
            case K::TypeOf:
                compileExpr(*e.a, sc);
                emit(Op::TYPEOF);
                return;
            case K::ListLit: {
                for (const auto& item : e.args) compileExpr(*item, sc);
                if (e.listTail) compileExpr(*e.listTail, sc);
                else emit(Op::NEWLIST);
                for (size_t i = 0; i < e.args.size(); ++i) emit(Op::CONS);
                return;
            }
            case K::JsonLit: {
                for (const auto& [key, value] : e.fields) {
                    emit(Op::PUSHC, stringConstant(key));
                    compileExpr(*value, sc);
                }
                emit(Op::NEWJSON, static_cast<int32_t>(e.fields.size()));
                return;
            }
            case K::FileRead:
                emit(Op::PUSHC, stringConstant(e.strValue));
                emit(Op::FREAD);
                return;
        }
    }

    void staticCheck(const Expr& e) {
        Heap scratch;
        constEvalOperator(e, scratch);  // throws CompileError on constant type errors
    }

    void compileVar(const Expr& e, Scope& sc) {
        NameRef ref = resolve(sc, e.strValue);
        switch (ref.kind) {
            case NameRef::Kind::Param: emit(Op::LOADP, ref.index); return;
            case NameRef::Kind::Local: emit(Op::LOADL, ref.index); return;
            case NameRef::Kind::Global: emit(Op::LOADG, ref.index); return;
            case NameRef::Kind::Function: {
                int slot = ref.index == -2 ? st_.internFunction(e.strValue) : ref.index;
                referenceFunction(slot);
                callSites.push_back({slot, -1, e.pos});
                emit(Op::MKCLOSURE, slot, 0);
                return;
            }
            case NameRef::Kind::Builtin:
                throw CompileError("builtin '" + e.strValue + "' cannot be used as a value",
                                   e.pos);
            default:
                throw CompileError("unknown identifier '" + e.strValue + "'", e.pos);
        }
    }

    void compileLabeledVar(const Expr& e, Scope& sc) {
        if (sc.decl || sc.isLambda)
            throw CompileError(
                "labeled variables are addressed without their label inside functions", e.pos);
        int slot = st_.globalSlot(e.label + "." + e.strValue);
        if (slot < 0)
            throw CompileError("unknown labeled variable '" + e.label + "." + e.strValue + "'",
                               e.pos);
        emit(Op::LOADG, slot);
    }

    // Static arity check of a function-valued argument against a declared
    // parameter arity, where the argument's own arity is statically known.
    void checkArgArity(const Expr& arg, int wantArity, Scope& sc) {
        if (wantArity <= 0) return;
        int got = -1;
        if (arg.kind == Expr::Kind::Lambda) {
            got = static_cast<int>(arg.params.size());
        } else if (arg.kind == Expr::Kind::Var) {
            auto pa = sc.paramArity.find(arg.strValue);
            if (pa != sc.paramArity.end() && pa->second > 0) {
                got = pa->second;
            } else {
                int fs = st_.functionSlot(arg.strValue);
                if (fs >= 0 && st_.functions[fs].defined && !sc.paramSlot.count(arg.strValue) &&
                    !sc.localSlot.count(arg.strValue))
                    got = st_.functions[fs].nparams;
            }
        }
        if (got >= 0 && got != wantArity)
            throw CompileError("function argument has arity " + std::to_string(got) +
                                   " where arity " + std::to_string(wantArity) + " is expected",
                               arg.pos);
    }

    void compileCall(const Expr& e, Scope& sc) {
        int nargs = static_cast<int>(e.args.size());
        if (e.callee->kind == Expr::Kind::Var) {
            const std::string& name = e.callee->strValue;
            NameRef ref = resolve(sc, name);
            switch (ref.kind) {
                case NameRef::Kind::Builtin: {
                    if (nargs != 1)
                        throw CompileError("builtin '" + name + "' takes exactly one argument",
                                           e.pos);
                    compileExpr(*e.args[0], sc);
                    emit(name == "_len" ? Op::LEN : Op::EXC);
                    return;
                }
                case NameRef::Kind::Param: {
                    int declared = sc.paramArity.count(name) ? sc.paramArity[name] : 0;
                    if (declared == 0 && sc.decl)
                        throw CompileError("parameter '" + name +
                                               "' is not declared as a function (use " + name +
                                               "/n)",
                                           e.pos);
                    if (declared > 0 && nargs != declared)
                        throw CompileError("parameter '" + name + "' has declared arity " +
                                               std::to_string(declared) + ", called with " +
                                               std::to_string(nargs) + " arguments",
                                           e.pos);
                    emit(Op::LOADP, ref.index);
                    for (const auto& a : e.args) compileExpr(*a, sc);
                    emit(Op::CALLIND, nargs);
                    return;
                }
                case NameRef::Kind::Local:
                case NameRef::Kind::Global: {
                    emit(ref.kind == NameRef::Kind::Local ? Op::LOADL : Op::LOADG, ref.index);
                    for (const auto& a : e.args) compileExpr(*a, sc);
                    emit(Op::CALLIND, nargs);
                    return;
                }
                case NameRef::Kind::Function: {
                    int slot;
                    if (ref.index == -2) {
                        // self-recursion or a (possibly forward) function name
                        slot = st_.internFunction(name);
                    } else {
                        slot = ref.index;
                    }
                    const bool isSelf = sc.decl && slot == sc.selfSlot;
                    if (isSelf) {
                        int want = static_cast<int>(sc.decl->params.size());
                        if (nargs != want)
                            throw CompileError("function '" + name + "' takes " +
                                                   std::to_string(want) + " arguments, called with " +
                                                   std::to_string(nargs),
                                               e.pos);
                        for (int i = 0; i < nargs; ++i)
                            checkArgArity(*e.args[i], sc.decl->params[i].arity, sc);
                    } else if (st_.functions[slot].defined) {
                        const FunctionInfo& fi = st_.functions[slot];
                        if (!sc.star && fi.star)
                            throw CompileError("star function '" + name +
                                                   "' cannot be called from a non-star function",
                                               e.pos);
                        if (nargs != fi.nparams)
                            throw CompileError("function '" + name + "' takes " +
                                                   std::to_string(fi.nparams) +
                                                   " arguments, called with " +
                                                   std::to_string(nargs),
                                               e.pos);
                        for (int i = 0; i < nargs; ++i)
                            checkArgArity(*e.args[i], fi.paramArities[i], sc);
                    } else if (!sc.decl && !sc.isLambda) {
                        throw CompileError("unknown function '" + name + "'", e.pos);
                    }
                    referenceFunction(slot);
                    callSites.push_back({slot, nargs, e.pos});
                    for (const auto& a : e.args) compileExpr(*a, sc);
                    emit(Op::CALL, slot, nargs);
                    return;
                }
                default:
                    throw CompileError("unknown function '" + name + "'", e.pos);
            }
        }
        // general callee expression (chained calls, parenthesized values)
        compileExpr(*e.callee, sc);
        // static return-arity check for g(...)(...) where g declares /n
        if (e.callee->kind == Expr::Kind::Call &&
            e.callee->callee->kind == Expr::Kind::Var) {
            const std::string& g = e.callee->callee->strValue;
            int fs = st_.functionSlot(g);
            if (fs >= 0 && st_.functions[fs].defined && st_.functions[fs].returnArity > 0 &&
                nargs != st_.functions[fs].returnArity)
                throw CompileError("function '" + g + "' returns a function of arity " +
                                       std::to_string(st_.functions[fs].returnArity) +
                                       ", called with " + std::to_string(nargs) + " arguments",
                                   e.pos);
        }
        for (const auto& a : e.args) compileExpr(*a, sc);
        emit(Op::CALLIND, nargs);
    }

    void compileLambda(const Expr& e, Scope& sc) {
        // compile the lambda body into its own hidden function
        UnitCompiler sub(st_);
        Scope lsc;
        lsc.isLambda = true;
        lsc.parent = &sc;
        lsc.star = false;  // lambdas have no side effects
        lsc.nparams = static_cast<int>(e.params.size());
        for (size_t i = 0; i < e.params.size(); ++i) {
            lsc.paramSlot[e.params[i].name] = static_cast<int>(i);
            if (e.params[i].arity > 0) lsc.paramArity[e.params[i].name] = e.params[i].arity;
        }
        sub.compileExpr(*e.a, lsc);
        sub.emit(Op::RET);

        int slot = st_.internFunction("lambda#" + std::to_string(st_.functions.size()));
        FunctionInfo& fi = st_.functions[slot];
        fi.defined = true;
        fi.isLambda = true;
        fi.star = false;
        fi.nparams = lsc.nparams;
        for (const auto& p : e.params) {
            fi.paramArities.push_back(p.arity);
            fi.paramNames.push_back(p.name);
        }
        fi.ncaptures = static_cast<int>(lsc.captures.size());
        fi.nlocals = 0;
        fi.unit = sub.take();
        fi.callSites = std::move(sub.callSites);
        fi.signature = "lambda/" + std::to_string(fi.nparams);

        // push captured values from the enclosing frame, then the closure
        for (const auto& cap : lsc.captures)
            emit(cap.fromParam ? Op::LOADP : Op::LOADL, cap.outerIndex);
        referenceFunction(slot);
        emit(Op::MKCLOSURE, slot, fi.ncaptures);
    }

    // --- setting blocks and bodies -------------------------------------------

    void compileStore(const NameRef& ref) {
        switch (ref.kind) {
            case NameRef::Kind::Param: emit(Op::STOREP, ref.index); return;
            case NameRef::Kind::Local: emit(Op::STOREL, ref.index); return;
            default: emit(Op::STOREG, ref.index); return;
        }
    }
    void compileLoad(const NameRef& ref) {
        switch (ref.kind) {
            case NameRef::Kind::Param: emit(Op::LOADP, ref.index); return;
            case NameRef::Kind::Local: emit(Op::LOADL, ref.index); return;
            default: emit(Op::LOADG, ref.index); return;
        }
    }

    Op arithOpFor(AssignOp op) {
        switch (op) {
            case AssignOp::AddSet: return Op::ADD;
            case AssignOp::SubSet: return Op::SUB;
            case AssignOp::MulSet: return Op::MUL;
            default: return Op::DIV;
        }
    }

    void compileBlock(const SettingBlock& blk, Scope& sc) {
        if (blk.kind == SettingBlock::Kind::Print) {
            compileExpr(*blk.value, sc);
            emit(Op::PRINT, 1);
            return;
        }
        NameRef ref = resolve(sc, blk.target);
        if (ref.kind != NameRef::Kind::Param && ref.kind != NameRef::Kind::Local &&
            ref.kind != NameRef::Kind::Global)
            throw CompileError("setting target '" + blk.target +
                                   "' is not a parameter, local or labeled variable",
                               blk.pos);
        if (blk.path.empty()) {
            if (blk.op == AssignOp::Set) {
                compileExpr(*blk.value, sc);
            } else {
                compileLoad(ref);
                compileExpr(*blk.value, sc);
                emit(arithOpFor(blk.op));
            }
            compileStore(ref);
            return;
        }
        // element/field write: target chain, last index, value, JSET
        auto emitChainToParent = [&]() {
            compileLoad(ref);
            for (size_t i = 0; i + 1 < blk.path.size(); ++i) {
                compileExpr(*blk.path[i], sc);
                emit(Op::INDEX);
            }
        };
        emitChainToParent();
        compileExpr(*blk.path.back(), sc);
        if (blk.op == AssignOp::Set) {
            compileExpr(*blk.value, sc);
        } else {
            // old value: the path is evaluated a second time
            emitChainToParent();
            compileExpr(*blk.path.back(), sc);
            emit(Op::INDEX);
            compileExpr(*blk.value, sc);
            emit(arithOpFor(blk.op));
        }
        emit(Op::JSET);
    }

    void compileBody(const Body& b, Scope& sc) {
        for (const auto& blk : b.pre) compileBlock(blk, sc);
        if (b.isConditional()) {
            compileExpr(*b.value, sc);
            int jElse = emit(Op::JZ);
            compileBody(*b.thenBranch, sc);
            int jEnd = emit(Op::JMP);
            patch(jElse, here());
            compileBody(*b.elseBranch, sc);
            patch(jEnd, here());
        } else {
            compileExpr(*b.value, sc);
            for (const auto& blk : b.post) compileBlock(blk, sc);
        }
    }

    SessionState& st_;
    CompileUnit unit_;
    std::map<std::string, int> constIndex_;
};

}  // namespace

CompileUnit compileQuery(const Expr& expr, bool showNull, SessionState& st) {
    UnitCompiler c(st);
    UnitCompiler::Scope top;
    c.compileExpr(expr, top);
    c.emit(Op::PRINT, showNull ? 1 : 0);
    c.emit(Op::HALT);
    return c.take();
}

CompileUnit compileAssignment(const Statement& stmt, SessionState& st) {
    UnitCompiler c(st);
    UnitCompiler::Scope top;

    int slot;
    if (!stmt.targetLabel.empty()) {
        slot = st.globalSlot(stmt.targetLabel + "." + stmt.target);
        if (slot < 0)
            throw CompileError("unknown labeled variable '" + stmt.targetLabel + "." +
                                   stmt.target + "'",
                               stmt.pos);
    } else {
        int fs = st.functionSlot(stmt.target);
        if (fs >= 0 && st.functions[fs].defined)
            throw CompileError("'" + stmt.target + "' is already defined as a function",
                               stmt.pos);
        slot = st.globalSlot(stmt.target);
        if (slot < 0 && stmt.op != AssignOp::Set)
            throw CompileError("variable '" + stmt.target + "' is not defined", stmt.pos);
    }

    if (stmt.op == AssignOp::Set) {
        c.compileExpr(*stmt.expr, top);
        if (slot < 0) slot = st.internGlobal(stmt.target);
        c.emit(Op::STOREG, slot);
    } else {
        c.emit(Op::LOADG, slot);
        c.compileExpr(*stmt.expr, top);
        switch (stmt.op) {
            case AssignOp::AddSet: c.emit(Op::ADD); break;
            case AssignOp::SubSet: c.emit(Op::SUB); break;
            case AssignOp::MulSet: c.emit(Op::MUL); break;
            default: c.emit(Op::DIV); break;
        }
        c.emit(Op::STOREG, slot);
    }
    c.emit(Op::HALT);
    return c.take();
}

CompileUnit compileLabelDecl(const Statement& stmt, SessionState& st) {
    // register (or extend) the label, then emit code resetting every member
    std::vector<std::string>* members = nullptr;
    for (auto& [name, list] : st.labelDecls)
        if (name == stmt.label) members = &list;
    if (!members) {
        st.labelDecls.emplace_back(stmt.label, std::vector<std::string>{});
        members = &st.labelDecls.back().second;
    }
    for (const auto& n : stmt.names) {
        bool known = false;
        for (const auto& m : *members) known = known || m == n;
        if (!known) members->push_back(n);
    }

    UnitCompiler c(st);
    for (const auto& m : *members) {
        int slot = st.internGlobal(stmt.label + "." + m);
        c.pushConst(Value::null());
        c.emit(Op::STOREG, slot);
    }
    c.emit(Op::HALT);
    return c.take();
}

void tailCallOptimize(CompileUnit& unit, int selfSlot) {
    const size_t n = unit.code.size();
    for (size_t i = 0; i < n; ++i) {
        Instruction& ins = unit.code[i];
        if (ins.op != Op::CALL || ins.a != selfSlot) continue;
        size_t q = i + 1;
        int guard = 0;
        while (q < n && unit.code[q].op == Op::JMP && guard++ < 10000)
            q = static_cast<size_t>(unit.code[q].a);
        if (q < n && unit.code[q].op == Op::RET) ins.op = Op::TAILCALL;
    }
}

int defineFunction(const FunctionDecl& decl, SessionState& st) {
    int gs = st.globalSlot(decl.name);
    if (gs >= 0)
        throw CompileError("'" + decl.name + "' is already defined as a variable", decl.pos);

    int slot = st.internFunction(decl.name);
    FunctionInfo& existing = st.functions[slot];
    if (existing.defined && existing.star != decl.star)
        throw CompileError(
            "the star property of '" + decl.name + "' cannot be changed after its first definition",
            decl.pos);

    // labels must have been declared
    for (const auto& label : decl.labels)
        if (!st.labelMembers(label))
            throw CompileError("unknown label '" + label + "' in function header", decl.pos);

    UnitCompiler c(st);
    UnitCompiler::Scope sc;
    sc.decl = &decl;
    sc.selfSlot = slot;
    sc.star = decl.star;
    sc.nparams = static_cast<int>(decl.params.size());
    for (size_t i = 0; i < decl.params.size(); ++i) {
        sc.paramSlot[decl.params[i].name] = static_cast<int>(i);
        if (decl.params[i].arity > 0)
            sc.paramArity[decl.params[i].name] = decl.params[i].arity;
    }
    for (size_t i = 0; i < decl.locals.size(); ++i)
        sc.localSlot[decl.locals[i]] = sc.nparams + static_cast<int>(i);
    for (const auto& label : decl.labels) {
        for (const auto& member : *st.labelMembers(label)) {
            std::string qualified = label + "." + member;
            if (sc.labeledSlot.count(member))
                throw CompileError("labeled variable '" + member +
                                       "' is ambiguous between listed labels",
                                   decl.pos);
            // locals and parameters shadow labeled variables
            if (!sc.paramSlot.count(member) && !sc.localSlot.count(member))
                sc.labeledSlot[member] = st.globalSlot(qualified);
        }
    }

    c.compileBody(decl.body, sc);
    c.emit(Op::RET);

    CompileUnit unit = c.take();
    tailCallOptimize(unit, slot);

    FunctionInfo& fi = st.functions[slot];
    fi.defined = true;
    fi.star = decl.star;
    fi.nparams = static_cast<int>(decl.params.size());
    fi.paramArities.clear();
    fi.paramNames.clear();
    for (const auto& p : decl.params) {
        fi.paramArities.push_back(p.arity);
        fi.paramNames.push_back(p.name);
    }
    fi.returnArity = decl.returnArity;
    fi.ncaptures = 0;
    fi.nlocals = static_cast<int>(decl.locals.size());
    fi.localNames = decl.locals;
    fi.labels = decl.labels;
    fi.unit = std::move(unit);
    fi.callSites = std::move(c.callSites);
    fi.signature = decl.signature();
    return slot;
}

void validateResolved(const CompileUnit& unit, const SessionState& st) {
    std::vector<int> work = unit.referencedFunctions;
    std::unordered_set<int> seen(work.begin(), work.end());
    while (!work.empty()) {
        int slot = work.back();
        work.pop_back();
        const FunctionInfo& fi = st.functions[static_cast<size_t>(slot)];
        if (!fi.defined)
            throw CompileError("function '" + fi.name + "' is not defined");
        for (const auto& cs : fi.callSites) {
            const FunctionInfo& callee = st.functions[static_cast<size_t>(cs.slot)];
            if (!callee.defined)
                throw CompileError("function '" + callee.name + "' is not defined (used by '" +
                                   fi.name + "')");
            if (cs.nargs >= 0 && !fi.star && callee.star)
                throw CompileError("star function '" + callee.name +
                                   "' cannot be called from non-star '" + fi.name + "'");
            if (cs.nargs >= 0 && cs.nargs != callee.nparams)
                throw CompileError("function '" + callee.name + "' takes " +
                                   std::to_string(callee.nparams) + " arguments, called with " +
                                   std::to_string(cs.nargs) + " in '" + fi.name + "'");
        }
        for (int next : fi.unit.referencedFunctions)
            if (seen.insert(next).second) work.push_back(next);
    }
}

}  // namespace calculist
