#include "calculist/ast.hpp"

#include "calculist/value_ops.hpp"

namespace calculist {

const char* binOpSpelling(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::IntDiv: return "//";
        case BinOp::Mod: return "%";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        default: return ">=";
    }
}

const char* assignOpSpelling(AssignOp op) {
    switch (op) {
        case AssignOp::Set: return "=";
        case AssignOp::AddSet: return "+=";
        case AssignOp::SubSet: return "-=";
        case AssignOp::MulSet: return "*=";
        default: return "/=";
    }
}

std::string FunctionDecl::signature() const {
    std::string out = name;
    if (star) out += '*';
    out += '(';
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ',';
        out += params[i].name;
        if (params[i].arity > 0) out += "/" + std::to_string(params[i].arity);
    }
    out += ')';
    if (returnArity > 0) out += "/" + std::to_string(returnArity);
    return out;
}

// ---------------------------------------------------------------------------
// Structural equality

namespace {

bool equalExprPtr(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return equalExpr(*a, *b);
}

bool equalBlocks(const std::vector<SettingBlock>& a, const std::vector<SettingBlock>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        const SettingBlock& x = a[i];
        const SettingBlock& y = b[i];
        if (x.kind != y.kind || x.op != y.op || x.target != y.target) return false;
        if (x.path.size() != y.path.size()) return false;
        for (size_t k = 0; k < x.path.size(); ++k)
            if (!equalExprPtr(x.path[k], y.path[k])) return false;
        if (!equalExprPtr(x.value, y.value)) return false;
    }
    return true;
}

bool equalParams(const std::vector<Param>& a, const std::vector<Param>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].name != b[i].name || a[i].arity != b[i].arity) return false;
    return true;
}

}  // namespace

bool equalExpr(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    using K = Expr::Kind;
    switch (a.kind) {
        case K::NullLit: return true;
        case K::IntLit: return a.intValue == b.intValue;
        case K::DoubleLit: return a.doubleValue == b.doubleValue;
        case K::CharLit: return a.charValue == b.charValue;
        case K::BoolLit: return a.boolValue == b.boolValue;
        case K::StringLit: return a.strValue == b.strValue;
        case K::TypeLit: return a.typeValue == b.typeValue;
        case K::Var: return a.strValue == b.strValue;
        case K::LabeledVar: return a.label == b.label && a.strValue == b.strValue;
        case K::FileRead: return a.strValue == b.strValue;
        case K::Unary: return a.uop == b.uop && equalExprPtr(a.a, b.a);
        case K::Binary:
            return a.bop == b.bop && equalExprPtr(a.a, b.a) && equalExprPtr(a.b, b.b);
        case K::Logic:
            return a.lop == b.lop && equalExprPtr(a.a, b.a) && equalExprPtr(a.b, b.b);
        case K::Cond:
            return equalExprPtr(a.a, b.a) && equalExprPtr(a.b, b.b) && equalExprPtr(a.c, b.c);
        case K::Call: {
            if (!equalExprPtr(a.callee, b.callee) || a.args.size() != b.args.size())
                return false;
            for (size_t i = 0; i < a.args.size(); ++i)
                if (!equalExprPtr(a.args[i], b.args[i])) return false;
            return true;
        }
        case K::Lambda:
            return equalParams(a.params, b.params) && equalExprPtr(a.a, b.a);
        case K::Index: return equalExprPtr(a.a, b.a) && equalExprPtr(a.b, b.b);
        case K::Slice:
            return equalExprPtr(a.a, b.a) && equalExprPtr(a.b, b.b) && equalExprPtr(a.c, b.c);
        case K::Head:
        case K::Tail:
        case K::TypeOf:
            return equalExprPtr(a.a, b.a);
        case K::Suffix: return equalExprPtr(a.a, b.a) && equalExprPtr(a.b, b.b);
        case K::ListLit: {
            if (a.args.size() != b.args.size()) return false;
            for (size_t i = 0; i < a.args.size(); ++i)
                if (!equalExprPtr(a.args[i], b.args[i])) return false;
            return equalExprPtr(a.listTail, b.listTail);
        }
        case K::JsonLit: {
            if (a.fields.size() != b.fields.size()) return false;
            for (size_t i = 0; i < a.fields.size(); ++i) {
                if (a.fields[i].first != b.fields[i].first) return false;
                if (!equalExprPtr(a.fields[i].second, b.fields[i].second)) return false;
            }
            return true;
        }
    }
    return false;
}

bool equalBody(const Body& a, const Body& b) {
    if (!equalBlocks(a.pre, b.pre) || !equalBlocks(a.post, b.post)) return false;
    if (!equalExprPtr(a.value, b.value)) return false;
    if (a.isConditional() != b.isConditional()) return false;
    if (a.isConditional())
        return equalBody(*a.thenBranch, *b.thenBranch) && equalBody(*a.elseBranch, *b.elseBranch);
    return true;
}

bool equalStatement(const Statement& a, const Statement& b) {
    if (a.kind != b.kind) return false;
    using K = Statement::Kind;
    switch (a.kind) {
        case K::Assign:
            return a.target == b.target && a.targetLabel == b.targetLabel && a.op == b.op &&
                   equalExprPtr(a.expr, b.expr);
        case K::LabelDecl: return a.label == b.label && a.names == b.names;
        case K::Query: return a.showNull == b.showNull && equalExprPtr(a.expr, b.expr);
        case K::Service: return a.serviceName == b.serviceName && a.serviceArg == b.serviceArg;
        case K::Redirect: return a.path == b.path;
        case K::FuncDef: {
            const FunctionDecl& f = *a.func;
            const FunctionDecl& g = *b.func;
            return f.name == g.name && f.star == g.star && equalParams(f.params, g.params) &&
                   f.returnArity == g.returnArity && f.labels == g.labels &&
                   f.locals == g.locals && equalBody(f.body, g.body);
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Pretty printing (emits re-parseable source)

namespace {

// Precedence levels, loosest to tightest; used to parenthesize minimally.
int precOf(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Cond: return 1;
        case K::Logic: return e.lop == LogicOp::Or ? 2 : 3;
        case K::Binary:
            switch (e.bop) {
                case BinOp::Eq:
                case BinOp::Ne: return 4;
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge: return 5;
                case BinOp::Add:
                case BinOp::Sub: return 6;
                default: return 7;
            }
        case K::Unary: return 8;
        case K::Lambda: return 1;
        default: return 9;  // postfix and primaries
    }
}

std::string printAt(const Expr& e, int minPrec) {
    std::string s = printExpr(e);
    if (precOf(e) < minPrec) return "(" + s + ")";
    return s;
}

std::string printBlock(const SettingBlock& blk) {
    if (blk.kind == SettingBlock::Kind::Print)
        return "{^ " + printExpr(*blk.value) + " ^}";
    std::string out = "{! " + blk.target;
    for (const auto& p : blk.path) out += "[" + printExpr(*p) + "]";
    out += std::string(" ") + assignOpSpelling(blk.op) + " " + printExpr(*blk.value) + " !}";
    return out;
}

std::string printParams(const std::vector<Param>& params) {
    std::string out;
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ",";
        out += params[i].name;
        if (params[i].arity > 0) out += "/" + std::to_string(params[i].arity);
    }
    return out;
}

}  // namespace

std::string printExpr(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::NullLit: return "null";
        case K::IntLit: return std::to_string(e.intValue);
        case K::DoubleLit: return formatDouble(e.doubleValue);
        case K::CharLit: return escapeChar(e.charValue);
        case K::BoolLit: return e.boolValue ? "true" : "false";
        case K::StringLit: return escapeString(e.strValue);
        case K::TypeLit: return typeName(e.typeValue);
        case K::Var: return e.strValue;
        case K::LabeledVar: return e.label + "." + e.strValue;
        case K::FileRead: return "<<(" + escapeString(e.strValue) + ")";
        case K::Unary: {
            const char* op = e.uop == UnOp::Plus ? "+" : (e.uop == UnOp::Minus ? "-" : "!");
            return op + printAt(*e.a, 8);
        }
        case K::Binary: {
            int p = precOf(e);
            return printAt(*e.a, p) + " " + binOpSpelling(e.bop) + " " + printAt(*e.b, p + 1);
        }
        case K::Logic: {
            int p = precOf(e);
            return printAt(*e.a, p) + (e.lop == LogicOp::And ? " && " : " || ") +
                   printAt(*e.b, p + 1);
        }
        case K::Cond:
            return printAt(*e.a, 2) + " ? " + printAt(*e.b, 1) + " : " + printAt(*e.c, 1);
        case K::Call: {
            std::string out = printAt(*e.callee, 9) + "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                out += printExpr(*e.args[i]);
            }
            return out + ")";
        }
        case K::Lambda:
            return "lambda " + printParams(e.params) + ": " + printExpr(*e.a);
        case K::Index: return printAt(*e.a, 9) + "[" + printExpr(*e.b) + "]";
        case K::Slice: {
            std::string out = printAt(*e.a, 9) + "[";
            if (e.b) out += printExpr(*e.b);
            out += ":";
            if (e.c) out += printExpr(*e.c);
            return out + "]";
        }
        case K::Head: return printAt(*e.a, 9) + "[.]";
        case K::Tail: return printAt(*e.a, 9) + "[>]";
        case K::Suffix: return printAt(*e.a, 9) + "[>" + printExpr(*e.b) + "]";
        case K::TypeOf: return printAt(*e.a, 9) + "@type";
        case K::ListLit: {
            std::string out = "[";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                out += printExpr(*e.args[i]);
            }
            if (e.listTail) out += " | " + printExpr(*e.listTail);
            return out + "]";
        }
        case K::JsonLit: {
            if (e.fields.empty()) return "{}";
            std::string out = "{ ";
            for (size_t i = 0; i < e.fields.size(); ++i) {
                if (i) out += ", ";
                out += escapeString(e.fields[i].first) + ": " + printExpr(*e.fields[i].second);
            }
            return out + " }";
        }
    }
    return "";
}

std::string printBody(const Body& b) {
    std::string out;
    for (const auto& blk : b.pre) out += printBlock(blk) + " ";
    if (b.isConditional()) {
        out += printAt(*b.value, 2) + " ? " + printBody(*b.thenBranch) + " : " +
               printBody(*b.elseBranch);
    } else {
        out += printAt(*b.value, 2);
        for (const auto& blk : b.post) out += " " + printBlock(blk);
    }
    return out;
}

std::string printStatement(const Statement& s) {
    using K = Statement::Kind;
    switch (s.kind) {
        case K::Assign: {
            std::string lhs = s.targetLabel.empty() ? s.target : s.targetLabel + "." + s.target;
            return lhs + " " + assignOpSpelling(s.op) + " " + printExpr(*s.expr) + ";";
        }
        case K::LabelDecl: {
            std::string out = s.label + ": ";
            for (size_t i = 0; i < s.names.size(); ++i) {
                if (i) out += ", ";
                out += s.names[i];
            }
            return out + ";";
        }
        case K::Query:
            return "^" + printExpr(*s.expr) + (s.showNull ? " %" : "") + ";";
        case K::Service:
            return "!" + s.serviceName + (s.serviceArg.empty() ? "" : " " + s.serviceArg);
        case K::Redirect: return ">>(" + s.path + ")";
        case K::FuncDef: {
            const FunctionDecl& f = *s.func;
            std::string out = f.name;
            if (f.star) out += '*';
            out += "(" + printParams(f.params) + ")";
            if (f.returnArity > 0) out += "/" + std::to_string(f.returnArity);
            out += ": ";
            if (!f.labels.empty() || !f.locals.empty()) {
                out += "<";
                bool first = true;
                for (const auto& l : f.labels) {
                    if (!first) out += ", ";
                    first = false;
                    out += l + "*";
                }
                for (const auto& l : f.locals) {
                    if (!first) out += ", ";
                    first = false;
                    out += l;
                }
                out += "> ";
            }
            return out + printBody(f.body) + ";";
        }
    }
    return "";
}

}  // namespace calculist
