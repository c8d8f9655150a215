// Parsed statements and expressions, including conditional chains decorated
// with setting/printing command blocks.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "calculist/errors.hpp"
#include "calculist/value.hpp"

namespace calculist {

enum class BinOp { Add, Sub, Mul, Div, IntDiv, Mod, Eq, Ne, Lt, Le, Gt, Ge };
enum class UnOp { Plus, Minus, Not };
enum class LogicOp { And, Or };
enum class AssignOp { Set, AddSet, SubSet, MulSet, DivSet };

const char* binOpSpelling(BinOp op);
const char* assignOpSpelling(AssignOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Param {
    std::string name;
    int arity = 0;  // 0 = plain value parameter; n>0 = function of arity n
};

struct Expr {
    enum class Kind {
        NullLit, IntLit, DoubleLit, CharLit, BoolLit, StringLit, TypeLit,
        Var,         // name
        LabeledVar,  // label.name (top level only)
        Unary, Binary, Logic, Cond,
        Call,        // callee(args)
        Lambda,      // lambda params: body
        Index,       // a[b]
        Slice,       // a[b:c] with optional bounds
        Head,        // a[.]
        Tail,        // a[>]
        Suffix,      // a[>b]
        TypeOf,      // a@type
        ListLit,     // [items | tail]
        JsonLit,
        FileRead,    // <<(path)
    };

    Kind kind;
    SourcePos pos;

    // literals
    int32_t intValue = 0;
    double doubleValue = 0.0;
    uint32_t charValue = 0;
    bool boolValue = false;
    TypeId typeValue = TypeId::Null;
    std::string strValue;  // StringLit payload, Var/LabeledVar name, FileRead path

    std::string label;  // LabeledVar

    UnOp uop{};
    BinOp bop{};
    LogicOp lop{};

    ExprPtr a, b, c;              // operands / test,then,else / target,lo,hi
    std::vector<ExprPtr> args;    // Call args, ListLit items
    ExprPtr callee;               // Call
    ExprPtr listTail;             // ListLit '|' suffix, may be null
    std::vector<std::pair<std::string, ExprPtr>> fields;  // JsonLit
    std::vector<Param> params;    // Lambda

    explicit Expr(Kind k, SourcePos p = {}) : kind(k), pos(p) {}
};

struct SettingBlock {
    enum class Kind { Set, Print };
    Kind kind = Kind::Set;
    AssignOp op = AssignOp::Set;
    std::string target;           // Set: base name
    std::vector<ExprPtr> path;    // Set: index chain for element/field writes
    ExprPtr value;                // Set rhs / Print expression
    SourcePos pos;
};

// One layer of a decorated expression: pre blocks, then either a conditional
// (branches are decorated layers themselves) or a simple value with post blocks.
struct Body {
    std::vector<SettingBlock> pre;
    ExprPtr value;  // the or-expression (condition when branches present)
    std::unique_ptr<Body> thenBranch;
    std::unique_ptr<Body> elseBranch;
    std::vector<SettingBlock> post;

    bool isConditional() const { return thenBranch != nullptr; }
};

struct FunctionDecl {
    std::string name;
    bool star = false;
    std::vector<Param> params;
    int returnArity = 0;
    std::vector<std::string> labels;  // starred header entries
    std::vector<std::string> locals;  // plain header entries
    Body body;
    SourcePos pos;

    std::string signature() const;
};

struct Statement {
    enum class Kind { Assign, LabelDecl, FuncDef, Query, Service, Redirect };

    Kind kind;
    SourcePos pos;

    // Assign
    std::string target;
    std::string targetLabel;  // nonempty for labeled assignment
    AssignOp op = AssignOp::Set;
    ExprPtr expr;             // Assign rhs / Query expression

    // LabelDecl
    std::string label;
    std::vector<std::string> names;

    // FuncDef
    std::unique_ptr<FunctionDecl> func;

    // Query
    bool showNull = false;

    // Service
    std::string serviceName;
    std::string serviceArg;

    // Redirect: path empty means reset to console
    std::string path;
};

bool equalExpr(const Expr& a, const Expr& b);
bool equalBody(const Body& a, const Body& b);
bool equalStatement(const Statement& a, const Statement& b);

std::string printExpr(const Expr& e);
std::string printBody(const Body& b);
std::string printStatement(const Statement& s);

}  // namespace calculist
