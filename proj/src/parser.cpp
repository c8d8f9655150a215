#include "calculist/parser.hpp"

#include <cctype>
#include <set>
#include <unordered_set>

#include "calculist/lexer.hpp"
#include "calculist/value_ops.hpp"

namespace calculist {

namespace {

bool isReservedWord(const std::string& w) {
    TypeId t;
    return w == "true" || w == "false" || w == "lambda" || typeIdFromName(w, t);
}

struct BodyCtx {
    bool star = false;
    const std::set<std::string>* locals = nullptr;
};

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;

    explicit Parser(const std::string& text) : toks(tokenize(text)) {}

    const Token& peek(size_t ahead = 0) const {
        size_t i = at + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& advance() { return toks[at < toks.size() - 1 ? at++ : at]; }
    bool atEnd() const { return peek().is(TokenKind::End); }

    [[noreturn]] void fail(const std::string& msg) {
        if (atEnd()) throw IncompleteInput();
        const Token& t = peek();
        throw ParseError(t.pos, msg + " (found '" + (t.lexeme.empty() ? "?" : t.lexeme) + "')");
    }
    [[noreturn]] void failAt(SourcePos pos, const std::string& msg) {
        throw ParseError(pos, msg);
    }

    bool eatPunct(const char* p) {
        if (peek().isPunct(p)) { ++at; return true; }
        return false;
    }
    void expectPunct(const char* p, const char* what) {
        if (!eatPunct(p)) fail(std::string("expected '") + p + "' " + what);
    }
    std::string expectIdent(const char* what) {
        if (!peek().is(TokenKind::Identifier)) fail(std::string("expected ") + what);
        return advance().lexeme;
    }

    // ---- expressions -----------------------------------------------------

    ExprPtr mk(Expr::Kind k) { return std::make_unique<Expr>(k, peek().pos); }

    ExprPtr parseCond() {
        ExprPtr test = parseOr();
        if (!eatPunct("?")) return test;
        auto e = std::make_unique<Expr>(Expr::Kind::Cond, test->pos);
        e->a = std::move(test);
        e->b = parseCond();
        expectPunct(":", "in conditional expression");
        e->c = parseCond();
        return e;
    }

    ExprPtr parseOr() {
        ExprPtr lhs = parseAnd();
        while (peek().isPunct("||")) {
            SourcePos p = advance().pos;
            auto e = std::make_unique<Expr>(Expr::Kind::Logic, p);
            e->lop = LogicOp::Or;
            e->a = std::move(lhs);
            e->b = parseAnd();
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parseAnd() {
        ExprPtr lhs = parseEquality();
        while (peek().isPunct("&&")) {
            SourcePos p = advance().pos;
            auto e = std::make_unique<Expr>(Expr::Kind::Logic, p);
            e->lop = LogicOp::And;
            e->a = std::move(lhs);
            e->b = parseEquality();
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourcePos p) {
        auto e = std::make_unique<Expr>(Expr::Kind::Binary, p);
        e->bop = op;
        e->a = std::move(lhs);
        e->b = std::move(rhs);
        return e;
    }

    ExprPtr parseEquality() {
        ExprPtr lhs = parseRelational();
        while (peek().isPunct("==") || peek().isPunct("!=")) {
            BinOp op = peek().isPunct("==") ? BinOp::Eq : BinOp::Ne;
            SourcePos p = advance().pos;
            lhs = binary(op, std::move(lhs), parseRelational(), p);
        }
        return lhs;
    }

    ExprPtr parseRelational() {
        ExprPtr lhs = parseAdditive();
        while (true) {
            BinOp op;
            if (peek().isPunct("<")) op = BinOp::Lt;
            else if (peek().isPunct("<=")) op = BinOp::Le;
            else if (peek().isPunct(">")) op = BinOp::Gt;
            else if (peek().isPunct(">=")) op = BinOp::Ge;
            else break;
            SourcePos p = advance().pos;
            lhs = binary(op, std::move(lhs), parseAdditive(), p);
        }
        return lhs;
    }

    ExprPtr parseAdditive() {
        ExprPtr lhs = parseMultiplicative();
        while (peek().isPunct("+") || peek().isPunct("-")) {
            BinOp op = peek().isPunct("+") ? BinOp::Add : BinOp::Sub;
            SourcePos p = advance().pos;
            lhs = binary(op, std::move(lhs), parseMultiplicative(), p);
        }
        return lhs;
    }

    ExprPtr parseMultiplicative() {
        ExprPtr lhs = parseUnary();
        while (true) {
            BinOp op;
            if (peek().isPunct("*")) op = BinOp::Mul;
            else if (peek().isPunct("/")) op = BinOp::Div;
            else if (peek().isPunct("//")) op = BinOp::IntDiv;
            else if (peek().isPunct("%")) {
                // a trailing % before ';' / end of input is the null-display
                // flag of a query, not the modulus operator
                if (peek(1).is(TokenKind::End) || peek(1).isPunct(";")) break;
                op = BinOp::Mod;
            } else {
                break;
            }
            SourcePos p = advance().pos;
            lhs = binary(op, std::move(lhs), parseUnary(), p);
        }
        return lhs;
    }

    ExprPtr parseUnary() {
        UnOp op;
        if (peek().isPunct("+")) op = UnOp::Plus;
        else if (peek().isPunct("-")) op = UnOp::Minus;
        else if (peek().isPunct("!")) op = UnOp::Not;
        else return parsePostfix();
        SourcePos p = advance().pos;
        auto e = std::make_unique<Expr>(Expr::Kind::Unary, p);
        e->uop = op;
        e->a = parseUnary();
        return e;
    }

    ExprPtr parsePostfix() {
        ExprPtr e = parsePrimary();
        while (true) {
            SourcePos p = peek().pos;
            if (eatPunct("(")) {
                auto call = std::make_unique<Expr>(Expr::Kind::Call, p);
                call->callee = std::move(e);
                if (!eatPunct(")")) {
                    while (true) {
                        call->args.push_back(parseCond());
                        if (eatPunct(")")) break;
                        expectPunct(",", "in argument list");
                    }
                }
                e = std::move(call);
            } else if (peek().isPunct("[>")) {
                advance();
                if (eatPunct("]")) {
                    auto t = std::make_unique<Expr>(Expr::Kind::Tail, p);
                    t->a = std::move(e);
                    e = std::move(t);
                } else {
                    auto t = std::make_unique<Expr>(Expr::Kind::Suffix, p);
                    t->a = std::move(e);
                    t->b = parseCond();
                    expectPunct("]", "after [>i");
                    e = std::move(t);
                }
            } else if (eatPunct("[")) {
                if (eatPunct(".")) {
                    expectPunct("]", "after [.");
                    auto t = std::make_unique<Expr>(Expr::Kind::Head, p);
                    t->a = std::move(e);
                    e = std::move(t);
                } else if (eatPunct(":")) {
                    auto t = std::make_unique<Expr>(Expr::Kind::Slice, p);
                    t->a = std::move(e);
                    if (!eatPunct("]")) {
                        t->c = parseCond();
                        expectPunct("]", "after slice");
                    }
                    e = std::move(t);
                } else {
                    ExprPtr first = parseCond();
                    if (eatPunct(":")) {
                        auto t = std::make_unique<Expr>(Expr::Kind::Slice, p);
                        t->a = std::move(e);
                        t->b = std::move(first);
                        if (!eatPunct("]")) {
                            t->c = parseCond();
                            expectPunct("]", "after slice");
                        }
                        e = std::move(t);
                    } else {
                        expectPunct("]", "after index");
                        auto t = std::make_unique<Expr>(Expr::Kind::Index, p);
                        t->a = std::move(e);
                        t->b = std::move(first);
                        e = std::move(t);
                    }
                }
            } else if (eatPunct("@")) {
                std::string w = expectIdent("'type' after @");
                if (w != "type") failAt(p, "only @type casts are supported");
                auto t = std::make_unique<Expr>(Expr::Kind::TypeOf, p);
                t->a = std::move(e);
                e = std::move(t);
            } else {
                break;
            }
        }
        return e;
    }

    ExprPtr parsePrimary() {
        const Token& t = peek();
        SourcePos p = t.pos;
        switch (t.kind) {
            case TokenKind::IntLit: {
                auto e = std::make_unique<Expr>(Expr::Kind::IntLit, p);
                e->intValue = advance().intValue;
                return e;
            }
            case TokenKind::DoubleLit: {
                auto e = std::make_unique<Expr>(Expr::Kind::DoubleLit, p);
                e->doubleValue = advance().doubleValue;
                return e;
            }
            case TokenKind::CharLit: {
                auto e = std::make_unique<Expr>(Expr::Kind::CharLit, p);
                e->charValue = advance().charValue;
                return e;
            }
            case TokenKind::StringLit: {
                auto e = std::make_unique<Expr>(Expr::Kind::StringLit, p);
                e->strValue = advance().lexeme;
                return e;
            }
            case TokenKind::FileRead: {
                auto e = std::make_unique<Expr>(Expr::Kind::FileRead, p);
                e->strValue = advance().lexeme;
                return e;
            }
            case TokenKind::Lambda: return parseLambda();
            case TokenKind::Identifier: {
                const std::string& w = t.lexeme;
                if (w == "true" || w == "false") {
                    auto e = std::make_unique<Expr>(Expr::Kind::BoolLit, p);
                    e->boolValue = w == "true";
                    advance();
                    return e;
                }
                if (w == "null") {
                    advance();
                    return std::make_unique<Expr>(Expr::Kind::NullLit, p);
                }
                TypeId ty;
                if (typeIdFromName(w, ty)) {
                    auto e = std::make_unique<Expr>(Expr::Kind::TypeLit, p);
                    e->typeValue = ty;
                    advance();
                    return e;
                }
                advance();
                if (peek().isPunct(".") && peek(1).is(TokenKind::Identifier)) {
                    advance();
                    auto e = std::make_unique<Expr>(Expr::Kind::LabeledVar, p);
                    e->label = w;
                    e->strValue = advance().lexeme;
                    return e;
                }
                auto e = std::make_unique<Expr>(Expr::Kind::Var, p);
                e->strValue = w;
                return e;
            }
            case TokenKind::Punct: {
                if (eatPunct("(")) {
                    ExprPtr e = parseCond();
                    expectPunct(")", "to close parenthesis");
                    return e;
                }
                if (eatPunct("[")) return parseListLit(p);
                if (eatPunct("{")) return parseJsonLit(p);
                fail("expected expression");
            }
            default: fail("expected expression");
        }
    }

    ExprPtr parseLambda() {
        SourcePos p = advance().pos;  // 'lambda'
        auto e = std::make_unique<Expr>(Expr::Kind::Lambda, p);
        if (!peek().isPunct(":")) {
            while (true) {
                Param prm;
                prm.name = expectIdent("parameter name");
                if (eatPunct("/")) prm.arity = parseArity();
                e->params.push_back(std::move(prm));
                if (!eatPunct(",")) break;
            }
        }
        for (size_t i = 0; i < e->params.size(); ++i)
            for (size_t j = i + 1; j < e->params.size(); ++j)
                if (e->params[i].name == e->params[j].name)
                    failAt(p, "duplicate lambda parameter '" + e->params[i].name + "'");
        expectPunct(":", "after lambda parameters");
        e->a = parseCond();  // single expression, no setting blocks
        return e;
    }

    int parseArity() {
        if (!peek().is(TokenKind::IntLit)) fail("expected arity after '/'");
        int n = advance().intValue;
        if (n <= 0) failAt(peek().pos, "declared arity must be positive");
        return n;
    }

    ExprPtr parseListLit(SourcePos p) {
        auto e = std::make_unique<Expr>(Expr::Kind::ListLit, p);
        if (eatPunct("]")) return e;
        while (true) {
            e->args.push_back(parseCond());
            if (eatPunct(",")) continue;
            if (eatPunct("|")) {
                e->listTail = parseCond();
                expectPunct("]", "to close list");
                return e;
            }
            expectPunct("]", "to close list");
            return e;
        }
    }

    ExprPtr parseJsonLit(SourcePos p) {
        auto e = std::make_unique<Expr>(Expr::Kind::JsonLit, p);
        if (eatPunct("}")) return e;
        std::unordered_set<std::string> seen;
        while (true) {
            if (!peek().is(TokenKind::StringLit)) fail("expected string key in json");
            std::string key = advance().lexeme;
            if (!seen.insert(key).second)
                failAt(p, "duplicate json key \"" + key + "\"");
            expectPunct(":", "after json key");
            e->fields.emplace_back(std::move(key), parseCond());
            if (eatPunct("}")) return e;
            expectPunct(",", "in json literal");
        }
    }

    // ---- decorated bodies -------------------------------------------------

    bool atBlockStart() const { return peek().isPunct("{!") || peek().isPunct("{^"); }

    SettingBlock parseBlock(const BodyCtx& ctx) {
        SettingBlock blk;
        blk.pos = peek().pos;
        if (eatPunct("{^")) {
            if (!ctx.star)
                failAt(blk.pos, "printing commands {^ ^} require a star function");
            blk.kind = SettingBlock::Kind::Print;
            blk.value = parseCond();
            expectPunct("^}", "to close printing command");
            return blk;
        }
        expectPunct("{!", "to open setting command");
        blk.kind = SettingBlock::Kind::Set;
        blk.target = expectIdent("setting target");
        while (eatPunct("[")) {
            blk.path.push_back(parseCond());
            expectPunct("]", "in setting target path");
        }
        if (eatPunct("=")) blk.op = AssignOp::Set;
        else if (eatPunct("+=")) blk.op = AssignOp::AddSet;
        else if (eatPunct("-=")) blk.op = AssignOp::SubSet;
        else if (eatPunct("*=")) blk.op = AssignOp::MulSet;
        else if (eatPunct("/=")) blk.op = AssignOp::DivSet;
        else fail("expected assignment in setting command");
        blk.value = parseCond();
        expectPunct("!}", "to close setting command");
        if (!ctx.star) {
            if (!blk.path.empty())
                failAt(blk.pos, "element assignment in a setting command requires a star function");
            if (!ctx.locals || !ctx.locals->count(blk.target))
                failAt(blk.pos, "setting command target '" + blk.target +
                                    "' is not a declared local variable");
        }
        return blk;
    }

    std::vector<SettingBlock> parseBlocks(const BodyCtx& ctx) {
        std::vector<SettingBlock> out;
        while (atBlockStart()) out.push_back(parseBlock(ctx));
        return out;
    }

    Body parseBody(const BodyCtx& ctx) {
        Body b;
        b.pre = parseBlocks(ctx);
        b.value = parseOr();
        if (eatPunct("?")) {
            b.thenBranch = std::make_unique<Body>(parseBody(ctx));
            expectPunct(":", "in conditional");
            b.elseBranch = std::make_unique<Body>(parseBody(ctx));
        } else {
            b.post = parseBlocks(ctx);
            if (!b.post.empty() && !ctx.star)
                failAt(b.post.front().pos,
                       "setting commands after an expression require a star function");
        }
        return b;
    }

    // ---- statements --------------------------------------------------------

    void expectTerminator() {
        eatPunct(";");
        if (!atEnd()) fail("one statement per input; unexpected trailing content");
    }

    Statement parseQuery() {
        Statement s;
        s.kind = Statement::Kind::Query;
        s.pos = advance().pos;  // '^'
        s.expr = parseCond();
        if (eatPunct("%")) s.showNull = true;
        if (s.expr->kind == Expr::Kind::Lambda)
            failAt(s.pos, "a lambda may only appear as a call argument or function result");
        expectTerminator();
        return s;
    }

    AssignOp eatAssignOp() {
        if (eatPunct("=")) return AssignOp::Set;
        if (eatPunct("+=")) return AssignOp::AddSet;
        if (eatPunct("-=")) return AssignOp::SubSet;
        if (eatPunct("*=")) return AssignOp::MulSet;
        if (eatPunct("/=")) return AssignOp::DivSet;
        fail("expected statement");
    }

    Statement parseFunctionDef(std::string name, SourcePos pos) {
        Statement s;
        s.kind = Statement::Kind::FuncDef;
        s.pos = pos;
        auto f = std::make_unique<FunctionDecl>();
        f->name = std::move(name);
        f->pos = pos;
        if (eatPunct("*")) f->star = true;
        expectPunct("(", "in function definition");
        if (!eatPunct(")")) {
            while (true) {
                Param prm;
                prm.name = expectIdent("parameter name");
                if (isReservedWord(prm.name))
                    failAt(pos, "'" + prm.name + "' is reserved and cannot be a parameter");
                if (eatPunct("/")) prm.arity = parseArity();
                f->params.push_back(std::move(prm));
                if (eatPunct(")")) break;
                expectPunct(",", "in parameter list");
            }
        }
        if (eatPunct("/")) f->returnArity = parseArity();
        expectPunct(":", "before function body");

        std::set<std::string> locals;
        if (eatPunct("<")) {
            while (true) {
                std::string entry = expectIdent("header entry");
                if (eatPunct("*")) {
                    if (!std::isupper(static_cast<unsigned char>(entry[0])))
                        failAt(f->pos, "label '" + entry + "' must begin with an uppercase letter");
                    if (!f->star)
                        failAt(f->pos, "labels in the header require a star function");
                    f->labels.push_back(entry);
                } else {
                    if (isReservedWord(entry))
                        failAt(f->pos, "'" + entry + "' is reserved and cannot be a local");
                    f->locals.push_back(entry);
                    locals.insert(entry);
                }
                if (eatPunct(">")) break;
                expectPunct(",", "in function header");
            }
        }

        // duplicate / collision checks
        std::set<std::string> seen;
        for (const auto& prm : f->params)
            if (!seen.insert(prm.name).second)
                failAt(f->pos, "duplicate parameter '" + prm.name + "'");
        for (const auto& l : f->locals) {
            if (!seen.insert(l).second)
                failAt(f->pos, "local '" + l + "' collides with another name");
        }
        std::set<std::string> seenLabels;
        for (const auto& l : f->labels)
            if (!seenLabels.insert(l).second)
                failAt(f->pos, "duplicate label '" + l + "' in header");

        BodyCtx ctx{f->star, &locals};
        f->body = parseBody(ctx);
        expectTerminator();
        s.func = std::move(f);
        return s;
    }

    Statement parse() {
        if (atEnd()) fail("empty statement");
        const Token& t = peek();

        if (t.isPunct("^")) return parseQuery();

        if (t.is(TokenKind::Identifier)) {
            std::string name = t.lexeme;
            SourcePos pos = t.pos;
            const Token& nx = peek(1);

            if (nx.isPunct("(") || nx.isPunct("*")) {
                if (isReservedWord(name))
                    failAt(pos, "'" + name + "' is reserved and cannot be a function name");
                advance();
                return parseFunctionDef(std::move(name), pos);
            }
            if (nx.isPunct(":")) {
                if (!std::isupper(static_cast<unsigned char>(name[0])))
                    failAt(pos, "label names must begin with an uppercase letter");
                advance();
                advance();
                Statement s;
                s.kind = Statement::Kind::LabelDecl;
                s.pos = pos;
                s.label = std::move(name);
                while (true) {
                    std::string member = expectIdent("labeled variable name");
                    if (isReservedWord(member))
                        failAt(pos, "'" + member + "' is reserved");
                    s.names.push_back(std::move(member));
                    if (!eatPunct(",")) break;
                }
                expectTerminator();
                return s;
            }
            if (nx.isPunct(".") && peek(2).is(TokenKind::Identifier)) {
                // labeled assignment Label.name op expr
                advance();
                advance();
                Statement s;
                s.kind = Statement::Kind::Assign;
                s.pos = pos;
                s.targetLabel = std::move(name);
                s.target = advance().lexeme;
                s.op = eatAssignOp();
                s.expr = parseCond();
                if (s.expr->kind == Expr::Kind::Lambda)
                    failAt(pos, "a lambda may only appear as a call argument or function result");
                expectTerminator();
                return s;
            }
            // plain assignment
            if (isReservedWord(name))
                failAt(pos, "'" + name + "' is reserved and cannot be a variable name");
            advance();
            Statement s;
            s.kind = Statement::Kind::Assign;
            s.pos = pos;
            s.target = std::move(name);
            s.op = eatAssignOp();
            s.expr = parseCond();
            if (s.expr->kind == Expr::Kind::Lambda)
                failAt(pos, "a lambda may only appear as a call argument or function result");
            expectTerminator();
            return s;
        }

        fail("expected statement");
    }
};

}  // namespace

Statement parseStatement(const std::string& text) {
    Parser p(text);
    return p.parse();
}

ExprPtr parseExpression(const std::string& text) {
    Parser p(text);
    ExprPtr e = p.parseCond();
    if (!p.atEnd() && !p.peek().isPunct(";")) p.fail("unexpected trailing content");
    return e;
}

}  // namespace calculist
