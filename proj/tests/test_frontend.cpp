#include "calculist/lexer.hpp"
#include "calculist/parser.hpp"
#include "corpus.hpp"
#include "doctest.h"

using namespace calculist;

TEST_SUITE_BEGIN("frontend");

TEST_CASE("tokenize basic statements") {
    auto toks = tokenize("x=2+.1;");
    REQUIRE(toks.size() == 7);  // x = 2 + .1 ; <end>
    CHECK(toks[0].is(TokenKind::Identifier));
    CHECK(toks[1].isPunct("="));
    CHECK(toks[2].is(TokenKind::IntLit));
    CHECK(toks[2].intValue == 2);
    CHECK(toks[4].is(TokenKind::DoubleLit));
    CHECK(toks[4].doubleValue == doctest::Approx(0.1));

    toks = tokenize("^z@type");
    CHECK(toks[0].isPunct("^"));
    CHECK(toks[1].lexeme == "z");
    CHECK(toks[2].isPunct("@"));
    CHECK(toks[3].lexeme == "type");

    // two-character operators win over their prefixes
    toks = tokenize("L[>] //2 x*=1 {! !} {^ ^}");
    CHECK(toks[1].isPunct("[>"));
    CHECK(toks[3].isPunct("//"));
    CHECK(toks[6].isPunct("*="));
    CHECK(toks[8].isPunct("{!"));
    CHECK(toks[9].isPunct("!}"));
    CHECK(toks[10].isPunct("{^"));
    CHECK(toks[11].isPunct("^}"));
}

TEST_CASE("lexical errors and continuation") {
    CHECK_THROWS_AS(tokenize("\"unterminated"), LexError);
    CHECK_THROWS_AS(tokenize("'a"), LexError);
    CHECK_THROWS_AS(tokenize("x = $;"), LexError);
    // a block comment may continue on the next line
    CHECK_THROWS_AS(tokenize("x = 1; /* trailing"), IncompleteInput);
    // comments are skipped
    CHECK(tokenize("/* checkpoint 1 */").size() == 1);
}

TEST_CASE("statement kinds are recognized") {
    Statement s = parseStatement("MATH: zeroD;");
    CHECK(s.kind == Statement::Kind::LabelDecl);
    CHECK(s.label == "MATH");
    REQUIRE(s.names.size() == 1);
    CHECK(s.names[0] == "zeroD");

    s = parseStatement("MATH1: numErr, somma;");
    CHECK(s.names.size() == 2);

    s = parseStatement("twice(f/1)/1: lambda x: f(f(x));");
    CHECK(s.kind == Statement::Kind::FuncDef);
    CHECK(s.func->params.size() == 1);
    CHECK(s.func->params[0].arity == 1);
    CHECK(s.func->returnArity == 1);
    CHECK_FALSE(s.func->star);

    s = parseStatement("div*(x,y): <MATH*>  {! zeroD=false !} y==0 ? 0 {! zeroD=true !}:x/y;");
    CHECK(s.func->star);
    REQUIRE(s.func->labels.size() == 1);
    CHECK(s.func->labels[0] == "MATH");
    CHECK(s.func->body.isConditional());
    CHECK(s.func->body.pre.size() == 1);
    CHECK(s.func->body.thenBranch->post.size() == 1);

    s = parseStatement("^y[0:1]+'i'+y[5:];");
    CHECK(s.kind == Statement::Kind::Query);

    s = parseStatement("^emps[0][\"projects\"] %");
    CHECK(s.kind == Statement::Kind::Query);
    CHECK(s.showNull);

    s = parseStatement("x *= 2;");
    CHECK(s.kind == Statement::Kind::Assign);
    CHECK(s.op == AssignOp::MulSet);

    s = parseStatement("MATH1.numErr = 0;");
    CHECK(s.targetLabel == "MATH1");
    CHECK(s.target == "numErr");
}

TEST_CASE("labels must start uppercase; statements are one per input") {
    CHECK_THROWS_AS(parseStatement("math: x;"), ParseError);
    CHECK_THROWS_AS(parseStatement("x=1; y=2;"), ParseError);
    // terminator is ';' or end of input
    CHECK(parseStatement("^z").kind == Statement::Kind::Query);
    CHECK_THROWS_AS(parseStatement("f(2);"), ParseError);  // queries need '^'
    CHECK_THROWS_AS(parseStatement("int = 5;"), ParseError);
    CHECK_THROWS_AS(parseStatement("^lambda x: x;"), ParseError);
}

TEST_CASE("incomplete statements ask for more input") {
    CHECK_THROWS_AS(parseStatement("x = 2 +"), IncompleteInput);
    CHECK_THROWS_AS(parseStatement("f(a,b) : a==b? 1"), IncompleteInput);
    CHECK_THROWS_AS(parseStatement("emps = [ { \"name\": \"e1\" },"), IncompleteInput);
}

TEST_CASE("precedence: conditional nests in the else branch") {
    ExprPtr e = parseExpression(
        "O1==[]? O2[:]:O2==[]? O1[:]: O1[.]<O2[.]? [O1[.]|m(O1,O2)]: [O2[.]|m(O1,O2)]");
    REQUIRE(e->kind == Expr::Kind::Cond);
    CHECK(e->c->kind == Expr::Kind::Cond);
    CHECK(e->c->c->kind == Expr::Kind::Cond);
    CHECK(e->b->kind == Expr::Kind::Slice);

    // 'A'+1=='B' groups as ('A'+1)=='B'
    ExprPtr cmp = parseExpression("'A'+1=='B'");
    REQUIRE(cmp->kind == Expr::Kind::Binary);
    CHECK(cmp->bop == BinOp::Eq);
    CHECK(cmp->a->kind == Expr::Kind::Binary);

    // a+b*c groups multiplication tighter
    ExprPtr ab = parseExpression("a+b*c");
    CHECK(ab->bop == BinOp::Add);
    CHECK(ab->b->bop == BinOp::Mul);

    // logic is looser than comparison
    ExprPtr lg = parseExpression("x%2==0 || x%3==0");
    CHECK(lg->kind == Expr::Kind::Logic);
}

TEST_CASE("setting block placement follows the five-position schema") {
    // one pre-LSC before the whole body
    Statement s = parseStatement(
        "quicksort(L,o/2) : <T01> L==[]? []: L[>]==[]? [L[.]]: "
        "{! T01=part(L[.],L[>],o) !} quicksort(T01[0],o)+[L[.]|quicksort(T01[1],o)];");
    const Body& b = s.func->body;
    REQUIRE(b.isConditional());
    const Body& second = *b.elseBranch;
    REQUIRE(second.isConditional());
    CHECK(second.elseBranch->pre.size() == 1);

    // core true with three post blocks, in order
    s = parseStatement(
        "swap*(L,i,j):  <t> true  {! t=L[i] !} {! L[i]=L[j] !} {! L[j]=t !};");
    const Body& sw = s.func->body;
    CHECK_FALSE(sw.isConditional());
    REQUIRE(sw.post.size() == 3);
    CHECK(sw.post[0].target == "t");
    CHECK(sw.post[1].target == "L");
    CHECK(sw.post[1].path.size() == 1);

    // pre and post around branch expressions
    s = parseStatement(
        "listDiv1*(x,L): <MATH*, MATH1*,d>  L==[]? []: "
        "{!d=div(x,L[.]) !} zeroD? {! numErr+=1 !}  ['*' |listDiv1(x,L[>])]: "
        "[d | listDiv1(x,L[>])] {!  somma+=d !};");
    const Body& ld = s.func->body;
    REQUIRE(ld.isConditional());
    const Body& inner = *ld.elseBranch;
    CHECK(inner.pre.size() == 1);
    REQUIRE(inner.isConditional());
    CHECK(inner.thenBranch->pre.size() == 1);
    CHECK(inner.elseBranch->post.size() == 1);
    CHECK(inner.elseBranch->post[0].op == AssignOp::AddSet);
}

TEST_CASE("misplaced setting commands are parse-time errors") {
    // post blocks require a star function
    CHECK_THROWS_AS(parseStatement("f(x): <t> x {! t=1 !};"), ParseError);
    // LSC target must be a declared local in a non-star function
    CHECK_THROWS_AS(parseStatement("f(x): <t> {! y=1 !} x;"), ParseError);
    // element writes require a star function
    CHECK_THROWS_AS(parseStatement("f(L): <t> {! t[0]=1 !} L;"), ParseError);
    // printing commands require a star function
    CHECK_THROWS_AS(parseStatement("f(x): {^ x ^} x;"), ParseError);
    // labels in the header require a star function
    CHECK_THROWS_AS(parseStatement("f(x): <MATH*> x;"), ParseError);
    // star functions accept all of the above
    CHECK(parseStatement("f*(x): <t> {! t=1 !} x {! t=2 !} {^ t ^};").func->star);
}

TEST_CASE("every session program parses statement by statement") {
    for (const corpus::Transcript* fig : corpus::fullSession())
        for (const corpus::Line& line : *fig) {
            if (line.input[0] == '!') continue;  // service commands bypass the parser
            CHECK_NOTHROW(parseStatement(line.input));
        }
}

TEST_CASE("pretty-print round trip yields structurally identical statements") {
    for (const corpus::Transcript* fig : corpus::fullSession())
        for (const corpus::Line& line : *fig) {
            if (line.input[0] == '!') continue;
            Statement a = parseStatement(line.input);
            std::string printed = printStatement(a);
            CAPTURE(printed);
            Statement b = parseStatement(printed);
            CHECK(equalStatement(a, b));
        }
}

TEST_SUITE_END();
