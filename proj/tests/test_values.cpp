#include <random>

#include "calculist/value_ops.hpp"
#include "doctest.h"

using namespace calculist;

namespace {

uint64_t w;  // scratch work accumulator

Value list(Heap& h, const std::vector<Value>& items) {
    uint32_t r = 0;
    for (size_t i = items.size(); i-- > 0;) r = h.allocCell(items[i], r);
    return Value::list(r);
}

Value ints(Heap& h, const std::vector<int32_t>& xs) {
    std::vector<Value> items;
    for (int32_t x : xs) items.push_back(Value::ofInt(x));
    return list(h, items);
}

std::string show(Value v, const Heap& h) { return printValue(v, h, false); }

}  // namespace

TEST_SUITE_BEGIN("values");

TEST_CASE("numeric coercion follows the char < int < double lattice") {
    Heap h;
    Value v = arith(ArithOp::Add, Value::ofInt(2), Value::ofDouble(0.1), h, w);
    CHECK(v.tag == TypeId::Double);
    v = arith(ArithOp::Mul, v, Value::ofInt(2), h, w);
    CHECK(show(v, h) == "4.2");

    // char + int is int, and matches the code point of 'B'
    Value c = arith(ArithOp::Add, Value::ofChar('A'), Value::ofInt(1), h, w);
    CHECK(c.tag == TypeId::Int);
    CHECK(c.i == 66);
    CHECK(valueEquals(c, Value::ofChar('B'), h, w));

    // char op char returns int
    Value cc = arith(ArithOp::Add, Value::ofChar('a'), Value::ofChar('b'), h, w);
    CHECK(cc.tag == TypeId::Int);

    // / is always floating point, // is the integer quotient
    CHECK(show(arith(ArithOp::Div, Value::ofInt(7), Value::ofInt(2), h, w), h) == "3.5");
    CHECK(show(arith(ArithOp::IntDiv, Value::ofInt(7), Value::ofInt(2), h, w), h) == "3");
}

TEST_CASE("promotion lattice property over random numeric pairs") {
    Heap h;
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0, 2), val(1, 100);
    for (int trial = 0; trial < 500; ++trial) {
        auto mk = [&](int kind) {
            if (kind == 0) return Value::ofChar(static_cast<uint32_t>(val(rng)));
            if (kind == 1) return Value::ofInt(val(rng));
            return Value::ofDouble(val(rng) + 0.5);
        };
        int ka = pick(rng), kb = pick(rng);
        Value a = mk(ka), b = mk(kb);
        Value r = arith(ArithOp::Add, a, b, h, w);
        if (ka == 2 || kb == 2)
            CHECK(r.tag == TypeId::Double);
        else
            CHECK(r.tag == TypeId::Int);  // char (+) char promotes to int
        Value q = arith(ArithOp::Div, a, b, h, w);
        CHECK(q.tag == TypeId::Double);
    }
}

TEST_CASE("floor division and modulo match the Python convention") {
    Heap h;
    auto idiv = [&](int a, int b) {
        return arith(ArithOp::IntDiv, Value::ofInt(a), Value::ofInt(b), h, w).i;
    };
    auto imod = [&](int a, int b) {
        return arith(ArithOp::Mod, Value::ofInt(a), Value::ofInt(b), h, w).i;
    };
    CHECK(idiv(7, 2) == 3);
    CHECK(idiv(-7, 2) == -4);
    CHECK(imod(-4, 6) == 2);
    CHECK(imod(7, 2) == 1);
    CHECK(imod(-7, -2) == -1);
    CHECK_THROWS_AS(idiv(1, 0), RuntimeError);
    CHECK_THROWS_AS(imod(1, 0), RuntimeError);
    // // and % reject doubles
    CHECK_THROWS_AS(arith(ArithOp::Mod, Value::ofDouble(7.0), Value::ofInt(2), h, w),
                    RuntimeError);
}

TEST_CASE("string concatenation allows string+char but not char+string") {
    Heap h;
    Value a = Value::string(h.allocString("Hello "));
    Value b = Value::string(h.allocString("Worl"));
    Value ab = arith(ArithOp::Add, a, b, h, w);
    Value full = arith(ArithOp::Add, ab, Value::ofChar('d'), h, w);
    CHECK(show(full, h) == "Hello World");
    CHECK_THROWS_AS(arith(ArithOp::Add, Value::ofChar('d'), a, h, w), RuntimeError);
    // json + json is a type error
    Value j = Value::json(h.allocJson({}));
    CHECK_THROWS_AS(arith(ArithOp::Add, j, j, h, w), RuntimeError);
}

TEST_CASE("comparisons: lexicographic strings, false < true, identity lists") {
    Heap h;
    Value abc = Value::string(h.allocString("abc"));
    Value abd = Value::string(h.allocString("abd"));
    CHECK(compare(CmpOp::Lt, abc, abd, h, w).b);
    CHECK(compare(CmpOp::Lt, Value::ofBool(false), Value::ofBool(true), h, w).b);

    // equality across heterogeneous types is false, never an error
    CHECK_FALSE(compare(CmpOp::Eq, abc, Value::ofInt(1), h, w).b);
    CHECK(compare(CmpOp::Ne, abc, Value::null(), h, w).b);
    // ordering a non-orderable pair is an error
    CHECK_THROWS_AS(compare(CmpOp::Lt, abc, Value::ofInt(1), h, w), RuntimeError);

    // string equality is by content, list equality by identity
    Value abc2 = Value::string(h.allocString("ab"));
    abc2 = arith(ArithOp::Add, abc2, Value::string(h.allocString("c")), h, w);
    CHECK(valueEquals(abc, abc2, h, w));

    Value l = ints(h, {1, 2});
    Value clone = slice(l, Value::null(), Value::null(), h, w);
    CHECK(valueEquals(l, l, h, w));
    CHECK_FALSE(valueEquals(l, clone, h, w));          // clone has fresh cells
    CHECK(show(l, h) == show(clone, h));               // but prints identically
}

TEST_CASE("head, tail and the empty list") {
    Heap h;
    Value l = ints(h, {5, 1, 4});
    CHECK(listHead(l, h).i == 5);
    CHECK(show(listTail(l, h), h) == "[ 1, 4 ]");
    CHECK(listTail(ints(h, {5}), h).ref == 0);  // singleton tail is []
    CHECK_THROWS_AS(listHead(Value::emptyList(), h), RuntimeError);
    CHECK_THROWS_AS(listTail(Value::emptyList(), h), RuntimeError);
    // all empty lists are the same value
    CHECK(valueEquals(Value::emptyList(), listTail(ints(h, {9}), h), h, w));
}

TEST_CASE("append and concatenation share suffix cells (shallow)") {
    Heap h;
    Value l = ints(h, {3});
    Value m = Value::list(h.allocCell(Value::ofInt(1), h.allocCell(Value::ofInt(2), l.ref)));
    CHECK(show(m, h) == "[ 1, 2, 3 ]");
    // mutating through one alias is visible through the other
    h.cell(l.ref).head = Value::ofInt(99);
    CHECK(show(m, h) == "[ 1, 2, 99 ]");

    Value a = ints(h, {1, 2});
    Value b = ints(h, {3, 4});
    Value ab = arith(ArithOp::Add, a, b, h, w);
    CHECK(show(ab, h) == "[ 1, 2, 3, 4 ]");
    h.cell(b.ref).head = Value::ofInt(30);
    CHECK(show(ab, h) == "[ 1, 2, 30, 4 ]");   // rhs cells shared
    h.cell(a.ref).head = Value::ofInt(10);
    CHECK(show(ab, h) == "[ 1, 2, 30, 4 ]");   // lhs cells cloned
}

TEST_CASE("slices are deep one level, suffixes are shared") {
    Heap h;
    Value s = Value::string(h.allocString("Hello World"));
    CHECK(show(slice(s, Value::ofInt(0), Value::ofInt(1), h, w), h) == "H");
    CHECK(show(slice(s, Value::ofInt(5), Value::null(), h, w), h) == " World");
    CHECK_THROWS_AS(slice(s, Value::ofInt(0), Value::ofInt(50), h, w), RuntimeError);
    CHECK_THROWS_AS(slice(s, Value::ofInt(-1), Value::null(), h, w), RuntimeError);

    Value l = ints(h, {1, 2, 3});
    Value c = slice(l, Value::null(), Value::null(), h, w);
    h.cell(l.ref).head = Value::ofInt(77);
    CHECK(show(c, h) == "[ 1, 2, 3 ]");        // clone untouched by mutation

    Value suf = listSuffix(l, Value::ofInt(0), h, w);
    CHECK(show(suf, h) == "[ 2, 3 ]");
    h.cell(suf.ref).head = Value::ofInt(20);
    CHECK(show(l, h) == "[ 77, 20, 3 ]");      // suffix shares cells
    CHECK(listSuffix(l, Value::ofInt(2), h, w).ref == 0);
    CHECK_THROWS_AS(listSuffix(l, Value::ofInt(3), h, w), RuntimeError);
    CHECK_THROWS_AS(listSuffix(Value::emptyList(), Value::ofInt(0), h, w), RuntimeError);
}

TEST_CASE("suffix matches repeated tails and the length identity") {
    Heap h;
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng() % 20);
        std::vector<int32_t> xs;
        for (int i = 0; i < n; ++i) xs.push_back(static_cast<int32_t>(rng() % 100));
        Value l = ints(h, xs);
        int i = static_cast<int>(rng() % n);
        Value bySuffix = listSuffix(l, Value::ofInt(i), h, w);
        Value byTails = l;
        for (int k = 0; k <= i; ++k) byTails = listTail(byTails, h);
        CHECK(bySuffix.ref == byTails.ref);  // same cells, not just same print
        CHECK(builtinLen(bySuffix, h, w) == n - i - 1);
    }
}

TEST_CASE("json get/set/len round trip") {
    Heap h;
    JsonObject obj;
    obj.fields = {{"name", Value::string(h.allocString("e1"))}, {"age", Value::ofInt(30)}};
    Value j = Value::json(h.allocJson(std::move(obj)));

    Value nameKey = Value::string(h.allocString("name"));
    Value absent = Value::string(h.allocString("projects"));
    CHECK(jsonGet(j, absent, h, w).isNull());
    CHECK(show(jsonGet(j, nameKey, h, w), h) == "e1");

    CHECK(builtinLen(j, h, w) == 2);
    Value bonusKey = Value::string(h.allocString("bonus"));
    indexSet(j, bonusKey, Value::ofInt(100), h, w);
    CHECK(builtinLen(j, h, w) == 3);           // new key grows the object
    CHECK(jsonGet(j, bonusKey, h, w).i == 100);
    indexSet(j, bonusKey, Value::ofInt(200), h, w);
    CHECK(builtinLen(j, h, w) == 3);           // existing key does not
    CHECK(jsonGet(j, bonusKey, h, w).i == 200);
    CHECK_THROWS_AS(jsonGet(j, Value::ofInt(0), h, w), RuntimeError);

    // field order is preserved for printing
    CHECK(show(j, h) == "{ \"name\": \"e1\", \"age\": 30, \"bonus\": 200 }");
}

TEST_CASE("builtin length") {
    Heap h;
    CHECK(builtinLen(ints(h, {5, 1, 4, 20, 15, 13}), h, w) == 6);
    CHECK(builtinLen(Value::json(h.allocJson({})), h, w) == 0);
    CHECK(builtinLen(Value::string(h.allocString("Hi")), h, w) == 2);
    CHECK_THROWS_AS(builtinLen(Value::ofInt(3), h, w), RuntimeError);
}

TEST_CASE("type_of covers the type identifiers") {
    CHECK(typeOf(Value::ofInt(55)).ty == TypeId::Int);
    CHECK(typeOf(Value::ofType(TypeId::Int)).ty == TypeId::Type);
    CHECK(typeOf(Value::null()).ty == TypeId::Null);
    Heap h;
    CHECK(show(typeOf(Value::null()), h) == "null");
    CHECK(show(typeOf(Value::ofType(TypeId::Double)), h) == "type");
}

TEST_CASE("printed forms") {
    Heap h;
    CHECK(formatDouble(4.2) == "4.2");
    CHECK(formatDouble(2.0) == "2.0");
    CHECK(formatDouble(-1.0) == "-1.0");
    CHECK(formatDouble(0.2) == "0.2");
    CHECK(formatDouble(0.0) == "0.0");

    // chars and strings: raw at top level, quoted when nested
    Value star = Value::ofChar('*');
    CHECK(printValue(star, h, false) == "*");
    CHECK(printValue(star, h, true) == "'*'");
    Value li = list(h, {Value::ofDouble(2.0), star});
    CHECK(show(li, h) == "[ 2.0, '*' ]");

    // null prints only under the display option at top level
    CHECK(printTopLevel(Value::null(), h, false) == "");
    CHECK(printTopLevel(Value::null(), h, true) == "null");
    CHECK(show(list(h, {Value::null()}), h) == "[ null ]");

    CHECK(show(Value::emptyList(), h) == "[]");
    CHECK(show(Value::json(h.allocJson({})), h) == "{}");
}

TEST_CASE("value literal reader round trips printed forms") {
    Heap h;
    const char* cases[] = {
        "[ 1, 2, 3 ]", "{ \"a\": 1 }", "3.5", "-7", "true", "null",
        "[ 2.0, '*', [ \"x\" ] ]", "int",
    };
    for (const char* text : cases) {
        Value v = parseValueLiteral(text, h);
        Value again = parseValueLiteral(printValue(v, h, true), h);
        CHECK(printValue(v, h, true) == printValue(again, h, true));
    }
    CHECK_THROWS_AS(parseValueLiteral("[1,", h), RuntimeError);
    CHECK_THROWS_AS(parseValueLiteral("{ \"a\": 1, \"a\": 2 }", h), RuntimeError);
    CHECK_THROWS_AS(parseValueLiteral("1 2", h), RuntimeError);
}

TEST_CASE("shallow/deep dichotomy property over random lists") {
    Heap h;
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 50);
        std::vector<int32_t> xs;
        for (int i = 0; i < n; ++i) xs.push_back(static_cast<int32_t>(rng() % 1000));
        Value l = ints(h, xs);
        // M = [x | L] shares cells, C = L[:] does not
        Value m = Value::list(h.allocCell(Value::ofInt(-1), l.ref));
        Value c = slice(l, Value::null(), Value::null(), h, w);
        std::string mBefore = show(m, h);
        std::string cBefore = show(c, h);
        indexSet(l, Value::ofInt(0), Value::ofInt(424242), h, w);
        CHECK(show(m, h) != mBefore);                 // element 1 of M changed
        CHECK(show(c, h) == cBefore);                 // clone unaffected
        CHECK(listHead(listTail(m, h), h).i == 424242);
        // tail algebra: [L[.] | L[>]] prints like L and shares its suffix
        Value rebuilt =
            Value::list(h.allocCell(listHead(l, h), listTail(l, h).ref));
        CHECK(show(rebuilt, h) == show(l, h));
        if (n > 1) CHECK(listTail(rebuilt, h).ref == listTail(l, h).ref);
    }
}

TEST_SUITE_END();
