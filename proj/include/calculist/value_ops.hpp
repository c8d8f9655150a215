// Operations on runtime values: numeric coercion, comparisons, list/json/string
// access, printing, and the printed-literal reader. Heap-walking operations
// report the work they did through the `work` accumulator so the VM can charge
// input-dependent clops.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "calculist/errors.hpp"
#include "calculist/value.hpp"

namespace calculist {

enum class ArithOp { Add, Sub, Mul, Div, IntDiv, Mod };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

Value arith(ArithOp op, Value lhs, Value rhs, Heap& heap, uint64_t& work);
Value compare(CmpOp op, Value lhs, Value rhs, const Heap& heap, uint64_t& work);
Value negate(Value v);
Value logicalNot(Value v);
bool asBool(Value v, const char* what);  // type error unless bool

// == semantics: numeric coercion, string content, list/json/function identity.
bool valueEquals(Value a, Value b, const Heap& heap, uint64_t& work);

Value listHead(Value l, const Heap& heap);
Value listTail(Value l, const Heap& heap);
// L[>i]: shared suffix starting at element i+1; i+1 cell hops.
Value listSuffix(Value l, Value idx, const Heap& heap, uint64_t& work);
uint32_t listLength(uint32_t ref, const Heap& heap);

// e1[e2] read: list by position, string by position (char), json by key.
Value indexGet(Value target, Value idx, const Heap& heap, uint64_t& work);
// t[i] = v / J[k] = v write; jsons append absent keys.
void indexSet(Value target, Value idx, Value v, Heap& heap, uint64_t& work);
Value jsonGet(Value j, Value key, const Heap& heap, uint64_t& work);

// Deep one-level slice. lo/hi are ints or null (defaults). Lists clone cells,
// strings produce substrings, jsons clone the field sequence (full slice only).
Value slice(Value target, Value lo, Value hi, Heap& heap, uint64_t& work);

int32_t builtinLen(Value v, const Heap& heap, uint64_t& work);
Value typeOf(Value v);

// Printed forms. Top level: strings/chars unquoted; nested: quoted, null shown.
std::string printValue(Value v, const Heap& heap, bool nested);
// Query print: null renders empty unless showNull.
std::string printTopLevel(Value v, const Heap& heap, bool showNull);
std::string formatDouble(double d);
std::string escapeString(const std::string& s);
std::string escapeChar(uint32_t cp);

// Parses one value in printed syntax (used by <<(file) and assembler constants).
Value parseValueLiteral(std::string_view text, Heap& heap);
// Scalar-only variant that does not touch a heap for non-string scalars.
std::optional<double> parseDoubleLiteral(std::string_view text);

// UTF-8 helpers; strings are stored as UTF-8 and indexed by code point.
size_t utf8Length(const std::string& s);
std::string utf8Encode(uint32_t cp);
uint32_t utf8CodePointAt(const std::string& s, size_t index);

}  // namespace calculist
