#include "calculist/value_ops.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace calculist {

namespace {

[[noreturn]] void typeError(const std::string& msg) {
    throw RuntimeError(RuntimeErrorKind::TypeError, msg);
}

int64_t numericAsInt(Value v) {
    return v.tag == TypeId::Char ? static_cast<int64_t>(v.cp) : static_cast<int64_t>(v.i);
}

double numericAsDouble(Value v) {
    switch (v.tag) {
        case TypeId::Double: return v.d;
        case TypeId::Int: return static_cast<double>(v.i);
        default: return static_cast<double>(v.cp);
    }
}

int32_t wrap32(int64_t v) {
    return static_cast<int32_t>(static_cast<uint32_t>(static_cast<uint64_t>(v)));
}

// Python-style floor division/modulo; both defined for nonzero divisors.
int64_t floorDiv(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}
int64_t floorMod(int64_t a, int64_t b) {
    int64_t r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return r;
}

const char* arithOpName(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
        case ArithOp::IntDiv: return "//";
        default: return "%";
    }
}

}  // namespace

const char* typeName(TypeId t) {
    switch (t) {
        case TypeId::Double: return "double";
        case TypeId::Int: return "int";
        case TypeId::Char: return "char";
        case TypeId::Bool: return "bool";
        case TypeId::Null: return "null";
        case TypeId::Type: return "type";
        case TypeId::String: return "string";
        case TypeId::List: return "list";
        case TypeId::Json: return "json";
        default: return "function";
    }
}

bool typeIdFromName(std::string_view name, TypeId& out) {
    static const std::pair<const char*, TypeId> table[] = {
        {"double", TypeId::Double}, {"int", TypeId::Int}, {"char", TypeId::Char},
        {"bool", TypeId::Bool}, {"null", TypeId::Null}, {"type", TypeId::Type},
        {"string", TypeId::String}, {"list", TypeId::List}, {"json", TypeId::Json},
        {"function", TypeId::Function},
    };
    for (const auto& [n, id] : table) {
        if (name == n) { out = id; return true; }
    }
    return false;
}

const char* runtimeErrorKindName(RuntimeErrorKind k) {
    switch (k) {
        case RuntimeErrorKind::TypeError: return "type-error";
        case RuntimeErrorKind::EmptyListTail: return "empty-list-tail";
        case RuntimeErrorKind::IndexOutOfRange: return "index-out-of-range";
        case RuntimeErrorKind::DivisionByZero: return "division-by-zero";
        case RuntimeErrorKind::UserException: return "user-exception";
        case RuntimeErrorKind::UnresolvedName: return "unresolved-name";
        case RuntimeErrorKind::ArityMismatch: return "arity-mismatch";
        case RuntimeErrorKind::StackOverflow: return "stack-overflow";
        case RuntimeErrorKind::FileIo: return "file-io";
        default: return "bad-literal";
    }
}

int JsonObject::find(std::string_view key, uint64_t& scanned) const {
    for (size_t i = 0; i < fields.size(); ++i) {
        ++scanned;
        if (fields[i].first == key) return static_cast<int>(i);
    }
    return -1;
}

uint32_t listLength(uint32_t ref, const Heap& heap) {
    uint32_t n = 0;
    while (ref != 0) {
        ++n;
        ref = heap.cell(ref).tail;
    }
    return n;
}

Value arith(ArithOp op, Value lhs, Value rhs, Heap& heap, uint64_t& work) {
    if (lhs.isNumeric() && rhs.isNumeric()) {
        if (op == ArithOp::Div) {
            double b = numericAsDouble(rhs);
            if (b == 0.0)
                throw RuntimeError(RuntimeErrorKind::DivisionByZero, "division by zero");
            return Value::ofDouble(numericAsDouble(lhs) / b);
        }
        if (op == ArithOp::IntDiv || op == ArithOp::Mod) {
            if (lhs.tag == TypeId::Double || rhs.tag == TypeId::Double)
                typeError(std::string("type error: operator ") + arithOpName(op) +
                          " requires int or char operands");
            int64_t a = numericAsInt(lhs), b = numericAsInt(rhs);
            if (b == 0)
                throw RuntimeError(RuntimeErrorKind::DivisionByZero, "division by zero");
            return Value::ofInt(wrap32(op == ArithOp::IntDiv ? floorDiv(a, b) : floorMod(a, b)));
        }
        if (lhs.tag == TypeId::Double || rhs.tag == TypeId::Double) {
            double a = numericAsDouble(lhs), b = numericAsDouble(rhs);
            switch (op) {
                case ArithOp::Add: return Value::ofDouble(a + b);
                case ArithOp::Sub: return Value::ofDouble(a - b);
                default: return Value::ofDouble(a * b);
            }
        }
        // char op char yields int, so every integral result is int
        int64_t a = numericAsInt(lhs), b = numericAsInt(rhs);
        switch (op) {
            case ArithOp::Add: return Value::ofInt(wrap32(a + b));
            case ArithOp::Sub: return Value::ofInt(wrap32(a - b));
            default: return Value::ofInt(wrap32(a * b));
        }
    }
    if (op == ArithOp::Add) {
        if (lhs.tag == TypeId::String && rhs.tag == TypeId::String) {
            const std::string& a = heap.str(lhs.ref);
            const std::string& b = heap.str(rhs.ref);
            work += a.size() + b.size();
            return Value::string(heap.allocString(a + b));
        }
        if (lhs.tag == TypeId::String && rhs.tag == TypeId::Char) {
            const std::string& a = heap.str(lhs.ref);
            work += a.size() + 1;
            return Value::string(heap.allocString(a + utf8Encode(rhs.cp)));
        }
        if (lhs.tag == TypeId::List && rhs.tag == TypeId::List) {
            // Shallow concatenation: lhs cells are cloned, rhs cells are shared.
            std::vector<Value> heads;
            for (uint32_t c = lhs.ref; c != 0; c = heap.cell(c).tail)
                heads.push_back(heap.cell(c).head);
            work += 2 * heads.size();
            uint32_t out = rhs.ref;
            for (size_t i = heads.size(); i-- > 0;)
                out = heap.allocCell(heads[i], out);
            return Value::list(out);
        }
    }
    typeError(std::string("type error: cannot apply ") + arithOpName(op) + " to " +
              typeName(lhs.tag) + " and " + typeName(rhs.tag));
}

bool valueEquals(Value a, Value b, const Heap& heap, uint64_t& work) {
    if (a.isNumeric() && b.isNumeric()) {
        if (a.tag == TypeId::Double || b.tag == TypeId::Double)
            return numericAsDouble(a) == numericAsDouble(b);
        return numericAsInt(a) == numericAsInt(b);
    }
    if (a.tag != b.tag) return false;
    switch (a.tag) {
        case TypeId::Bool: return a.b == b.b;
        case TypeId::Null: return true;
        case TypeId::Type: return a.ty == b.ty;
        case TypeId::String: {
            const std::string& x = heap.str(a.ref);
            const std::string& y = heap.str(b.ref);
            work += std::min(x.size(), y.size());
            return x == y;
        }
        case TypeId::List:
        case TypeId::Json:
        case TypeId::Function:
            return a.ref == b.ref;  // identity
        default: return false;
    }
}

Value compare(CmpOp op, Value lhs, Value rhs, const Heap& heap, uint64_t& work) {
    if (op == CmpOp::Eq || op == CmpOp::Ne) {
        bool eq = valueEquals(lhs, rhs, heap, work);
        return Value::ofBool(op == CmpOp::Eq ? eq : !eq);
    }
    int cmp;
    if (lhs.isNumeric() && rhs.isNumeric()) {
        if (lhs.tag == TypeId::Double || rhs.tag == TypeId::Double) {
            double a = numericAsDouble(lhs), b = numericAsDouble(rhs);
            cmp = a < b ? -1 : (a > b ? 1 : 0);
        } else {
            int64_t a = numericAsInt(lhs), b = numericAsInt(rhs);
            cmp = a < b ? -1 : (a > b ? 1 : 0);
        }
    } else if (lhs.tag == TypeId::Bool && rhs.tag == TypeId::Bool) {
        cmp = static_cast<int>(lhs.b) - static_cast<int>(rhs.b);  // false < true
    } else if (lhs.tag == TypeId::String && rhs.tag == TypeId::String) {
        const std::string& a = heap.str(lhs.ref);
        const std::string& b = heap.str(rhs.ref);
        work += std::min(a.size(), b.size());
        cmp = a.compare(b);  // byte order == code-point order for UTF-8
    } else {
        typeError(std::string("type error: cannot order ") + typeName(lhs.tag) + " and " +
                  typeName(rhs.tag));
    }
    switch (op) {
        case CmpOp::Lt: return Value::ofBool(cmp < 0);
        case CmpOp::Le: return Value::ofBool(cmp <= 0);
        case CmpOp::Gt: return Value::ofBool(cmp > 0);
        default: return Value::ofBool(cmp >= 0);
    }
}

Value negate(Value v) {
    switch (v.tag) {
        case TypeId::Double: return Value::ofDouble(-v.d);
        case TypeId::Int: return Value::ofInt(wrap32(-static_cast<int64_t>(v.i)));
        case TypeId::Char: return Value::ofInt(wrap32(-static_cast<int64_t>(v.cp)));
        default:
            typeError(std::string("type error: cannot negate ") + typeName(v.tag));
    }
}

Value logicalNot(Value v) {
    if (v.tag != TypeId::Bool)
        typeError(std::string("type error: expected bool, got ") + typeName(v.tag));
    return Value::ofBool(!v.b);
}

bool asBool(Value v, const char* what) {
    if (v.tag != TypeId::Bool)
        typeError(std::string("type error: ") + what + " must be bool, got " + typeName(v.tag));
    return v.b;
}

Value listHead(Value l, const Heap& heap) {
    if (l.tag != TypeId::List)
        typeError(std::string("type error: head of ") + typeName(l.tag));
    if (l.ref == 0)
        throw RuntimeError(RuntimeErrorKind::EmptyListTail, "empty list has no head");
    return heap.cell(l.ref).head;
}

Value listTail(Value l, const Heap& heap) {
    if (l.tag != TypeId::List)
        typeError(std::string("type error: tail of ") + typeName(l.tag));
    if (l.ref == 0)
        throw RuntimeError(RuntimeErrorKind::EmptyListTail, "empty list has no tail");
    return Value::list(heap.cell(l.ref).tail);
}

Value listSuffix(Value l, Value idx, const Heap& heap, uint64_t& work) {
    if (l.tag != TypeId::List)
        typeError(std::string("type error: [>i] applied to ") + typeName(l.tag));
    if (idx.tag != TypeId::Int && idx.tag != TypeId::Char)
        typeError(std::string("type error: [>i] index must be int, got ") + typeName(idx.tag));
    int64_t i = numericAsInt(idx);
    if (i < 0)
        throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                           "suffix index " + std::to_string(i) + " out of range");
    uint32_t c = l.ref;
    for (int64_t hop = 0; hop <= i; ++hop) {
        if (c == 0)
            throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                               "suffix index " + std::to_string(i) + " out of range");
        c = heap.cell(c).tail;
        ++work;
    }
    return Value::list(c);
}

Value indexGet(Value target, Value idx, const Heap& heap, uint64_t& work) {
    if (target.tag == TypeId::Json) return jsonGet(target, idx, heap, work);
    if (idx.tag != TypeId::Int && idx.tag != TypeId::Char)
        typeError(std::string("type error: index must be int, got ") + typeName(idx.tag));
    int64_t i = numericAsInt(idx);
    if (target.tag == TypeId::List) {
        if (i < 0)
            throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                               "index " + std::to_string(i) + " out of range");
        uint32_t c = target.ref;
        for (int64_t k = 0; k < i; ++k) {
            if (c == 0) break;
            c = heap.cell(c).tail;
            ++work;
        }
        if (c == 0)
            throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                               "index " + std::to_string(i) + " out of range");
        return heap.cell(c).head;
    }
    if (target.tag == TypeId::String) {
        const std::string& s = heap.str(target.ref);
        size_t n = utf8Length(s);
        work += static_cast<uint64_t>(i > 0 ? i : 0);
        if (i < 0 || static_cast<size_t>(i) >= n)
            throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                               "index " + std::to_string(i) + " out of range (length " +
                                   std::to_string(n) + ")");
        return Value::ofChar(utf8CodePointAt(s, static_cast<size_t>(i)));
    }
    typeError(std::string("type error: cannot index ") + typeName(target.tag));
}

Value jsonGet(Value j, Value key, const Heap& heap, uint64_t& work) {
    if (j.tag != TypeId::Json)
        typeError(std::string("type error: key access on ") + typeName(j.tag));
    if (key.tag != TypeId::String)
        typeError(std::string("type error: json key must be string, got ") + typeName(key.tag));
    const JsonObject& obj = heap.json(j.ref);
    int at = obj.find(heap.str(key.ref), work);
    return at < 0 ? Value::null() : obj.fields[static_cast<size_t>(at)].second;
}

void indexSet(Value target, Value idx, Value v, Heap& heap, uint64_t& work) {
    if (target.tag == TypeId::List) {
        if (idx.tag != TypeId::Int && idx.tag != TypeId::Char)
            typeError(std::string("type error: index must be int, got ") + typeName(idx.tag));
        int64_t i = numericAsInt(idx);
        if (i < 0)
            throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                               "index " + std::to_string(i) + " out of range");
        uint32_t c = target.ref;
        for (int64_t k = 0; k < i; ++k) {
            if (c == 0) break;
            c = heap.cell(c).tail;
            ++work;
        }
        if (c == 0)
            throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                               "index " + std::to_string(i) + " out of range");
        heap.cell(c).head = v;
        return;
    }
    if (target.tag == TypeId::Json) {
        if (idx.tag != TypeId::String)
            typeError(std::string("type error: json key must be string, got ") +
                      typeName(idx.tag));
        JsonObject& obj = heap.json(target.ref);
        int at = obj.find(heap.str(idx.ref), work);
        if (at >= 0)
            obj.fields[static_cast<size_t>(at)].second = v;
        else
            obj.fields.emplace_back(heap.str(idx.ref), v);
        return;
    }
    typeError(std::string("type error: cannot assign into ") + typeName(target.tag));
}

namespace {

int64_t sliceBound(Value v, int64_t dflt, const char* which) {
    if (v.isNull()) return dflt;
    if (v.tag != TypeId::Int && v.tag != TypeId::Char)
        typeError(std::string("type error: slice ") + which + " must be int, got " +
                  typeName(v.tag));
    return numericAsInt(v);
}

[[noreturn]] void sliceRangeError(int64_t lo, int64_t hi, size_t n) {
    throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                       "slice [" + std::to_string(lo) + ":" + std::to_string(hi) +
                           "] out of range (length " + std::to_string(n) + ")");
}

}  // namespace

Value slice(Value target, Value lo, Value hi, Heap& heap, uint64_t& work) {
    if (target.tag == TypeId::String) {
        const std::string& s = heap.str(target.ref);
        size_t n = utf8Length(s);
        int64_t a = sliceBound(lo, 0, "start");
        int64_t b = sliceBound(hi, static_cast<int64_t>(n), "end");
        if (a < 0 || b < a || static_cast<size_t>(b) > n) sliceRangeError(a, b, n);
        size_t fromByte = 0, i = 0;
        while (i < static_cast<size_t>(a)) {
            unsigned char c = static_cast<unsigned char>(s[fromByte]);
            fromByte += c < 0x80 ? 1 : (c < 0xE0 ? 2 : (c < 0xF0 ? 3 : 4));
            ++i;
        }
        size_t toByte = fromByte;
        while (i < static_cast<size_t>(b)) {
            unsigned char c = static_cast<unsigned char>(s[toByte]);
            toByte += c < 0x80 ? 1 : (c < 0xE0 ? 2 : (c < 0xF0 ? 3 : 4));
            ++i;
        }
        work += static_cast<uint64_t>(b);
        return Value::string(heap.allocString(s.substr(fromByte, toByte - fromByte)));
    }
    if (target.tag == TypeId::List) {
        uint32_t n = listLength(target.ref, heap);
        int64_t a = sliceBound(lo, 0, "start");
        int64_t b = sliceBound(hi, n, "end");
        if (a < 0 || b < a || b > n) sliceRangeError(a, b, n);
        uint32_t c = target.ref;
        for (int64_t k = 0; k < a; ++k) c = heap.cell(c).tail;
        std::vector<Value> heads;
        heads.reserve(static_cast<size_t>(b - a));
        for (int64_t k = a; k < b; ++k) {
            heads.push_back(heap.cell(c).head);
            c = heap.cell(c).tail;
        }
        work += static_cast<uint64_t>(a) + 2 * heads.size();
        uint32_t out = 0;
        for (size_t i = heads.size(); i-- > 0;) out = heap.allocCell(heads[i], out);
        return Value::list(out);
    }
    if (target.tag == TypeId::Json) {
        if (!lo.isNull() || !hi.isNull())
            typeError("type error: json supports only the full slice [:]");
        const JsonObject& src = heap.json(target.ref);
        work += 2 * src.fields.size();
        return Value::json(heap.allocJson(src));  // one-level clone, values shared
    }
    typeError(std::string("type error: cannot slice ") + typeName(target.tag));
}

int32_t builtinLen(Value v, const Heap& heap, uint64_t& work) {
    switch (v.tag) {
        case TypeId::String: {
            size_t n = utf8Length(heap.str(v.ref));
            work += heap.str(v.ref).size();
            return static_cast<int32_t>(n);
        }
        case TypeId::List: {
            uint32_t n = listLength(v.ref, heap);
            work += n;
            return static_cast<int32_t>(n);
        }
        case TypeId::Json:
            return static_cast<int32_t>(heap.json(v.ref).fields.size());
        default:
            typeError(std::string("type error: _len of ") + typeName(v.tag));
    }
}

Value typeOf(Value v) { return Value::ofType(v.tag); }

std::string formatDouble(double d) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, d);
        if (std::strtod(buf, nullptr) == d) break;
    }
    std::string s = buf;
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

std::string escapeString(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string escapeChar(uint32_t cp) {
    switch (cp) {
        case '\'': return "'\\''";
        case '\\': return "'\\\\'";
        case '\n': return "'\\n'";
        case '\t': return "'\\t'";
        case '\r': return "'\\r'";
        default: return "'" + utf8Encode(cp) + "'";
    }
}

std::string printValue(Value v, const Heap& heap, bool nested) {
    switch (v.tag) {
        case TypeId::Double: return formatDouble(v.d);
        case TypeId::Int: return std::to_string(v.i);
        case TypeId::Char: return nested ? escapeChar(v.cp) : utf8Encode(v.cp);
        case TypeId::Bool: return v.b ? "true" : "false";
        case TypeId::Null: return "null";
        case TypeId::Type: return typeName(v.ty);
        case TypeId::String:
            return nested ? escapeString(heap.str(v.ref)) : heap.str(v.ref);
        case TypeId::List: {
            if (v.ref == 0) return "[]";
            std::string out = "[ ";
            bool first = true;
            for (uint32_t c = v.ref; c != 0; c = heap.cell(c).tail) {
                if (!first) out += ", ";
                first = false;
                out += printValue(heap.cell(c).head, heap, true);
            }
            out += " ]";
            return out;
        }
        case TypeId::Json: {
            const JsonObject& obj = heap.json(v.ref);
            if (obj.fields.empty()) return "{}";
            std::string out = "{ ";
            bool first = true;
            for (const auto& [k, val] : obj.fields) {
                if (!first) out += ", ";
                first = false;
                out += escapeString(k) + ": " + printValue(val, heap, true);
            }
            out += " }";
            return out;
        }
        default: {
            const ClosureData& c = heap.closure(v.ref);
            return "function/" + std::to_string(c.nparams);
        }
    }
}

std::string printTopLevel(Value v, const Heap& heap, bool showNull) {
    if (v.isNull() && !showNull) return "";
    return printValue(v, heap, false);
}

size_t utf8Length(const std::string& s) {
    size_t n = 0;
    for (size_t i = 0; i < s.size();) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        i += c < 0x80 ? 1 : (c < 0xE0 ? 2 : (c < 0xF0 ? 3 : 4));
        ++n;
    }
    return n;
}

std::string utf8Encode(uint32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

uint32_t utf8CodePointAt(const std::string& s, size_t index) {
    size_t byte = 0;
    for (size_t k = 0; k < index; ++k) {
        unsigned char c = static_cast<unsigned char>(s[byte]);
        byte += c < 0x80 ? 1 : (c < 0xE0 ? 2 : (c < 0xF0 ? 3 : 4));
    }
    unsigned char c = static_cast<unsigned char>(s[byte]);
    if (c < 0x80) return c;
    if (c < 0xE0)
        return ((c & 0x1Fu) << 6) | (static_cast<unsigned char>(s[byte + 1]) & 0x3Fu);
    if (c < 0xF0)
        return ((c & 0x0Fu) << 12) | ((static_cast<unsigned char>(s[byte + 1]) & 0x3Fu) << 6) |
               (static_cast<unsigned char>(s[byte + 2]) & 0x3Fu);
    return ((c & 0x07u) << 18) | ((static_cast<unsigned char>(s[byte + 1]) & 0x3Fu) << 12) |
           ((static_cast<unsigned char>(s[byte + 2]) & 0x3Fu) << 6) |
           (static_cast<unsigned char>(s[byte + 3]) & 0x3Fu);
}

// ---------------------------------------------------------------------------
// Printed-literal reader (FREAD, assembler constants, <<(file)).

namespace {

struct LiteralReader {
    std::string_view text;
    size_t at = 0;
    Heap& heap;

    explicit LiteralReader(std::string_view t, Heap& h) : text(t), heap(h) {}

    [[noreturn]] void fail(const std::string& msg) {
        throw RuntimeError(RuntimeErrorKind::BadLiteral,
                           "malformed value literal: " + msg + " at offset " +
                               std::to_string(at));
    }
    void ws() {
        while (at < text.size() &&
               (text[at] == ' ' || text[at] == '\t' || text[at] == '\n' || text[at] == '\r'))
            ++at;
    }
    char peek() { return at < text.size() ? text[at] : '\0'; }
    bool eat(char c) {
        if (peek() == c) { ++at; return true; }
        return false;
    }

    Value value() {
        ws();
        char c = peek();
        if (c == '[') return listLit();
        if (c == '{') return jsonLit();
        if (c == '"') return Value::string(heap.allocString(stringLit()));
        if (c == '\'') return charLit();
        if (c == '-' || c == '+' || c == '.' || (c >= '0' && c <= '9')) return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return word();
        fail("unexpected character");
    }

    Value listLit() {
        eat('[');
        ws();
        std::vector<Value> items;
        if (!eat(']')) {
            while (true) {
                items.push_back(value());
                ws();
                if (eat(']')) break;
                if (!eat(',')) fail("expected ',' or ']'");
            }
        }
        uint32_t out = 0;
        for (size_t i = items.size(); i-- > 0;) out = heap.allocCell(items[i], out);
        return Value::list(out);
    }

    Value jsonLit() {
        eat('{');
        ws();
        JsonObject obj;
        if (!eat('}')) {
            while (true) {
                ws();
                if (peek() != '"') fail("expected string key");
                std::string key = stringLit();
                uint64_t scanned = 0;
                if (obj.find(key, scanned) >= 0) fail("duplicate key \"" + key + "\"");
                ws();
                if (!eat(':')) fail("expected ':'");
                obj.fields.emplace_back(std::move(key), value());
                ws();
                if (eat('}')) break;
                if (!eat(',')) fail("expected ',' or '}'");
            }
        }
        return Value::json(heap.allocJson(std::move(obj)));
    }

    std::string stringLit() {
        eat('"');
        std::string out;
        while (true) {
            if (at >= text.size()) fail("unterminated string");
            char c = text[at++];
            if (c == '"') break;
            if (c == '\\') {
                if (at >= text.size()) fail("unterminated escape");
                char e = text[at++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case '\\': out += '\\'; break;
                    case '"': out += '"'; break;
                    case '\'': out += '\''; break;
                    default: fail("bad escape");
                }
            } else {
                out += c;
            }
        }
        return out;
    }

    Value charLit() {
        eat('\'');
        if (at >= text.size()) fail("unterminated char");
        uint32_t cp;
        char c = text[at];
        if (c == '\\') {
            ++at;
            if (at >= text.size()) fail("unterminated escape");
            char e = text[at++];
            switch (e) {
                case 'n': cp = '\n'; break;
                case 't': cp = '\t'; break;
                case 'r': cp = '\r'; break;
                case '\\': cp = '\\'; break;
                case '"': cp = '"'; break;
                case '\'': cp = '\''; break;
                default: fail("bad escape");
            }
        } else {
            unsigned char u = static_cast<unsigned char>(c);
            size_t len = u < 0x80 ? 1 : (u < 0xE0 ? 2 : (u < 0xF0 ? 3 : 4));
            if (at + len > text.size()) fail("unterminated char");
            cp = utf8CodePointAt(std::string(text.substr(at, len)), 0);
            at += len;
        }
        if (!eat('\'')) fail("unterminated char");
        return Value::ofChar(cp);
    }

    Value number() {
        size_t start = at;
        if (peek() == '-' || peek() == '+') ++at;
        bool isDouble = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++at;
        if (peek() == '.') {
            isDouble = true;
            ++at;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++at;
        }
        if (peek() == 'e' || peek() == 'E') {
            isDouble = true;
            ++at;
            if (peek() == '-' || peek() == '+') ++at;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++at;
        }
        std::string tok(text.substr(start, at - start));
        if (tok.empty() || tok == "-" || tok == "+" || tok == ".") fail("bad number");
        if (isDouble) return Value::ofDouble(std::strtod(tok.c_str(), nullptr));
        errno = 0;
        long long v = std::strtoll(tok.c_str(), nullptr, 10);
        if (errno != 0 || v < INT32_MIN || v > INT32_MAX) fail("integer out of range");
        return Value::ofInt(static_cast<int32_t>(v));
    }

    Value word() {
        size_t start = at;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++at;
        std::string w(text.substr(start, at - start));
        if (w == "true") return Value::ofBool(true);
        if (w == "false") return Value::ofBool(false);
        if (w == "null") return Value::null();
        TypeId t;
        if (typeIdFromName(w, t)) return Value::ofType(t);
        fail("unknown word '" + w + "'");
    }
};

}  // namespace

Value parseValueLiteral(std::string_view text, Heap& heap) {
    LiteralReader r(text, heap);
    Value v = r.value();
    r.ws();
    if (r.at != text.size()) r.fail("trailing content");
    return v;
}

std::optional<double> parseDoubleLiteral(std::string_view text) {
    char* end = nullptr;
    std::string s(text);
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) return std::nullopt;
    return v;
}

}  // namespace calculist
