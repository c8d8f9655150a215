// Runtime value model: tagged values, heap object pools, shallow/deep
// operation semantics shared by the compiler and the VM.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace calculist {

enum class TypeId : uint8_t {
    Double, Int, Char, Bool, Null, Type, String, List, Json, Function
};

const char* typeName(TypeId t);
// Maps a spelled type name ("int", "double", ...) to its id; false if unknown.
bool typeIdFromName(std::string_view name, TypeId& out);

struct Value {
    TypeId tag = TypeId::Null;
    union {
        double d;
        int32_t i;
        uint32_t cp;   // unicode code point
        bool b;
        TypeId ty;
        uint32_t ref;  // heap index (string/list/json/function); 0 = empty list
    };

    Value() : d(0.0) {}

    static Value null() { return Value(); }
    static Value ofDouble(double v) { Value x; x.tag = TypeId::Double; x.d = v; return x; }
    static Value ofInt(int32_t v) { Value x; x.tag = TypeId::Int; x.i = v; return x; }
    static Value ofChar(uint32_t v) { Value x; x.tag = TypeId::Char; x.cp = v; return x; }
    static Value ofBool(bool v) { Value x; x.tag = TypeId::Bool; x.b = v; return x; }
    static Value ofType(TypeId v) { Value x; x.tag = TypeId::Type; x.ty = v; return x; }
    static Value string(uint32_t r) { Value x; x.tag = TypeId::String; x.ref = r; return x; }
    static Value list(uint32_t r) { Value x; x.tag = TypeId::List; x.ref = r; return x; }
    static Value json(uint32_t r) { Value x; x.tag = TypeId::Json; x.ref = r; return x; }
    static Value function(uint32_t r) { Value x; x.tag = TypeId::Function; x.ref = r; return x; }
    static Value emptyList() { return list(0); }

    bool isNumeric() const {
        return tag == TypeId::Double || tag == TypeId::Int || tag == TypeId::Char;
    }
    bool isNull() const { return tag == TypeId::Null; }
};

struct ListCell {
    Value head;
    uint32_t tail = 0;  // 0 terminates the chain
};

struct JsonObject {
    std::vector<std::pair<std::string, Value>> fields;
    // Index of the field with the given key, or -1. scanned counts fields looked at.
    int find(std::string_view key, uint64_t& scanned) const;
};

struct ClosureData {
    int32_t func = -1;       // session function-table slot
    int32_t nparams = 0;     // copied from the function for arity checks/printing
    bool star = false;
    std::vector<Value> captures;
};

// Arena heap: pools grow for the lifetime of a session, no reclamation.
class Heap {
public:
    Heap() { cells_.emplace_back(); }  // index 0 reserved as the empty-list sentinel

    uint32_t allocCell(Value head, uint32_t tail) {
        cells_.push_back({head, tail});
        return static_cast<uint32_t>(cells_.size() - 1);
    }
    ListCell& cell(uint32_t r) { return cells_[r]; }
    const ListCell& cell(uint32_t r) const { return cells_[r]; }

    uint32_t allocString(std::string s) {
        strings_.push_back(std::move(s));
        return static_cast<uint32_t>(strings_.size() - 1);
    }
    const std::string& str(uint32_t r) const { return strings_[r]; }

    uint32_t allocJson(JsonObject j) {
        jsons_.push_back(std::move(j));
        return static_cast<uint32_t>(jsons_.size() - 1);
    }
    JsonObject& json(uint32_t r) { return jsons_[r]; }
    const JsonObject& json(uint32_t r) const { return jsons_[r]; }

    uint32_t allocClosure(ClosureData c) {
        closures_.push_back(std::move(c));
        return static_cast<uint32_t>(closures_.size() - 1);
    }
    const ClosureData& closure(uint32_t r) const { return closures_[r]; }

    size_t cellCount() const { return cells_.size() - 1; }
    size_t stringCount() const { return strings_.size(); }
    size_t jsonCount() const { return jsons_.size(); }
    size_t closureCount() const { return closures_.size(); }

private:
    std::vector<ListCell> cells_;
    std::vector<std::string> strings_;
    std::vector<JsonObject> jsons_;
    std::vector<ClosureData> closures_;
};

}  // namespace calculist
