// Session-wide state shared by the compiler, the VM and the shell: the heap,
// global/labeled variable storage, the function table and option flags.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "calculist/ast.hpp"
#include "calculist/bytecode.hpp"
#include "calculist/value.hpp"

namespace calculist {

struct FunctionInfo {
    std::string name;
    bool star = false;
    bool defined = false;   // slots may be created by forward references
    bool isLambda = false;
    int nparams = 0;
    std::vector<int> paramArities;   // 0 = plain value
    int returnArity = 0;
    int ncaptures = 0;
    int nlocals = 0;
    std::vector<std::string> paramNames;
    std::vector<std::string> localNames;
    std::vector<std::string> labels;
    CompileUnit unit;
    std::string signature;

    // Direct call sites recorded for definition-time / query-time checking.
    struct CallSite {
        int slot;
        int nargs;      // -1 when the function is only referenced as a value
        SourcePos pos;
    };
    std::vector<CallSite> callSites;
};

struct SessionOptions {
    bool tailOpt = true;
    bool trace = false;
    uint64_t stackLimit = 1'000'000;  // frames
};

struct SessionState {
    Heap heap;

    std::vector<Value> globals;
    std::vector<std::string> globalNames;  // insertion order, qualified for labeled
    std::unordered_map<std::string, int> globalSlots;

    // label -> member names, order of declaration
    std::vector<std::pair<std::string, std::vector<std::string>>> labelDecls;

    std::vector<FunctionInfo> functions;
    std::unordered_map<std::string, int> functionSlots;

    SessionOptions options;
    uint64_t lastClops = 0;

    int globalSlot(const std::string& name) const {
        auto it = globalSlots.find(name);
        return it == globalSlots.end() ? -1 : it->second;
    }
    int internGlobal(const std::string& name) {
        auto it = globalSlots.find(name);
        if (it != globalSlots.end()) return it->second;
        int slot = static_cast<int>(globals.size());
        globals.push_back(Value::null());
        globalNames.push_back(name);
        globalSlots.emplace(name, slot);
        return slot;
    }

    int functionSlot(const std::string& name) const {
        auto it = functionSlots.find(name);
        return it == functionSlots.end() ? -1 : it->second;
    }
    int internFunction(const std::string& name) {
        auto it = functionSlots.find(name);
        if (it != functionSlots.end()) return it->second;
        int slot = static_cast<int>(functions.size());
        FunctionInfo fi;
        fi.name = name;
        functions.push_back(std::move(fi));
        functionSlots.emplace(name, slot);
        return slot;
    }

    const std::vector<std::string>* labelMembers(const std::string& label) const {
        for (const auto& [name, members] : labelDecls)
            if (name == label) return &members;
        return nullptr;
    }
};

}  // namespace calculist
