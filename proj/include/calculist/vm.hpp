// The CalcuList Virtual Machine: executes bytecode over the STACK/HEAP/CODE/
// OUTPUT memories, counting clops (micro-operations) per instruction.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "calculist/bytecode.hpp"
#include "calculist/errors.hpp"
#include "calculist/state.hpp"

namespace calculist {

struct ExecResult {
    std::string output;
    uint64_t clops = 0;
    uint64_t maxFrameDepth = 0;
    uint64_t maxStackValues = 0;
    std::optional<RuntimeError> error;

    bool ok() const { return !error.has_value(); }
};

class Machine {
public:
    explicit Machine(SessionState& st) : st_(st) {}

    // Runs a unit against the session state. The clops counter starts at zero,
    // the stack is empty on entry and back to empty on exit (success or error);
    // output produced before an error is kept.
    ExecResult execute(const CompileUnit& unit);

    // Per-instruction trace lines go here when the session debug option is on.
    std::ostream* traceSink = nullptr;

    // CODE memory occupancy: instructions across all defined functions.
    uint64_t codeInstructionCount() const;

private:
    SessionState& st_;
};

}  // namespace calculist
