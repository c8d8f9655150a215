// The interactive session: keeps globals, labeled variables, functions,
// history and option flags; dispatches statements to the compiler and VM;
// implements service commands, output redirection and value file I/O.
#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "calculist/state.hpp"
#include "calculist/vm.hpp"

namespace calculist {

class Session {
public:
    struct Response {
        enum class Kind { Ok, Error, Incomplete };
        Kind kind = Kind::Ok;
        std::string text;  // printed output (without trailing prompt)

        bool ok() const { return kind == Kind::Ok; }
        bool incomplete() const { return kind == Kind::Incomplete; }
    };

    Session();
    explicit Session(SessionOptions options);

    // Evaluates one (possibly multi-line) input. Returns Incomplete when the
    // statement continues on the next line.
    Response evalInput(const std::string& input);

    SessionState& state() { return state_; }
    const SessionState& state() const { return state_; }
    uint64_t lastClops() const { return state_.lastClops; }
    const ExecResult& lastExec() const { return lastExec_; }

    // Service-command listings (also reachable through evalInput).
    std::string varsListing() const;
    std::string funcsListing() const;
    std::string memoryListing();
    std::string historyListing() const;

    // Value file I/O (the >>(f) redirect and <<(f) reads share these paths).
    void writeValue(const std::string& path, Value v);
    Value readValue(const std::string& path);

    std::ostream* traceSink = nullptr;  // defaults to std::cerr when tracing

private:
    Response runStatement(const std::string& input);
    Response service(const std::string& input);
    Response redirect(const std::string& input);
    ExecResult runUnit(const CompileUnit& unit);
    void emitOutput(const std::string& text, std::string& response);
    void recordHistory(const std::string& input);

    SessionState state_;
    Machine machine_;
    ExecResult lastExec_;
    std::vector<std::string> history_;
    std::unique_ptr<std::ofstream> redirect_;
    std::string redirectPath_;
};

// Feeds a stream through a session line by line, handling continuations.
// Prompts are written to `out` only when `interactive` is set. Returns the
// number of inputs that produced errors.
int runStream(Session& session, std::istream& in, std::ostream& out, bool interactive);

}  // namespace calculist
