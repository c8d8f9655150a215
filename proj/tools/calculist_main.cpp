// calculist CLI: interactive REPL, batch session replay, and assembly runner.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "calculist/assembler.hpp"
#include "calculist/session.hpp"
#include "calculist/vm.hpp"

using namespace calculist;

namespace {

int runBatch(const std::string& path, const SessionOptions& options) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open '" << path << "'\n";
        return 2;
    }
    Session session(options);
    int errors = runStream(session, in, std::cout, false);
    return errors == 0 ? 0 : 1;
}

int runAsm(const std::string& path, const SessionOptions& options) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open '" << path << "'\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    SessionState state;
    state.options = options;
    try {
        CompileUnit main = assembleProgram(buf.str(), state);
        Machine machine(state);
        machine.traceSink = options.trace ? &std::cerr : nullptr;
        ExecResult r = machine.execute(main);
        std::cout << r.output;
        if (r.error) {
            std::cerr << "runtime error: " << r.error->message << "\n";
            return 1;
        }
        return 0;
    } catch (const AsmError& e) {
        std::cerr << "assembly error at line " << e.line << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CalcuList: a functional language with controlled side effects"};
    app.require_subcommand(0, 1);

    SessionOptions options;
    bool noOpt = false;
    bool trace = false;
    app.add_flag("--no-opt", noOpt, "disable the tail recursion optimizer");
    app.add_flag("--trace", trace, "trace executed instructions to stderr");
    app.add_option("--stack-limit", options.stackLimit, "frame stack limit");

    std::string runFile, asmFile;
    CLI::App* run = app.add_subcommand("run", "replay a session file and print its outputs");
    run->add_option("file", runFile, "session file")->required();
    CLI::App* asmCmd = app.add_subcommand("asm", "assemble and execute a .clvm program");
    asmCmd->add_option("file", asmFile, "assembly file")->required();

    CLI11_PARSE(app, argc, argv);
    options.tailOpt = !noOpt;
    options.trace = trace;

    if (run->parsed()) return runBatch(runFile, options);
    if (asmCmd->parsed()) return runAsm(asmFile, options);

    Session session(options);
    return runStream(session, std::cin, std::cout, true) == 0 ? 0 : 1;
}
