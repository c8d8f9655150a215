#include "calculist/session.hpp"

#include <cctype>
#include <iostream>
#include <sstream>

#include "calculist/assembler.hpp"
#include "calculist/compiler.hpp"
#include "calculist/parser.hpp"
#include "calculist/value_ops.hpp"

namespace calculist {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string oneLine(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == '\n' || c == '\r') c = ' ';
    return out;
}

}  // namespace

Session::Session() : Session(SessionOptions{}) {}

Session::Session(SessionOptions options) : machine_(state_) {
    state_.options = options;
}

void Session::emitOutput(const std::string& text, std::string& response) {
    if (text.empty()) return;
    if (redirect_ && *redirect_)
        *redirect_ << text << std::flush;
    else
        response += text;
}

void Session::recordHistory(const std::string& input) {
    history_.push_back(oneLine(trim(input)));
}

Session::Response Session::evalInput(const std::string& input) {
    std::string text = trim(input);
    if (text.empty()) return {Response::Kind::Ok, ""};

    if (text[0] == '!') return service(text);
    if (text.size() >= 2 && text[0] == '>' && text[1] == '>') return redirect(text);

    return runStatement(input);
}

ExecResult Session::runUnit(const CompileUnit& unit) {
    machine_.traceSink = state_.options.trace ? (traceSink ? traceSink : &std::cerr) : nullptr;
    ExecResult r = machine_.execute(unit);
    state_.lastClops = r.clops;
    lastExec_ = r;
    return r;
}

Session::Response Session::runStatement(const std::string& input) {
    Statement stmt;
    try {
        stmt = parseStatement(input);
    } catch (const IncompleteInput&) {
        return {Response::Kind::Incomplete, ""};
    } catch (const LexError& e) {
        return {Response::Kind::Error,
                "lexical error at " + std::to_string(e.pos.line) + ":" +
                    std::to_string(e.pos.col) + ": " + e.what() + "\n"};
    } catch (const ParseError& e) {
        return {Response::Kind::Error,
                "syntax error at " + std::to_string(e.pos.line) + ":" +
                    std::to_string(e.pos.col) + ": " + e.what() + "\n"};
    }

    // snapshot for rollback when an assignment's evaluation fails
    size_t globalsBefore = state_.globals.size();

    try {
        switch (stmt.kind) {
            case Statement::Kind::FuncDef: {
                defineFunction(*stmt.func, state_);
                recordHistory(input);
                return {Response::Kind::Ok, ""};
            }
            case Statement::Kind::LabelDecl: {
                CompileUnit unit = compileLabelDecl(stmt, state_);
                ExecResult r = runUnit(unit);
                if (r.error) {
                    return {Response::Kind::Error,
                            "runtime error: " + r.error->message + "\n"};
                }
                recordHistory(input);
                return {Response::Kind::Ok, ""};
            }
            case Statement::Kind::Assign: {
                CompileUnit unit = compileAssignment(stmt, state_);
                validateResolved(unit, state_);
                ExecResult r = runUnit(unit);
                std::string response;
                emitOutput(r.output, response);
                if (r.error) {
                    // drop a variable slot created by a failed first assignment
                    while (state_.globals.size() > globalsBefore) {
                        state_.globalSlots.erase(state_.globalNames.back());
                        state_.globalNames.pop_back();
                        state_.globals.pop_back();
                    }
                    std::string msg = r.error->kind == RuntimeErrorKind::UserException
                                          ? "exception: " + r.error->message
                                          : "runtime error: " + r.error->message;
                    return {Response::Kind::Error, response + msg + "\n"};
                }
                recordHistory(input);
                return {Response::Kind::Ok, response};
            }
            case Statement::Kind::Query: {
                CompileUnit unit = compileQuery(*stmt.expr, stmt.showNull, state_);
                validateResolved(unit, state_);
                ExecResult r = runUnit(unit);
                std::string response;
                emitOutput(r.output, response);
                if (r.error) {
                    std::string msg = r.error->kind == RuntimeErrorKind::UserException
                                          ? "exception: " + r.error->message
                                          : "runtime error: " + r.error->message;
                    return {Response::Kind::Error, response + msg + "\n"};
                }
                recordHistory(input);
                return {Response::Kind::Ok, response};
            }
            default:
                return {Response::Kind::Error, "unsupported statement\n"};
        }
    } catch (const CompileError& e) {
        return {Response::Kind::Error, std::string("compile error: ") + e.what() + "\n"};
    }
}

// ---------------------------------------------------------------------------
// service commands

Session::Response Session::service(const std::string& input) {
    std::string text = trim(input);
    if (!text.empty() && text.back() == ';') text = trim(text.substr(0, text.size() - 1));
    text = text.substr(1);  // drop '!'

    std::string name, arg;
    size_t i = 0;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
    name = text.substr(0, i);
    arg = trim(text.substr(i));

    // file argument in parentheses: !save(path) / !import(path)
    std::string parenArg;
    if (!arg.empty() && arg.front() == '(') {
        size_t close = arg.rfind(')');
        if (close == std::string::npos)
            return {Response::Kind::Error, "service error: missing ')' in !" + name + "\n"};
        parenArg = trim(arg.substr(1, close - 1));
        if (parenArg.size() >= 2 && parenArg.front() == '"' && parenArg.back() == '"')
            parenArg = parenArg.substr(1, parenArg.size() - 2);
    }

    if (name == "clops") return {Response::Kind::Ok, std::to_string(state_.lastClops) + "\n"};
    if (name == "vars") return {Response::Kind::Ok, varsListing()};
    if (name == "funcs") return {Response::Kind::Ok, funcsListing()};
    if (name == "history") return {Response::Kind::Ok, historyListing()};
    if (name == "memory") return {Response::Kind::Ok, memoryListing()};

    if (name == "debug" || name == "opt") {
        bool* flag = name == "debug" ? &state_.options.trace : &state_.options.tailOpt;
        bool value;
        if (arg == "on") value = true;
        else if (arg == "off") value = false;
        else if (arg.empty()) value = !*flag;
        else
            return {Response::Kind::Error, "service error: !" + name + " expects on or off\n"};
        *flag = value;
        recordHistory("!" + name + (value ? " on" : " off"));
        return {Response::Kind::Ok, "!" + name + " is " + (value ? "on" : "off") + "\n"};
    }

    if (name == "save") {
        if (parenArg.empty())
            return {Response::Kind::Error, "service error: !save needs a file name\n"};
        std::ofstream out(parenArg, std::ios::trunc);
        if (!out)
            return {Response::Kind::Error,
                    "service error: cannot open '" + parenArg + "' for writing\n"};
        for (const auto& line : history_) out << line << "\n";
        return {Response::Kind::Ok, ""};
    }

    if (name == "import") {
        if (parenArg.empty())
            return {Response::Kind::Error, "service error: !import needs a file name\n"};
        std::ifstream in(parenArg);
        if (!in)
            return {Response::Kind::Error,
                    "service error: cannot open '" + parenArg + "' (state unchanged)\n"};
        std::ostringstream out;
        runStream(*this, in, out, false);
        return {Response::Kind::Ok, out.str()};
    }

    if (name == "code") {
        if (arg.empty())
            return {Response::Kind::Error, "service error: !code needs a function name\n"};
        int slot = state_.functionSlot(arg);
        if (slot < 0 || !state_.functions[static_cast<size_t>(slot)].defined)
            return {Response::Kind::Error,
                    "service error: function '" + arg + "' is not defined\n"};
        const FunctionInfo& fi = state_.functions[static_cast<size_t>(slot)];
        std::string out = "; " + fi.signature + "  (slot " + std::to_string(slot) +
                          ", locals " + std::to_string(fi.nlocals) + ")\n";
        out += disassemble(fi.unit, state_);
        return {Response::Kind::Ok, out};
    }

    return {Response::Kind::Error, "service error: unknown command !" + name + "\n"};
}

Session::Response Session::redirect(const std::string& input) {
    std::string text = trim(input);
    if (!text.empty() && text.back() == ';') text = trim(text.substr(0, text.size() - 1));
    if (text.size() < 4 || text[0] != '>' || text[1] != '>')
        return {Response::Kind::Error, "syntax error: expected >>(file)\n"};
    std::string rest = trim(text.substr(2));
    if (rest.empty() || rest.front() != '(' || rest.back() != ')')
        return {Response::Kind::Error, "syntax error: expected >>(file)\n"};
    std::string path = trim(rest.substr(1, rest.size() - 2));
    if (path.size() >= 2 && path.front() == '"' && path.back() == '"')
        path = path.substr(1, path.size() - 2);

    if (path.empty()) {
        redirect_.reset();
        redirectPath_.clear();
        recordHistory(">>()");
        return {Response::Kind::Ok, ""};
    }
    auto out = std::make_unique<std::ofstream>(path, std::ios::trunc);
    if (!*out)
        return {Response::Kind::Error, "file error: cannot open '" + path + "' for writing\n"};
    redirect_ = std::move(out);
    redirectPath_ = path;
    recordHistory(">>(" + path + ")");
    return {Response::Kind::Ok, ""};
}

// ---------------------------------------------------------------------------
// listings

std::string Session::varsListing() const {
    std::string out;
    for (size_t i = 0; i < state_.globalNames.size(); ++i) {
        Value v = state_.globals[i];
        std::string shown = printValue(v, state_.heap, true);
        if (shown.size() > 120) shown = shown.substr(0, 117) + "...";
        out += "<" + state_.globalNames[i] + ", " + typeName(v.tag) + ", " + shown + ">\n";
    }
    return out;
}

std::string Session::funcsListing() const {
    std::string out;
    for (const auto& f : state_.functions)
        if (f.defined && !f.isLambda) out += f.signature + "\n";
    return out;
}

std::string Session::memoryListing() {
    std::ostringstream out;
    out << "STACK: " << lastExec_.maxStackValues << " values, " << lastExec_.maxFrameDepth
        << " frames at peak of last execution\n";
    out << "HEAP: " << state_.heap.cellCount() << " cells, " << state_.heap.stringCount()
        << " strings, " << state_.heap.jsonCount() << " jsons, " << state_.heap.closureCount()
        << " closures\n";
    out << "CODE: " << machine_.codeInstructionCount() << " instructions in "
        << state_.functions.size() << " functions\n";
    out << "OPTIONS: opt " << (state_.options.tailOpt ? "on" : "off") << ", debug "
        << (state_.options.trace ? "on" : "off") << ", stack limit "
        << state_.options.stackLimit << "\n";
    return out.str();
}

std::string Session::historyListing() const {
    std::string out;
    for (size_t i = 0; i < history_.size(); ++i)
        out += std::to_string(i + 1) + ": " + history_[i] + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// value file I/O

void Session::writeValue(const std::string& path, Value v) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw RuntimeError(RuntimeErrorKind::FileIo,
                           "cannot open '" + path + "' for writing");
    out << printValue(v, state_.heap, true) << "\n";
}

Value Session::readValue(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw RuntimeError(RuntimeErrorKind::FileIo, "cannot open '" + path + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    return parseValueLiteral(buf.str(), state_.heap);
}

// ---------------------------------------------------------------------------

int runStream(Session& session, std::istream& in, std::ostream& out, bool interactive) {
    int errors = 0;
    std::string buffer;
    std::string line;
    if (interactive) out << ">> " << std::flush;
    while (std::getline(in, line)) {
        buffer += buffer.empty() ? line : "\n" + line;
        if (trim(buffer).empty()) {
            buffer.clear();
            if (interactive) out << ">> " << std::flush;
            continue;
        }
        Session::Response r = session.evalInput(buffer);
        if (r.incomplete()) {
            if (interactive) out << ".. " << std::flush;
            continue;
        }
        buffer.clear();
        out << r.text;
        if (!r.ok()) ++errors;
        if (interactive) out << ">> " << std::flush;
    }
    if (!trim(buffer).empty()) {
        out << "syntax error: unexpected end of input\n";
        ++errors;
    }
    if (interactive) out << "\n";
    return errors;
}

}  // namespace calculist
