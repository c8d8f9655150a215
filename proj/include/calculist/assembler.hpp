// Textual CLVM assembly: parse a listing into a runnable unit and render
// compiled units back to text (used by the session !code command).
#pragma once

#include <string>

#include "calculist/state.hpp"

namespace calculist {

// Renders one unit as an assembly listing. Jump targets become labels,
// call/global operands stay numeric with symbolic names in comments, so the
// listing reassembles to byte-identical code.
std::string disassemble(const CompileUnit& unit, const SessionState& st);

// Assembles a bare instruction listing (labels, one instruction per line,
// ';' comments). Throws AsmError.
CompileUnit assembleUnit(const std::string& text, SessionState& st);

// Assembles a program file with .func/.main sections, installing the
// functions into the session state. Returns the .main unit.
CompileUnit assembleProgram(const std::string& text, SessionState& st);

}  // namespace calculist
