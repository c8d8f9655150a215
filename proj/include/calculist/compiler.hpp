// Translates AST statements into CLVM bytecode, performing the static checks
// (constant type checks, arity checks, star-call legality) and the tail-call
// peephole pass.
#pragma once

#include "calculist/ast.hpp"
#include "calculist/state.hpp"

namespace calculist {

// Query: evaluates the expression and prints it to OUTPUT.
CompileUnit compileQuery(const Expr& expr, bool showNull, SessionState& st);

// Assignment / label declaration: evaluates and stores into the global table.
CompileUnit compileAssignment(const Statement& stmt, SessionState& st);
CompileUnit compileLabelDecl(const Statement& stmt, SessionState& st);

// Compiles and installs a function definition (errors leave the table as-is).
int defineFunction(const FunctionDecl& decl, SessionState& st);

// Rewrites self-calls whose continuation is RET into TAILCALL.
void tailCallOptimize(CompileUnit& unit, int selfSlot);

// Query-time resolution: every function reachable from the unit must be
// defined, with consistent arities and star legality at direct call sites.
void validateResolved(const CompileUnit& unit, const SessionState& st);

}  // namespace calculist
