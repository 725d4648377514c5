#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sortedlp/prefixes.hpp"
#include "sortedlp/term.hpp"

namespace sortedlp {

class TypeRegistry;

struct Directive {
  enum class Kind { Import, Reasoner, Prefix, Sort };

  Kind kind = Kind::Import;
  std::string argument;  // import location, reasoner mode, or prefix abbreviation
  std::string iri;       // prefix base
  Symbol functor;        // sort declarations
  std::size_t arity = 0;
  std::vector<TypeRef> argumentTypes;
  TypeRef result;
  std::size_t line = 0;

  friend bool operator==(const Directive& a, const Directive& b) {
    return a.kind == b.kind && a.argument == b.argument && a.iri == b.iri && a.functor == b.functor &&
           a.arity == b.arity && a.argumentTypes == b.argumentTypes && a.result == b.result;
  }
};

struct Script {
  std::vector<Directive> directives;
  Program program;
};

/// Parses a script. `prefix/2` directives are declared into `prefixes` as they
/// are read, so later type tokens may use them. Throws ParseError.
Script parseProgram(std::string_view text, PrefixTable& prefixes);

/// Parses one goal, either `:- solve(...).` / `:- eval(...).` or a bare
/// conjunction terminated by `.`.
Clause parseQuery(std::string_view text, const PrefixTable& prefixes);

/// Checks a parsed program against a loaded registry: every type must be
/// known (UnknownTypeError), and a constant annotation must not be disjoint
/// from the constant's asserted classes or from another annotation of the
/// same constant (InconsistencyError).
void checkProgramTypes(const Program& program, const TypeRegistry& registry);

/// Gives every untyped occurrence of a variable the type of its annotated
/// occurrences within the clause. Throws Error when two annotations differ.
Clause propagateVariableTypes(Clause c);

/// Comparison builtins parsed as infix atoms.
bool isComparisonPredicate(Symbol predicate);

std::string printType(TypeRef type, const PrefixTable& prefixes);
std::string printTerm(const Term& t, const PrefixTable& prefixes);
std::string printLiteral(const Literal& lit, const PrefixTable& prefixes);
std::string printClause(const Clause& c, const PrefixTable& prefixes);
std::string printDirective(const Directive& d, const PrefixTable& prefixes);
/// Directives, then clauses, then queries; one per line. Reparses to an equal
/// Script.
std::string printScript(const Script& s, const PrefixTable& prefixes);

}  // namespace sortedlp
