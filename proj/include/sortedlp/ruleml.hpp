#pragma once

#include <string>
#include <string_view>

#include "sortedlp/prefixes.hpp"
#include "sortedlp/term.hpp"

namespace sortedlp {

/// Reads the RuleML subset: RuleML, Assert, Query, Implies (head/body or
/// if/then), And, Atom (Rel or op/Rel), Var, Ind, Data, Expr/Fun, Neg, Naf.
/// `type` attributes on Var and Ind hold a QName `prefix:Local`, resolved
/// against the document's xmlns declarations and then `prefixes`, or a full
/// IRI. The attribute spelling `@type` is accepted as well. Throws ParseError
/// for malformed XML and Error for unknown elements or unresolvable QNames.
Program importRuleML(std::string_view xml, const PrefixTable& prefixes);

/// Facts become Atom elements, rules Implies with head/body, queries Query
/// elements. Every namespace used by a type attribute is declared on the
/// root element.
std::string exportRuleML(const Program& program, const PrefixTable& prefixes);

}  // namespace sortedlp
