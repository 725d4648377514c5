#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sortedlp {

struct RdfNode {
  enum class Kind { Iri, Blank, Literal };
  Kind kind = Kind::Iri;
  std::string value;  // IRI, blank label (with `_:`), or literal lexical form

  bool isIri() const { return kind == Kind::Iri; }
  friend bool operator==(const RdfNode& a, const RdfNode& b) { return a.kind == b.kind && a.value == b.value; }
};

struct NTriple {
  RdfNode subject;
  RdfNode predicate;
  RdfNode object;
  std::size_t line = 0;
};

/// Parses N-Triples: `<s> <p> <o> .` per line, blank nodes, literals with
/// optional language tag or datatype, `#` comments. Throws ParseError with the
/// 1-based line and column of the first offending character.
std::vector<NTriple> parseNTriples(std::string_view text);

}  // namespace sortedlp
