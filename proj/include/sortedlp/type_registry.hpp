#pragma once

#include <atomic>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "sortedlp/errors.hpp"
#include "sortedlp/prefixes.hpp"
#include "sortedlp/term.hpp"

namespace sortedlp {

/// How much inference the registry exposes to typing queries.
///   None       - reflexive/equivalent classes and directly asserted edges
///   Transitive - subclass closure; instances only from direct assertions
///   Full       - closure, inherited instances, sameAs
enum class ReasonerLevel { None, Transitive, Full };

struct ReasonerMode {
  bool executable = false;
  ReasonerLevel level = ReasonerLevel::Full;
};

/// Classifies a reasoner name from the `reasoner(...)` directive and the
/// `rdf/5` builtin. Returns nullopt for names outside the known list.
std::optional<ReasonerMode> classifyReasonerMode(std::string_view name);

class UnsupportedReasonerError : public Error {
 public:
  explicit UnsupportedReasonerError(const std::string& mode)
      : Error("unsupported reasoner \"" + mode + "\" (executable: \"\", empty, transitive, rdfs, owl, dl, default)") {}
};

/// Per-caller count of registry queries.
struct QueryTally {
  std::uint64_t subsumption = 0;
  std::uint64_t instance = 0;
  std::uint64_t total() const { return subsumption + instance; }
  QueryTally& operator+=(const QueryTally& o) {
    subsumption += o.subsumption;
    instance += o.instance;
    return *this;
  }
};

struct LoadReport {
  std::size_t classes = 0;      // class IRIs first seen in this load
  std::size_t individuals = 0;  // individual IRIs first seen in this load
  std::size_t axioms = 0;       // recognized axiom triples
  std::size_t triples = 0;      // all triples read
};

struct FunctionSort {
  std::vector<TypeRef> argumentTypes;
  TypeRef result;
  friend bool operator==(const FunctionSort& a, const FunctionSort& b) {
    return a.argumentTypes == b.argumentTypes && a.result == b.result;
  }
};

struct RdfTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  bool literalObject = false;

  friend bool operator==(const RdfTriple&, const RdfTriple&) = default;
  friend auto operator<=>(const RdfTriple&, const RdfTriple&) = default;
};

/// Which triples `rdf/5` sees.
enum class RdfView { Asserted, Transitive, Full };

/// Order-sorted type system backed by merged N-Triples ontologies. The
/// taxonomy closure is materialized on every load; subClassOf cycles collapse
/// into equivalence classes. Query methods are const and safe to call
/// concurrently once the registry is frozen.
class TypeRegistry {
 public:
  TypeRegistry();
  TypeRegistry(const TypeRegistry&) = delete;
  TypeRegistry& operator=(const TypeRegistry&) = delete;

  /// Merges the axioms of an N-Triples document. All-or-nothing: on a parse
  /// or consistency error the registry is left unchanged.
  LoadReport loadOntology(std::istream& in);
  LoadReport loadNTriples(std::string_view text);

  void setLevel(ReasonerLevel level);
  ReasonerLevel level() const { return level_; }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  PrefixTable& prefixes() { return prefixes_; }
  const PrefixTable& prefixes() const { return prefixes_; }

  bool knows(TypeRef t) const;
  bool isIndividual(std::string_view iri) const;

  /// t1 <= t2. Throws UnknownTypeError.
  bool isSubtypeOf(TypeRef t1, TypeRef t2, QueryTally* tally = nullptr) const;
  bool equivalent(TypeRef t1, TypeRef t2, QueryTally* tally = nullptr) const;

  /// The more specific of two comparable types, the other one when either is
  /// TOP, BOTTOM otherwise. Uses at most two subsumption queries.
  TypeRef lower(TypeRef t1, TypeRef t2, QueryTally* tally = nullptr) const;

  bool isInstanceOf(std::string_view individual, TypeRef t, QueryTally* tally = nullptr) const;
  /// Sorted by IRI.
  std::vector<std::string> instancesOf(TypeRef t, QueryTally* tally = nullptr) const;
  bool sameIndividual(std::string_view a, std::string_view b) const;

  /// Representative of the sameAs cell (smallest IRI), or the input.
  std::string canonicalIndividual(std::string_view iri) const;
  /// Representative of the equivalence class (TOP/BOTTOM, else smallest IRI).
  TypeRef canonicalType(TypeRef t) const;
  /// Some asserted disjoint pair covers (t1, t2) through the closure.
  bool areDisjoint(TypeRef t1, TypeRef t2) const;
  /// Classes the individual is asserted into (directly), sorted.
  std::vector<TypeRef> assertedTypes(std::string_view individual) const;

  std::vector<TypeRef> classes() const;
  std::vector<std::string> individuals() const;

  void declareFunctionSort(Symbol functor, std::size_t arity, std::vector<TypeRef> argTypes, TypeRef result);
  const FunctionSort* functionSort(Symbol functor, std::size_t arity) const;
  /// Declared result sort for compounds, the annotation otherwise.
  TypeRef typeOf(const Term& t) const;

  const std::vector<RdfTriple>& triples(RdfView view) const;

  /// Subsumption plus instance queries answered so far.
  std::uint64_t queryCount() const;
  std::uint64_t subsumptionQueryCount() const { return subsumptionQueries_.load(); }

  /// Largest number of subsumption queries issued by a single lower() call in
  /// this process.
  static std::uint64_t maxLowerQueries();

 private:
  struct Axioms {
    std::vector<std::string> classIris;  // index 0 TOP, 1 BOTTOM
    std::unordered_map<std::string, std::uint32_t> classIndex;
    std::vector<bool> classMentioned;
    std::vector<std::string> individualIris;
    std::unordered_map<std::string, std::uint32_t> individualIndex;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> subClass;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> equivalentClass;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> disjoint;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> typeAssertions;  // (individual, class)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sameAs;
    std::vector<RdfTriple> asserted;

    std::uint32_t classId(const std::string& iri, bool mention, std::size_t& fresh);
    std::uint32_t individualId(const std::string& iri, std::size_t& fresh);
  };

  struct Closure {
    std::vector<std::uint32_t> component;         // class -> component
    std::vector<std::uint32_t> representative;    // component -> class index
    std::vector<boost::dynamic_bitset<>> above;   // component -> components >= it
    std::vector<boost::dynamic_bitset<>> direct;  // component -> directly asserted supers
    std::vector<std::uint32_t> cell;              // individual -> sameAs representative individual
    std::vector<boost::dynamic_bitset<>> members;       // component -> individuals (full closure)
    std::vector<boost::dynamic_bitset<>> assertedMembers;  // component -> directly asserted individuals
    std::vector<RdfTriple> transitiveView;
    std::vector<RdfTriple> fullView;
  };

  static Closure materialize(const Axioms& ax);
  std::uint32_t componentOf(TypeRef t) const;
  std::optional<std::uint32_t> individualOf(std::string_view iri) const;

  Axioms axioms_;
  Closure closure_;
  PrefixTable prefixes_;
  ReasonerLevel level_ = ReasonerLevel::Full;
  bool frozen_ = false;
  std::map<std::pair<Symbol, std::size_t>, FunctionSort> functionSorts_;
  mutable std::atomic<std::uint64_t> subsumptionQueries_{0};
  mutable std::atomic<std::uint64_t> instanceQueries_{0};
};

}  // namespace sortedlp
