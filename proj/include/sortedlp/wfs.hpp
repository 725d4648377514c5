#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sortedlp/solver.hpp"
#include "sortedlp/term.hpp"
#include "sortedlp/type_registry.hpp"

namespace sortedlp {

/// A ground constant of the combined universe: canonical name (IRI for
/// prefixed names and A-Box individuals) and canonical annotation type.
struct Element {
  std::string name;
  TypeRef type;

  friend bool operator==(const Element& a, const Element& b) { return a.name == b.name && a.type == b.type; }
  friend bool operator<(const Element& a, const Element& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.type.iri() < b.type.iri();
  }
};

struct GroundAtom {
  Symbol predicate;
  bool negated = false;  // explicit negation neg(...)
  std::vector<std::uint32_t> args;

  friend bool operator<(const GroundAtom& a, const GroundAtom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    if (a.negated != b.negated) return a.negated < b.negated;
    return a.args < b.args;
  }
  friend bool operator==(const GroundAtom& a, const GroundAtom& b) {
    return a.predicate == b.predicate && a.negated == b.negated && a.args == b.args;
  }
};

/// Two-valued external atom (comparison, `=`, `has_type`, `rdf`) whose truth
/// is fixed by the registry before model computation.
struct QueryAtom {
  std::string description;
  bool value = false;
};

struct GroundRule {
  std::uint32_t head = 0;
  std::vector<std::uint32_t> positive;
  std::vector<std::uint32_t> negative;
  std::vector<std::uint32_t> positiveQueries;
  std::vector<std::uint32_t> negativeQueries;
};

class GroundProgram {
 public:
  std::uint32_t internElement(const Element& e);
  std::uint32_t internAtom(const GroundAtom& a);
  std::uint32_t internQuery(const std::string& description, bool value);

  std::optional<std::uint32_t> findAtom(const GroundAtom& a) const;

  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<GroundAtom>& atoms() const { return atoms_; }
  const std::vector<QueryAtom>& queries() const { return queries_; }
  std::vector<GroundRule>& rules() { return rules_; }
  const std::vector<GroundRule>& rules() const { return rules_; }

  /// (constant name, annotation) pairs written in the program.
  std::set<std::pair<std::string, TypeRef>>& annotations() { return annotations_; }
  const std::set<std::pair<std::string, TypeRef>>& annotations() const { return annotations_; }

  std::string describe(std::uint32_t atom) const;

 private:
  std::vector<Element> elements_;
  std::map<Element, std::uint32_t> elementIndex_;
  std::vector<GroundAtom> atoms_;
  std::map<GroundAtom, std::uint32_t> atomIndex_;
  std::vector<QueryAtom> queries_;
  std::map<std::string, std::uint32_t> queryIndex_;
  std::vector<GroundRule> rules_;
  std::set<std::pair<std::string, TypeRef>> annotations_;
};

struct GroundingOptions {
  /// Ground every rule, not only those reachable from the goal predicates.
  bool exhaustive = false;
  /// Upper bound on variable assignments per rule.
  std::size_t maxInstances = 5'000'000;
};

/// Type-respecting grounding of a function-free program over the universe of
/// program constants and registry individuals (plus rdf resources when the
/// program uses `rdf/5`). `goals` seed relevance and are added as rules with
/// head `$goal(Vars...)`. Throws Error on compound terms.
GroundProgram ground(const Program& program, const TypeRegistry& registry, const std::vector<Clause>& goals = {},
                     GroundingOptions options = {}, const SourceResolver& sources = {});

enum class Truth { False, Undefined, True };

struct WellFoundedModel {
  std::vector<Truth> value;  // per atom

  std::set<std::uint32_t> atomsWith(Truth t) const;
};

/// Iterates W_P = T_P plus the negation of the greatest unfounded set, where
/// a rule stops supporting its head once a positive body atom is false or
/// unfounded, a negated body atom is true, a positive query atom is false or
/// a negated query atom is true.
WellFoundedModel wellFoundedModel(const GroundProgram& gp);

/// Atoms p (without explicit negation) where both p and neg(p) are true.
std::vector<std::uint32_t> conflictingAtoms(const GroundProgram& gp, const WellFoundedModel& model);

/// Every rule is satisfied by the (two-valued) interpretation and every typed
/// argument of a true atom is entailed: the registry knows the individual as
/// an instance of the type, or the program annotates it with a subtype.
bool checkModel(const GroundProgram& gp, const std::set<std::uint32_t>& trueAtoms, const TypeRegistry& registry);

struct OracleAnswers {
  std::vector<std::string> variables;  // goal variables, first occurrence order
  std::set<std::vector<Element>> trueAnswers;
  std::set<std::vector<Element>> undefinedAnswers;
};

OracleAnswers oracleAnswers(const Program& program, const Clause& goal, const TypeRegistry& registry,
                            GroundingOptions options = {}, const SourceResolver& sources = {});

/// The universe element denoted by a ground constant term.
Element elementOf(const Term& constant, const TypeRegistry& registry);

/// Solver answers as element tuples over the goal variables. Answers with an
/// unbound or compound value are skipped.
std::set<std::vector<Element>> answerElements(const std::vector<QueryAnswer>& answers, const TypeRegistry& registry);

}  // namespace sortedlp
