#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sortedlp/errors.hpp"
#include "sortedlp/term.hpp"
#include "sortedlp/type_registry.hpp"

namespace sortedlp {

/// A default-negated literal was selected while still containing variables.
class FlounderingError : public Error {
 public:
  using Error::Error;
};

/// A call reached itself again through a default negation. SLDNF cannot
/// decide such goals (their well-founded value is undefined or depends on the
/// loop), so they are reported like floundering.
class NegationLoopError : public FlounderingError {
 public:
  using FlounderingError::FlounderingError;
};

/// A comparison builtin was called with an unbound operand.
class InstantiationError : public Error {
 public:
  using Error::Error;
};

struct SolverLimits {
  std::size_t maxDepth = 10000;
  std::optional<std::size_t> maxAnswers;
};

struct AnswerBinding {
  std::string variable;
  Term value;
  TypeRef type;  // final (narrowed) type of the variable

  friend bool operator==(const AnswerBinding& a, const AnswerBinding& b) {
    return a.variable == b.variable && a.value == b.value && a.type == b.type;
  }
};

struct QueryAnswer {
  std::vector<AnswerBinding> bindings;  // goal variables in order of first occurrence
  std::size_t derivationDepth = 0;
  std::uint64_t registryQueryCount = 0;
  std::uint64_t resolutionSteps = 0;
};

struct SolverStats {
  std::uint64_t resolutionSteps = 0;  // successful clause resolutions and builtin calls
  std::uint64_t unificationAttempts = 0;
  QueryTally registryQueries;
};

/// Maps the source argument of `rdf/5` to the registry holding its triples.
/// Returning nullptr makes the call fail with an error naming the source.
using SourceResolver = std::function<const TypeRegistry*(std::string_view source)>;

/// The constant the solver binds for an A-Box individual: the `ns_Local`
/// form when a declared prefix covers the IRI, the IRI itself otherwise.
Term individualTerm(std::string_view iri, const PrefixTable& prefixes);

/// Ground instances of a fact whose free typed variables range over the
/// instances of their types (Cartesian product, lexicographic by IRI).
std::vector<Literal> resolveFact(const Clause& fact, const TypeRegistry& registry);

/// The same program with every variable annotation removed and replaced by a
/// trailing `has_type(X, <type>)` body check.
Program eraseVariableTypes(const Program& program);

class Solver {
 public:
  class Stream;

  Solver(const Program& program, const TypeRegistry& registry, SolverLimits limits = {},
         SourceResolver sources = {});

  /// Depth-first, leftmost-literal SLDNF. Answers are produced on demand.
  Stream solve(const Clause& goal) const;
  std::vector<QueryAnswer> solveAll(const Clause& goal) const;

  const Program& program() const { return program_; }
  const TypeRegistry& registry() const { return registry_; }
  const SolverLimits& limits() const { return limits_; }
  const SourceResolver& sources() const { return sources_; }

 private:
  const Program& program_;
  const TypeRegistry& registry_;
  SolverLimits limits_;
  SourceResolver sources_;
};

class Solver::Stream {
 public:
  ~Stream();
  Stream(Stream&&) noexcept;
  Stream& operator=(Stream&&) noexcept;

  /// Next answer, or nullopt when the search space is exhausted (or the
  /// answer limit is reached). Throws FlounderingError, InstantiationError,
  /// UnsupportedReasonerError.
  std::optional<QueryAnswer> next();

  /// Some branch was cut by the depth limit, so exhaustion is not finite
  /// failure.
  bool depthLimited() const;
  const SolverStats& stats() const;

 private:
  friend class Solver;
  struct Impl;
  explicit Stream(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace sortedlp
