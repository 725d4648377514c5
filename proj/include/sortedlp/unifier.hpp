#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sortedlp/term.hpp"
#include "sortedlp/type_registry.hpp"

namespace sortedlp {

enum class UnifyFailureReason {
  Clash,             // f != g, or distinct constants
  Occurs,            // Y = t with Y in t
  ConstantType,      // constant type not <= variable type, or constant types differ
  EmptyLower,        // lower(r1, r2) = BOTTOM for two variables
  IllTypedFunction,  // compound does not respect its declared sort
};

std::string_view toString(UnifyFailureReason reason);

struct UnifyFailure {
  UnifyFailureReason reason;
  std::string detail;
};

using UnifyResult = std::variant<Substitution, UnifyFailure>;

inline bool succeeded(const UnifyResult& r) { return std::holds_alternative<Substitution>(r); }

struct Equation {
  Term lhs;
  Term rhs;
};

/// Typed Martelli-Montanari unification. Left-hand sides play the query role
/// and right-hand sides the target role: when a variable pair can keep either
/// name, the left one survives. Equations are processed leftmost-first and
/// decomposition pushes argument equations in front of the rest.
class Unifier {
 public:
  explicit Unifier(const TypeRegistry& registry, QueryTally* tally = nullptr)
      : registry_(registry), tally_(tally) {}

  UnifyResult unify(const Term& t1, const Term& t2) const;
  /// Pairwise unification of equal-length argument lists.
  UnifyResult unifyArgs(std::span<const Term> left, std::span<const Term> right) const;
  /// Solves the equations starting from an already solved substitution.
  UnifyResult solve(std::vector<Equation> equations, Substitution solved = {}) const;

  /// Whether a ground or partially bound term respects declared function
  /// sorts, narrowing argument variables in `sub` as needed.
  bool wellTyped(const Term& t, TypeRef expected, Substitution& sub) const;

 private:
  const TypeRegistry& registry_;
  QueryTally* tally_;
};

inline UnifyResult unify(const Term& t1, const Term& t2, const TypeRegistry& registry, QueryTally* tally = nullptr) {
  return Unifier(registry, tally).unify(t1, t2);
}

}  // namespace sortedlp
