#include "sortedlp/unifier.hpp"

#include <deque>

namespace sortedlp {
namespace {

std::string describe(const Term& t) {
  std::string out(t.name().str());
  if (t.isCompound()) out += "/" + std::to_string(t.arity());
  if (t.isTyped()) out += ":<" + std::string(t.type().iri()) + ">";
  return out;
}

UnifyFailure failure(UnifyFailureReason reason, std::string detail) { return UnifyFailure{reason, std::move(detail)}; }

}  // namespace

std::string_view toString(UnifyFailureReason reason) {
  switch (reason) {
    case UnifyFailureReason::Clash:
      return "clash";
    case UnifyFailureReason::Occurs:
      return "occurs";
    case UnifyFailureReason::ConstantType:
      return "constant-type";
    case UnifyFailureReason::EmptyLower:
      return "empty-lower";
    case UnifyFailureReason::IllTypedFunction:
      return "ill-typed-function";
  }
  return "unknown";
}

bool Unifier::wellTyped(const Term& term, TypeRef expected, Substitution& sub) const {
  const Term t = apply(sub, term);
  switch (t.kind()) {
    case Term::Kind::Variable: {
      if (expected.isTop()) return true;
      const TypeRef narrowed = registry_.lower(t.type(), expected, tally_);
      if (narrowed.isBottom()) return false;
      if (narrowed != t.type()) {
        Substitution step;
        step.setType(t.var(), narrowed);
        sub = compose(sub, step);
      }
      return true;
    }
    case Term::Kind::Constant:
      if (expected.isTop()) return true;
      if (t.isTyped()) return registry_.isSubtypeOf(t.type(), expected, tally_);
      return registry_.isInstanceOf(registry_.prefixes().resolveName(t.name().str()), expected, tally_);
    case Term::Kind::Compound: {
      const FunctionSort* sort = registry_.functionSort(t.name(), t.arity());
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (!wellTyped(t.args()[i], sort ? sort->argumentTypes[i] : TypeRef::top(), sub)) return false;
      }
      if (expected.isTop()) return true;
      if (!sort || sort->result.isTop()) return false;
      return registry_.isSubtypeOf(sort->result, expected, tally_);
    }
  }
  return false;
}

UnifyResult Unifier::unify(const Term& t1, const Term& t2) const {
  std::vector<Equation> eqs;
  eqs.push_back(Equation{t1, t2});
  return solve(std::move(eqs));
}

UnifyResult Unifier::unifyArgs(std::span<const Term> left, std::span<const Term> right) const {
  if (left.size() != right.size()) {
    return failure(UnifyFailureReason::Clash, "argument lists differ in length");
  }
  std::vector<Equation> eqs;
  eqs.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) eqs.push_back(Equation{left[i], right[i]});
  return solve(std::move(eqs));
}

UnifyResult Unifier::solve(std::vector<Equation> equations, Substitution solved) const {
  std::deque<Equation> work(std::make_move_iterator(equations.begin()), std::make_move_iterator(equations.end()));
  Substitution sigma = std::move(solved);

  auto bindVar = [&](const Term& v, const Term& value, TypeRef type) {
    Substitution step;
    step.bind(v.var(), value);
    if (!type.isTop() || v.isTyped()) step.setType(v.var(), type);
    sigma = compose(sigma, step);
  };

  while (!work.empty()) {
    Term s = apply(sigma, work.front().lhs);
    Term t = apply(sigma, work.front().rhs);
    work.pop_front();

    if (s.isVariable() && t.isVariable()) {
      if (s.var() == t.var()) continue;  // (E)
      const TypeRef r1 = s.type();
      const TypeRef r2 = t.type();
      if (r1.isTop() && r2.isTop()) {
        bindVar(s, t, TypeRef::top());
        continue;
      }
      const TypeRef low = registry_.lower(r1, r2, tally_);
      if (low.isBottom()) {
        return failure(UnifyFailureReason::EmptyLower, describe(s) + " and " + describe(t));
      }
      const bool leftSurvives = low == r1;
      const Term& survivor = leftSurvives ? s : t;
      const Term& eliminated = leftSurvives ? t : s;
      Substitution step;
      step.bind(eliminated.var(), survivor.withType(low));
      step.setType(eliminated.var(), low);
      step.setType(survivor.var(), low);
      sigma = compose(sigma, step);
      continue;
    }

    if (!s.isVariable() && t.isVariable()) std::swap(s, t);  // (O)

    if (s.isVariable()) {
      const TypeRef varType = s.type();
      if (t.isConstant()) {
        TypeRef narrowed = varType;
        if (t.isTyped()) {
          if (!varType.isTop() && !registry_.isSubtypeOf(t.type(), varType, tally_)) {
            return failure(UnifyFailureReason::ConstantType, describe(t) + " is not of type <" +
                                                                 std::string(varType.iri()) + ">");
          }
          narrowed = t.type();
        } else if (!varType.isTop() &&
                   !registry_.isInstanceOf(registry_.prefixes().resolveName(t.name().str()), varType, tally_)) {
          return failure(UnifyFailureReason::ConstantType,
                         describe(t) + " is not an instance of <" + std::string(varType.iri()) + ">");
        }
        bindVar(s, t, narrowed);
        continue;
      }
      if (occursIn(s.var(), t)) {
        return failure(UnifyFailureReason::Occurs, describe(s) + " occurs in " + describe(t));
      }
      if (!wellTyped(t, varType, sigma)) {
        return failure(UnifyFailureReason::IllTypedFunction,
                       describe(t) + " cannot take type <" + std::string(varType.iri()) + ">");
      }
      const FunctionSort* sort = registry_.functionSort(t.name(), t.arity());
      bindVar(s, apply(sigma, t), sort ? sort->result : varType);
      continue;
    }

    if (s.isConstant() && t.isConstant()) {
      if (s.name() != t.name() &&
          !registry_.sameIndividual(registry_.prefixes().resolveName(s.name().str()),
                                    registry_.prefixes().resolveName(t.name().str()))) {
        return failure(UnifyFailureReason::Clash, describe(s) + " vs " + describe(t));
      }
      if (s.type() != t.type() &&
          (s.type().isTop() || t.type().isTop() || !registry_.equivalent(s.type(), t.type(), tally_))) {
        return failure(UnifyFailureReason::ConstantType, describe(s) + " vs " + describe(t));
      }
      continue;
    }

    if (s.isCompound() && t.isCompound() && s.name() == t.name() && s.arity() == t.arity()) {
      if (!wellTyped(s, TypeRef::top(), sigma) || !wellTyped(t, TypeRef::top(), sigma)) {
        return failure(UnifyFailureReason::IllTypedFunction, describe(s));
      }
      for (std::size_t i = s.arity(); i-- > 0;) {  // (D)
        work.push_front(Equation{s.args()[i], t.args()[i]});
      }
      continue;
    }

    return failure(UnifyFailureReason::Clash, describe(s) + " vs " + describe(t));
  }
  return sigma;
}

}  // namespace sortedlp
