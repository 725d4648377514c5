#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "sortedlp/symbol.hpp"

namespace sortedlp {

inline constexpr std::string_view kTopIri = "http://www.w3.org/2002/07/owl#Resource";
inline constexpr std::string_view kBottomIri = "http://www.w3.org/2002/07/owl#Nothing";

/// An ontology class used as a sort. Identity is the IRI.
/// Default-constructed TypeRef is TOP (the untyped sort).
class TypeRef {
 public:
  TypeRef() : iri_(Symbol::intern(kTopIri)) {}
  explicit TypeRef(std::string_view iri) : iri_(Symbol::intern(iri)) {}

  static TypeRef top() { return TypeRef(); }
  static TypeRef bottom() { return TypeRef(kBottomIri); }

  bool isTop() const { return *this == top(); }
  bool isBottom() const { return *this == bottom(); }

  std::string_view iri() const { return iri_.str(); }
  std::uint32_t id() const { return iri_.id(); }
  Symbol symbol() const { return iri_; }

  friend bool operator==(TypeRef a, TypeRef b) { return a.iri_ == b.iri_; }
  friend bool operator!=(TypeRef a, TypeRef b) { return a.iri_ != b.iri_; }
  friend bool operator<(TypeRef a, TypeRef b) { return a.iri_ < b.iri_; }

 private:
  Symbol iri_;
};

/// Variable identity: the source name plus a renaming generation.
/// Generation 0 is the variable as written; resolution renames clauses apart
/// by assigning fresh generations. The type annotation is not part of identity.
struct Var {
  Symbol name;
  std::uint32_t generation = 0;

  friend bool operator==(const Var& a, const Var& b) {
    return a.name == b.name && a.generation == b.generation;
  }
  friend bool operator!=(const Var& a, const Var& b) { return !(a == b); }
  friend bool operator<(const Var& a, const Var& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.generation < b.generation;
  }
};

inline constexpr std::string_view kNilName = "[]";
inline constexpr std::string_view kConsName = ".";

/// Immutable typed term: constant, variable or compound. Copies are cheap
/// (compound arguments are shared).
class Term {
 public:
  enum class Kind : std::uint8_t { Constant, Variable, Compound };

  static Term constant(std::string_view name, TypeRef type = TypeRef::top());
  static Term constant(Symbol name, TypeRef type = TypeRef::top());
  static Term variable(std::string_view name, TypeRef type = TypeRef::top(), std::uint32_t generation = 0);
  static Term variable(Var v, TypeRef type = TypeRef::top());
  static Term compound(std::string_view functor, std::vector<Term> args, TypeRef type = TypeRef::top());
  static Term compound(Symbol functor, std::vector<Term> args, TypeRef type = TypeRef::top());

  /// `[e1, ..., en | tail]` as nested cons cells; tail defaults to nil.
  static Term list(std::vector<Term> elements, std::optional<Term> tail = std::nullopt);

  Kind kind() const { return kind_; }
  bool isConstant() const { return kind_ == Kind::Constant; }
  bool isVariable() const { return kind_ == Kind::Variable; }
  bool isCompound() const { return kind_ == Kind::Compound; }

  /// Constant name, variable name or functor.
  Symbol name() const { return name_; }
  TypeRef type() const { return type_; }
  bool isTyped() const { return !type_.isTop(); }
  Var var() const { return Var{name_, generation_}; }
  std::uint32_t generation() const { return generation_; }
  std::size_t arity() const { return args_ ? args_->size() : 0; }
  std::span<const Term> args() const;

  Term withType(TypeRef type) const;
  bool isGround() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  /// Structural total order (kind, name, generation, type, args).
  friend bool operator<(const Term& a, const Term& b);

 private:
  Term(Kind kind, Symbol name, TypeRef type, std::uint32_t generation,
       std::shared_ptr<const std::vector<Term>> args)
      : kind_(kind), generation_(generation), name_(name), type_(type), args_(std::move(args)) {}

  Kind kind_;
  std::uint32_t generation_ = 0;
  Symbol name_;
  TypeRef type_;
  std::shared_ptr<const std::vector<Term>> args_;
};

/// A possibly negated atom. `negated` is explicit negation `neg(...)`,
/// `defaultNegated` is negation as failure `not(...)`.
struct Literal {
  Symbol predicate;
  std::vector<Term> args;
  bool negated = false;
  bool defaultNegated = false;

  Literal() = default;
  Literal(std::string_view pred, std::vector<Term> arguments, bool neg = false, bool naf = false)
      : predicate(Symbol::intern(pred)), args(std::move(arguments)), negated(neg), defaultNegated(naf) {}
  Literal(Symbol pred, std::vector<Term> arguments, bool neg = false, bool naf = false)
      : predicate(pred), args(std::move(arguments)), negated(neg), defaultNegated(naf) {}

  std::size_t arity() const { return args.size(); }
  bool isGround() const;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.predicate == b.predicate && a.negated == b.negated &&
           a.defaultNegated == b.defaultNegated && a.args == b.args;
  }
  friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
};

/// Rule `head :- body`, fact (empty body) or goal (no head).
struct Clause {
  std::optional<Literal> head;
  std::vector<Literal> body;

  bool isFact() const { return head.has_value() && body.empty(); }
  bool isGoal() const { return !head.has_value(); }

  friend bool operator==(const Clause& a, const Clause& b) { return a.head == b.head && a.body == b.body; }
  friend bool operator!=(const Clause& a, const Clause& b) { return !(a == b); }
};

struct Program {
  std::vector<Clause> clauses;
  std::vector<Clause> queries;

  friend bool operator==(const Program& a, const Program& b) {
    return a.clauses == b.clauses && a.queries == b.queries;
  }
};

/// Idempotent variable bindings plus the current (possibly narrowed) type of
/// every variable touched while the substitution was built.
class Substitution {
 public:
  bool empty() const { return bindings_.empty() && types_.empty(); }
  bool binds(const Var& v) const { return bindings_.count(v) != 0; }
  const Term* lookup(const Var& v) const;
  std::optional<TypeRef> typeOf(const Var& v) const;

  /// Raw insertion; callers are responsible for keeping the result idempotent.
  void bind(const Var& v, Term t) { bindings_.insert_or_assign(v, std::move(t)); }
  void setType(const Var& v, TypeRef type) { types_.insert_or_assign(v, type); }
  void unbind(const Var& v) { bindings_.erase(v); }

  const std::map<Var, Term>& bindings() const { return bindings_; }
  const std::map<Var, TypeRef>& typeUpdates() const { return types_; }

  /// Keeps only bindings and type entries for the given variables.
  Substitution restrictedTo(const std::set<Var>& vars) const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.bindings_ == b.bindings_ && a.types_ == b.types_;
  }

 private:
  std::map<Var, Term> bindings_;
  std::map<Var, TypeRef> types_;
};

Term apply(const Substitution& sub, const Term& t);
Literal apply(const Substitution& sub, const Literal& lit);
std::vector<Literal> apply(const Substitution& sub, std::span<const Literal> lits);

/// apply(compose(a, b), t) == apply(b, apply(a, t)).
Substitution compose(const Substitution& first, const Substitution& second);

std::set<Var> variablesOf(const Term& t);
std::set<Var> variablesOf(const Literal& lit);
std::set<Var> variablesOf(const Clause& c);

/// Variables in order of first occurrence (left to right, depth first).
void collectVariables(const Term& t, std::vector<Var>& out);
void collectVariables(const Literal& lit, std::vector<Var>& out);

bool occursIn(const Var& v, const Term& t);

}  // namespace sortedlp

template <>
struct std::hash<sortedlp::TypeRef> {
  std::size_t operator()(sortedlp::TypeRef t) const noexcept { return std::hash<std::uint32_t>{}(t.id()); }
};

template <>
struct std::hash<sortedlp::Var> {
  std::size_t operator()(const sortedlp::Var& v) const noexcept {
    return (static_cast<std::size_t>(v.name.id()) << 32) ^ v.generation;
  }
};
