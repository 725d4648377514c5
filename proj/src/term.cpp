#include "sortedlp/term.hpp"

#include <tuple>

namespace sortedlp {

Term Term::constant(std::string_view name, TypeRef type) { return constant(Symbol::intern(name), type); }

Term Term::constant(Symbol name, TypeRef type) { return Term(Kind::Constant, name, type, 0, nullptr); }

Term Term::variable(std::string_view name, TypeRef type, std::uint32_t generation) {
  return Term(Kind::Variable, Symbol::intern(name), type, generation, nullptr);
}

Term Term::variable(Var v, TypeRef type) { return Term(Kind::Variable, v.name, type, v.generation, nullptr); }

Term Term::compound(std::string_view functor, std::vector<Term> args, TypeRef type) {
  return compound(Symbol::intern(functor), std::move(args), type);
}

Term Term::compound(Symbol functor, std::vector<Term> args, TypeRef type) {
  if (args.empty()) return constant(functor, type);
  return Term(Kind::Compound, functor, type, 0, std::make_shared<const std::vector<Term>>(std::move(args)));
}

Term Term::list(std::vector<Term> elements, std::optional<Term> tail) {
  Term result = tail ? *tail : constant(kNilName);
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
    result = compound(kConsName, {*it, result});
  }
  return result;
}

std::span<const Term> Term::args() const {
  if (!args_) return {};
  return std::span<const Term>(*args_);
}

Term Term::withType(TypeRef type) const {
  Term copy = *this;
  copy.type_ = type;
  return copy;
}

bool Term::isGround() const {
  switch (kind_) {
    case Kind::Variable:
      return false;
    case Kind::Constant:
      return true;
    case Kind::Compound:
      for (const Term& a : *args_) {
        if (!a.isGround()) return false;
      }
      return true;
  }
  return true;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_ || a.name_ != b.name_ || a.type_ != b.type_ || a.generation_ != b.generation_) {
    return false;
  }
  if (a.args_ == b.args_) return true;
  if (!a.args_ || !b.args_) return false;
  return *a.args_ == *b.args_;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.name_ != b.name_) return a.name_ < b.name_;
  if (a.generation_ != b.generation_) return a.generation_ < b.generation_;
  if (a.type_ != b.type_) return a.type_ < b.type_;
  const auto aa = a.args();
  const auto ba = b.args();
  return std::lexicographical_compare(aa.begin(), aa.end(), ba.begin(), ba.end());
}

bool Literal::isGround() const {
  for (const Term& t : args) {
    if (!t.isGround()) return false;
  }
  return true;
}

const Term* Substitution::lookup(const Var& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

std::optional<TypeRef> Substitution::typeOf(const Var& v) const {
  auto it = types_.find(v);
  if (it == types_.end()) return std::nullopt;
  return it->second;
}

Substitution Substitution::restrictedTo(const std::set<Var>& vars) const {
  Substitution out;
  for (const auto& [v, t] : bindings_) {
    if (vars.count(v)) out.bindings_.emplace(v, t);
  }
  for (const auto& [v, ty] : types_) {
    if (vars.count(v)) out.types_.emplace(v, ty);
  }
  return out;
}

namespace {

// Installs recorded types on variables without replacing any of them.
Term retype(const Substitution& sub, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Variable: {
      if (auto ty = sub.typeOf(t.var()); ty && *ty != t.type()) return t.withType(*ty);
      return t;
    }
    case Term::Kind::Compound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const Term& a : t.args()) args.push_back(retype(sub, a));
      return Term::compound(t.name(), std::move(args), t.type());
    }
  }
  return t;
}

}  // namespace

Term apply(const Substitution& sub, const Term& t) {
  if (sub.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Variable:
      if (const Term* bound = sub.lookup(t.var())) return retype(sub, *bound);
      return retype(sub, t);
    case Term::Kind::Compound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const Term& a : t.args()) args.push_back(apply(sub, a));
      return Term::compound(t.name(), std::move(args), t.type());
    }
  }
  return t;
}

Literal apply(const Substitution& sub, const Literal& lit) {
  Literal out = lit;
  for (Term& a : out.args) a = apply(sub, a);
  return out;
}

std::vector<Literal> apply(const Substitution& sub, std::span<const Literal> lits) {
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (const Literal& l : lits) out.push_back(apply(sub, l));
  return out;
}

Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  for (const auto& [v, t] : first.bindings()) {
    Term image = apply(second, t);
    if (image.isVariable() && image.var() == v) {
      out.setType(v, image.type());
      continue;
    }
    out.bind(v, std::move(image));
  }
  for (const auto& [v, t] : second.bindings()) {
    if (!first.binds(v)) out.bind(v, t);
  }
  for (const auto& [v, ty] : first.typeUpdates()) {
    if (!out.typeOf(v)) out.setType(v, ty);
  }
  for (const auto& [v, ty] : second.typeUpdates()) out.setType(v, ty);
  // A variable aliased to another variable by `first` follows that variable's
  // later narrowing in `second`.
  for (const auto& [v, t] : first.bindings()) {
    if (!t.isVariable()) continue;
    if (auto ty = second.typeOf(t.var())) out.setType(v, *ty);
  }
  return out;
}

void collectVariables(const Term& t, std::vector<Var>& out) {
  switch (t.kind()) {
    case Term::Kind::Constant:
      return;
    case Term::Kind::Variable:
      for (const Var& v : out) {
        if (v == t.var()) return;
      }
      out.push_back(t.var());
      return;
    case Term::Kind::Compound:
      for (const Term& a : t.args()) collectVariables(a, out);
      return;
  }
}

void collectVariables(const Literal& lit, std::vector<Var>& out) {
  for (const Term& a : lit.args) collectVariables(a, out);
}

namespace {
void addVariables(const Term& t, std::set<Var>& out) {
  if (t.isVariable()) {
    out.insert(t.var());
  } else if (t.isCompound()) {
    for (const Term& a : t.args()) addVariables(a, out);
  }
}
}  // namespace

std::set<Var> variablesOf(const Term& t) {
  std::set<Var> out;
  addVariables(t, out);
  return out;
}

std::set<Var> variablesOf(const Literal& lit) {
  std::set<Var> out;
  for (const Term& a : lit.args) addVariables(a, out);
  return out;
}

std::set<Var> variablesOf(const Clause& c) {
  std::set<Var> out;
  if (c.head) {
    for (const Term& a : c.head->args) addVariables(a, out);
  }
  for (const Literal& l : c.body) {
    for (const Term& a : l.args) addVariables(a, out);
  }
  return out;
}

bool occursIn(const Var& v, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Constant:
      return false;
    case Term::Kind::Variable:
      return t.var() == v;
    case Term::Kind::Compound:
      for (const Term& a : t.args()) {
        if (occursIn(v, a)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace sortedlp
