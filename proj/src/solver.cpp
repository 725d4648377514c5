#include "sortedlp/solver.hpp"

#include <charconv>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "sortedlp/parser.hpp"
#include "sortedlp/unifier.hpp"

namespace sortedlp {
namespace {

struct AncestorNode {
  std::string key;
  bool boundary = false;  // entered a subsidiary proof of not(...)
  std::shared_ptr<const AncestorNode> parent;
};
using Ancestors = std::shared_ptr<const AncestorNode>;

struct Goal {
  Literal literal;
  Ancestors ancestors;
};

struct GoalCell {
  Goal goal;
  std::shared_ptr<const GoalCell> next;
};
using Goals = std::shared_ptr<const GoalCell>;

Goals cons(Goal g, Goals rest) { return std::make_shared<const GoalCell>(GoalCell{std::move(g), std::move(rest)}); }

struct Successor {
  Substitution sigma;
  Goals goals;
};

enum class Selection { Unknown, User, Builtin, Negation };

struct Choice {
  Goals goals;
  Substitution sigma;
  std::size_t depth = 0;
  Selection selection = Selection::Unknown;
  Literal current;
  Ancestors childAncestors;
  std::size_t nextClause = 0;
  const std::vector<std::size_t>* candidates = nullptr;
  bool exhausted = false;
  std::deque<Successor> pending;
};

using PredicateKey = std::tuple<Symbol, std::size_t, bool>;
using ClauseIndex = std::map<PredicateKey, std::vector<std::size_t>>;

const Symbol kHasType = Symbol::intern("has_type");
const Symbol kRdf = Symbol::intern("rdf");
const Symbol kEquals = Symbol::intern("=");

bool isBuiltin(const Literal& l) {
  if (l.negated) return false;
  if (isComparisonPredicate(l.predicate) && l.arity() == 2) return true;
  if (l.predicate == kHasType && l.arity() == 2) return true;
  return l.predicate == kRdf && l.arity() == 5;
}

void appendKey(const Term& t, std::map<Var, std::size_t>& numbering, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto [it, inserted] = numbering.emplace(t.var(), numbering.size());
      out += "_" + std::to_string(it->second);
      break;
    }
    case Term::Kind::Constant:
      out += "c" + std::to_string(t.name().id());
      break;
    case Term::Kind::Compound:
      out += "f" + std::to_string(t.name().id()) + "(";
      for (const Term& a : t.args()) {
        appendKey(a, numbering, out);
        out += ',';
      }
      out += ')';
      break;
  }
  if (t.isTyped()) out += ":" + std::to_string(t.type().id());
}

// Equal for call patterns that differ only in variable names.
std::string variantKey(const Literal& l) {
  std::string out = (l.negated ? "-" : "+") + std::to_string(l.predicate.id()) + "(";
  std::map<Var, std::size_t> numbering;
  for (const Term& a : l.args) {
    appendKey(a, numbering, out);
    out += ',';
  }
  return out + ")";
}

Term rename(const Term& t, std::uint32_t generation) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      return Term::variable(Var{t.name(), generation}, t.type());
    case Term::Kind::Compound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const Term& a : t.args()) args.push_back(rename(a, generation));
      return Term::compound(t.name(), std::move(args), t.type());
    }
    case Term::Kind::Constant:
      return t;
  }
  return t;
}

Literal rename(const Literal& l, std::uint32_t generation) {
  Literal out = l;
  for (Term& a : out.args) a = rename(a, generation);
  return out;
}

std::optional<double> numericValue(const Term& t) {
  if (!t.isConstant()) return std::nullopt;
  const std::string_view s = t.name().str();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

TypeRef typeFromName(const Term& t, const TypeRegistry& registry) {
  if (!t.isConstant() || t.isTyped()) throw Error("has_type/2 expects a type name as second argument");
  const std::string_view name = t.name().str();
  if (auto iri = registry.prefixes().expand(name)) return TypeRef(*iri);
  return TypeRef(name);
}

// Every combination of instances for the given typed variables: A-Box
// individuals first, then program constants annotated with a subtype.
void enumerateInstances(const std::vector<Term>& vars, const TypeRegistry& registry, QueryTally* tally,
                        std::vector<std::vector<Term>>& out, const std::vector<Term>& constants = {}) {
  std::vector<std::vector<Term>> choices;
  for (const Term& v : vars) {
    std::vector<Term> values;
    for (const std::string& iri : registry.instancesOf(v.type(), tally)) {
      values.push_back(individualTerm(iri, registry.prefixes()));
    }
    for (const Term& c : constants) {
      if (registry.isSubtypeOf(c.type(), v.type(), tally)) values.push_back(c);
    }
    if (values.empty()) return;
    choices.push_back(std::move(values));
  }
  std::vector<std::size_t> index(choices.size(), 0);
  while (true) {
    std::vector<Term> row;
    row.reserve(choices.size());
    for (std::size_t i = 0; i < choices.size(); ++i) row.push_back(choices[i][index[i]]);
    out.push_back(std::move(row));
    std::size_t i = choices.size();
    while (i > 0) {
      --i;
      if (++index[i] < choices[i].size()) break;
      index[i] = 0;
      if (i == 0) return;
    }
    if (choices.empty()) return;
  }
}

// Typed constants of a program in order of first appearance.
std::vector<Term> typedConstants(const Program& program) {
  std::vector<Term> out;
  std::set<Term> seen;
  auto visit = [&](const Term& t, auto&& self) -> void {
    if (t.isConstant() && t.isTyped() && seen.insert(t).second) out.push_back(t);
    for (const Term& a : t.args()) self(a, self);
  };
  for (const Clause& c : program.clauses) {
    if (c.head) {
      for (const Term& a : c.head->args) visit(a, visit);
    }
    for (const Literal& l : c.body) {
      for (const Term& a : l.args) visit(a, visit);
    }
  }
  return out;
}

// Typed variable occurrences, first occurrence of each variable only.
void collectTypedVariables(const Term& t, std::vector<Term>& acc) {
  if (t.isVariable()) {
    if (!t.isTyped()) return;
    for (const Term& seen : acc) {
      if (seen.var() == t.var()) return;
    }
    acc.push_back(t);
    return;
  }
  for (const Term& a : t.args()) collectTypedVariables(a, acc);
}

}  // namespace

Term individualTerm(std::string_view iri, const PrefixTable& prefixes) {
  if (auto q = prefixes.compact(iri)) return Term::constant(*q);
  return Term::constant(iri);
}

std::vector<Literal> resolveFact(const Clause& fact, const TypeRegistry& registry) {
  if (!fact.isFact()) throw Error("resolveFact expects a fact");
  std::vector<Term> typed;
  for (const Term& a : fact.head->args) collectTypedVariables(a, typed);
  std::vector<Literal> out;
  if (typed.empty()) {
    out.push_back(*fact.head);
    return out;
  }
  std::vector<std::vector<Term>> rows;
  enumerateInstances(typed, registry, nullptr, rows);
  for (const auto& row : rows) {
    Substitution sub;
    for (std::size_t i = 0; i < typed.size(); ++i) sub.bind(typed[i].var(), row[i]);
    out.push_back(apply(sub, *fact.head));
  }
  return out;
}

Program eraseVariableTypes(const Program& program) {
  Program out;
  out.queries = program.queries;
  auto erase = [](const Term& t, auto&& self) -> Term {
    if (t.isVariable()) return t.withType(TypeRef::top());
    if (!t.isCompound()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(self(a, self));
    return Term::compound(t.name(), std::move(args), t.type());
  };
  for (const Clause& c : program.clauses) {
    std::vector<Term> typed;
    Clause e;
    if (c.head) {
      for (const Term& a : c.head->args) collectTypedVariables(a, typed);
      e.head = *c.head;
      for (Term& a : e.head->args) a = erase(a, erase);
    }
    for (const Literal& l : c.body) {
      for (const Term& a : l.args) collectTypedVariables(a, typed);
      Literal el = l;
      for (Term& a : el.args) a = erase(a, erase);
      e.body.push_back(std::move(el));
    }
    for (const Term& v : typed) {
      e.body.push_back(Literal(kHasType, {v.withType(TypeRef::top()), Term::constant(v.type().iri())}));
    }
    out.clauses.push_back(std::move(e));
  }
  return out;
}

struct Solver::Stream::Impl {
  const Program& program;
  const TypeRegistry& registry;
  SolverLimits limits;
  SourceResolver sources;
  std::shared_ptr<const ClauseIndex> index;
  std::shared_ptr<std::uint32_t> generation;
  std::shared_ptr<const std::vector<Term>> constants;

  std::vector<Var> goalVars;
  std::map<Var, TypeRef> goalTypes;
  std::vector<Choice> stack;
  std::set<std::string> seen;
  std::size_t answers = 0;
  bool depthLimited = false;
  SolverStats stats;

  Impl(const Program& p, const TypeRegistry& r, SolverLimits l, SourceResolver s,
       std::shared_ptr<const ClauseIndex> idx, std::shared_ptr<std::uint32_t> gen,
       std::shared_ptr<const std::vector<Term>> consts)
      : program(p),
        registry(r),
        limits(l),
        sources(std::move(s)),
        index(std::move(idx)),
        generation(std::move(gen)),
        constants(std::move(consts)) {}

  void start(const Clause& goal, const Ancestors& ancestors, std::size_t depth) {
    std::vector<Term> typed;
    for (const Literal& l : goal.body) {
      collectVariables(l, goalVars);
      for (const Term& a : l.args) collectTypedVariables(a, typed);
    }
    for (const Term& t : typed) goalTypes.emplace(t.var(), t.type());
    Goals goals;
    for (std::size_t i = goal.body.size(); i-- > 0;) goals = cons(Goal{goal.body[i], ancestors}, goals);
    Choice root;
    root.goals = std::move(goals);
    root.depth = depth;
    stack.push_back(std::move(root));
  }

  Unifier unifier() { return Unifier(registry, &stats.registryQueries); }

  std::optional<QueryAnswer> next() {
    if (limits.maxAnswers && answers >= *limits.maxAnswers) return std::nullopt;
    while (!stack.empty()) {
      if (!stack.back().goals) {
        Choice done = std::move(stack.back());
        stack.pop_back();
        if (auto a = answerFrom(done.sigma, done.depth)) return a;
        continue;
      }
      std::optional<Successor> succ = nextSuccessor(stack.back());
      if (!succ) {
        stack.pop_back();
        continue;
      }
      ++stats.resolutionSteps;
      const std::size_t depth = stack.back().depth + 1;
      if (depth > limits.maxDepth) {
        depthLimited = true;
        continue;
      }
      Choice child;
      child.goals = std::move(succ->goals);
      child.sigma = std::move(succ->sigma);
      child.depth = depth;
      stack.push_back(std::move(child));
    }
    return std::nullopt;
  }

  std::optional<QueryAnswer> answerFrom(const Substitution& sigma, std::size_t depth) {
    QueryAnswer a;
    std::string key;
    for (const Var& v : goalVars) {
      const Term value = apply(sigma, Term::variable(v));
      TypeRef type;
      if (auto t = sigma.typeOf(v)) {
        type = *t;
      } else if (value.isVariable()) {
        type = value.type();
      } else {
        type = declaredType(v);
      }
      key += printTerm(value, registry.prefixes()) + "|" + std::string(type.iri()) + ";";
      a.bindings.push_back(AnswerBinding{std::string(v.name.str()), value, type});
    }
    if (!seen.insert(key).second) return std::nullopt;
    ++answers;
    a.derivationDepth = depth;
    a.registryQueryCount = stats.registryQueries.total();
    a.resolutionSteps = stats.resolutionSteps;
    return a;
  }

  TypeRef declaredType(const Var& v) const {
    auto it = goalTypes.find(v);
    return it == goalTypes.end() ? TypeRef::top() : it->second;
  }

  std::optional<Successor> nextSuccessor(Choice& c) {
    if (c.selection == Selection::Unknown) select(c);
    while (true) {
      if (!c.pending.empty()) {
        Successor s = std::move(c.pending.front());
        c.pending.pop_front();
        return s;
      }
      if (c.exhausted) return std::nullopt;
      if (c.selection != Selection::User) {
        c.exhausted = true;
        return std::nullopt;
      }
      if (!c.candidates || c.nextClause >= c.candidates->size()) {
        c.exhausted = true;
        continue;
      }
      resolveWith(c, program.clauses[(*c.candidates)[c.nextClause++]]);
    }
  }

  void select(Choice& c) {
    const Goal& g = c.goals->goal;
    c.current = apply(c.sigma, g.literal);
    if (c.current.defaultNegated) {
      c.selection = Selection::Negation;
      negation(c);
      return;
    }
    if (isBuiltin(c.current)) {
      c.selection = Selection::Builtin;
      builtin(c);
      return;
    }
    c.selection = Selection::User;
    std::string key = variantKey(c.current);
    bool crossed = false;
    for (const AncestorNode* a = g.ancestors.get(); a; a = a->parent.get()) {
      if (a->boundary) {
        crossed = true;
        continue;
      }
      if (a->key == key) {
        if (crossed) {
          throw NegationLoopError("call " + printLiteral(c.current, registry.prefixes()) +
                                  " depends on itself through default negation");
        }
        c.exhausted = true;
        return;
      }
    }
    c.childAncestors = std::make_shared<const AncestorNode>(AncestorNode{std::move(key), false, g.ancestors});
    auto it = index->find(PredicateKey{c.current.predicate, c.current.arity(), c.current.negated});
    c.candidates = it == index->end() ? nullptr : &it->second;
  }

  void resolveWith(Choice& c, const Clause& clause) {
    const std::uint32_t gen = ++*generation;
    const Literal head = rename(*clause.head, gen);
    ++stats.unificationAttempts;
    Unifier u = unifier();
    UnifyResult r = u.unifyArgs(c.current.args, head.args);
    if (!succeeded(r)) return;
    Substitution sigma = compose(c.sigma, std::get<Substitution>(r));

    Goals rest = c.goals->next;
    for (std::size_t i = clause.body.size(); i-- > 0;) {
      rest = cons(Goal{rename(clause.body[i], gen), c.childAncestors}, rest);
    }

    if (clause.body.empty()) {
      // Free typed variables of a fact enumerate their instances.
      std::vector<Var> vars;
      collectVariables(head, vars);
      std::vector<Term> open;
      for (const Var& v : vars) {
        const Term image = apply(sigma, Term::variable(v));
        if (!image.isVariable() || !image.isTyped()) continue;
        bool dup = false;
        for (const Term& o : open) dup = dup || o.var() == image.var();
        if (!dup) open.push_back(image);
      }
      if (!open.empty()) {
        std::vector<std::vector<Term>> rows;
        enumerateInstances(open, registry, &stats.registryQueries, rows, *constants);
        for (const auto& row : rows) {
          std::vector<Equation> eqs;
          for (std::size_t i = 0; i < open.size(); ++i) eqs.push_back(Equation{open[i], row[i]});
          UnifyResult bound = u.solve(std::move(eqs), sigma);
          if (succeeded(bound)) c.pending.push_back(Successor{std::get<Substitution>(std::move(bound)), rest});
        }
        return;
      }
    }
    c.pending.push_back(Successor{std::move(sigma), std::move(rest)});
  }

  void negation(Choice& c) {
    Literal inner = c.current;
    inner.defaultNegated = false;
    if (!inner.isGround()) {
      throw FlounderingError("not(" + printLiteral(inner, registry.prefixes()) + ") selected with free variables");
    }
    Impl sub(program, registry, SolverLimits{limits.maxDepth, 1}, sources, index, generation, constants);
    Clause goal;
    goal.body.push_back(inner);
    sub.start(goal, std::make_shared<const AncestorNode>(AncestorNode{"", true, c.goals->goal.ancestors}), c.depth);
    const bool provable = sub.next().has_value();
    stats.registryQueries += sub.stats.registryQueries;
    stats.resolutionSteps += sub.stats.resolutionSteps;
    stats.unificationAttempts += sub.stats.unificationAttempts;
    if (provable) return;
    if (sub.depthLimited) {
      depthLimited = true;
      return;
    }
    c.pending.push_back(Successor{c.sigma, c.goals->next});
  }

  void builtin(Choice& c) {
    const Literal& l = c.current;
    Goals rest = c.goals->next;
    auto succeed = [&](Substitution s) { c.pending.push_back(Successor{std::move(s), rest}); };

    if (l.predicate == kEquals) {
      UnifyResult r = unifier().unify(l.args[0], l.args[1]);
      if (succeeded(r)) succeed(compose(c.sigma, std::get<Substitution>(r)));
      return;
    }
    if (isComparisonPredicate(l.predicate)) {
      const Term& a = l.args[0];
      const Term& b = l.args[1];
      if (a.isVariable() || b.isVariable()) {
        throw InstantiationError("comparison " + printLiteral(l, registry.prefixes()) + " has an unbound operand");
      }
      const auto x = numericValue(a);
      const auto y = numericValue(b);
      if (!x || !y) return;
      if (a.isTyped() && b.isTyped() && registry.lower(a.type(), b.type(), &stats.registryQueries).isBottom()) return;
      const std::string_view op = l.predicate.str();
      const bool holds = op == ">" ? *x > *y : op == "<" ? *x < *y : op == ">=" ? *x >= *y : *x <= *y;
      if (holds) succeed(c.sigma);
      return;
    }
    if (l.predicate == kHasType) {
      const TypeRef type = typeFromName(l.args[1], registry);
      if (!registry.knows(type)) throw UnknownTypeError(std::string(type.iri()));
      const Term& x = l.args[0];
      if (x.isVariable()) {
        const TypeRef narrowed = registry.lower(x.type(), type, &stats.registryQueries);
        if (narrowed.isBottom()) return;
        Substitution step;
        step.setType(x.var(), narrowed);
        succeed(compose(c.sigma, step));
        return;
      }
      if (!x.isConstant()) return;
      const bool ok = x.isTyped()
                          ? registry.isSubtypeOf(x.type(), type, &stats.registryQueries)
                          : registry.isInstanceOf(registry.prefixes().resolveName(x.name().str()), type,
                                                  &stats.registryQueries);
      if (ok) succeed(c.sigma);
      return;
    }
    rdf(c, rest);
  }

  void rdf(Choice& c, const Goals& rest) {
    const Literal& l = c.current;
    if (!l.args[0].isConstant() || !l.args[1].isConstant()) {
      throw InstantiationError("rdf/5 needs a bound source and reasoner mode");
    }
    const std::string source(l.args[0].name().str());
    const std::string mode(l.args[1].name().str());
    const auto classified = classifyReasonerMode(mode);
    if (!classified) throw Error("unknown reasoner \"" + mode + "\" in rdf/5");
    if (!classified->executable) throw UnsupportedReasonerError(mode);
    const TypeRegistry* target = sources ? sources(source) : &registry;
    if (!target) throw Error("rdf source \"" + source + "\" is not available");
    const RdfView view = classified->level == ReasonerLevel::None         ? RdfView::Asserted
                         : classified->level == ReasonerLevel::Transitive ? RdfView::Transitive
                                                                          : RdfView::Full;
    const PrefixTable& prefixes = registry.prefixes();
    std::optional<std::string> fixed[3];
    for (int i = 0; i < 3; ++i) {
      const Term& t = l.args[2 + i];
      if (t.isConstant()) fixed[i] = prefixes.resolveName(t.name().str());
      if (t.isCompound()) return;
    }
    Unifier u = unifier();
    for (const RdfTriple& triple : target->triples(view)) {
      const std::string* parts[3] = {&triple.subject, &triple.predicate, &triple.object};
      bool match = true;
      for (int i = 0; i < 3 && match; ++i) {
        if (fixed[i] && *fixed[i] != *parts[i]) match = false;
      }
      if (!match) continue;
      std::vector<Equation> eqs;
      eqs.push_back(Equation{l.args[2], individualTerm(triple.subject, prefixes)});
      eqs.push_back(Equation{l.args[3], individualTerm(triple.predicate, prefixes)});
      eqs.push_back(Equation{l.args[4], triple.literalObject ? Term::constant(triple.object)
                                                              : individualTerm(triple.object, prefixes)});
      UnifyResult r = u.solve(std::move(eqs), c.sigma);
      if (succeeded(r)) c.pending.push_back(Successor{std::get<Substitution>(std::move(r)), rest});
    }
  }
};

Solver::Solver(const Program& program, const TypeRegistry& registry, SolverLimits limits, SourceResolver sources)
    : program_(program), registry_(registry), limits_(limits), sources_(std::move(sources)) {}

Solver::Stream Solver::solve(const Clause& goal) const {
  auto index = std::make_shared<ClauseIndex>();
  for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
    const Literal& h = *program_.clauses[i].head;
    (*index)[PredicateKey{h.predicate, h.arity(), h.negated}].push_back(i);
  }
  auto impl = std::make_unique<Stream::Impl>(program_, registry_, limits_, sources_, std::move(index),
                                             std::make_shared<std::uint32_t>(0),
                                             std::make_shared<const std::vector<Term>>(typedConstants(program_)));
  impl->start(goal, nullptr, 0);
  return Stream(std::move(impl));
}

std::vector<QueryAnswer> Solver::solveAll(const Clause& goal) const {
  Stream s = solve(goal);
  std::vector<QueryAnswer> out;
  while (auto a = s.next()) out.push_back(std::move(*a));
  return out;
}

Solver::Stream::Stream(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Solver::Stream::~Stream() = default;
Solver::Stream::Stream(Stream&&) noexcept = default;
Solver::Stream& Solver::Stream::operator=(Stream&&) noexcept = default;

std::optional<QueryAnswer> Solver::Stream::next() { return impl_->next(); }
bool Solver::Stream::depthLimited() const { return impl_->depthLimited; }
const SolverStats& Solver::Stream::stats() const { return impl_->stats; }

}  // namespace sortedlp
