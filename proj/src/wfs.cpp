#include "sortedlp/wfs.hpp"

#include <charconv>
#include <tuple>

#include "sortedlp/parser.hpp"

namespace sortedlp {
namespace {

using PredicateKey = std::tuple<Symbol, std::size_t, bool>;

const Symbol kHasType = Symbol::intern("has_type");
const Symbol kRdf = Symbol::intern("rdf");
const Symbol kEquals = Symbol::intern("=");

bool isQueryLiteral(const Literal& l) {
  if (l.negated) return false;
  if (isComparisonPredicate(l.predicate) && l.arity() == 2) return true;
  if (l.predicate == kHasType && l.arity() == 2) return true;
  return l.predicate == kRdf && l.arity() == 5;
}

std::optional<double> numeric(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void requireFunctionFree(const Term& t) {
  if (t.isCompound()) {
    throw Error("the oracle only grounds function-free programs; found compound term " +
                std::string(t.name().str()) + "/" + std::to_string(t.arity()));
  }
}

RdfView viewFor(const std::string& mode) {
  const auto m = classifyReasonerMode(mode);
  if (!m) throw Error("unknown reasoner \"" + mode + "\" in rdf/5");
  if (!m->executable) throw UnsupportedReasonerError(mode);
  switch (m->level) {
    case ReasonerLevel::None:
      return RdfView::Asserted;
    case ReasonerLevel::Transitive:
      return RdfView::Transitive;
    case ReasonerLevel::Full:
      return RdfView::Full;
  }
  return RdfView::Full;
}

class Grounder {
 public:
  Grounder(const TypeRegistry& registry, GroundingOptions options, const SourceResolver& sources)
      : registry_(registry), options_(options), sources_(sources) {}

  GroundProgram run(const Program& program, const std::vector<Clause>& goals) {
    std::vector<Clause> rules = program.clauses;
    std::vector<bool> isGoal(rules.size(), false);
    for (std::size_t i = 0; i < goals.size(); ++i) {
      Clause g;
      std::vector<Var> vars;
      for (const Literal& l : goals[i].body) collectVariables(l, vars);
      std::vector<Term> args;
      for (const Var& v : vars) args.push_back(Term::variable(v, typeInClause(goals[i], v)));
      g.head = Literal("$goal" + std::to_string(i), std::move(args));
      g.body = goals[i].body;
      rules.push_back(std::move(g));
      isGoal.push_back(true);
    }

    for (const Clause& c : rules) {
      if (c.head) visitLiteral(*c.head);
      for (const Literal& l : c.body) visitLiteral(l);
    }
    for (const std::string& iri : registry_.individuals()) {
      gp_.internElement(Element{registry_.canonicalIndividual(iri), TypeRef::top()});
    }
    for (const auto& [source, mode] : rdfSources_) {
      for (const RdfTriple& t : triplesFor(source, mode)) {
        gp_.internElement(Element{registry_.canonicalIndividual(t.subject), TypeRef::top()});
        gp_.internElement(Element{registry_.canonicalIndividual(t.predicate), TypeRef::top()});
        gp_.internElement(Element{t.literalObject ? t.object : registry_.canonicalIndividual(t.object),
                                  TypeRef::top()});
      }
    }

    std::set<PredicateKey> relevant;
    if (!options_.exhaustive) {
      std::vector<PredicateKey> work;
      for (std::size_t i = 0; i < rules.size(); ++i) {
        if (isGoal[i]) work.push_back(keyOf(*rules[i].head));
      }
      while (!work.empty()) {
        const PredicateKey k = work.back();
        work.pop_back();
        if (!relevant.insert(k).second) continue;
        for (const Clause& c : rules) {
          if (keyOf(*c.head) != k) continue;
          for (const Literal& l : c.body) {
            if (!isQueryLiteral(l)) work.push_back(keyOf(l));
          }
        }
      }
    }
    for (const Clause& c : rules) {
      if (options_.exhaustive || relevant.count(keyOf(*c.head))) groundRule(c);
    }
    return std::move(gp_);
  }

 private:
  static PredicateKey keyOf(const Literal& l) { return {l.predicate, l.arity(), l.negated}; }

  static TypeRef typeInClause(const Clause& c, const Var& v) {
    TypeRef found;
    auto visit = [&](const Literal& l) {
      for (const Term& a : l.args) {
        if (a.isVariable() && a.var() == v && a.isTyped()) found = a.type();
      }
    };
    if (c.head) visit(*c.head);
    for (const Literal& l : c.body) visit(l);
    return found;
  }

  void visitLiteral(const Literal& l) {
    for (const Term& a : l.args) {
      requireFunctionFree(a);
      if (!a.isConstant()) continue;
      const Element e = elementOf(a, registry_);
      gp_.internElement(e);
      if (a.isTyped()) gp_.annotations().emplace(e.name, a.type());
    }
    if (l.predicate == kRdf && l.arity() == 5 && l.args[0].isConstant() && l.args[1].isConstant()) {
      rdfSources_.emplace(std::string(l.args[0].name().str()), std::string(l.args[1].name().str()));
    }
  }

  const std::vector<RdfTriple>& triplesFor(const std::string& source, const std::string& mode) {
    const RdfView view = viewFor(mode);
    const TypeRegistry* target = sources_ ? sources_(source) : &registry_;
    if (!target) throw Error("rdf source \"" + source + "\" is not available");
    return target->triples(view);
  }

  const std::vector<std::uint32_t>& range(TypeRef type) {
    auto it = ranges_.find(type);
    if (it != ranges_.end()) return it->second;
    std::vector<std::uint32_t> out;
    const auto& elems = gp_.elements();
    for (std::uint32_t i = 0; i < elems.size(); ++i) {
      const Element& e = elems[i];
      bool in = type.isTop();
      if (!in && !e.type.isTop()) in = registry_.isSubtypeOf(e.type, type);
      if (!in && e.type.isTop()) in = registry_.isInstanceOf(e.name, type);
      if (in) out.push_back(i);
    }
    return ranges_.emplace(type, std::move(out)).first->second;
  }

  std::uint32_t elementFor(const Term& t, const std::map<Var, std::uint32_t>& assignment) {
    if (t.isVariable()) return assignment.at(t.var());
    return gp_.internElement(elementOf(t, registry_));
  }

  bool evaluateQuery(const Literal& l, const std::vector<std::uint32_t>& args) {
    const auto& elems = gp_.elements();
    const std::string_view p = l.predicate.str();
    if (l.predicate == kEquals) return args[0] == args[1];
    if (isComparisonPredicate(l.predicate)) {
      const Element& a = elems[args[0]];
      const Element& b = elems[args[1]];
      const auto x = numeric(a.name);
      const auto y = numeric(b.name);
      if (!x || !y) return false;
      if (!a.type.isTop() && !b.type.isTop() && registry_.lower(a.type, b.type).isBottom()) return false;
      return p == ">" ? *x > *y : p == "<" ? *x < *y : p == ">=" ? *x >= *y : *x <= *y;
    }
    if (l.predicate == kHasType) {
      const Element& x = elems[args[0]];
      const TypeRef type(elems[args[1]].name);
      if (!registry_.knows(type)) return false;
      return x.type.isTop() ? registry_.isInstanceOf(x.name, type) : registry_.isSubtypeOf(x.type, type);
    }
    const Element& src = elems[args[0]];
    const Element& mode = elems[args[1]];
    const auto& triples = triplesFor(src.name, mode.name);
    for (int i = 2; i < 5; ++i) {
      if (!elems[args[i]].type.isTop()) return false;
    }
    for (const RdfTriple& t : triples) {
      if (registry_.canonicalIndividual(t.subject) == elems[args[2]].name &&
          registry_.canonicalIndividual(t.predicate) == elems[args[3]].name &&
          (t.literalObject ? t.object : registry_.canonicalIndividual(t.object)) == elems[args[4]].name) {
        return true;
      }
    }
    return false;
  }

  void groundRule(const Clause& c) {
    std::vector<Var> vars;
    collectVariables(*c.head, vars);
    for (const Literal& l : c.body) collectVariables(l, vars);
    std::vector<const std::vector<std::uint32_t>*> domains;
    std::size_t total = 1;
    for (const Var& v : vars) {
      const auto& d = range(typeInClause(c, v));
      if (d.empty()) return;
      total *= d.size();
      if (total > options_.maxInstances) {
        throw Error("grounding of a rule for " + std::string(c.head->predicate.str()) + " exceeds " +
                    std::to_string(options_.maxInstances) + " instances");
      }
      domains.push_back(&d);
    }
    std::vector<std::size_t> pos(vars.size(), 0);
    std::map<Var, std::uint32_t> assignment;
    while (true) {
      for (std::size_t i = 0; i < vars.size(); ++i) assignment[vars[i]] = (*domains[i])[pos[i]];
      emit(c, assignment);
      std::size_t i = vars.size();
      bool done = true;
      while (i > 0) {
        --i;
        if (++pos[i] < domains[i]->size()) {
          done = false;
          break;
        }
        pos[i] = 0;
      }
      if (done) return;
    }
  }

  GroundAtom atomOf(const Literal& l, const std::map<Var, std::uint32_t>& assignment) {
    GroundAtom a;
    a.predicate = l.predicate;
    a.negated = l.negated;
    for (const Term& t : l.args) a.args.push_back(elementFor(t, assignment));
    return a;
  }

  void emit(const Clause& c, const std::map<Var, std::uint32_t>& assignment) {
    GroundRule r;
    r.head = gp_.internAtom(atomOf(*c.head, assignment));
    for (const Literal& l : c.body) {
      if (isQueryLiteral(l)) {
        std::vector<std::uint32_t> args;
        for (const Term& t : l.args) args.push_back(elementFor(t, assignment));
        std::string description = std::string(l.predicate.str()) + "(";
        for (std::size_t i = 0; i < args.size(); ++i) {
          const Element& e = gp_.elements()[args[i]];
          description += (i ? ", " : "") + e.name;
          if (!e.type.isTop()) description += ":<" + std::string(e.type.iri()) + ">";
        }
        description += ")";
        const std::uint32_t q = gp_.internQuery(description, evaluateQuery(l, args));
        (l.defaultNegated ? r.negativeQueries : r.positiveQueries).push_back(q);
        continue;
      }
      const std::uint32_t a = gp_.internAtom(atomOf(l, assignment));
      (l.defaultNegated ? r.negative : r.positive).push_back(a);
    }
    gp_.rules().push_back(std::move(r));
  }

  const TypeRegistry& registry_;
  GroundingOptions options_;
  const SourceResolver& sources_;
  GroundProgram gp_;
  std::set<std::pair<std::string, std::string>> rdfSources_;
  std::map<TypeRef, std::vector<std::uint32_t>> ranges_;
};

}  // namespace

std::uint32_t GroundProgram::internElement(const Element& e) {
  auto [it, inserted] = elementIndex_.emplace(e, static_cast<std::uint32_t>(elements_.size()));
  if (inserted) elements_.push_back(e);
  return it->second;
}

std::uint32_t GroundProgram::internAtom(const GroundAtom& a) {
  auto [it, inserted] = atomIndex_.emplace(a, static_cast<std::uint32_t>(atoms_.size()));
  if (inserted) atoms_.push_back(a);
  return it->second;
}

std::uint32_t GroundProgram::internQuery(const std::string& description, bool value) {
  auto [it, inserted] = queryIndex_.emplace(description, static_cast<std::uint32_t>(queries_.size()));
  if (inserted) queries_.push_back(QueryAtom{description, value});
  return it->second;
}

std::optional<std::uint32_t> GroundProgram::findAtom(const GroundAtom& a) const {
  auto it = atomIndex_.find(a);
  if (it == atomIndex_.end()) return std::nullopt;
  return it->second;
}

std::string GroundProgram::describe(std::uint32_t atom) const {
  const GroundAtom& a = atoms_.at(atom);
  std::string out = std::string(a.predicate.str());
  if (!a.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const Element& e = elements_[a.args[i]];
      out += (i ? ", " : "") + e.name;
      if (!e.type.isTop()) out += ":<" + std::string(e.type.iri()) + ">";
    }
    out += ")";
  }
  return a.negated ? "neg(" + out + ")" : out;
}

GroundProgram ground(const Program& program, const TypeRegistry& registry, const std::vector<Clause>& goals,
                     GroundingOptions options, const SourceResolver& sources) {
  return Grounder(registry, options, sources).run(program, goals);
}

std::set<std::uint32_t> WellFoundedModel::atomsWith(Truth t) const {
  std::set<std::uint32_t> out;
  for (std::uint32_t i = 0; i < value.size(); ++i) {
    if (value[i] == t) out.insert(i);
  }
  return out;
}

WellFoundedModel wellFoundedModel(const GroundProgram& gp) {
  const std::size_t n = gp.atoms().size();
  const auto& rules = gp.rules();
  const auto& queries = gp.queries();
  std::vector<std::vector<std::uint32_t>> positiveIn(n);
  for (std::uint32_t r = 0; r < rules.size(); ++r) {
    for (std::uint32_t a : rules[r].positive) positiveIn[a].push_back(r);
  }
  auto queriesHold = [&](const GroundRule& r) {
    for (std::uint32_t q : r.positiveQueries) {
      if (!queries[q].value) return false;
    }
    for (std::uint32_t q : r.negativeQueries) {
      if (queries[q].value) return false;
    }
    return true;
  };

  std::vector<bool> isTrue(n, false);
  std::vector<bool> isFalse(n, false);
  while (true) {
    std::vector<bool> nextTrue(n, false);
    for (const GroundRule& r : rules) {
      if (!queriesHold(r)) continue;
      bool body = true;
      for (std::uint32_t a : r.positive) body = body && isTrue[a];
      for (std::uint32_t a : r.negative) body = body && isFalse[a];
      if (body) nextTrue[r.head] = true;
    }

    // Atoms outside the greatest unfounded set: those with a rule that none
    // of the unfoundedness conditions block and whose positive body atoms are
    // themselves outside it.
    std::vector<bool> founded(n, false);
    std::vector<std::size_t> missing(rules.size(), 0);
    std::vector<std::uint32_t> work;
    std::vector<bool> eligible(rules.size(), false);
    for (std::uint32_t i = 0; i < rules.size(); ++i) {
      const GroundRule& r = rules[i];
      bool ok = queriesHold(r);
      for (std::uint32_t a : r.positive) ok = ok && !isFalse[a];
      for (std::uint32_t a : r.negative) ok = ok && !isTrue[a];
      if (!ok) continue;
      eligible[i] = true;
      missing[i] = r.positive.size();
      if (missing[i] == 0 && !founded[r.head]) {
        founded[r.head] = true;
        work.push_back(r.head);
      }
    }
    while (!work.empty()) {
      const std::uint32_t a = work.back();
      work.pop_back();
      for (std::uint32_t ri : positiveIn[a]) {
        if (!eligible[ri] || missing[ri] == 0) continue;
        --missing[ri];
        if (missing[ri] == 0 && !founded[rules[ri].head]) {
          founded[rules[ri].head] = true;
          work.push_back(rules[ri].head);
        }
      }
    }
    std::vector<bool> nextFalse(n, false);
    for (std::size_t a = 0; a < n; ++a) nextFalse[a] = !founded[a];

    if (nextTrue == isTrue && nextFalse == isFalse) break;
    isTrue = std::move(nextTrue);
    isFalse = std::move(nextFalse);
  }

  WellFoundedModel m;
  m.value.resize(n, Truth::Undefined);
  for (std::size_t a = 0; a < n; ++a) {
    if (isTrue[a]) m.value[a] = Truth::True;
    if (isFalse[a]) m.value[a] = Truth::False;
  }
  return m;
}

std::vector<std::uint32_t> conflictingAtoms(const GroundProgram& gp, const WellFoundedModel& model) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = 0; a < gp.atoms().size(); ++a) {
    const GroundAtom& atom = gp.atoms()[a];
    if (atom.negated || model.value[a] != Truth::True) continue;
    GroundAtom negation = atom;
    negation.negated = true;
    const auto n = gp.findAtom(negation);
    if (n && model.value[*n] == Truth::True) out.push_back(a);
  }
  return out;
}

bool checkModel(const GroundProgram& gp, const std::set<std::uint32_t>& trueAtoms, const TypeRegistry& registry) {
  const auto& queries = gp.queries();
  for (const GroundRule& r : gp.rules()) {
    bool body = true;
    for (std::uint32_t a : r.positive) body = body && trueAtoms.count(a);
    for (std::uint32_t a : r.negative) body = body && !trueAtoms.count(a);
    for (std::uint32_t q : r.positiveQueries) body = body && queries[q].value;
    for (std::uint32_t q : r.negativeQueries) body = body && !queries[q].value;
    if (body && !trueAtoms.count(r.head)) return false;
  }
  for (std::uint32_t a : trueAtoms) {
    for (std::uint32_t e : gp.atoms().at(a).args) {
      const Element& el = gp.elements()[e];
      if (el.type.isTop()) continue;
      bool entailed = registry.isInstanceOf(el.name, el.type);
      for (const auto& [name, type] : gp.annotations()) {
        if (entailed) break;
        entailed = name == el.name && registry.isSubtypeOf(type, el.type);
      }
      if (!entailed) return false;
    }
  }
  return true;
}

Element elementOf(const Term& constant, const TypeRegistry& registry) {
  const std::string resolved = registry.prefixes().resolveName(constant.name().str());
  return Element{registry.canonicalIndividual(resolved),
                 constant.isTyped() ? registry.canonicalType(constant.type()) : TypeRef::top()};
}

OracleAnswers oracleAnswers(const Program& program, const Clause& goal, const TypeRegistry& registry,
                            GroundingOptions options, const SourceResolver& sources) {
  OracleAnswers out;
  std::vector<Var> vars;
  for (const Literal& l : goal.body) collectVariables(l, vars);
  for (const Var& v : vars) out.variables.emplace_back(v.name.str());

  const GroundProgram gp = ground(program, registry, {goal}, options, sources);
  const WellFoundedModel m = wellFoundedModel(gp);
  const Symbol goalPredicate = Symbol::intern("$goal0");
  for (std::uint32_t a = 0; a < gp.atoms().size(); ++a) {
    const GroundAtom& atom = gp.atoms()[a];
    if (atom.predicate != goalPredicate || m.value[a] == Truth::False) continue;
    std::vector<Element> tuple;
    for (std::uint32_t e : atom.args) tuple.push_back(gp.elements()[e]);
    (m.value[a] == Truth::True ? out.trueAnswers : out.undefinedAnswers).insert(std::move(tuple));
  }
  return out;
}

std::set<std::vector<Element>> answerElements(const std::vector<QueryAnswer>& answers, const TypeRegistry& registry) {
  std::set<std::vector<Element>> out;
  for (const QueryAnswer& a : answers) {
    std::vector<Element> tuple;
    bool ground = true;
    for (const AnswerBinding& b : a.bindings) {
      if (!b.value.isConstant()) {
        ground = false;
        break;
      }
      tuple.push_back(elementOf(b.value, registry));
    }
    if (ground) out.insert(std::move(tuple));
  }
  return out;
}

}  // namespace sortedlp
