#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sortedlp/term.hpp"
#include "sortedlp/type_registry.hpp"

namespace testing {

inline std::filesystem::path dataDir() { return std::filesystem::path(SORTEDLP_DATA_DIR); }

inline std::string readText(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr const char* kSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr const char* kOwlClass = "http://www.w3.org/2002/07/owl#Class";
inline constexpr const char* kEquivalentClass = "http://www.w3.org/2002/07/owl#equivalentClass";
inline constexpr const char* kDisjointWith = "http://www.w3.org/2002/07/owl#disjointWith";
inline constexpr const char* kSameAs = "http://www.w3.org/2002/07/owl#sameAs";

/// Writes N-Triples for a small taxonomy under one namespace.
class Ontology {
 public:
  explicit Ontology(std::string base = "http://t.example/#") : base_(std::move(base)) {}

  std::string iri(const std::string& local) const { return base_ + local; }
  sortedlp::TypeRef type(const std::string& local) const { return sortedlp::TypeRef(iri(local)); }

  Ontology& cls(const std::string& c) { return triple(iri(c), kRdfType, kOwlClass); }
  Ontology& sub(const std::string& a, const std::string& b) { return triple(iri(a), kSubClassOf, iri(b)); }
  Ontology& equiv(const std::string& a, const std::string& b) { return triple(iri(a), kEquivalentClass, iri(b)); }
  Ontology& disjoint(const std::string& a, const std::string& b) { return triple(iri(a), kDisjointWith, iri(b)); }
  Ontology& instance(const std::string& i, const std::string& c) { return triple(iri(i), kRdfType, iri(c)); }
  Ontology& same(const std::string& a, const std::string& b) { return triple(iri(a), kSameAs, iri(b)); }

  Ontology& triple(const std::string& s, const std::string& p, const std::string& o) {
    text_ += "<" + s + "> <" + p + "> <" + o + "> .\n";
    return *this;
  }

  const std::string& text() const { return text_; }

 private:
  std::string base_;
  std::string text_;
};

/// Reflexive-transitive closure by repeated relaxation over an adjacency
/// matrix; equivalence pairs are edges in both directions.
inline std::vector<std::vector<bool>> bruteReachability(std::size_t n,
                                                        const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (auto [a, b] : edges) r[a][b] = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

struct RandomTaxonomy {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (sub, super), equivalences both ways
  Ontology ontology;
};

/// A random DAG on up to `maxNodes` classes plus up to `maxMerges`
/// equivalence axioms between arbitrary classes.
inline RandomTaxonomy randomTaxonomy(std::mt19937& rng, std::size_t maxNodes, std::size_t maxMerges) {
  RandomTaxonomy t;
  t.nodes = std::uniform_int_distribution<std::size_t>(2, maxNodes)(rng);
  auto name = [](std::size_t i) { return "C" + std::to_string(i); };
  for (std::size_t i = 0; i < t.nodes; ++i) t.ontology.cls(name(i));
  std::bernoulli_distribution edge(std::min(1.0, 2.5 / static_cast<double>(t.nodes)));
  for (std::size_t i = 0; i < t.nodes; ++i) {
    for (std::size_t j = i + 1; j < t.nodes; ++j) {
      if (edge(rng)) {
        t.ontology.sub(name(j), name(i));
        t.edges.emplace_back(j, i);
      }
    }
  }
  const std::size_t merges = std::uniform_int_distribution<std::size_t>(0, maxMerges)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, t.nodes - 1);
  for (std::size_t m = 0; m < merges; ++m) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    t.ontology.equiv(name(a), name(b));
    t.edges.emplace_back(a, b);
    t.edges.emplace_back(b, a);
  }
  return t;
}

/// Untyped Robinson unification with an eagerly applied triangular
/// substitution. Used as the reference for untyped inputs.
class RobinsonUnifier {
 public:
  std::optional<std::map<sortedlp::Var, sortedlp::Term>> unify(const sortedlp::Term& a, const sortedlp::Term& b) {
    bindings_.clear();
    if (!step(a, b)) return std::nullopt;
    std::map<sortedlp::Var, sortedlp::Term> out;
    for (const auto& [v, t] : bindings_) out.emplace(v, resolve(t));
    return out;
  }

  sortedlp::Term resolve(const sortedlp::Term& t) const {
    using sortedlp::Term;
    if (t.isVariable()) {
      auto it = bindings_.find(t.var());
      return it == bindings_.end() ? t : resolve(it->second);
    }
    if (!t.isCompound()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(resolve(a));
    return Term::compound(t.name(), std::move(args), t.type());
  }

 private:
  bool occurs(const sortedlp::Var& v, const sortedlp::Term& t) const {
    const sortedlp::Term r = resolve(t);
    if (r.isVariable()) return r.var() == v;
    for (const auto& a : r.args()) {
      if (occurs(v, a)) return true;
    }
    return false;
  }

  bool step(const sortedlp::Term& x, const sortedlp::Term& y) {
    const sortedlp::Term a = walk(x);
    const sortedlp::Term b = walk(y);
    if (a.isVariable() && b.isVariable() && a.var() == b.var()) return true;
    if (a.isVariable()) return bindVar(a, b);
    if (b.isVariable()) return bindVar(b, a);
    if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (!step(a.args()[i], b.args()[i])) return false;
    }
    return true;
  }

  bool bindVar(const sortedlp::Term& v, const sortedlp::Term& t) {
    if (occurs(v.var(), t)) return false;
    bindings_.insert_or_assign(v.var(), t);
    return true;
  }

  sortedlp::Term walk(const sortedlp::Term& t) const {
    sortedlp::Term cur = t;
    while (cur.isVariable()) {
      auto it = bindings_.find(cur.var());
      if (it == bindings_.end()) break;
      cur = it->second;
    }
    return cur;
  }

  std::map<sortedlp::Var, sortedlp::Term> bindings_;
};

/// Random untyped term over variables X0..X3, constants a..c and functors
/// f/1, g/2, h/3.
inline sortedlp::Term randomUntypedTerm(std::mt19937& rng, int depth) {
  using sortedlp::Term;
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 2 : 1);
  const int k = kind(rng);
  if (k == 0) return Term::variable("X" + std::to_string(std::uniform_int_distribution<int>(0, 3)(rng)));
  if (k == 1) return Term::constant(std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 2)(rng))));
  const int arity = std::uniform_int_distribution<int>(1, 3)(rng);
  static const char* functors[] = {"f", "g", "h"};
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i) args.push_back(randomUntypedTerm(rng, depth - 1));
  return Term::compound(functors[arity - 1], std::move(args));
}

/// One-way matching: extends `theta` so that apply(theta, pattern) == target.
inline bool matchTerm(const sortedlp::Term& pattern, const sortedlp::Term& target,
                      std::map<sortedlp::Var, sortedlp::Term>& theta) {
  if (pattern.isVariable()) {
    auto [it, inserted] = theta.emplace(pattern.var(), target);
    return inserted || it->second == target;
  }
  if (pattern.kind() != target.kind() || pattern.name() != target.name() || pattern.type() != target.type() ||
      pattern.arity() != target.arity()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!matchTerm(pattern.args()[i], target.args()[i], theta)) return false;
  }
  return true;
}

/// The two terms are equal up to a bijective renaming of variables.
inline bool isVariant(const sortedlp::Term& a, const sortedlp::Term& b) {
  std::map<sortedlp::Var, sortedlp::Term> forward;
  std::map<sortedlp::Var, sortedlp::Term> backward;
  if (!matchTerm(a, b, forward) || !matchTerm(b, a, backward)) return false;
  for (const auto& [v, t] : forward) {
    if (!t.isVariable()) return false;
  }
  for (const auto& [v, t] : backward) {
    if (!t.isVariable()) return false;
  }
  return true;
}

}  // namespace testing

namespace testing {

/// Ten classes arranged as a tree with twenty individuals, used by the
/// typed unification properties. Tree shape keeps lower() equal to the
/// greatest lower bound.
class TypedWorld {
 public:
  TypedWorld() {
    const std::pair<int, int> edges[] = {{1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 2}, {6, 2}, {7, 3}, {8, 5}, {9, 0}};
    for (int i = 0; i < 10; ++i) onto_.cls("K" + std::to_string(i));
    for (auto [a, b] : edges) onto_.sub("K" + std::to_string(a), "K" + std::to_string(b));
    for (int i = 0; i < 20; ++i) onto_.instance("i" + std::to_string(i), "K" + std::to_string((i * 3 + 1) % 10));
    registry_.prefixes().declare("t", "http://t.example/#");
    registry_.loadNTriples(onto_.text());
    registry_.freeze();
    for (int i = 0; i < 10; ++i) types_.push_back(onto_.type("K" + std::to_string(i)));
    for (int i = 0; i < 20; ++i) individuals_.push_back(sortedlp::Term::constant("t_i" + std::to_string(i)));
  }

  const sortedlp::TypeRegistry& registry() const { return registry_; }
  const std::vector<sortedlp::TypeRef>& types() const { return types_; }
  const std::vector<sortedlp::Term>& individuals() const { return individuals_; }

  sortedlp::TypeRef assertedType(std::size_t i) const { return registry_.assertedTypes(onto_.iri("i" + std::to_string(i))).front(); }

  /// Variables X0..X{vars-1} with the given per-pair annotations.
  sortedlp::Term randomTerm(std::mt19937& rng, int depth, const std::vector<sortedlp::TypeRef>& varTypes) const {
    using sortedlp::Term;
    std::uniform_int_distribution<int> kind(0, depth > 0 ? 3 : 2);
    const int k = kind(rng);
    if (k == 0) {
      const std::size_t v = std::uniform_int_distribution<std::size_t>(0, varTypes.size() - 1)(rng);
      return Term::variable("X" + std::to_string(v), varTypes[v]);
    }
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, 19)(rng);
    if (k == 1) return individuals_[i];
    if (k == 2) {
      // Annotated with the asserted class or one of its superclasses.
      sortedlp::TypeRef t = assertedType(i);
      std::vector<sortedlp::TypeRef> supers;
      for (sortedlp::TypeRef c : types_) {
        if (registry_.isSubtypeOf(t, c)) supers.push_back(c);
      }
      return Term::constant(individuals_[i].name(), supers[std::uniform_int_distribution<std::size_t>(0, supers.size() - 1)(rng)]);
    }
    const int arity = std::uniform_int_distribution<int>(1, 2)(rng);
    std::vector<Term> args;
    for (int a = 0; a < arity; ++a) args.push_back(randomTerm(rng, depth - 1, varTypes));
    return Term::compound(arity == 1 ? "f" : "g", std::move(args));
  }

  /// A term that mostly shares the shape of `t`, so pairs unify often.
  sortedlp::Term relatedTerm(std::mt19937& rng, const sortedlp::Term& t, const std::vector<sortedlp::TypeRef>& varTypes) const {
    using sortedlp::Term;
    const int roll = std::uniform_int_distribution<int>(0, 9)(rng);
    if (roll < 3) {
      const std::size_t v = std::uniform_int_distribution<std::size_t>(0, varTypes.size() - 1)(rng);
      return Term::variable("X" + std::to_string(v), varTypes[v]);
    }
    if (roll == 3) return randomTerm(rng, 1, varTypes);
    if (!t.isCompound()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(relatedTerm(rng, a, varTypes));
    return Term::compound(t.name(), std::move(args));
  }

  sortedlp::TypeRef randomVarType(std::mt19937& rng) const {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, types_.size())(rng);
    return k == types_.size() ? sortedlp::TypeRef::top() : types_[k];
  }

  /// A ground term may replace a variable of type `t`.
  bool fits(const sortedlp::Term& g, sortedlp::TypeRef t) const {
    if (t.isTop()) return true;
    if (g.isCompound()) return false;
    if (g.isTyped()) return registry_.isSubtypeOf(g.type(), t);
    return registry_.isInstanceOf(registry_.prefixes().resolveName(g.name().str()), t);
  }

 private:
  Ontology onto_;
  sortedlp::TypeRegistry registry_;
  std::vector<sortedlp::TypeRef> types_;
  std::vector<sortedlp::Term> individuals_;
};

inline void groundSubterms(const sortedlp::Term& t, std::set<sortedlp::Term>& out) {
  if (t.isGround()) out.insert(t);
  for (const auto& a : t.args()) groundSubterms(a, out);
}

inline sortedlp::Term substitute(const sortedlp::Term& t, const std::map<sortedlp::Var, sortedlp::Term>& theta) {
  using sortedlp::Term;
  if (t.isVariable()) {
    auto it = theta.find(t.var());
    return it == theta.end() ? t : it->second;
  }
  if (!t.isCompound()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(substitute(a, theta));
  return Term::compound(t.name(), std::move(args), t.type());
}

struct MguCheck {
  std::size_t groundUnifiers = 0;
  std::size_t notInstances = 0;
  bool falseFailure = false;
};

/// Enumerates every well-typed ground assignment of the variables of a pair
/// over the candidate terms and checks each ground unifier against `mgu`.
inline MguCheck checkMgu(const TypedWorld& world, const sortedlp::Term& a, const sortedlp::Term& b,
                         const std::vector<sortedlp::TypeRef>& varTypes, const sortedlp::Substitution* mgu) {
  using sortedlp::Term;
  using sortedlp::Var;
  std::set<Term> pool(world.individuals().begin(), world.individuals().end());
  groundSubterms(a, pool);
  groundSubterms(b, pool);
  const std::vector<Term> candidates(pool.begin(), pool.end());

  std::vector<Var> vars;
  sortedlp::collectVariables(a, vars);
  sortedlp::collectVariables(b, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<sortedlp::TypeRef> declared;
  for (const Var& v : vars) declared.push_back(varTypes[std::stoul(std::string(v.name.str()).substr(1))]);

  MguCheck result;
  std::vector<std::size_t> index(vars.size(), 0);
  while (true) {
    std::map<Var, Term> theta;
    bool typed = true;
    for (std::size_t i = 0; i < vars.size() && typed; ++i) {
      theta.emplace(vars[i], candidates[index[i]]);
      typed = world.fits(candidates[index[i]], declared[i]);
    }
    if (typed && substitute(a, theta) == substitute(b, theta)) {
      ++result.groundUnifiers;
      if (!mgu) {
        result.falseFailure = true;
      } else {
        std::map<Var, Term> tau;
        std::map<Var, sortedlp::TypeRef> imageTypes;
        bool instance = true;
        for (std::size_t i = 0; i < vars.size() && instance; ++i) {
          const Term pattern = sortedlp::apply(*mgu, Term::variable(vars[i], declared[i]));
          std::vector<Var> inner;
          sortedlp::collectVariables(pattern, inner);
          auto record = [&](const Term& t, auto&& self) -> void {
            if (t.isVariable()) imageTypes.emplace(t.var(), t.type());
            for (const auto& x : t.args()) self(x, self);
          };
          record(pattern, record);
          instance = matchTerm(pattern, theta.at(vars[i]), tau);
        }
        for (const auto& [v, g] : tau) {
          if (!instance) break;
          instance = world.fits(g, imageTypes.at(v));
        }
        if (!instance) ++result.notInstances;
      }
    }
    std::size_t i = vars.size();
    while (i > 0) {
      --i;
      if (++index[i] < candidates.size()) break;
      index[i] = 0;
      if (i == 0) return result;
    }
    if (vars.empty()) return result;
  }
}

}  // namespace testing

#include "sortedlp/parser.hpp"
#include "sortedlp/session.hpp"
#include "sortedlp/wfs.hpp"

namespace testing {

/// Registry plus parsed program, frozen and ready for solving. Prefix `t`
/// maps to the Ontology builder base.
struct Kb {
  sortedlp::TypeRegistry registry;
  sortedlp::Program program;

  explicit Kb(const std::string& script, const std::string& ntriples = "",
              sortedlp::ReasonerLevel level = sortedlp::ReasonerLevel::Full) {
    registry.prefixes().declare("t", "http://t.example/#");
    registry.loadNTriples(ntriples);
    registry.setLevel(level);
    program = sortedlp::parseProgram(script, registry.prefixes()).program;
    sortedlp::checkProgramTypes(program, registry);
    registry.freeze();
  }

  sortedlp::Clause query(const std::string& text) const {
    return sortedlp::parseQuery(text, registry.prefixes());
  }
};

/// Prefixes of the discount vocabularies, including the bare `businessVoc`
/// used by the listing's query line.
inline sortedlp::PrefixTable discountPrefixes() {
  sortedlp::PrefixTable p;
  p.declare("businessVoc1", "http://example.org/businessVocabulary1#");
  p.declare("businessVoc2", "http://example.org/businessVocabulary2#");
  p.declare("businessVoc", "http://example.org/businessVocabulary2#");
  p.declare("math", "http://example.org/mathVocabulary#");
  p.declare("currency", "http://example.org/currencyVocabulary#");
  return p;
}

/// A session over one script file with output discarded.
struct LoadedScript {
  std::ostringstream out;
  std::ostringstream err;
  sortedlp::Session session;
  std::vector<sortedlp::Clause> queries;

  explicit LoadedScript(const std::filesystem::path& script, sortedlp::SessionConfig config = {})
      : session((config.scriptPaths = {script.string()}, config), out, err) {
    queries = session.loadConfigured();
  }
};

inline std::vector<std::filesystem::path> goldenScripts() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dataDir() / "golden")) {
    if (e.path().extension() == ".prova") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Random propositional program over n atoms, built directly as ground rules.
inline sortedlp::GroundProgram randomGround(std::mt19937& rng, std::size_t n, std::size_t rules, bool negation, bool queries) {
  auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
  sortedlp::GroundProgram gp;
  std::vector<std::uint32_t> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(gp.internAtom(sortedlp::GroundAtom{sortedlp::Symbol::intern("a" + std::to_string(i)), false, {}}));
  const std::uint32_t yes = gp.internQuery("yes", true);
  const std::uint32_t no = gp.internQuery("no", false);
  for (std::size_t r = 0; r < rules; ++r) {
    sortedlp::GroundRule rule;
    rule.head = atoms[pick(n)];
    const std::size_t len = pick(4);
    for (std::size_t j = 0; j < len; ++j) {
      if (negation && pick(3) == 0) {
        rule.negative.push_back(atoms[pick(n)]);
      } else {
        rule.positive.push_back(atoms[pick(n)]);
      }
    }
    if (queries && pick(4) == 0) (pick(2) ? rule.positiveQueries : rule.negativeQueries).push_back(pick(2) ? yes : no);
    gp.rules().push_back(rule);
  }
  return gp;
}

/// Least model of the program with every negative literal decided by `assumed`.
inline std::vector<bool> leastModelOfReduct(const sortedlp::GroundProgram& gp, const std::vector<bool>& assumed) {
  std::vector<bool> m(gp.atoms().size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const sortedlp::GroundRule& r : gp.rules()) {
      if (m[r.head]) continue;
      bool body = true;
      for (auto a : r.positive) body = body && m[a];
      for (auto a : r.negative) body = body && !assumed[a];
      for (auto q : r.positiveQueries) body = body && gp.queries()[q].value;
      for (auto q : r.negativeQueries) body = body && !gp.queries()[q].value;
      if (body) {
        m[r.head] = true;
        changed = true;
      }
    }
  }
  return m;
}

/// Van Gelder's alternating fixpoint: true atoms are the least fixpoint of
/// the squared reduct operator, possibly-true atoms its image.
inline std::vector<sortedlp::Truth> alternatingFixpoint(const sortedlp::GroundProgram& gp) {
  std::vector<bool> under(gp.atoms().size(), false);
  for (;;) {
    const std::vector<bool> over = leastModelOfReduct(gp, under);
    const std::vector<bool> next = leastModelOfReduct(gp, over);
    if (next == under) {
      std::vector<sortedlp::Truth> out;
      for (std::size_t a = 0; a < under.size(); ++a) {
        out.push_back(under[a] ? sortedlp::Truth::True : over[a] ? sortedlp::Truth::Undefined : sortedlp::Truth::False);
      }
      return out;
    }
    under = next;
  }
}

/// The unique minimal model of a negation-free program, by enumerating all
/// subsets; nullopt if minimal models are not unique.
inline std::optional<std::set<std::uint32_t>> bruteMinimalModel(const sortedlp::GroundProgram& gp) {
  const std::size_t n = gp.atoms().size();
  std::set<std::uint32_t> best;
  std::size_t bestSize = n + 1;
  std::size_t minimalModels = 0;
  std::vector<std::uint32_t> models;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (const sortedlp::GroundRule& r : gp.rules()) {
      bool body = true;
      for (auto a : r.positive) body = body && (mask >> a & 1u);
      for (auto q : r.positiveQueries) body = body && gp.queries()[q].value;
      for (auto q : r.negativeQueries) body = body && !gp.queries()[q].value;
      if (body && !(mask >> r.head & 1u)) ok = false;
    }
    if (ok) models.push_back(mask);
  }
  for (std::uint32_t m : models) {
    bool minimal = true;
    for (std::uint32_t o : models) minimal = minimal && !(o != m && (o & m) == o);
    if (!minimal) continue;
    ++minimalModels;
    const auto size = static_cast<std::size_t>(__builtin_popcount(m));
    if (size < bestSize) {
      bestSize = size;
      best.clear();
      for (std::uint32_t a = 0; a < n; ++a) {
        if (m >> a & 1u) best.insert(a);
      }
    }
  }
  if (minimalModels != 1) return std::nullopt;
  return best;
}

}  // namespace testing
