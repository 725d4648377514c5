#include "sortedlp/type_registry.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>

#include "sortedlp/ntriples.hpp"

namespace sortedlp {
namespace {

constexpr std::uint32_t kTopIndex = 0;
constexpr std::uint32_t kBottomIndex = 1;

const std::string kRdfType = std::string(kRdfNs) + "type";
const std::string kRdfsSubClassOf = std::string(kRdfsNs) + "subClassOf";
const std::string kRdfsClass = std::string(kRdfsNs) + "Class";
const std::string kRdfsResource = std::string(kRdfsNs) + "Resource";
const std::string kOwlClass = std::string(kOwlNs) + "Class";
const std::string kOwlThing = std::string(kOwlNs) + "Thing";
const std::string kOwlNamedIndividual = std::string(kOwlNs) + "NamedIndividual";
const std::string kOwlEquivalentClass = std::string(kOwlNs) + "equivalentClass";
const std::string kOwlDisjointWith = std::string(kOwlNs) + "disjointWith";
const std::string kOwlSameAs = std::string(kOwlNs) + "sameAs";

std::atomic<std::uint64_t> gMaxLowerQueries{0};

bool inVocabularyNamespace(const std::string& iri) {
  auto starts = [&](std::string_view ns) { return iri.compare(0, ns.size(), ns) == 0; };
  return starts(kRdfNs) || starts(kRdfsNs) || starts(kOwlNs);
}

// Tarjan's SCC algorithm without recursion. Components are numbered in
// emission order: every component reachable from c gets a smaller number.
std::vector<std::uint32_t> stronglyConnected(const std::vector<std::vector<std::uint32_t>>& succ,
                                             std::uint32_t& count) {
  const std::size_t n = succ.size();
  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<bool> onStack(n, false);
  std::vector<std::uint32_t> comp(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> work;
  int next = 0;
  count = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    work.emplace_back(root, 0);
    while (!work.empty()) {
      auto& [v, edge] = work.back();
      if (edge == 0 && index[v] == -1) {
        index[v] = low[v] = next++;
        stack.push_back(v);
        onStack[v] = true;
      }
      if (edge < succ[v].size()) {
        const std::uint32_t w = succ[v][edge++];
        if (index[w] == -1) {
          work.emplace_back(w, 0);
        } else if (onStack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        while (true) {
          const std::uint32_t w = stack.back();
          stack.pop_back();
          onStack[w] = false;
          comp[w] = count;
          if (w == v) break;
        }
        ++count;
      }
      const std::uint32_t finished = v;
      work.pop_back();
      if (!work.empty()) {
        const std::uint32_t parent = work.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

std::uint32_t findRoot(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::optional<ReasonerMode> classifyReasonerMode(std::string_view name) {
  if (name.empty() || name == "empty" || name == "null") return ReasonerMode{true, ReasonerLevel::None};
  if (name == "transitive") return ReasonerMode{true, ReasonerLevel::Transitive};
  if (name == "rdfs" || name == "owl" || name == "dl" || name == "default") {
    return ReasonerMode{true, ReasonerLevel::Full};
  }
  if (name == "daml" || name == "swrl" || name == "rdfs_full" || name == "rdfs_simple" || name == "owl_mini" ||
      name == "owl_micro") {
    return ReasonerMode{false, ReasonerLevel::Full};
  }
  return std::nullopt;
}

std::uint32_t TypeRegistry::Axioms::classId(const std::string& iri, bool mention, std::size_t& fresh) {
  auto it = classIndex.find(iri);
  std::uint32_t id;
  if (it == classIndex.end()) {
    id = static_cast<std::uint32_t>(classIris.size());
    classIris.push_back(iri);
    classIndex.emplace(iri, id);
    classMentioned.push_back(false);
    ++fresh;
  } else {
    id = it->second;
    if (mention && !classMentioned[id] && id <= kBottomIndex) ++fresh;
  }
  if (mention) classMentioned[id] = true;
  return id;
}

std::uint32_t TypeRegistry::Axioms::individualId(const std::string& iri, std::size_t& fresh) {
  auto it = individualIndex.find(iri);
  if (it != individualIndex.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(individualIris.size());
  individualIris.push_back(iri);
  individualIndex.emplace(iri, id);
  ++fresh;
  return id;
}

TypeRegistry::TypeRegistry() {
  std::size_t ignored = 0;
  axioms_.classId(std::string(kTopIri), false, ignored);
  axioms_.classId(std::string(kBottomIri), false, ignored);
  closure_ = materialize(axioms_);
}

LoadReport TypeRegistry::loadOntology(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return loadNTriples(buffer.str());
}

LoadReport TypeRegistry::loadNTriples(std::string_view text) {
  if (frozen_) throw Error("type registry is frozen; reload required to change ontologies");
  const std::vector<NTriple> parsed = parseNTriples(text);

  Axioms next = axioms_;
  LoadReport report;
  for (const NTriple& t : parsed) {
    ++report.triples;
    next.asserted.push_back(RdfTriple{t.subject.value, t.predicate.value, t.object.value,
                                      t.object.kind == RdfNode::Kind::Literal});
    if (!t.subject.isIri() || !t.object.isIri()) continue;
    const std::string& s = t.subject.value;
    const std::string& p = t.predicate.value;
    const std::string& o = t.object.value;
    if (p == kRdfType) {
      if (o == kOwlClass || o == kRdfsClass) {
        next.classId(s, true, report.classes);
        ++report.axioms;
      } else if (o == kOwlNamedIndividual) {
        next.individualId(s, report.individuals);
        ++report.axioms;
      } else if (!inVocabularyNamespace(o) || o == kOwlThing || o == kRdfsResource) {
        const auto ind = next.individualId(s, report.individuals);
        const auto cls = next.classId(o, true, report.classes);
        next.typeAssertions.emplace_back(ind, cls);
        ++report.axioms;
      }
    } else if (p == kRdfsSubClassOf || p == kOwlEquivalentClass || p == kOwlDisjointWith) {
      const auto a = next.classId(s, true, report.classes);
      const auto b = next.classId(o, true, report.classes);
      if (p == kRdfsSubClassOf) {
        next.subClass.emplace_back(a, b);
      } else if (p == kOwlEquivalentClass) {
        next.equivalentClass.emplace_back(a, b);
      } else {
        next.disjoint.emplace_back(a, b);
      }
      ++report.axioms;
    } else if (p == kOwlSameAs) {
      const auto a = next.individualId(s, report.individuals);
      const auto b = next.individualId(o, report.individuals);
      next.sameAs.emplace_back(a, b);
      ++report.axioms;
    }
  }
  Closure c = materialize(next);
  axioms_ = std::move(next);
  closure_ = std::move(c);
  return report;
}

TypeRegistry::Closure TypeRegistry::materialize(const Axioms& ax) {
  const std::size_t n = ax.classIris.size();
  std::vector<std::vector<std::uint32_t>> asserted(n);
  for (auto [a, b] : ax.subClass) asserted[a].push_back(b);
  for (auto [a, b] : ax.equivalentClass) {
    asserted[a].push_back(b);
    asserted[b].push_back(a);
  }
  std::vector<std::vector<std::uint32_t>> succ = asserted;
  for (std::uint32_t c = 0; c < n; ++c) {
    if (c != kTopIndex) succ[c].push_back(kTopIndex);
    if (c != kBottomIndex) succ[kBottomIndex].push_back(c);
  }
  for (const std::string& alias : {kOwlThing, kRdfsResource}) {
    if (auto it = ax.classIndex.find(alias); it != ax.classIndex.end()) succ[kTopIndex].push_back(it->second);
  }

  Closure cl;
  std::uint32_t count = 0;
  cl.component = stronglyConnected(succ, count);
  cl.representative.assign(count, std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t c = 0; c < n; ++c) {
    auto& rep = cl.representative[cl.component[c]];
    if (rep == std::numeric_limits<std::uint32_t>::max()) {
      rep = c;
    } else if (rep > kBottomIndex && (c <= kBottomIndex || ax.classIris[c] < ax.classIris[rep])) {
      rep = c;
    }
  }

  std::vector<std::vector<std::uint32_t>> membersOf(count);
  for (std::uint32_t c = 0; c < n; ++c) membersOf[cl.component[c]].push_back(c);

  cl.above.assign(count, boost::dynamic_bitset<>(count));
  cl.direct.assign(count, boost::dynamic_bitset<>(count));
  for (std::uint32_t comp = 0; comp < count; ++comp) {
    auto& up = cl.above[comp];
    up.set(comp);
    cl.direct[comp].set(comp);
    for (std::uint32_t m : membersOf[comp]) {
      for (std::uint32_t s : succ[m]) {
        const std::uint32_t sc = cl.component[s];
        if (sc != comp) up |= cl.above[sc];
      }
      for (std::uint32_t s : asserted[m]) cl.direct[comp].set(cl.component[s]);
    }
  }

  // sameAs cells, represented by their smallest IRI.
  const std::size_t ni = ax.individualIris.size();
  std::vector<std::uint32_t> parent(ni);
  std::iota(parent.begin(), parent.end(), 0u);
  for (auto [a, b] : ax.sameAs) {
    const auto ra = findRoot(parent, a);
    const auto rb = findRoot(parent, b);
    if (ra != rb) parent[ra] = rb;
  }
  cl.cell.resize(ni);
  std::vector<std::uint32_t> best(ni, std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t i = 0; i < ni; ++i) {
    const auto r = findRoot(parent, i);
    if (best[r] == std::numeric_limits<std::uint32_t>::max() || ax.individualIris[i] < ax.individualIris[best[r]]) {
      best[r] = i;
    }
  }
  std::vector<std::vector<std::uint32_t>> cellMembers(ni);
  for (std::uint32_t i = 0; i < ni; ++i) {
    cl.cell[i] = best[findRoot(parent, i)];
    cellMembers[cl.cell[i]].push_back(i);
  }

  cl.members.assign(count, boost::dynamic_bitset<>(ni));
  cl.assertedMembers.assign(count, boost::dynamic_bitset<>(ni));
  std::vector<boost::dynamic_bitset<>> cellTypes(ni, boost::dynamic_bitset<>(count));
  for (auto [ind, cls] : ax.typeAssertions) {
    const auto comp = cl.component[cls];
    cl.assertedMembers[comp].set(ind);
    cellTypes[cl.cell[ind]] |= cl.above[comp];
  }
  for (std::uint32_t rep = 0; rep < ni; ++rep) {
    if (cellMembers[rep].empty()) continue;
    const auto& types = cellTypes[rep];
    for (auto comp = types.find_first(); comp != boost::dynamic_bitset<>::npos; comp = types.find_next(comp)) {
      for (std::uint32_t m : cellMembers[rep]) cl.members[comp].set(m);
    }
  }

  for (auto [a, b] : ax.disjoint) {
    const auto ca = cl.component[a];
    const auto cb = cl.component[b];
    if (ca == cb) {
      throw InconsistencyError("classes <" + ax.classIris[a] + "> and <" + ax.classIris[b] +
                               "> are declared disjoint but are equivalent");
    }
    const auto both = cl.members[ca] & cl.members[cb];
    if (const auto i = both.find_first(); i != boost::dynamic_bitset<>::npos) {
      throw InconsistencyError("individual <" + ax.individualIris[i] + "> is an instance of disjoint classes <" +
                               ax.classIris[a] + "> and <" + ax.classIris[b] + ">");
    }
  }

  std::vector<RdfTriple> transitive = ax.asserted;
  const std::string subClassOf = kRdfsSubClassOf;
  for (std::uint32_t a = 0; a < n; ++a) {
    if (!ax.classMentioned[a]) continue;
    for (std::uint32_t b = 0; b < n; ++b) {
      if (a == b || !ax.classMentioned[b]) continue;
      if (cl.above[cl.component[a]].test(cl.component[b])) {
        transitive.push_back(RdfTriple{ax.classIris[a], subClassOf, ax.classIris[b], false});
      }
    }
  }
  std::vector<RdfTriple> full = transitive;
  for (std::uint32_t a = 0; a < n; ++a) {
    if (!ax.classMentioned[a]) continue;
    for (std::uint32_t b = 0; b < n; ++b) {
      if (a != b && ax.classMentioned[b] && cl.component[a] == cl.component[b]) {
        full.push_back(RdfTriple{ax.classIris[a], kOwlEquivalentClass, ax.classIris[b], false});
      }
    }
    for (std::uint32_t i = 0; i < ni; ++i) {
      if (cl.members[cl.component[a]].test(i)) {
        full.push_back(RdfTriple{ax.individualIris[i], kRdfType, ax.classIris[a], false});
      }
    }
  }
  for (auto [a, b] : ax.disjoint) {
    full.push_back(RdfTriple{ax.classIris[a], kOwlDisjointWith, ax.classIris[b], false});
    full.push_back(RdfTriple{ax.classIris[b], kOwlDisjointWith, ax.classIris[a], false});
  }
  for (std::uint32_t i = 0; i < ni; ++i) {
    for (std::uint32_t j = 0; j < ni; ++j) {
      if (i != j && cl.cell[i] == cl.cell[j]) {
        full.push_back(RdfTriple{ax.individualIris[i], kOwlSameAs, ax.individualIris[j], false});
      }
    }
  }
  auto normalize = [](std::vector<RdfTriple>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  normalize(transitive);
  normalize(full);
  cl.transitiveView = std::move(transitive);
  cl.fullView = std::move(full);
  return cl;
}

void TypeRegistry::setLevel(ReasonerLevel level) {
  if (frozen_) throw Error("type registry is frozen; reasoner level cannot change");
  level_ = level;
}

std::uint32_t TypeRegistry::componentOf(TypeRef t) const {
  auto it = axioms_.classIndex.find(std::string(t.iri()));
  if (it == axioms_.classIndex.end()) throw UnknownTypeError(std::string(t.iri()));
  return closure_.component[it->second];
}

std::optional<std::uint32_t> TypeRegistry::individualOf(std::string_view iri) const {
  auto it = axioms_.individualIndex.find(std::string(iri));
  if (it == axioms_.individualIndex.end()) return std::nullopt;
  return it->second;
}

bool TypeRegistry::knows(TypeRef t) const { return axioms_.classIndex.count(std::string(t.iri())) != 0; }

bool TypeRegistry::isIndividual(std::string_view iri) const { return individualOf(iri).has_value(); }

bool TypeRegistry::isSubtypeOf(TypeRef t1, TypeRef t2, QueryTally* tally) const {
  ++subsumptionQueries_;
  if (tally) ++tally->subsumption;
  const auto c1 = componentOf(t1);
  const auto c2 = componentOf(t2);
  if (c1 == c2 || c2 == closure_.component[kTopIndex] || c1 == closure_.component[kBottomIndex]) return true;
  if (level_ == ReasonerLevel::None) return closure_.direct[c1].test(c2);
  return closure_.above[c1].test(c2);
}

bool TypeRegistry::equivalent(TypeRef t1, TypeRef t2, QueryTally* tally) const {
  return isSubtypeOf(t1, t2, tally) && isSubtypeOf(t2, t1, tally);
}

TypeRef TypeRegistry::lower(TypeRef t1, TypeRef t2, QueryTally* tally) const {
  if (t1.isTop()) return t2;
  if (t2.isTop()) return t1;
  if (t1 == t2) return t1;
  QueryTally local;
  TypeRef result = TypeRef::bottom();
  if (isSubtypeOf(t1, t2, &local)) {
    result = t1;
  } else if (isSubtypeOf(t2, t1, &local)) {
    result = t2;
  }
  std::uint64_t seen = gMaxLowerQueries.load();
  while (local.subsumption > seen && !gMaxLowerQueries.compare_exchange_weak(seen, local.subsumption)) {
  }
  if (tally) *tally += local;
  return result;
}

std::uint64_t TypeRegistry::maxLowerQueries() { return gMaxLowerQueries.load(); }

bool TypeRegistry::isInstanceOf(std::string_view individual, TypeRef t, QueryTally* tally) const {
  ++instanceQueries_;
  if (tally) ++tally->instance;
  const auto c = componentOf(t);
  const auto ind = individualOf(individual);
  if (!ind) return false;
  if (c == closure_.component[kBottomIndex]) return false;
  if (c == closure_.component[kTopIndex]) return true;
  if (level_ == ReasonerLevel::Full) return closure_.members[c].test(*ind);
  return closure_.assertedMembers[c].test(*ind);
}

std::vector<std::string> TypeRegistry::instancesOf(TypeRef t, QueryTally* tally) const {
  ++instanceQueries_;
  if (tally) ++tally->instance;
  const auto c = componentOf(t);
  std::vector<std::string> out;
  if (c == closure_.component[kBottomIndex]) return out;
  const bool everything = c == closure_.component[kTopIndex];
  const auto& bits = level_ == ReasonerLevel::Full ? closure_.members[c] : closure_.assertedMembers[c];
  for (std::uint32_t i = 0; i < axioms_.individualIris.size(); ++i) {
    if (everything || bits.test(i)) out.push_back(axioms_.individualIris[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool TypeRegistry::sameIndividual(std::string_view a, std::string_view b) const {
  if (a == b) return true;
  if (level_ != ReasonerLevel::Full) return false;
  const auto ia = individualOf(a);
  const auto ib = individualOf(b);
  return ia && ib && closure_.cell[*ia] == closure_.cell[*ib];
}

std::string TypeRegistry::canonicalIndividual(std::string_view iri) const {
  if (level_ == ReasonerLevel::Full) {
    if (const auto i = individualOf(iri)) return axioms_.individualIris[closure_.cell[*i]];
  }
  return std::string(iri);
}

TypeRef TypeRegistry::canonicalType(TypeRef t) const {
  const auto c = componentOf(t);
  if (c == closure_.component[kTopIndex]) return TypeRef::top();
  if (c == closure_.component[kBottomIndex]) return TypeRef::bottom();
  return TypeRef(axioms_.classIris[closure_.representative[c]]);
}

bool TypeRegistry::areDisjoint(TypeRef t1, TypeRef t2) const {
  const auto c1 = componentOf(t1);
  const auto c2 = componentOf(t2);
  for (auto [a, b] : axioms_.disjoint) {
    const auto ca = closure_.component[a];
    const auto cb = closure_.component[b];
    if ((closure_.above[c1].test(ca) && closure_.above[c2].test(cb)) ||
        (closure_.above[c1].test(cb) && closure_.above[c2].test(ca))) {
      return true;
    }
  }
  return false;
}

std::vector<TypeRef> TypeRegistry::assertedTypes(std::string_view individual) const {
  std::vector<TypeRef> out;
  const auto ind = individualOf(individual);
  if (!ind) return out;
  for (auto [i, c] : axioms_.typeAssertions) {
    if (i == *ind) out.emplace_back(axioms_.classIris[c]);
  }
  std::sort(out.begin(), out.end(), [](TypeRef a, TypeRef b) { return a.iri() < b.iri(); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<TypeRef> TypeRegistry::classes() const {
  std::vector<TypeRef> out;
  out.reserve(axioms_.classIris.size());
  for (const auto& iri : axioms_.classIris) out.emplace_back(iri);
  return out;
}

std::vector<std::string> TypeRegistry::individuals() const {
  std::vector<std::string> out = axioms_.individualIris;
  std::sort(out.begin(), out.end());
  return out;
}

void TypeRegistry::declareFunctionSort(Symbol functor, std::size_t arity, std::vector<TypeRef> argTypes,
                                       TypeRef result) {
  if (argTypes.size() != arity) {
    throw Error("sort declaration for " + std::string(functor.str()) + "/" + std::to_string(arity) + " lists " +
                std::to_string(argTypes.size()) + " argument types");
  }
  for (TypeRef t : argTypes) {
    if (!knows(t)) throw UnknownTypeError(std::string(t.iri()));
  }
  if (!knows(result)) throw UnknownTypeError(std::string(result.iri()));
  FunctionSort sort{std::move(argTypes), result};
  auto [it, inserted] = functionSorts_.emplace(std::make_pair(functor, arity), sort);
  if (!inserted && !(it->second == sort)) {
    throw Error("conflicting sort redeclaration for " + std::string(functor.str()) + "/" + std::to_string(arity));
  }
}

const FunctionSort* TypeRegistry::functionSort(Symbol functor, std::size_t arity) const {
  auto it = functionSorts_.find(std::make_pair(functor, arity));
  return it == functionSorts_.end() ? nullptr : &it->second;
}

TypeRef TypeRegistry::typeOf(const Term& t) const {
  if (t.isCompound()) {
    if (const FunctionSort* fs = functionSort(t.name(), t.arity())) return fs->result;
  }
  return t.type();
}

const std::vector<RdfTriple>& TypeRegistry::triples(RdfView view) const {
  switch (view) {
    case RdfView::Asserted:
      return axioms_.asserted;
    case RdfView::Transitive:
      return closure_.transitiveView;
    case RdfView::Full:
      return closure_.fullView;
  }
  return axioms_.asserted;
}

std::uint64_t TypeRegistry::queryCount() const { return subsumptionQueries_.load() + instanceQueries_.load(); }

}  // namespace sortedlp
