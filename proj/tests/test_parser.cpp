#include <doctest.h>

#include <filesystem>

#include "sortedlp/parser.hpp"
#include "sortedlp/type_registry.hpp"
#include "support.hpp"

using namespace sortedlp;
using testing::discountPrefixes;

namespace {

std::size_t countKind(const Script& s, Directive::Kind k) {
  std::size_t n = 0;
  for (const auto& d : s.directives) n += d.kind == k;
  return n;
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(testing::dataDir())) {
    if (e.path().extension() == ".prova") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::size_t errorColumn(std::string_view text, const PrefixTable& p) {
  try {
    parseQuery(text, p);
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

}  // namespace

TEST_CASE("typed constant fact from the wine listing") {
  PrefixTable p;
  p.declare("vin", "http://example.org/wine#");
  const Script s = parseProgram("wine(vin_White_Wine:Chardonnay).", p);
  REQUIRE(s.program.clauses.size() == 1);
  const Clause& c = s.program.clauses[0];
  REQUIRE(c.isFact());
  const Term& arg = c.head->args.at(0);
  CHECK(arg.isConstant());
  CHECK(arg.name().str() == "Chardonnay");
  CHECK(arg.type().iri() == "http://example.org/wine#White_Wine");
}

TEST_CASE("fact with an untyped variable") {
  PrefixTable p;
  const Script s = parseProgram("p(X).", p);
  REQUIRE(s.program.clauses.size() == 1);
  const Term& x = s.program.clauses[0].head->args.at(0);
  CHECK(x.isVariable());
  CHECK(x.type().isTop());
}

TEST_CASE("discount listing has six rules, two facts, one query and five directives") {
  PrefixTable p = discountPrefixes();
  const Script s = parseProgram(testing::readText(testing::dataDir() / "discount" / "listing.prova"), p);
  std::size_t rules = 0;
  std::size_t facts = 0;
  for (const auto& c : s.program.clauses) (c.isFact() ? facts : rules)++;
  CHECK(rules == 6);
  CHECK(facts == 2);
  CHECK(s.program.queries.size() == 1);
  CHECK(countKind(s, Directive::Kind::Import) == 4);
  CHECK(countKind(s, Directive::Kind::Reasoner) == 1);
  CHECK(s.directives[4].argument == "dl");
  CHECK(s.directives[0].argument == "http//../dl_typing/businessVocabulary1.owl");

  const Clause& gold = s.program.clauses[3];
  REQUIRE(gold.body.size() == 2);
  CHECK(gold.body[1].predicate.str() == ">");
  CHECK(gold.body[1].args[1].name().str() == "1000");
  CHECK(gold.body[1].args[1].type().iri() == "http://example.org/currencyVocabulary#Dollar");
}

TEST_CASE("queries with solve and eval") {
  const PrefixTable p = discountPrefixes();
  const Clause q = parseQuery(":-solve(discount(X:businessVoc1_Client, Y:math_Percentage)).", p);
  REQUIRE(q.isGoal());
  REQUIRE(q.body.size() == 1);
  std::vector<Var> vars;
  collectVariables(q.body[0], vars);
  CHECK(vars.size() == 2);
  CHECK(q.body[0].args[0].type().iri() == "http://example.org/businessVocabulary1#Client");
  CHECK(q.body[0].args[1].type().iri() == "http://example.org/mathVocabulary#Percentage");

  const Clause ground = parseQuery(":-solve(p(a)).", p);
  CHECK(ground.body.at(0).isGround());
  CHECK(parseQuery(":-eval(p(a)).", p) == ground);
  CHECK(parseQuery("p(a).", p) == ground);
}

TEST_CASE("malformed query reports the column where parsing stopped") {
  const PrefixTable p;
  CHECK_THROWS_AS(parseQuery("solve p(a", p), ParseError);
  CHECK(errorColumn("solve p(a", p) == 7);
  CHECK(errorColumn(":-solve(p(a)", p) == 13);
}

TEST_CASE("every unresolved prefix occurrence is reported") {
  PrefixTable p;
  p.declare("ok", "http://t.example/#");
  try {
    parseProgram("a(X:zz_T) :- b(X:zz_T).\nc(yy_U:k).\nd(ok_V:k).", p);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'zz_T' (line 1, column 5)") != std::string::npos);
    CHECK(msg.find("'zz_T' (line 1, column 18)") != std::string::npos);
    CHECK(msg.find("'yy_U' (line 2, column 3)") != std::string::npos);
    CHECK(msg.find("ok_V") == std::string::npos);
    CHECK(e.line() == 1);
  }
}

TEST_CASE("the listing query token needs its own prefix") {
  PrefixTable p = discountPrefixes();
  PrefixTable without;
  for (const auto& [abbrev, base] : p.entries()) {
    if (abbrev != "businessVoc") without.declare(abbrev, base);
  }
  const std::string text = testing::readText(testing::dataDir() / "discount" / "listing.prova");
  CHECK_THROWS_AS(parseProgram(text, without), ParseError);
}

TEST_CASE("prefix directives apply to later tokens only") {
  PrefixTable p;
  const Script s = parseProgram("prefix(ex, \"http://e.example/#\").\nq(ex_A:a).", p);
  CHECK(p.has("ex"));
  CHECK(s.program.clauses.at(0).head->args[0].type().iri() == "http://e.example/#A");
  PrefixTable q;
  CHECK_THROWS_AS(parseProgram("q(ex_A:a).\nprefix(ex, \"http://e.example/#\").", q), ParseError);
}

TEST_CASE("negations, comparisons and rdf calls") {
  PrefixTable p;
  p.declare("vin", "http://example.org/wine#");
  const Script s = parseProgram(
      "r(X) :- q(X), not(s(X)), neg(t(X)), X =< 3, X = a.\n"
      "w(S) :- rdf(\"./wine.owl\", \"rdfs\", S, \"rdf_type\", \"http://www.owl-ontologies.com/unnamed.owl#Wine\").\n"
      "neg(t(b)).",
      p);
  const Clause& r = s.program.clauses.at(0);
  REQUIRE(r.body.size() == 5);
  CHECK(r.body[1].defaultNegated);
  CHECK(r.body[2].negated);
  CHECK(isComparisonPredicate(r.body[3].predicate));
  CHECK(r.body[4].predicate.str() == "=");
  CHECK(s.program.clauses.at(1).body.at(0).arity() == 5);
  CHECK(s.program.clauses.at(2).head->negated);
  CHECK_THROWS_AS(parseProgram("not(p(a)).", p), ParseError);
  CHECK_THROWS_AS(parseProgram("a > b.", p), ParseError);
}

TEST_CASE("reasoner names outside the known list are rejected") {
  PrefixTable p;
  CHECK_NOTHROW(parseProgram("reasoner(\"swrl\").", p));
  CHECK_NOTHROW(parseProgram("reasoner(\"\").", p));
  CHECK_THROWS_AS(parseProgram("reasoner(\"pellet\").", p), ParseError);
}

TEST_CASE("a variable carries one annotation per clause") {
  PrefixTable p;
  p.declare("t", "http://t.example/#");
  const Script s = parseProgram("a(X:t_A) :- b(X), c(X:t_A).", p);
  CHECK(s.program.clauses[0].body[0].args[0].type().iri() == "http://t.example/#A");
  CHECK_THROWS_AS(parseProgram("a(X:t_A) :- b(X:t_B).", p), ParseError);
  CHECK_NOTHROW(parseProgram("a(X:t_A).\nb(X:t_B).", p));
}

TEST_CASE("parse, print and parse again gives the same script") {
  const auto files = corpus();
  REQUIRE(files.size() >= 15);
  for (const auto& f : files) {
    CAPTURE(f.string());
    PrefixTable p = discountPrefixes();
    const Script first = parseProgram(testing::readText(f), p);
    const std::string printed = printScript(first, p);
    PrefixTable again = discountPrefixes();
    const Script second = parseProgram(printed, again);
    CHECK(first.program == second.program);
    CHECK(first.directives == second.directives);
    CHECK(printScript(second, again) == printed);
  }
}

TEST_CASE("rdf query shapes survive a print round trip") {
  PrefixTable p;
  for (const char* q : {
           "rdf(\"./examples/function_tests/owl/testdata/WineProjectOWL.owl\", \"rdfs\", Subject, \"rdf_type\", "
           "\"http://www.owl-ontologies.com/unnamed.owl#Wine\").",
           "rdf(\"./rules/function_tests/owl/testdata/WineProjectOWL.owl\", \"transitive\", Subject, "
           "\"rdfs_subClassOf\", \"default_Wine\").",
       }) {
    const Clause goal = parseQuery(q, p);
    CHECK(parseQuery(printClause(goal, p), p) == goal);
  }
}

TEST_CASE("program types are checked against the registry") {
  testing::Ontology o;
  o.cls("A").cls("B").disjoint("A", "B").instance("x", "A");
  TypeRegistry r;
  r.prefixes().declare("t", "http://t.example/#");
  r.loadNTriples(o.text());
  PrefixTable& p = r.prefixes();
  CHECK_NOTHROW(checkProgramTypes(parseProgram("q(t_A:k). q(X:t_A) :- w(X).", p).program, r));
  CHECK_THROWS_AS(checkProgramTypes(parseProgram("q(t_Nope:k).", p).program, r), UnknownTypeError);
  CHECK_THROWS_AS(checkProgramTypes(parseProgram("q(t_B:t_x).", p).program, r), InconsistencyError);
  CHECK_THROWS_AS(checkProgramTypes(parseProgram("q(t_A:k). w(t_B:k).", p).program, r), InconsistencyError);
}
