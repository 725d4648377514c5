#include <doctest.h>

#include <fstream>
#include <random>

#include "sortedlp/session.hpp"
#include "support.hpp"

using namespace sortedlp;

namespace {

struct Run {
  std::string out;
  std::string err;
  int code = 0;
};

Run batch(SessionConfig config) {
  std::ostringstream out;
  std::ostringstream err;
  Session s(std::move(config), out, err);
  Run r;
  r.code = s.runBatch();
  r.out = out.str();
  r.err = err.str();
  return r;
}

Run batchScript(const std::filesystem::path& script) {
  SessionConfig c;
  c.scriptPaths = {script.string()};
  return batch(c);
}

Run repl(const std::string& input, SessionConfig config = {}) {
  std::ostringstream out;
  std::ostringstream err;
  Session s(std::move(config), out, err);
  std::istringstream in(input);
  Run r;
  r.code = s.repl(in);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("sortedlp-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::filesystem::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("discount script prints its three answers") {
  const Run r = batchScript(testing::dataDir() / "discount" / "discount.prova");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "?- discount(X:businessVoc2_Client, Y:math_Percentage).\n"
        "X = Adrian : businessVoc1_Customer, Y = 5 : math_Percentage\n"
        "X = Adrian : businessVoc1_Customer, Y = 2 : math_Percentage\n"
        "X = Aira : businessVoc1_Customer, Y = 2 : math_Percentage\n");
  CHECK(r.err.empty());
}

TEST_CASE("wine script prints the typed fact and the A-Box red wines") {
  const Run r = batchScript(testing::dataDir() / "wine" / "wine.prova");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "?- serve(X:vin_Wine).\n"
        "X = Chardonnay : vin_White_Wine\n"
        "X = vin_Merlot : vin_Red_Wine\n"
        "X = vin_Pinot_Noir : vin_Red_Wine\n");
}

TEST_CASE("ground yes, no and empty scripts") {
  TempDir dir;
  Run r = batchScript(dir.write("a.prova", "p(a).\n:- solve(p(a)).\n:- solve(p(b)).\n"));
  CHECK(r.code == 0);
  CHECK(r.out == "?- p(a).\nyes\n?- p(b).\nno\n");
  r = batchScript(dir.write("b.prova", "p(a).\n"));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
}

TEST_CASE("load failures exit with status 1 and name the problem") {
  TempDir dir;
  Run r = batchScript(dir.write("m.prova", "import(\"missing.nt\").\np(a).\n:- solve(p(a)).\n"));
  CHECK(r.code == 1);
  CHECK(contains(r.err, "missing.nt"));
  CHECK(r.out.empty());

  dir.write("onto.owl", "<rdf:RDF/>");
  r = batchScript(dir.write("o.prova", "import(\"onto.owl\").\n"));
  CHECK(r.code == 1);
  CHECK(contains(r.err, "convert the file to N-Triples"));

  r = batchScript(dir.write("u.prova", "import(\"http://example.org/x.nt\").\n"));
  CHECK(r.code == 1);

  r = batchScript(dir.write("s.prova", "p(a\n"));
  CHECK(r.code == 1);
  CHECK(contains(r.err, "s.prova"));
}

TEST_CASE("URL imports are served from the mirror directory") {
  TempDir dir;
  dir.write("wine.nt", testing::readText(testing::dataDir() / "wine" / "wine.nt"));
  const auto script = dir.write("w.prova",
                                "prefix(vin, \"http://example.org/wine#\").\n"
                                "import(\"http://example.org/ontologies/wine.nt\").\n"
                                ":- solve(wine(X:vin_Red_Wine)).\nwine(X:vin_Red_Wine).\n");
  SessionConfig c;
  c.scriptPaths = {script.string()};
  c.mirrorDir = dir.path.string();
  const Run r = batch(c);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "X = vin_Merlot : vin_Red_Wine"));
}

TEST_CASE("depth limit and floundering exit with status 2") {
  TempDir dir;
  SessionConfig c;
  c.scriptPaths = {dir.write("d.prova", "nat(z).\nnat(s(X)) :- nat(X).\n:- solve(nat(s(s(s(s(s(z))))))).\n").string()};
  c.maxDepth = 3;
  Run r = batch(c);
  CHECK(r.code == 2);
  CHECK(contains(r.out, "depth limit 3 reached"));

  r = batchScript(dir.write("f.prova", "p(X) :- not(q(X)).\n:- solve(p(X)).\n"));
  CHECK(r.code == 2);
  CHECK(contains(r.err, "floundering"));
}

TEST_CASE("oracle agreement and statistics lines") {
  SessionConfig c;
  c.scriptPaths = {(testing::dataDir() / "discount" / "discount.prova").string()};
  c.oracleCheck = true;
  c.statsOutput = true;
  const Run r = batch(c);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "% oracle agrees: 3 true, 0 undefined"));
  CHECK(contains(r.out, "% answers 3, resolution steps "));
}

TEST_CASE("repl answers goals and keeps going after errors") {
  SessionConfig c;
  c.scriptPaths = {(testing::dataDir() / "wine" / "wine.prova").string()};
  std::ostringstream out;
  std::ostringstream err;
  Session s(c, out, err);
  s.loadConfigured();
  std::istringstream in("foo(X:zz_T).\n:bogus\nserve(X:\n vin_Wine).\n:quit\nserve(X).\n");
  CHECK(s.repl(in) == 0);
  CHECK(out.str() ==
        "?- serve(X:vin_Wine).\n"
        "X = Chardonnay : vin_White_Wine\n"
        "X = vin_Merlot : vin_Red_Wine\n"
        "X = vin_Pinot_Noir : vin_Red_Wine\n");
  CHECK(contains(err.str(), "zz_T"));
  CHECK(contains(err.str(), "unknown command :bogus"));
}

TEST_CASE("repl loads scripts and ontologies on demand") {
  const std::filesystem::path wine = testing::dataDir() / "wine";
  const Run r = repl(":ontology " + (wine / "wine.nt").string() + "\n:load " + (wine / "wine.prova").string() +
                     "\nwine(X:vin_Rose_Wine).\nwine(vin_Merlot).\n");
  CHECK(contains(r.out, "?- wine(X:vin_Rose_Wine).\nno\n"));
  CHECK(contains(r.out, "?- wine(vin_Merlot).\nyes\n"));
  CHECK(r.err.empty());
  const Run bad = repl(":load /nonexistent/x.prova\np(a).\n");
  CHECK(contains(bad.err, "error:"));
  CHECK(contains(bad.out, "no"));
}

TEST_CASE("runs are byte-for-byte deterministic") {
  for (const auto& script : testing::goldenScripts()) {
    SessionConfig c;
    c.scriptPaths = {script.string()};
    c.oracleCheck = true;
    c.exhaustiveGrounding = true;
    const Run first = batch(c);
    const Run second = batch(c);
    CHECK(first.out == second.out);
    CHECK(first.err == second.err);
    CHECK(first.code == second.code);
  }
}

TEST_CASE("random input never escapes the error channel") {
  std::mt19937 rng(2024);
  const std::string alphabet = "abcXYZ_():-.,\"<>=\n %012345\\'/[]|!";
  for (int round = 0; round < 10000; ++round) {
    std::string text;
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 60)(rng);
    for (std::size_t i = 0; i < len; ++i) {
      text += round % 2 ? static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng))
                        : alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    std::ostringstream out;
    std::ostringstream err;
    SessionConfig c;
    c.maxDepth = 200;
    Session s(c, out, err);
    try {
      s.loadScriptText(text, std::filesystem::temp_directory_path() / "sortedlp-no-such-dir");
    } catch (const Error&) {
    }
    std::istringstream in(text);
    CHECK_NOTHROW(s.repl(in));
  }
}
