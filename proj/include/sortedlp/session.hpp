#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sortedlp/parser.hpp"
#include "sortedlp/solver.hpp"
#include "sortedlp/type_registry.hpp"
#include "sortedlp/wfs.hpp"

namespace sortedlp {

struct SessionConfig {
  std::vector<std::string> scriptPaths;
  std::vector<std::string> ontologyPaths;
  bool repl = false;
  std::size_t maxDepth = 10000;
  std::optional<std::size_t> maxAnswers;
  bool oracleCheck = false;
  bool statsOutput = false;
  bool exhaustiveGrounding = false;
  /// Script whose directives run before anything else.
  std::optional<std::string> prefixFile;
  /// Local copies of ontologies imported by URL, looked up by file name.
  std::optional<std::string> mirrorDir;
};

/// Exit status of a batch run or a single query.
enum class Outcome { Ok = 0, Error = 1, Incomplete = 2 };

/// One loaded knowledge base: merged ontologies, accumulated clauses and the
/// options that drive query execution. Output goes to `out`, diagnostics to
/// `err`.
class Session {
 public:
  Session(SessionConfig config, std::ostream& out, std::ostream& err);
  ~Session();

  /// Loads the prefix file, ontologies and scripts of the configuration.
  /// Returns the embedded queries of the scripts. Throws Error.
  std::vector<Clause> loadConfigured();

  /// loadConfigured() followed by every embedded query. Returns the process
  /// exit code.
  int runBatch();

  /// Runs goals in order; the exit code is 1 if any failed with an error,
  /// else 2 if any was cut short, else 0.
  int runQueries(const std::vector<Clause>& goals);

  /// Reads goals terminated by `.` and `:`-commands until `:quit` or end of
  /// input. Errors are reported per input.
  int repl(std::istream& in, bool prompt = false);

  /// Merges an N-Triples file into the registry.
  void loadOntology(const std::filesystem::path& path);
  /// Parses a script, executes its directives and adds its clauses. Returns
  /// the embedded queries.
  std::vector<Clause> loadScript(const std::filesystem::path& path);
  std::vector<Clause> loadScriptText(const std::string& text, const std::filesystem::path& baseDir);

  /// Solves one goal and prints its answers.
  Outcome runQuery(const Clause& goal);

  /// Resolves `rdf/5` source arguments against the loaded ontologies.
  SourceResolver sourceResolver() const;

  const Program& program() const { return program_; }
  const TypeRegistry& registry() const { return *registry_; }
  PrefixTable& prefixes() { return registry_->prefixes(); }
  SessionConfig& config() { return config_; }

 private:
  struct OntologySource {
    std::string text;
    std::vector<std::string> names;
  };

  void executeDirective(const Directive& d, const std::filesystem::path& baseDir);
  std::filesystem::path resolveImport(const std::string& location, const std::filesystem::path& baseDir) const;
  void addOntology(std::string text, std::vector<std::string> names);
  void rebuildRegistry();
  void prepareForQueries();
  void checkAgainstOracle(const Clause& goal, const std::vector<QueryAnswer>& answers, Outcome& outcome);
  std::string formatAnswer(const QueryAnswer& answer) const;
  void replCommand(const std::string& line, bool& quit);

  SessionConfig config_;
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<TypeRegistry> registry_;
  std::vector<OntologySource> ontologies_;
  std::optional<ReasonerLevel> level_;
  std::vector<Directive> sorts_;
  bool sortsDeclared_ = false;
  Program program_;

  std::uint64_t queriesRun_ = 0;
  std::uint64_t totalSteps_ = 0;
  std::uint64_t totalRegistryQueries_ = 0;
};

}  // namespace sortedlp
