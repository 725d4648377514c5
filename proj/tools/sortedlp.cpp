#include <cstdlib>
#include <iostream>

#include <unistd.h>

#include <CLI11.hpp>

#include "sortedlp/session.hpp"

int main(int argc, char** argv) {
  sortedlp::SessionConfig config;
  std::size_t maxAnswers = 0;
  std::string prefixFile;
  std::string mirror;

  CLI::App app{"Order-sorted logic programs typed by RDFS/OWL taxonomies"};
  app.add_option("--script", config.scriptPaths, "Script to load and run (repeatable)")->check(CLI::ExistingFile);
  app.add_option("--ontology", config.ontologyPaths, "N-Triples ontology to load first (repeatable)")
      ->check(CLI::ExistingFile);
  app.add_flag("--repl", config.repl, "Read goals interactively after loading");
  app.add_option("--max-depth", config.maxDepth, "Derivation depth limit")->check(CLI::PositiveNumber);
  app.add_option("--max-answers", maxAnswers, "Stop each query after N answers")->check(CLI::PositiveNumber);
  app.add_flag("--oracle", config.oracleCheck, "Cross-check answers against the well-founded model");
  app.add_flag("--stats", config.statsOutput, "Print search statistics after each query");
  app.add_flag("--exhaustive-grounding", config.exhaustiveGrounding,
               "Ground every rule for the oracle, not only those relevant to the goal");
  app.add_option("--prefix-file", prefixFile, "Prefix declarations loaded before everything else")
      ->envname("SORTEDLP_PREFIX_FILE");
  app.add_option("--mirror", mirror, "Directory holding local copies of ontologies imported by URL")
      ->envname("SORTEDLP_MIRROR_DIR");
  CLI11_PARSE(app, argc, argv);

  if (maxAnswers > 0) config.maxAnswers = maxAnswers;
  if (!prefixFile.empty()) config.prefixFile = prefixFile;
  if (!mirror.empty()) config.mirrorDir = mirror;
  if (config.scriptPaths.empty() && !config.repl) {
    std::cerr << "nothing to do: pass --script or --repl (see --help)\n";
    return 1;
  }

  sortedlp::Session session(config, std::cout, std::cerr);
  if (!config.repl) return session.runBatch();

  try {
    const auto queries = session.loadConfigured();
    session.runQueries(queries);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return session.repl(std::cin, isatty(STDIN_FILENO) != 0);
}
