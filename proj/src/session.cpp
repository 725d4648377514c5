#include "sortedlp/session.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/algorithm/string/predicate.hpp>
#include <boost/algorithm/string/trim.hpp>

#include "sortedlp/errors.hpp"

namespace sortedlp {
namespace fs = std::filesystem;

namespace {

std::string readFile(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(std::string("cannot open ") + what + " " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool isUrl(const std::string& location) {
  return location.find("://") != std::string::npos || boost::algorithm::starts_with(location, "http");
}

bool isRdfXml(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".owl" || ext == ".rdf" || ext == ".xml";
}

void requireNTriples(const fs::path& path) {
  if (isRdfXml(path)) {
    throw Error(path.string() +
                ": RDF/XML ontologies are not supported; convert the file to N-Triples (.nt), e.g. with "
                "`riot --output=ntriples`");
  }
}

}  // namespace

Session::Session(SessionConfig config, std::ostream& out, std::ostream& err)
    : config_(std::move(config)), out_(out), err_(err), registry_(std::make_unique<TypeRegistry>()) {}

Session::~Session() = default;

std::vector<Clause> Session::loadConfigured() {
  if (config_.prefixFile) loadScript(*config_.prefixFile);
  for (const std::string& path : config_.ontologyPaths) loadOntology(path);
  std::vector<Clause> queries;
  for (const std::string& path : config_.scriptPaths) {
    std::vector<Clause> q = loadScript(path);
    queries.insert(queries.end(), q.begin(), q.end());
  }
  prepareForQueries();
  return queries;
}

int Session::runBatch() {
  std::vector<Clause> queries;
  try {
    queries = loadConfigured();
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return static_cast<int>(Outcome::Error);
  }
  return runQueries(queries);
}

int Session::runQueries(const std::vector<Clause>& goals) {
  bool error = false;
  bool incomplete = false;
  for (const Clause& goal : goals) {
    const Outcome o = runQuery(goal);
    error |= o == Outcome::Error;
    incomplete |= o == Outcome::Incomplete;
  }
  if (error) return static_cast<int>(Outcome::Error);
  return static_cast<int>(incomplete ? Outcome::Incomplete : Outcome::Ok);
}

void Session::loadOntology(const fs::path& path) {
  requireNTriples(path);
  std::string text = readFile(path, "ontology");
  std::vector<std::string> names{path.string(), path.filename().string(), path.stem().string()};
  try {
    addOntology(std::move(text), std::move(names));
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void Session::addOntology(std::string text, std::vector<std::string> names) {
  if (registry_->frozen()) rebuildRegistry();
  registry_->loadNTriples(text);
  ontologies_.push_back(OntologySource{std::move(text), std::move(names)});
}

void Session::rebuildRegistry() {
  auto fresh = std::make_unique<TypeRegistry>();
  fresh->prefixes() = registry_->prefixes();
  for (const OntologySource& o : ontologies_) fresh->loadNTriples(o.text);
  if (level_) fresh->setLevel(*level_);
  registry_ = std::move(fresh);
}

std::vector<Clause> Session::loadScript(const fs::path& path) {
  const std::string text = readFile(path, "script");
  try {
    return loadScriptText(text, path.parent_path());
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::vector<Clause> Session::loadScriptText(const std::string& text, const fs::path& baseDir) {
  Script script = parseProgram(text, registry_->prefixes());
  for (const Directive& d : script.directives) executeDirective(d, baseDir);
  program_.clauses.insert(program_.clauses.end(), script.program.clauses.begin(), script.program.clauses.end());
  return std::move(script.program.queries);
}

void Session::executeDirective(const Directive& d, const fs::path& baseDir) {
  switch (d.kind) {
    case Directive::Kind::Import: {
      const fs::path path = resolveImport(d.argument, baseDir);
      requireNTriples(path);
      std::string text = readFile(path, "ontology");
      try {
        addOntology(std::move(text), {d.argument, path.string(), path.filename().string(), path.stem().string()});
      } catch (const ParseError& e) {
        throw Error(path.string() + ": " + e.what());
      }
      break;
    }
    case Directive::Kind::Reasoner: {
      const auto mode = classifyReasonerMode(d.argument);
      if (!mode) throw Error("line " + std::to_string(d.line) + ": unknown reasoner \"" + d.argument + "\"");
      if (!mode->executable) throw UnsupportedReasonerError(d.argument);
      level_ = mode->level;
      if (registry_->frozen()) rebuildRegistry();
      registry_->setLevel(mode->level);
      break;
    }
    case Directive::Kind::Prefix:
      break;
    case Directive::Kind::Sort:
      sorts_.push_back(d);
      break;
  }
}

fs::path Session::resolveImport(const std::string& location, const fs::path& baseDir) const {
  if (isUrl(location)) {
    const auto slash = location.find_last_of('/');
    const std::string file = slash == std::string::npos ? location : location.substr(slash + 1);
    if (!config_.mirrorDir) {
      throw Error("cannot import " + location +
                  ": network fetching is not supported; place " + file +
                  " in a mirror directory (--mirror or SORTEDLP_MIRROR_DIR)");
    }
    return fs::path(*config_.mirrorDir) / file;
  }
  fs::path p(location);
  if (p.is_relative() && !baseDir.empty()) p = baseDir / p;
  return p;
}

void Session::prepareForQueries() {
  for (const Directive& d : sorts_) registry_->declareFunctionSort(d.functor, d.arity, d.argumentTypes, d.result);
  checkProgramTypes(program_, *registry_);
  registry_->freeze();
}

SourceResolver Session::sourceResolver() const {
  return [this](std::string_view source) -> const TypeRegistry* {
    for (const OntologySource& o : ontologies_) {
      if (std::find(o.names.begin(), o.names.end(), source) != o.names.end()) return registry_.get();
    }
    return nullptr;
  };
}

std::string Session::formatAnswer(const QueryAnswer& answer) const {
  if (answer.bindings.empty()) return "yes";
  const PrefixTable& prefixes = registry_->prefixes();
  std::string line;
  for (const AnswerBinding& b : answer.bindings) {
    if (!line.empty()) line += ", ";
    line += b.variable + " = ";
    line += b.value.isConstant() ? std::string(b.value.name().str()) : printTerm(b.value, prefixes);
    if (!b.type.isTop()) line += " : " + printType(b.type, prefixes);
  }
  return line;
}

Outcome Session::runQuery(const Clause& goal) {
  const PrefixTable& prefixes = registry_->prefixes();
  out_ << "?- ";
  for (std::size_t i = 0; i < goal.body.size(); ++i) {
    if (i) out_ << ", ";
    out_ << printLiteral(goal.body[i], prefixes);
  }
  out_ << ".\n";

  ++queriesRun_;
  Outcome outcome = Outcome::Ok;
  const SolverLimits limits{config_.maxDepth, config_.maxAnswers};
  const SourceResolver resolver = sourceResolver();
  Solver solver(program_, *registry_, limits, resolver);
  Solver::Stream stream = solver.solve(goal);
  std::vector<QueryAnswer> answers;
  std::size_t maxDepth = 0;
  bool finished = false;
  try {
    while (auto a = stream.next()) {
      out_ << formatAnswer(*a) << '\n';
      maxDepth = std::max(maxDepth, a->derivationDepth);
      answers.push_back(std::move(*a));
    }
    finished = true;
    if (answers.empty()) out_ << "no\n";
    if (stream.depthLimited()) {
      out_ << "% depth limit " << config_.maxDepth << " reached; answers may be incomplete\n";
      outcome = Outcome::Incomplete;
    }
  } catch (const FlounderingError& e) {
    err_ << "floundering: " << e.what() << '\n';
    outcome = Outcome::Incomplete;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    outcome = Outcome::Error;
  }

  const SolverStats& stats = stream.stats();
  totalSteps_ += stats.resolutionSteps;
  totalRegistryQueries_ += stats.registryQueries.total();
  if (config_.statsOutput) {
    out_ << "% answers " << answers.size() << ", resolution steps " << stats.resolutionSteps << ", unifications "
         << stats.unificationAttempts << ", registry queries " << stats.registryQueries.total() << " ("
         << stats.registryQueries.subsumption << " subsumption, " << stats.registryQueries.instance
         << " instance), max depth " << maxDepth << '\n';
  }
  if (config_.oracleCheck && finished && outcome == Outcome::Ok) checkAgainstOracle(goal, answers, outcome);
  return outcome;
}

void Session::checkAgainstOracle(const Clause& goal, const std::vector<QueryAnswer>& answers, Outcome& outcome) {
  OracleAnswers oracle;
  try {
    oracle = oracleAnswers(program_, goal, *registry_, GroundingOptions{config_.exhaustiveGrounding}, sourceResolver());
  } catch (const std::exception& e) {
    out_ << "% oracle skipped: " << e.what() << '\n';
    return;
  }
  const auto solved = answerElements(answers, *registry_);
  std::vector<std::vector<Element>> missing;
  std::vector<std::vector<Element>> extra;
  for (const auto& a : solved) {
    if (!oracle.trueAnswers.count(a)) extra.push_back(a);
  }
  if (!config_.maxAnswers) {
    for (const auto& a : oracle.trueAnswers) {
      if (!solved.count(a)) missing.push_back(a);
    }
  }
  if (missing.empty() && extra.empty()) {
    out_ << "% oracle agrees: " << oracle.trueAnswers.size() << " true, " << oracle.undefinedAnswers.size()
         << " undefined\n";
    return;
  }
  auto describe = [&](const std::vector<Element>& tuple) {
    std::string s = "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) s += ", ";
      s += tuple[i].name;
      if (!tuple[i].type.isTop()) s += " : " + printType(tuple[i].type, registry_->prefixes());
    }
    return s + ")";
  };
  std::ostringstream report;
  report << "!!! ORACLE DISAGREEMENT: solver " << solved.size() << " answers, oracle " << oracle.trueAnswers.size()
         << " true\n";
  for (const auto& t : extra) {
    report << "!!!   solver only: " << describe(t) << (oracle.undefinedAnswers.count(t) ? " (undefined)" : "")
           << '\n';
  }
  for (const auto& t : missing) report << "!!!   oracle only: " << describe(t) << '\n';
  out_ << report.str();
  err_ << report.str();
  outcome = Outcome::Error;
}

int Session::repl(std::istream& in, bool prompt) {
  std::string buffer;
  std::string line;
  bool quit = false;
  auto flush = [&] {
    const std::string text = boost::algorithm::trim_copy(buffer);
    buffer.clear();
    if (text.empty()) return;
    try {
      Clause goal = parseQuery(text, registry_->prefixes());
      Program check;
      check.queries.push_back(goal);
      prepareForQueries();
      checkProgramTypes(check, *registry_);
      runQuery(goal);
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
    }
  };
  while (!quit) {
    if (prompt) out_ << (buffer.empty() ? "?- " : "|  ") << std::flush;
    if (!std::getline(in, line)) break;
    const std::string trimmed = boost::algorithm::trim_copy(line);
    if (buffer.empty() && !trimmed.empty() && trimmed[0] == ':' && !boost::algorithm::starts_with(trimmed, ":-")) {
      try {
        replCommand(trimmed, quit);
      } catch (const std::exception& e) {
        err_ << "error: " << e.what() << '\n';
      }
      continue;
    }
    buffer += line;
    buffer += '\n';
    if (!trimmed.empty() && trimmed.back() == '.') flush();
  }
  if (!quit) flush();
  return 0;
}

void Session::replCommand(const std::string& line, bool& quit) {
  std::istringstream words(line);
  std::string command;
  words >> command;
  std::string argument;
  std::getline(words, argument);
  boost::algorithm::trim(argument);

  if (command == ":quit" || command == ":q") {
    quit = true;
  } else if (command == ":load") {
    if (argument.empty()) throw Error(":load needs a script path");
    const Program saved = program_;
    std::vector<Clause> queries;
    try {
      queries = loadScript(argument);
      prepareForQueries();
    } catch (...) {
      program_ = saved;
      throw;
    }
    out_ << "% loaded " << argument << '\n';
    runQueries(queries);
  } else if (command == ":ontology") {
    if (argument.empty()) throw Error(":ontology needs an N-Triples path");
    loadOntology(argument);
    out_ << "% loaded " << argument << ": " << registry_->classes().size() << " classes, "
         << registry_->individuals().size() << " individuals\n";
  } else if (command == ":stats") {
    out_ << "% clauses " << program_.clauses.size() << ", classes " << registry_->classes().size()
         << ", individuals " << registry_->individuals().size() << ", queries run " << queriesRun_
         << ", resolution steps " << totalSteps_ << ", registry queries " << totalRegistryQueries_ << '\n';
  } else if (command == ":oracle") {
    if (argument == "on") {
      config_.oracleCheck = true;
    } else if (argument == "off") {
      config_.oracleCheck = false;
    } else {
      throw Error(":oracle expects on or off");
    }
    out_ << "% oracle " << argument << '\n';
  } else if (command == ":help") {
    out_ << "% goals end with '.'; commands: :load <script>, :ontology <file.nt>, :stats, :oracle on|off, :quit\n";
  } else {
    throw Error("unknown command " + command + " (try :help)");
  }
}

}  // namespace sortedlp
