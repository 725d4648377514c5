#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sortedlp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a script, N-Triples document or RuleML document.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownTypeError : public Error {
 public:
  explicit UnknownTypeError(const std::string& iri) : Error("unknown type <" + iri + ">"), iri_(iri) {}
  const std::string& iri() const { return iri_; }

 private:
  std::string iri_;
};

/// Ontology content that violates the registry's consistency checks.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace sortedlp
