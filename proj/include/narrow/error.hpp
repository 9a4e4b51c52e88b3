#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace narrow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string token, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what +
              (token.empty() ? std::string(" at end of input") : " near '" + token + "'")),
        line_(line), column_(column), token_(std::move(token)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& token() const { return token_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

// A malformed line in a problem, suite or classification file.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A formula mentions a variable its instance or vocabulary does not know.
class VocabularyError : public Error {
 public:
  using Error::Error;
};

class EquivalentCandidates : public Error {
 public:
  EquivalentCandidates(std::vector<std::string> names, const std::string& what)
      : Error(what), names_(std::move(names)) {}
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

class Timeout : public Error {
 public:
  Timeout() : Error("time limit exceeded") {}
};

class IncompleteClassification : public Error {
 public:
  using Error::Error;
};

class InvalidSuite : public Error {
 public:
  using Error::Error;
};

// Classification or suite was produced for different content than it is applied to.
class StaleInput : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NoNarrowingSet : public Error {
 public:
  using Error::Error;
};

}  // namespace narrow
