#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace marrt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  GenerationFailed(const std::string& what, int retry_budget)
      : Error(what), retry_budget_(retry_budget) {}
  int retry_budget() const { return retry_budget_; }

 private:
  int retry_budget_;
};

class UnknownWaypoint : public Error {
 public:
  using Error::Error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaViolation : public Error {
 public:
  SchemaViolation(const std::string& field, const std::string& detail)
      : Error("schema violation at '" + field + "': " + detail), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

class EmptyTree : public Error {
 public:
  using Error::Error;
};

class UnknownVertex : public Error {
 public:
  using Error::Error;
};

class UnknownAlgorithm : public Error {
 public:
  using Error::Error;
};

// A planner returned a solution the independent validator rejects.
class SoundnessFailure : public Error {
 public:
  using Error::Error;
};

class CostBelowOptimal : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace marrt
