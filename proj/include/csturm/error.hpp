#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace csturm {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed potential source text. position is a 0-based byte offset.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// Precondition violated by the mathematical input (endpoint class, degenerate basis, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// A heuristic test could not decide; carries the numbers it looked at.
class IndeterminateError : public DomainError {
public:
  IndeterminateError(const std::string& what, std::vector<double> table)
      : DomainError(what), table_(std::move(table)) {}
  const std::vector<double>& table() const { return table_; }

private:
  std::vector<double> table_;
};

class IntegrationError : public DomainError {
public:
  using DomainError::DomainError;
};

class QuadratureError : public DomainError {
public:
  using DomainError::DomainError;
};

class UsageError : public Error {
public:
  using Error::Error;
};

}  // namespace csturm
