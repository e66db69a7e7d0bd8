#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cycleauth {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise unusable numeric input.
class DataError : public Error {
public:
  using Error::Error;
};

class UnderdeterminedFit : public Error {
public:
  using Error::Error;
};

/// Logistic trend whose cumulative rate k + sum(delta) hits zero.
class DegenerateRate : public Error {
public:
  using Error::Error;
};

class InsufficientSimulations : public Error {
public:
  using Error::Error;
};

class TooShort : public Error {
public:
  using Error::Error;
};

class TrainingContract : public Error {
public:
  using Error::Error;
};

/// No profile entry yet for a known activity; more cycles must be collected.
class ColdStart : public Error {
public:
  using Error::Error;
};

class ContractViolation : public Error {
public:
  using Error::Error;
};

class ProfileMismatch : public Error {
public:
  using Error::Error;
};

class InsufficientData : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

/// Malformed external input. `line` is 1-based, 0 when not line oriented.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace cycleauth
