#pragma once

#include <stdexcept>
#include <string>

namespace sqn {

// Every library failure derives from Error so callers (and the CLI exit-code
// mapping) can dispatch on the concrete category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input does not follow a file schema (missing header, wrong field count).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Frequency column is not strictly increasing.
class OrderError : public Error {
 public:
  OrderError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// A numeric field is outside its admissible range.
class ValueError : public Error {
 public:
  ValueError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Invalid parameters or configuration (geometry, resonator, objective, grid).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Frequency requested outside the sampled domain; never clamped.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnphysicalInput : public Error {
 public:
  using Error::Error;
};

// |D(jw)| == 0: undamped resonance hit exactly.
class SingularResponse : public Error {
 public:
  using Error::Error;
};

class DegenerateAdmittance : public Error {
 public:
  using Error::Error;
};

class NoResonanceInBand : public Error {
 public:
  using Error::Error;
};

}  // namespace sqn
