#ifndef ENTROFLOW_ERRORS_HPP
#define ENTROFLOW_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace entroflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request exceeds desk-scale limits. `feasible` names the nearest
/// parameters that would succeed, when one exists.
class ResourceBound : public Error {
 public:
  ResourceBound(const std::string& what, std::string feasible = {})
      : Error(what), feasible_(std::move(feasible)) {}
  const std::string& feasible() const noexcept { return feasible_; }

 private:
  std::string feasible_;
};

/// Index or length outside the available data.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// A computation needed symbols beyond the materialized window.
class WindowExhausted : public Error {
 public:
  WindowExhausted(const std::string& what, std::int64_t needed_radius)
      : Error(what), needed_radius_(needed_radius) {}
  std::int64_t needed_radius() const noexcept { return needed_radius_; }

 private:
  std::int64_t needed_radius_;
};

/// Query against a stage or object that does not carry the requested data.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A Q-cell row was requested before P(row) exists.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// Expected roof or expected time cost is zero, infinite, or undefined.
class DegenerateMeasure : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace entroflow

#endif
