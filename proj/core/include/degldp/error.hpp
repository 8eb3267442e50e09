#pragma once

#include <stdexcept>
#include <string>

namespace degldp {

// Every error carries a stable name so the CLI can report it verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

// Raised when C(theta, f) diverges (statistic grows faster than linearly).
class DegenerateStatistic : public Error {
 public:
  explicit DegenerateStatistic(const std::string& what)
      : Error("DegenerateStatistic", what) {}
};

// The variational objective never rose above its interior minimum.
class NoConfinement : public Error {
 public:
  explicit NoConfinement(const std::string& what)
      : Error("NoConfinement", what) {}
};

// Exhaustive enumeration requested beyond the supported vertex count.
class TooLarge : public Error {
 public:
  explicit TooLarge(const std::string& what) : Error("TooLarge", what) {}
};

class NTooSmall : public Error {
 public:
  explicit NTooSmall(const std::string& what) : Error("NTooSmall", what) {}
};

}  // namespace degldp
