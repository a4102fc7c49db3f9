#ifndef SLEPIAN_ERRORS_HPP
#define SLEPIAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slepian {

// Invalid argument or input outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// The request is well-formed but beyond what the analytic engine handles
// (dimension cap, barrier shape with no determinant formula).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical result failed its own accuracy checks.
class AccuracyError : public std::runtime_error {
 public:
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

// Monte Carlo configuration exceeds the resource cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slepian

#endif  // SLEPIAN_ERRORS_HPP
