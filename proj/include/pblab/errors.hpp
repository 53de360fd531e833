#ifndef PBLAB_ERRORS_HPP
#define PBLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace pblab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, scenario file or CLI flag value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnknownScenario : public Error {
 public:
  explicit UnknownScenario(const std::string& name)
      : Error("unknown scenario: " + name) {}
};

// A structural hypothesis on the coefficients fails at a probe point.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::string name, std::string witness)
      : Error("hypothesis violated: " + name + " (" + witness + ")"),
        name_(std::move(name)),
        witness_(std::move(witness)) {}

  const std::string& name() const noexcept { return name_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string name_;
  std::string witness_;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class OutOfWindow : public Error {
 public:
  using Error::Error;
};

class DegenerateMass : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

// The delay Lipschitz constant leaves no admissible decay rate.
class DelayTooStrong : public Error {
 public:
  explicit DelayTooStrong(double best_eta1)
      : Error("delay too strong: sup of eta1 over admissible eta is " +
              std::to_string(best_eta1)),
        best_eta1_(best_eta1) {}

  double best_eta1() const noexcept { return best_eta1_; }

 private:
  double best_eta1_;
};

class ForcingNotTempered : public Error {
 public:
  using Error::Error;
};

class TimestampMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySet : public Error {
 public:
  using Error::Error;
};

class CannotSplit : public Error {
 public:
  using Error::Error;
};

}  // namespace pblab

#endif  // PBLAB_ERRORS_HPP
