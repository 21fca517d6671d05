#ifndef CSMD_ERRORS_HPP
#define CSMD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csmd {

struct NonInteriorPoint : std::runtime_error {
  explicit NonInteriorPoint(const std::string &msg) : std::runtime_error(msg) {}
};

struct UnsupportedCombination : std::runtime_error {
  explicit UnsupportedCombination(const std::string &msg)
      : std::runtime_error(msg) {}
};

struct HorizonRequired : std::runtime_error {
  explicit HorizonRequired(const std::string &msg) : std::runtime_error(msg) {}
};

struct ConstraintViolated : std::runtime_error {
  explicit ConstraintViolated(const std::string &msg)
      : std::runtime_error(msg) {}
};

struct StepTooLarge : std::runtime_error {
  explicit StepTooLarge(const std::string &msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string &msg) : std::runtime_error(msg) {}
};

struct MissingConstant : std::runtime_error {
  explicit MissingConstant(const std::string &msg) : std::runtime_error(msg) {}
};

struct InsufficientSamples : std::runtime_error {
  explicit InsufficientSamples(const std::string &msg)
      : std::runtime_error(msg) {}
};

struct InsufficientReplications : std::runtime_error {
  explicit InsufficientReplications(const std::string &msg)
      : std::runtime_error(msg) {}
};

struct NumericalDivergence : std::runtime_error {
  explicit NumericalDivergence(const std::string &msg)
      : std::runtime_error(msg) {}
};

struct HistoryNotRetained : std::runtime_error {
  explicit HistoryNotRetained(const std::string &msg)
      : std::runtime_error(msg) {}
};

struct AssumptionMismatch : std::runtime_error {
  explicit AssumptionMismatch(const std::string &msg)
      : std::runtime_error(msg) {}
};

struct NonPositiveGap : std::runtime_error {
  explicit NonPositiveGap(const std::string &msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace csmd

#endif  // CSMD_ERRORS_HPP
