#ifndef CERTIFEM_ERROR_HPP
#define CERTIFEM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace certifem {

// Numeric values are mirrored by certifem_status in certifem.h.
enum class ErrorCode : int {
  InvalidArgument = 1,
  ParseError = 2,
  IoError = 3,
  DegenerateSimplex = 4,
  NonConforming = 5,
  InvertedElement = 6,
  InvalidPolygon = 7,
  InvalidDirection = 8,
  NotInscribed = 9,
  StrategyInapplicable = 10,
  MissingNormMetadata = 11,
  NotNonBlunt = 12,
  NegativeRadicand = 13,
  ConstraintRankDeficiency = 14,
  MaxIterExceeded = 15,
  BoundViolated = 16,
  InvalidSourceTerm = 17,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace certifem

#endif  // CERTIFEM_ERROR_HPP
