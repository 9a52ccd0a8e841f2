#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hirota {

enum class ErrorCode {
  SingularMatrix,
  ZeroArgument,
  BadContour,
  InvalidBackground,
  MissingDerivatives,
  BranchPointSingular,
  IntegrationFailure,
  SingularWronskian,
  MissingPartner,
  DefocusingUnsupported,
  EigenvalueTooCloseToSigma,
  InvalidEigenpair,
  DuplicateEigenvalue,
  PoleCollision,
  SingularSystem,
  PoleHit,
  BadSearchBox,
  OutsideDomain,
  UnknownPreset,
  BadConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hirota
