#pragma once

#include <stdexcept>
#include <string>

namespace ddlqr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DDLQR_DEFINE_ERROR(Name)             \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

// matlin
DDLQR_DEFINE_ERROR(NotPositiveDefinite);
DDLQR_DEFINE_ERROR(IndefiniteInput);
DDLQR_DEFINE_ERROR(UnstableMatrix);
DDLQR_DEFINE_ERROR(NoConvergence);

// datamodel
DDLQR_DEFINE_ERROR(ExcitationViolation);
DDLQR_DEFINE_ERROR(StateRankViolation);
DDLQR_DEFINE_ERROR(DimensionMismatch);
DDLQR_DEFINE_ERROR(IoError);

// effects
DDLQR_DEFINE_ERROR(SingularCovariance);
DDLQR_DEFINE_ERROR(InfeasibleConstraint);

// conic
DDLQR_DEFINE_ERROR(AsymmetricInput);

// synthesis
DDLQR_DEFINE_ERROR(SynthesisInfeasible);

#undef DDLQR_DEFINE_ERROR

/// Malformed text input; carries the 1-based line and column of the fault
/// (0 when not applicable).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace ddlqr
