#pragma once

#include <stdexcept>
#include <string>

namespace nsfd {

// Base for every error the library raises. `code()` is a stable machine
// name used by the CLI when emitting JSON error lines and picking exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define NSFD_DEFINE_ERROR(Name)                               \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

NSFD_DEFINE_ERROR(ConfigError);
NSFD_DEFINE_ERROR(EmptyGrid);
NSFD_DEFINE_ERROR(AxisOutOfRange);
NSFD_DEFINE_ERROR(DomainMismatch);
NSFD_DEFINE_ERROR(BoundaryNotZero);
NSFD_DEFINE_ERROR(SolverDiverged);
NSFD_DEFINE_ERROR(TooLargeForDense);
NSFD_DEFINE_ERROR(SingularMatrix);
NSFD_DEFINE_ERROR(NonpositiveTau);
NSFD_DEFINE_ERROR(QuadratureFailure);
NSFD_DEFINE_ERROR(MissingSnapshots);
NSFD_DEFINE_ERROR(GridsNotAligned);
NSFD_DEFINE_ERROR(SupportTooClose);
NSFD_DEFINE_ERROR(EmptyDictionary);
NSFD_DEFINE_ERROR(LedgerViolation);
NSFD_DEFINE_ERROR(AlignmentError);
NSFD_DEFINE_ERROR(InternalCheck);
NSFD_DEFINE_ERROR(IoError);

#undef NSFD_DEFINE_ERROR

}  // namespace nsfd
