#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

enum class ErrorKind {
  Domain,
  Precondition,
  Usage,
  Convergence,
  Conditioning,
  Geometry,
  Unsupported,
  Singularity,
  Internal,
};

const char* to_string(ErrorKind kind);

/// Base for every error raised by the toolkit. The kind decides how the CLI
/// maps the failure onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define FRACLAP_DEFINE_ERROR(Name, Kind)                              \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

FRACLAP_DEFINE_ERROR(DomainError, Domain)
FRACLAP_DEFINE_ERROR(PreconditionError, Precondition)
FRACLAP_DEFINE_ERROR(UsageError, Usage)
FRACLAP_DEFINE_ERROR(ConvergenceError, Convergence)
FRACLAP_DEFINE_ERROR(ConditioningError, Conditioning)
FRACLAP_DEFINE_ERROR(GeometryError, Geometry)
FRACLAP_DEFINE_ERROR(UnsupportedError, Unsupported)
FRACLAP_DEFINE_ERROR(SingularityError, Singularity)
FRACLAP_DEFINE_ERROR(InternalError, Internal)

#undef FRACLAP_DEFINE_ERROR

}  // namespace fraclap
