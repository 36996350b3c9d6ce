#include "fraclap/errors.hpp"

namespace fraclap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Conditioning: return "conditioning";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace fraclap
