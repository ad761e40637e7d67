#include "llhmm/vec3.hpp"

#include "llhmm/error.hpp"

#include <cmath>
#include <sstream>

namespace llhmm {

Spin::Spin(const Vec3& v) : v_(v) {
  if (!v.finite() || std::fabs(norm(v) - 1.0) > kUnitTolerance) {
    std::ostringstream os;
    os << "spin must have unit length, got |v| = " << norm(v);
    throw_parameter(os.str());
  }
}

Spin Spin::unnormalized(const Vec3& v) {
  if (!v.finite()) throw_parameter("spin components must be finite");
  return Spin(v, Unchecked{});
}

Spin Spin::normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !v.finite()) throw_parameter("cannot normalize a zero or non-finite vector");
  return Spin(v / n, Unchecked{});
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parameter: return "PARAMETER_ERROR";
    case ErrorCode::NonConverged: return "NON_CONVERGED";
    case ErrorCode::MacroNonConverged: return "MACRO_NON_CONVERGED";
    case ErrorCode::DegenerateInterpolant: return "DEGENERATE_INTERPOLANT";
    case ErrorCode::WindowOutOfRange: return "WINDOW_OUT_OF_RANGE";
    case ErrorCode::NonPositiveData: return "NON_POSITIVE_DATA";
    case ErrorCode::Parse: return "PARSE_ERROR";
    case ErrorCode::Validation: return "VALIDATION_ERROR";
  }
  return "UNKNOWN";
}

void throw_parameter(const std::string& what) { throw Error(ErrorCode::Parameter, what); }

}  // namespace llhmm
