#ifndef CURVFLOW_ERRORS_HPP
#define CURVFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curvflow {

// Stable error identifiers, shared with the C API status codes.
enum class ErrCode : int {
  ok = 0,
  domain = 1,              // argument outside the positive cone / invalid range
  dimension_mismatch = 2,  // sizes of lambda / spec / matrix disagree
  asymmetric_direction = 3,
  non_convex_state = 4,  // a grid node fell below the convexity floor
  singular_input = 5,
  blow_up = 6,
  extinction_reached = 7,
  outside_cap = 8,
  non_convex_curve = 9,
  empty_sublevel = 10,
  constraint_violated = 11,
  not_enclosed_initially = 12,
  parse = 13,
  validation = 14,
  io = 15,
  internal = 16,
};

const char* err_name(ErrCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrCode code() const { return code_; }

 private:
  ErrCode code_;
};

#define CURVFLOW_DEFINE_ERROR(Name, Code)                                 \
  class Name : public Error {                                            \
   public:                                                                \
    explicit Name(const std::string& what) : Error(ErrCode::Code, what) {} \
  }

CURVFLOW_DEFINE_ERROR(DomainError, domain);
CURVFLOW_DEFINE_ERROR(DimensionMismatch, dimension_mismatch);
CURVFLOW_DEFINE_ERROR(AsymmetricDirection, asymmetric_direction);
CURVFLOW_DEFINE_ERROR(NonConvexState, non_convex_state);
CURVFLOW_DEFINE_ERROR(SingularInput, singular_input);
CURVFLOW_DEFINE_ERROR(BlowUp, blow_up);
CURVFLOW_DEFINE_ERROR(ExtinctionReached, extinction_reached);
CURVFLOW_DEFINE_ERROR(OutsideCap, outside_cap);
CURVFLOW_DEFINE_ERROR(NonConvexCurve, non_convex_curve);
CURVFLOW_DEFINE_ERROR(EmptySublevel, empty_sublevel);
CURVFLOW_DEFINE_ERROR(ConstraintViolated, constraint_violated);
CURVFLOW_DEFINE_ERROR(NotEnclosedInitially, not_enclosed_initially);
CURVFLOW_DEFINE_ERROR(ParseError, parse);
CURVFLOW_DEFINE_ERROR(ValidationError, validation);
CURVFLOW_DEFINE_ERROR(IoError, io);
CURVFLOW_DEFINE_ERROR(InternalError, internal);

#undef CURVFLOW_DEFINE_ERROR

}  // namespace curvflow

#endif
