#ifndef CURVFLOW_EXPR_HPP
#define CURVFLOW_EXPR_HPP

#include <string>

#include "curvflow/symfun.hpp"

namespace curvflow::symfun {

// Parses a curvature-function expression:
//
//   fn      := 'mean' | 'gauss' | 'pmean(' real ')' | 'sym(' int ')'
//            | 'product(' fn '^' real (',' fn '^' real)* ')'
//
// Weights of a product must lie in [0, 1] and sum to 1. The degree of
// 'sym(k)' must satisfy 1 <= k <= n. Throws ParseError (with a character
// offset in the message) or ValidationError.
FamilyNode parse_function_expr(const std::string& text, int n);

CurvatureSpec parse_spec(const std::string& text, int n, double beta);

}  // namespace curvflow::symfun

#endif
