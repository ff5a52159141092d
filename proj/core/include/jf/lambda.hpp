#pragma once
// Scalar literals for data and report files.
//
// Grammar (expressions over exact constants):
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := ('-'|'+')* primary
//   primary := NUMBER ['i'] | 'i' | 'sqrt' '(' expr ')' | '(' expr ')' | lambda
//   lambda  := 'L' '[' INT (',' INT)* ']' '@' DECIMAL ['i']
//
// A lambda literal L[a_n,...,a_0]@z denotes the root of a_n x^n + ... + a_0
// closest to the printed approximation z.  Resolution certifies that the
// nearest root is isolated and that the printed digits pick it out
// unambiguously.

#include <memory>
#include <string>
#include <vector>

#include "jf/scalar.hpp"

namespace jf {

// Integer-coefficient polynomial, c[k] multiplies x^k.
struct IntPoly {
  std::vector<long long> c;
  int degree() const { return static_cast<int>(c.size()) - 1; }
  IntPoly derivative() const;
  CBall eval(const CBall& x) const;
  std::string to_string() const;  // human-readable, for diagnostics
};

// Certified pairwise-disjoint enclosures of all (necessarily simple) complex
// roots, ordered deterministically (by real part, then imaginary part, of the
// double-precision approximations).  Throws need_more_precision if a root
// cannot be certified at the current working precision, invalid_argument if
// the polynomial appears to have a repeated root.
std::vector<CBall> certified_roots(const IntPoly& p);

struct LambdaLit {
  std::vector<long long> coeffs;  // literal order: leading first
  std::string approx;             // decimal part as printed, sign included
  bool imaginary = false;         // trailing 'i' on the approximation
  IntPoly poly() const;           // ascending-order polynomial
};

// Resolves the literal at the current working precision.  Certifies root
// isolation (no other root within 3x the returned radius) and that the
// printed digits identify the root unambiguously; throws invalid_argument if
// the literal is ambiguous, need_more_precision if certification needs more
// bits.
CBall resolve_lambda(const LambdaLit& lit);

// ------------------------------------------------------------- expressions

struct ScalarExpr;
using ScalarExprPtr = std::shared_ptr<const ScalarExpr>;

struct ScalarExpr {
  enum class Kind { integer, imag_unit, sqrt, neg, add, sub, mul, div, lambda };
  Kind kind;
  long long int_val = 0;  // integer
  LambdaLit lam;          // lambda
  ScalarExprPtr a, b;     // operands
};

// Parses the full string as one expression; throws invalid_argument on any
// trailing garbage or syntax error.
ScalarExprPtr parse_scalar(const std::string& text);

// Evaluates at the current working precision.
CBall eval_scalar(const ScalarExprPtr& e);

// Canonical textual form (lambda literals are reprinted verbatim).
std::string print_scalar(const ScalarExprPtr& e);

// True when the computed enclosure x matches the literal: x overlaps the
// resolved value and, for a bare lambda literal, is disjoint from every other
// root of its polynomial.
bool identify(const CBall& x, const ScalarExprPtr& target);
bool identify(const CBall& x, const std::string& target_literal);

// Lower bound of |z| as an exact ball (distance from the origin to the
// rectangle), used for separation certificates.
Ball mag_lower(const CBall& z);

}  // namespace jf
