#include "jf/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>

namespace jf {

// ------------------------------------------------------------------ IntPoly

IntPoly IntPoly::derivative() const {
  IntPoly d;
  for (size_t k = 1; k < c.size(); ++k)
    d.c.push_back(c[k] * static_cast<long long>(k));
  if (d.c.empty()) d.c.push_back(0);
  return d;
}

CBall IntPoly::eval(const CBall& x) const {
  CBall acc;
  for (size_t k = c.size(); k-- > 0;) {
    acc = acc * x + CBall::from_int(c[k]);
  }
  return acc;
}

std::string IntPoly::to_string() const {
  std::string s;
  for (size_t k = c.size(); k-- > 0;) {
    if (c[k] == 0) continue;
    if (!s.empty()) s += c[k] > 0 ? " + " : " - ";
    else if (c[k] < 0) s += "-";
    s += std::to_string(std::abs(c[k]));
    if (k > 0) s += "*x^" + std::to_string(k);
  }
  return s.empty() ? "0" : s;
}

Ball mag_lower(const CBall& z) {
  Ball lr = z.re.abs_lower();
  Ball li = z.im.abs_lower();
  Ball r = sqrt(lr * lr + li * li);
  return r.abs_lower();
}

// ---------------------------------------------------------------- roots

namespace {

using cdouble = std::complex<double>;

// Durand-Kerner simultaneous iteration; returns approximate roots or throws
// if the iteration fails to settle (repeated roots, degenerate input).
std::vector<cdouble> approx_roots(const IntPoly& p) {
  int n = p.degree();
  while (n > 0 && p.c[static_cast<size_t>(n)] == 0) --n;
  if (n <= 0) throw std::invalid_argument("constant polynomial has no roots");
  std::vector<double> mon(static_cast<size_t>(n) + 1);
  double lead = double(p.c[static_cast<size_t>(n)]);
  double radius = 0;
  for (int k = 0; k <= n; ++k) {
    mon[static_cast<size_t>(k)] = double(p.c[static_cast<size_t>(k)]) / lead;
    if (k < n) radius = std::max(radius, std::abs(mon[static_cast<size_t>(k)]));
  }
  radius = 1 + radius;
  auto evalm = [&](cdouble x) {
    cdouble acc = 0;
    for (int k = n; k >= 0; --k) acc = acc * x + mon[static_cast<size_t>(k)];
    return acc;
  };
  std::vector<cdouble> x(static_cast<size_t>(n));
  cdouble seed(0.4, 0.9);
  cdouble cur(1, 0);
  for (int k = 0; k < n; ++k) {
    cur *= seed;
    x[static_cast<size_t>(k)] = cur * radius;
  }
  for (int it = 0; it < 1000; ++it) {
    double moved = 0;
    for (int k = 0; k < n; ++k) {
      cdouble denom = 1;
      for (int j = 0; j < n; ++j)
        if (j != k) denom *= x[static_cast<size_t>(k)] - x[static_cast<size_t>(j)];
      cdouble step = evalm(x[static_cast<size_t>(k)]) / denom;
      x[static_cast<size_t>(k)] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-13 * radius) break;
    if (it == 999)
      throw std::invalid_argument("root iteration did not converge: " +
                                  p.to_string());
  }
  std::sort(x.begin(), x.end(), [](cdouble a, cdouble b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return x;
}

CBall cball_from_double(cdouble z) {
  return CBall(Ball::from_double(z.real()), Ball::from_double(z.imag()));
}

CBall midpoint_of(const CBall& z) {
  return CBall(Ball::exact(z.re.mid()), Ball::exact(z.im.mid()));
}

CBall widen(const CBall& z, long exp2) {
  return CBall(z.re.widened_2exp(exp2), z.im.widened_2exp(exp2));
}

bool strictly_inside(const CBall& inner, const CBall& outer) {
  auto comp = [](const Ball& in, const Ball& out) {
    mpfr_t d;
    mpfr_init2(d, 64);
    mpfr_sub(d, in.mid(), out.mid(), MPFR_RNDA);
    mpfr_abs(d, d, MPFR_RNDU);
    mpfr_add(d, d, in.rad(), MPFR_RNDU);
    bool ok = mpfr_less_p(d, out.rad());
    mpfr_clear(d);
    return ok;
  };
  return comp(inner.re, outer.re) && comp(inner.im, outer.im);
}

// One certified root near the double-precision seed: midpoint Newton to
// working precision, then an interval Newton contraction proving uniqueness.
CBall certify_root(const IntPoly& p, const IntPoly& dp, cdouble seed) {
  CBall x = cball_from_double(seed);
  long prec = static_cast<long>(working_precision());
  int newton_iters = 6;
  for (long b = 64; b < prec; b *= 2) ++newton_iters;
  try {
    for (int it = 0; it < newton_iters; ++it) {
      CBall num = p.eval(x);
      CBall den = dp.eval(x);
      x = midpoint_of(x - num / den);
    }
  } catch (const need_more_precision&) {
    // leave x where refinement stopped; certification below may still work
  }
  // interval Newton: X centered at x; N(X) = x - p(x)/p'(X) strictly inside X
  for (long exp2 = -(3 * prec / 4); exp2 <= -16; exp2 += 16) {
    CBall X = widen(x, exp2);
    CBall num = p.eval(x);
    CBall den;
    try {
      den = dp.eval(X);
      CBall N = x - num / den;
      if (!strictly_inside(N, X)) continue;
      // contract a couple of times for a tight final enclosure
      for (int it = 0; it < 3; ++it) {
        CBall xm = midpoint_of(N);
        CBall N2 = xm - p.eval(xm) / dp.eval(N);
        if (!strictly_inside(N2, N)) break;
        N = N2;
      }
      return N;
    } catch (const need_more_precision&) {
      continue;  // derivative ball straddles zero; widen and retry
    }
  }
  throw need_more_precision("cannot certify root of " + p.to_string());
}

}  // namespace

std::vector<CBall> certified_roots(const IntPoly& p) {
  std::vector<cdouble> seeds = approx_roots(p);
  IntPoly dp = p.derivative();
  std::vector<CBall> out;
  out.reserve(seeds.size());
  for (cdouble s : seeds) out.push_back(certify_root(p, dp, s));
  // enclosures must be pairwise disjoint, else the literal is unusable
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = i + 1; j < out.size(); ++j)
      if (out[i].overlaps(out[j]))
        throw need_more_precision("root enclosures overlap: " + p.to_string());
  return out;
}

// ------------------------------------------------------------- LambdaLit

IntPoly LambdaLit::poly() const {
  IntPoly p;
  p.c.assign(coeffs.rbegin(), coeffs.rend());
  return p;
}

CBall resolve_lambda(const LambdaLit& lit) {
  std::vector<CBall> roots = certified_roots(lit.poly());
  // the printed approximation, as an exact point plus its digit half-ulp
  CBall z0;
  Ball dec = Ball::from_decimal(lit.approx);
  if (lit.imaginary)
    z0 = CBall(Ball(), dec);
  else
    z0 = CBall(dec);
  long frac_digits = 0;
  auto dot = lit.approx.find('.');
  if (dot != std::string::npos)
    for (size_t i = dot + 1; i < lit.approx.size() && isdigit(lit.approx[i]); ++i)
      ++frac_digits;
  Ball half_ulp = Ball::from_ratio(5, 1);
  for (long i = 0; i <= frac_digits; ++i) half_ulp = half_ulp / Ball::from_int(10);

  // nearest root by upper bound of the distance
  size_t best = 0;
  Ball best_up = mag_upper(roots[0] - z0);
  for (size_t j = 1; j < roots.size(); ++j) {
    Ball up = mag_upper(roots[j] - z0);
    if (mpfr_less_p(up.mid(), best_up.mid())) {
      best = j;
      best_up = up;
    }
  }
  // digit sufficiency: every other root must stay further away than the
  // nearest one for ANY true value printing to these digits,
  // i.e. d_j_low > d_best_up + 2*half_ulp
  Ball bound = best_up + mul_2exp(half_ulp, 1);
  for (size_t j = 0; j < roots.size(); ++j) {
    if (j == best) continue;
    Ball low = mag_lower(roots[j] - z0);
    if (!certainly_greater(low, bound))
      throw std::invalid_argument(
          "ambiguous lambda literal (printed digits do not isolate a root): " +
          lit.poly().to_string() + " @ " + lit.approx +
          (lit.imaginary ? "i" : ""));
  }
  // isolation: no other root within 4x the returned radius
  Ball r4 = mul_2exp(roots[best].re.rad_ball() + roots[best].im.rad_ball(), 2);
  for (size_t j = 0; j < roots.size(); ++j) {
    if (j == best) continue;
    Ball low = mag_lower(roots[j] - roots[best]);
    if (!certainly_greater(low, r4))
      throw need_more_precision("root isolation margin too small");
  }
  return roots[best];
}

// ---------------------------------------------------------------- parsing

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("scalar parse error at position " +
                                std::to_string(pos) + ": " + what + " in \"" +
                                s + "\"");
  }

  long long parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t digits = 0;
    while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) fail("expected integer");
    return std::stoll(s.substr(start, pos - start));
  }

  // decimal approximation inside a lambda literal, e.g. "-0.09279" "4.20" "10.0"
  std::string parse_decimal() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t digits = 0;
    while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      ++digits;
    }
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
        ++pos;
        ++digits;
      }
    }
    if (digits == 0) fail("expected decimal");
    return s.substr(start, pos - start);
  }

  ScalarExprPtr parse_expr() {
    ScalarExprPtr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (eat('+')) {
        auto e = std::make_shared<ScalarExpr>();
        e->kind = ScalarExpr::Kind::add;
        e->a = lhs;
        e->b = parse_term();
        lhs = e;
      } else if (eat('-')) {
        auto e = std::make_shared<ScalarExpr>();
        e->kind = ScalarExpr::Kind::sub;
        e->a = lhs;
        e->b = parse_term();
        lhs = e;
      } else {
        return lhs;
      }
    }
  }

  ScalarExprPtr parse_term() {
    ScalarExprPtr lhs = parse_factor();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        auto e = std::make_shared<ScalarExpr>();
        e->kind = ScalarExpr::Kind::mul;
        e->a = lhs;
        e->b = parse_factor();
        lhs = e;
      } else if (eat('/')) {
        auto e = std::make_shared<ScalarExpr>();
        e->kind = ScalarExpr::Kind::div;
        e->a = lhs;
        e->b = parse_factor();
        lhs = e;
      } else {
        return lhs;
      }
    }
  }

  ScalarExprPtr parse_factor() {
    skip_ws();
    if (eat('-')) {
      auto e = std::make_shared<ScalarExpr>();
      e->kind = ScalarExpr::Kind::neg;
      e->a = parse_factor();
      return e;
    }
    if (eat('+')) return parse_factor();
    return parse_primary();
  }

  ScalarExprPtr parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      ScalarExprPtr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == 'L' && pos + 1 < s.size() && s[pos + 1] == '[') return parse_lambda();
    if (s.compare(pos, 5, "sqrt(") == 0) {
      pos += 5;
      ScalarExprPtr inner = parse_expr();
      if (!eat(')')) fail("expected ')' after sqrt");
      auto e = std::make_shared<ScalarExpr>();
      e->kind = ScalarExpr::Kind::sqrt;
      e->a = inner;
      return e;
    }
    if (c == 'i' && !(pos + 1 < s.size() &&
                      isalnum(static_cast<unsigned char>(s[pos + 1])))) {
      ++pos;
      auto e = std::make_shared<ScalarExpr>();
      e->kind = ScalarExpr::Kind::imag_unit;
      return e;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      // integer or decimal, with optional 'i' suffix
      size_t start = pos;
      while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      bool is_decimal = pos < s.size() && s[pos] == '.';
      if (is_decimal) {
        ++pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      }
      std::string num = s.substr(start, pos - start);
      ScalarExprPtr base;
      if (is_decimal) {
        // exact decimal: p / 10^k
        auto dot = num.find('.');
        std::string digits = num.substr(0, dot) + num.substr(dot + 1);
        long long denom = 1;
        for (size_t k = dot + 1; k < num.size(); ++k) denom *= 10;
        auto pnum = std::make_shared<ScalarExpr>();
        pnum->kind = ScalarExpr::Kind::integer;
        pnum->int_val = std::stoll(digits);
        auto pden = std::make_shared<ScalarExpr>();
        pden->kind = ScalarExpr::Kind::integer;
        pden->int_val = denom;
        auto div = std::make_shared<ScalarExpr>();
        div->kind = ScalarExpr::Kind::div;
        div->a = pnum;
        div->b = pden;
        base = div;
      } else {
        auto e = std::make_shared<ScalarExpr>();
        e->kind = ScalarExpr::Kind::integer;
        e->int_val = std::stoll(num);
        base = e;
      }
      if (pos < s.size() && s[pos] == 'i' &&
          !(pos + 1 < s.size() && isalnum(static_cast<unsigned char>(s[pos + 1])))) {
        ++pos;
        auto unit = std::make_shared<ScalarExpr>();
        unit->kind = ScalarExpr::Kind::imag_unit;
        auto e = std::make_shared<ScalarExpr>();
        e->kind = ScalarExpr::Kind::mul;
        e->a = base;
        e->b = unit;
        return e;
      }
      return base;
    }
    fail("unexpected character");
  }

  ScalarExprPtr parse_lambda() {
    // at 'L['
    pos += 2;
    auto e = std::make_shared<ScalarExpr>();
    e->kind = ScalarExpr::Kind::lambda;
    e->lam.coeffs.push_back(parse_int());
    while (eat(',')) e->lam.coeffs.push_back(parse_int());
    if (!eat(']')) fail("expected ']' in lambda literal");
    if (!eat('@')) fail("expected '@' in lambda literal");
    e->lam.approx = parse_decimal();
    if (pos < s.size() && s[pos] == 'i') {
      ++pos;
      e->lam.imaginary = true;
    }
    return e;
  }
};

}  // namespace

ScalarExprPtr parse_scalar(const std::string& text) {
  Parser p(text);
  ScalarExprPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters");
  return e;
}

CBall eval_scalar(const ScalarExprPtr& e) {
  switch (e->kind) {
    case ScalarExpr::Kind::integer:
      return CBall::from_int(e->int_val);
    case ScalarExpr::Kind::imag_unit:
      return CBall::i();
    case ScalarExpr::Kind::sqrt: {
      CBall v = eval_scalar(e->a);
      if (!v.im.magnitude_below_2exp(-static_cast<long>(working_precision()) / 2))
        throw std::invalid_argument("sqrt of non-real value in scalar literal");
      return CBall(sqrt(v.re));
    }
    case ScalarExpr::Kind::neg:
      return -eval_scalar(e->a);
    case ScalarExpr::Kind::add:
      return eval_scalar(e->a) + eval_scalar(e->b);
    case ScalarExpr::Kind::sub:
      return eval_scalar(e->a) - eval_scalar(e->b);
    case ScalarExpr::Kind::mul:
      return eval_scalar(e->a) * eval_scalar(e->b);
    case ScalarExpr::Kind::div:
      return eval_scalar(e->a) / eval_scalar(e->b);
    case ScalarExpr::Kind::lambda:
      return resolve_lambda(e->lam);
  }
  throw std::logic_error("unreachable");
}

std::string print_scalar(const ScalarExprPtr& e) {
  switch (e->kind) {
    case ScalarExpr::Kind::integer:
      return std::to_string(e->int_val);
    case ScalarExpr::Kind::imag_unit:
      return "i";
    case ScalarExpr::Kind::sqrt:
      return "sqrt(" + print_scalar(e->a) + ")";
    case ScalarExpr::Kind::neg:
      return "-" + print_scalar(e->a);
    case ScalarExpr::Kind::add:
      return "(" + print_scalar(e->a) + "+" + print_scalar(e->b) + ")";
    case ScalarExpr::Kind::sub:
      return "(" + print_scalar(e->a) + "-" + print_scalar(e->b) + ")";
    case ScalarExpr::Kind::mul:
      return print_scalar(e->a) + "*" + print_scalar(e->b);
    case ScalarExpr::Kind::div:
      return print_scalar(e->a) + "/" + print_scalar(e->b);
    case ScalarExpr::Kind::lambda: {
      std::string s = "L[";
      for (size_t k = 0; k < e->lam.coeffs.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(e->lam.coeffs[k]);
      }
      s += "]@" + e->lam.approx;
      if (e->lam.imaginary) s += "i";
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

bool identify(const CBall& x, const ScalarExprPtr& target) {
  CBall v = eval_scalar(target);
  if (!x.overlaps(v)) return false;
  if (target->kind == ScalarExpr::Kind::lambda) {
    // must be disjoint from every other root
    std::vector<CBall> roots = certified_roots(target->lam.poly());
    int hits = 0;
    for (const CBall& r : roots)
      if (x.overlaps(r)) ++hits;
    if (hits != 1) return false;
  }
  return true;
}

bool identify(const CBall& x, const std::string& target_literal) {
  return identify(x, parse_scalar(target_literal));
}

}  // namespace jf
