#include "jf/scalar.hpp"

#include <cstdio>
#include <vector>

namespace jf {

namespace {
constexpr mpfr_prec_t kRadiusPrec = 64;
thread_local mpfr_prec_t g_precision = 256;
}  // namespace

mpfr_prec_t working_precision() { return g_precision; }
void set_working_precision(mpfr_prec_t bits) { g_precision = bits; }

PrecisionGuard::PrecisionGuard(mpfr_prec_t bits) : saved_(g_precision) {
  g_precision = bits;
}
PrecisionGuard::~PrecisionGuard() { g_precision = saved_; }

// --------------------------------------------------------------------- Ball

Ball::Ball() {
  mpfr_init2(mid_, g_precision);
  mpfr_init2(rad_, kRadiusPrec);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

Ball::Ball(const Ball& o) {
  mpfr_init2(mid_, mpfr_get_prec(o.mid_));
  mpfr_init2(rad_, kRadiusPrec);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept {
  mpfr_init2(mid_, kRadiusPrec);
  mpfr_init2(rad_, kRadiusPrec);
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
}

Ball& Ball::operator=(const Ball& o) {
  if (this != &o) {
    mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
  }
  return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
  return *this;
}

Ball::~Ball() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

void Ball::absorb_rounding(int ternary) {
  if (ternary == 0 || !mpfr_regular_p(mid_)) return;
  // one full ulp of the midpoint bounds the rounding error of RNDN
  mpfr_t u;
  mpfr_init2(u, kRadiusPrec);
  mpfr_set_ui_2exp(u, 1, mpfr_get_exp(mid_) - mpfr_get_prec(mid_), MPFR_RNDU);
  mpfr_add(rad_, rad_, u, MPFR_RNDU);
  mpfr_clear(u);
}

Ball Ball::from_int(long v) {
  Ball b;
  int t = mpfr_set_si(b.mid_, v, MPFR_RNDN);
  b.absorb_rounding(t);
  return b;
}

Ball Ball::from_ratio(long p, long q) {
  if (q == 0) throw std::invalid_argument("from_ratio: zero denominator");
  Ball b = from_int(p);
  Ball d = from_int(q);
  return b / d;
}

Ball Ball::from_double(double v) {
  Ball b;
  int t = mpfr_set_d(b.mid_, v, MPFR_RNDN);
  b.absorb_rounding(t);
  return b;
}

Ball Ball::from_decimal(const std::string& s) {
  Ball b;
  char* end = nullptr;
  int tern = mpfr_strtofr(b.mid_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || end == nullptr || *end != '\0')
    throw std::invalid_argument("bad decimal literal: " + s);
  b.absorb_rounding(tern);
  return b;
}

Ball Ball::exact(mpfr_srcptr v) {
  Ball b;
  int t = mpfr_set(b.mid_, v, MPFR_RNDN);
  b.absorb_rounding(t);
  return b;
}

Ball Ball::from_decimal_digits(const std::string& s) {
  Ball b = from_decimal(s);
  // widen by half an ulp of the last printed decimal digit
  long frac_digits = 0;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    for (size_t i = dot + 1; i < s.size() && isdigit(s[i]); ++i) ++frac_digits;
  }
  mpfr_t u;
  mpfr_init2(u, kRadiusPrec);
  mpfr_set_ui(u, 5, MPFR_RNDU);
  mpfr_t p;
  mpfr_init2(p, kRadiusPrec);
  mpfr_ui_pow_ui(p, 10, static_cast<unsigned long>(frac_digits + 1), MPFR_RNDD);
  mpfr_div(u, u, p, MPFR_RNDU);
  mpfr_add(b.rad_, b.rad_, u, MPFR_RNDU);
  mpfr_clear(u);
  mpfr_clear(p);
  return b;
}

bool Ball::certainly_positive() const {
  if (mpfr_sgn(mid_) <= 0) return false;
  mpfr_t l;
  mpfr_init2(l, kRadiusPrec);
  mpfr_sub(l, mid_, rad_, MPFR_RNDD);
  bool r = mpfr_sgn(l) > 0;
  mpfr_clear(l);
  return r;
}

bool Ball::certainly_negative() const {
  if (mpfr_sgn(mid_) >= 0) return false;
  mpfr_t u;
  mpfr_init2(u, kRadiusPrec);
  mpfr_add(u, mid_, rad_, MPFR_RNDU);
  bool r = mpfr_sgn(u) < 0;
  mpfr_clear(u);
  return r;
}

bool Ball::contains_zero() const {
  return !certainly_positive() && !certainly_negative();
}

bool Ball::magnitude_below_2exp(long e) const {
  mpfr_t m;
  mpfr_init2(m, kRadiusPrec);
  mpfr_abs(m, mid_, MPFR_RNDU);
  mpfr_add(m, m, rad_, MPFR_RNDU);
  mpfr_t t;
  mpfr_init2(t, kRadiusPrec);
  mpfr_set_ui_2exp(t, 1, e, MPFR_RNDD);
  bool r = mpfr_less_p(m, t);
  mpfr_clear(m);
  mpfr_clear(t);
  return r;
}

bool Ball::radius_below_2exp(long e) const {
  mpfr_t t;
  mpfr_init2(t, kRadiusPrec);
  mpfr_set_ui_2exp(t, 1, e, MPFR_RNDD);
  bool r = mpfr_less_p(rad_, t);
  mpfr_clear(t);
  return r;
}

bool Ball::contains(const Ball& o) const {
  // |mid - o.mid| + o.rad <= rad
  mpfr_t d;
  mpfr_init2(d, kRadiusPrec);
  mpfr_sub(d, mid_, o.mid_, MPFR_RNDA);  // away-from-zero: upper bound of |.|
  mpfr_abs(d, d, MPFR_RNDU);
  mpfr_add(d, d, o.rad_, MPFR_RNDU);
  bool r = mpfr_lessequal_p(d, rad_);
  mpfr_clear(d);
  return r;
}

bool Ball::overlaps(const Ball& o) const {
  // |mid - o.mid| <= rad + o.rad
  mpfr_t d, s;
  mpfr_init2(d, kRadiusPrec);
  mpfr_init2(s, kRadiusPrec);
  mpfr_sub(d, mid_, o.mid_, MPFR_RNDZ);  // toward zero: lower bound of |.|
  mpfr_abs(d, d, MPFR_RNDZ);
  mpfr_add(s, rad_, o.rad_, MPFR_RNDU);
  bool r = mpfr_lessequal_p(d, s);
  mpfr_clear(d);
  mpfr_clear(s);
  return r;
}

Ball Ball::rad_ball() const {
  Ball b;
  mpfr_set(b.mid_, rad_, MPFR_RNDU);
  return b;
}

Ball Ball::abs_lower() const {
  Ball b;
  mpfr_abs(b.mid_, mid_, MPFR_RNDD);
  mpfr_sub(b.mid_, b.mid_, rad_, MPFR_RNDD);
  if (mpfr_sgn(b.mid_) < 0) mpfr_set_zero(b.mid_, 1);
  return b;
}

Ball Ball::lower_bound() const {
  Ball b;
  mpfr_sub(b.mid_, mid_, rad_, MPFR_RNDD);
  return b;
}

Ball Ball::upper_bound() const {
  Ball b;
  mpfr_add(b.mid_, mid_, rad_, MPFR_RNDU);
  return b;
}

Ball Ball::widened_by(const Ball& r) const {
  Ball b(*this);
  mpfr_t u;
  mpfr_init2(u, kRadiusPrec);
  mpfr_abs(u, r.mid_, MPFR_RNDU);
  mpfr_add(u, u, r.rad_, MPFR_RNDU);
  mpfr_add(b.rad_, b.rad_, u, MPFR_RNDU);
  mpfr_clear(u);
  return b;
}

Ball Ball::widened_2exp(long e) const {
  Ball b(*this);
  mpfr_t u;
  mpfr_init2(u, kRadiusPrec);
  mpfr_set_ui_2exp(u, 1, e, MPFR_RNDU);
  mpfr_add(b.rad_, b.rad_, u, MPFR_RNDU);
  mpfr_clear(u);
  return b;
}

bool certainly_greater(const Ball& a, const Ball& b) {
  // a.mid - a.rad > b.mid + b.rad
  mpfr_t lo, hi;
  mpfr_init2(lo, kRadiusPrec);
  mpfr_init2(hi, kRadiusPrec);
  mpfr_sub(lo, a.mid_, a.rad_, MPFR_RNDD);
  mpfr_add(hi, b.mid_, b.rad_, MPFR_RNDU);
  bool r = mpfr_greater_p(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

std::string Ball::to_string(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, mid_);
  return std::string(buf.data());
}

std::string Ball::debug_string() const {
  std::vector<char> buf(160);
  mpfr_snprintf(buf.data(), buf.size(), "%.20Rg (+/- %.3Rg)", mid_, rad_);
  return std::string(buf.data());
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball c;
  int t = mpfr_add(c.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(c.rad_, a.rad_, b.rad_, MPFR_RNDU);
  c.absorb_rounding(t);
  return c;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball c;
  int t = mpfr_sub(c.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(c.rad_, a.rad_, b.rad_, MPFR_RNDU);
  c.absorb_rounding(t);
  return c;
}

Ball operator-(const Ball& a) {
  Ball c(a);
  mpfr_neg(c.mid_, c.mid_, MPFR_RNDN);
  return c;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball c;
  int t = mpfr_mul(c.mid_, a.mid_, b.mid_, MPFR_RNDN);
  // rad = |a.mid|*b.rad + a.rad*(|b.mid| + b.rad)
  mpfr_t am, bm, u;
  mpfr_init2(am, kRadiusPrec);
  mpfr_init2(bm, kRadiusPrec);
  mpfr_init2(u, kRadiusPrec);
  mpfr_abs(am, a.mid_, MPFR_RNDU);
  mpfr_abs(bm, b.mid_, MPFR_RNDU);
  mpfr_add(bm, bm, b.rad_, MPFR_RNDU);
  mpfr_mul(u, am, b.rad_, MPFR_RNDU);
  mpfr_mul(bm, bm, a.rad_, MPFR_RNDU);
  mpfr_add(c.rad_, u, bm, MPFR_RNDU);
  mpfr_clear(am);
  mpfr_clear(bm);
  mpfr_clear(u);
  c.absorb_rounding(t);
  return c;
}

Ball operator/(const Ball& a, const Ball& b) {
  // lower bound of |b|
  mpfr_t lb;
  mpfr_init2(lb, kRadiusPrec);
  mpfr_abs(lb, b.mid_, MPFR_RNDD);
  mpfr_sub(lb, lb, b.rad_, MPFR_RNDD);
  if (mpfr_sgn(lb) <= 0) {
    mpfr_clear(lb);
    throw need_more_precision("division by ball containing zero");
  }
  Ball c;
  int t = mpfr_div(c.mid_, a.mid_, b.mid_, MPFR_RNDN);
  // rad = (a.rad*|b.mid| + |a.mid|*b.rad) / (|b.mid| * lb)
  mpfr_t am, bm, num, den;
  mpfr_init2(am, kRadiusPrec);
  mpfr_init2(bm, kRadiusPrec);
  mpfr_init2(num, kRadiusPrec);
  mpfr_init2(den, kRadiusPrec);
  mpfr_abs(am, a.mid_, MPFR_RNDU);
  mpfr_abs(bm, b.mid_, MPFR_RNDU);
  mpfr_mul(num, a.rad_, bm, MPFR_RNDU);
  mpfr_mul(am, am, b.rad_, MPFR_RNDU);
  mpfr_add(num, num, am, MPFR_RNDU);
  mpfr_abs(den, b.mid_, MPFR_RNDD);
  mpfr_mul(den, den, lb, MPFR_RNDD);
  mpfr_div(c.rad_, num, den, MPFR_RNDU);
  mpfr_clear(am);
  mpfr_clear(bm);
  mpfr_clear(num);
  mpfr_clear(den);
  mpfr_clear(lb);
  c.absorb_rounding(t);
  return c;
}

Ball& Ball::operator+=(const Ball& b) { return *this = *this + b; }
Ball& Ball::operator-=(const Ball& b) { return *this = *this - b; }
Ball& Ball::operator*=(const Ball& b) { return *this = *this * b; }

Ball sqrt(const Ball& a) {
  mpfr_t l;
  mpfr_init2(l, kRadiusPrec);
  mpfr_sub(l, a.mid_, a.rad_, MPFR_RNDD);
  Ball c;
  if (mpfr_sgn(l) > 0) {
    int t = mpfr_sqrt(c.mid_, a.mid_, MPFR_RNDN);
    // |sqrt(x) - sqrt(m)| <= rad / (2 sqrt(l))
    mpfr_t sl;
    mpfr_init2(sl, kRadiusPrec);
    mpfr_sqrt(sl, l, MPFR_RNDD);
    mpfr_mul_2si(sl, sl, 1, MPFR_RNDD);
    mpfr_div(c.rad_, a.rad_, sl, MPFR_RNDU);
    mpfr_clear(sl);
    c.absorb_rounding(t);
  } else {
    mpfr_t u;
    mpfr_init2(u, kRadiusPrec);
    mpfr_add(u, a.mid_, a.rad_, MPFR_RNDU);
    if (mpfr_sgn(u) < 0) {
      mpfr_clear(u);
      mpfr_clear(l);
      throw need_more_precision("sqrt of certainly-negative ball");
    }
    // enclosure [0, sqrt(u)]
    mpfr_sqrt(u, u, MPFR_RNDU);
    mpfr_mul_2si(u, u, -1, MPFR_RNDU);
    int t = mpfr_set(c.mid_, u, MPFR_RNDN);
    mpfr_set(c.rad_, u, MPFR_RNDU);
    mpfr_clear(u);
    c.absorb_rounding(t);
  }
  mpfr_clear(l);
  return c;
}

Ball abs(const Ball& a) {
  Ball c(a);
  mpfr_abs(c.mid_, c.mid_, MPFR_RNDN);
  return c;
}

Ball mul_2exp(const Ball& a, long e) {
  Ball c(a);
  mpfr_mul_2si(c.mid_, c.mid_, e, MPFR_RNDN);
  mpfr_mul_2si(c.rad_, c.rad_, e, MPFR_RNDU);
  return c;
}

Ball mag_upper(const Ball& a) {
  Ball c;
  mpfr_abs(c.mid_, a.mid_, MPFR_RNDU);
  mpfr_add(c.mid_, c.mid_, a.rad_, MPFR_RNDU);
  return c;
}

// --------------------------------------------------------------------- sign

Sign decide_sign(const Ball& x, const ZeroPolicy& policy) {
  if (x.magnitude_below_2exp(policy.zero_threshold_exponent)) return Sign::zero;
  if (x.certainly_positive()) return Sign::positive;
  if (x.certainly_negative()) return Sign::negative;
  return Sign::indeterminate;
}

Sign decide_sign_or_escalate(const Ball& x, const ZeroPolicy& policy) {
  Sign s = decide_sign(x, policy);
  if (s == Sign::indeterminate)
    throw need_more_precision("indeterminate sign: " + x.debug_string());
  return s;
}

// -------------------------------------------------------------------- CBall

CBall operator/(const CBall& a, const CBall& b) {
  Ball n2 = abs_sq(b);
  CBall num = a * conj(b);
  return CBall(num.re / n2, num.im / n2);
}

Ball mag_upper(const CBall& a) {
  Ball m2 = mag_upper(a.re) * mag_upper(a.re) + mag_upper(a.im) * mag_upper(a.im);
  return mag_upper(sqrt(m2));
}

CBall CBall::pow_int(long k) const {
  CBall base = *this;
  bool inv = k < 0;
  unsigned long e = inv ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  CBall acc = CBall::from_int(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  if (inv) acc = CBall::from_int(1) / acc;
  return acc;
}

std::string CBall::to_string(int digits) const {
  std::string r = re.to_string(digits);
  std::string i = im.to_string(digits);
  if (i == "0" || i == "-0") return r;
  if (r == "0" || r == "-0") return i + "i";
  return r + (i[0] == '-' ? "" : "+") + i + "i";
}

bool is_zero(const CBall& x, const ZeroPolicy& p) {
  return decide_sign(x.re, p) == Sign::zero && decide_sign(x.im, p) == Sign::zero;
}

// ---------------------------------------------------------- quantum numbers

Ball quantum_number(long k, const Ball& delta) {
  if (k < 0) return -quantum_number(-k, delta);
  Ball prev;                     // [0]
  Ball cur = Ball::from_int(1);  // [1]
  if (k == 0) return prev;
  for (long i = 1; i < k; ++i) {
    Ball next = delta * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace jf
