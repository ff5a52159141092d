#pragma once
// Ball arithmetic over MPFR: midpoint at a thread-local working precision,
// 64-bit upward-rounded radius, rounding error absorbed into the radius after
// every operation.  All engine computations are certified enclosures; sign
// decisions either succeed on the enclosure or request more precision.

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jf {

// ---------------------------------------------------------------- precision

mpfr_prec_t working_precision();
void set_working_precision(mpfr_prec_t bits);

// RAII scope for temporarily switching the working precision.
struct PrecisionGuard {
  explicit PrecisionGuard(mpfr_prec_t bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  mpfr_prec_t saved_;
};

// Thrown by an operation whose result cannot be certified at the current
// working precision (e.g. division by a ball containing zero, an
// indeterminate sign decision).  The escalation driver catches it and retries
// at double the precision.
struct need_more_precision : std::runtime_error {
  explicit need_more_precision(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown by the escalation driver once the maximum precision has been
// reached without resolving all decisions.
struct precision_exhausted : std::runtime_error {
  explicit precision_exhausted(const std::string& what)
      : std::runtime_error(what) {}
};

// --------------------------------------------------------------------- Ball

class Ball {
 public:
  Ball();  // exact zero
  Ball(const Ball& o);
  Ball(Ball&& o) noexcept;
  Ball& operator=(const Ball& o);
  Ball& operator=(Ball&& o) noexcept;
  ~Ball();

  static Ball from_int(long v);
  static Ball from_ratio(long p, long q);
  static Ball from_double(double v);  // exact
  // Decimal string, e.g. "0.6005" or "-1.25e-3"; result is an enclosure of
  // the exact decimal value.
  static Ball from_decimal(const std::string& s);
  // Enclosure of the exact decimal value widened so that any real number
  // printing to these digits is contained (half-ulp of the last digit).
  static Ball from_decimal_digits(const std::string& s);
  // Midpoint copied from v (rounded to working precision, rounding absorbed
  // into the radius), zero radius otherwise.
  static Ball exact(mpfr_srcptr v);

  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }

  bool is_exact() const { return mpfr_zero_p(rad_); }
  bool certainly_positive() const;   // mid - rad > 0
  bool certainly_negative() const;   // mid + rad < 0
  bool contains_zero() const;
  // |mid| + rad < 2^e
  bool magnitude_below_2exp(long e) const;
  // rad < 2^e
  bool radius_below_2exp(long e) const;
  // true if every point of o lies in *this
  bool contains(const Ball& o) const;
  // true if the two balls share at least one point
  bool overlaps(const Ball& o) const;

  double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  // The radius as an exact ball.
  Ball rad_ball() const;
  // max(0, |mid| - rad) rounded down, as an exact ball.
  Ball abs_lower() const;
  // mid - rad rounded down / mid + rad rounded up, as exact balls.
  Ball lower_bound() const;
  Ball upper_bound() const;
  // Same ball with the radius enlarged by 2^e.
  Ball widened_2exp(long e) const;
  // Same ball with the radius enlarged by an upper bound of |r|.
  Ball widened_by(const Ball& r) const;
  // Decimal rendering of the midpoint with the given significant digits.
  std::string to_string(int digits = 20) const;
  // Midpoint and radius, for diagnostics: "m (+/- r)".
  std::string debug_string() const;

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a);
  friend Ball operator*(const Ball& a, const Ball& b);
  friend Ball operator/(const Ball& a, const Ball& b);
  Ball& operator+=(const Ball& b);
  Ball& operator-=(const Ball& b);
  Ball& operator*=(const Ball& b);

  friend Ball sqrt(const Ball& a);  // requires a to be (numerically) >= 0
  friend Ball abs(const Ball& a);
  friend Ball mul_2exp(const Ball& a, long e);
  // max over the ball of |x|, rounded up, as a Ball with zero radius
  friend Ball mag_upper(const Ball& a);
  friend bool certainly_greater(const Ball& a, const Ball& b);

 private:
  friend class CBall;
  void absorb_rounding(int ternary);  // add one ulp of mid_ to rad_
  mpfr_t mid_;  // working precision at construction time
  mpfr_t rad_;  // RADIUS_PREC bits, always >= 0, rounded up
};

Ball operator+(const Ball& a, const Ball& b);
Ball operator-(const Ball& a, const Ball& b);
Ball operator*(const Ball& a, const Ball& b);
Ball operator/(const Ball& a, const Ball& b);
Ball sqrt(const Ball& a);
Ball abs(const Ball& a);
Ball mul_2exp(const Ball& a, long e);
Ball mag_upper(const Ball& a);

// every point of a is strictly greater than every point of b
bool certainly_greater(const Ball& a, const Ball& b);
inline bool certainly_less(const Ball& a, const Ball& b) {
  return certainly_greater(b, a);
}

// ----------------------------------------------------------------- sign

enum class Sign { negative, zero, positive, indeterminate };

// Certified-zero policy: a ball is declared numerically zero when its whole
// extent lies below 2^zero_threshold_exponent in magnitude.
struct ZeroPolicy {
  mpfr_prec_t base_precision = 256;
  mpfr_prec_t max_precision = 4096;
  long zero_threshold_exponent = -128;
  static ZeroPolicy for_precision(mpfr_prec_t bits) {
    return ZeroPolicy{bits, 4096, -static_cast<long>(bits) / 2};
  }
};

Sign decide_sign(const Ball& x, const ZeroPolicy& policy);
// Same, but converts `indeterminate` into a thrown need_more_precision.
Sign decide_sign_or_escalate(const Ball& x, const ZeroPolicy& policy);

// Runs fn at policy.base_precision, doubling the working precision on
// need_more_precision up to policy.max_precision; rethrows as
// precision_exhausted beyond that.
template <typename Fn>
auto run_with_escalation(const ZeroPolicy& policy, Fn&& fn) {
  mpfr_prec_t prec = policy.base_precision;
  for (;;) {
    PrecisionGuard guard(prec);
    try {
      return fn(ZeroPolicy::for_precision(prec));
    } catch (const need_more_precision& e) {
      if (prec >= policy.max_precision)
        throw precision_exhausted(std::string("at max precision: ") + e.what());
      prec *= 2;
    }
  }
}

// -------------------------------------------------------------------- CBall

// Rectangular complex ball.
class CBall {
 public:
  Ball re, im;

  CBall() = default;
  CBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}
  explicit CBall(const Ball& r) : re(r), im() {}

  static CBall from_int(long v) { return CBall(Ball::from_int(v)); }
  static CBall i() { return CBall(Ball(), Ball::from_int(1)); }

  bool is_real(const ZeroPolicy& p) const {
    return decide_sign(im, p) == Sign::zero;
  }
  bool contains(const CBall& o) const {
    return re.contains(o.re) && im.contains(o.im);
  }
  bool overlaps(const CBall& o) const {
    return re.overlaps(o.re) && im.overlaps(o.im);
  }
  bool magnitude_below_2exp(long e) const {
    return re.magnitude_below_2exp(e - 1) && im.magnitude_below_2exp(e - 1);
  }
  bool radius_below_2exp(long e) const {
    return re.radius_below_2exp(e - 1) && im.radius_below_2exp(e - 1);
  }

  friend CBall operator+(const CBall& a, const CBall& b) {
    return CBall(a.re + b.re, a.im + b.im);
  }
  friend CBall operator-(const CBall& a, const CBall& b) {
    return CBall(a.re - b.re, a.im - b.im);
  }
  friend CBall operator-(const CBall& a) { return CBall(-a.re, -a.im); }
  friend CBall operator*(const CBall& a, const CBall& b) {
    return CBall(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend CBall operator*(const Ball& a, const CBall& b) {
    return CBall(a * b.re, a * b.im);
  }
  friend CBall operator*(const CBall& a, const Ball& b) {
    return CBall(a.re * b, a.im * b);
  }
  friend CBall operator/(const CBall& a, const CBall& b);
  CBall& operator+=(const CBall& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  CBall& operator-=(const CBall& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  CBall& operator*=(const CBall& b) { return *this = *this * b; }

  friend CBall conj(const CBall& a) { return CBall(a.re, -a.im); }
  friend Ball abs_sq(const CBall& a) { return a.re * a.re + a.im * a.im; }
  // upper bound on |a|, as exact ball
  friend Ball mag_upper(const CBall& a);

  CBall pow_int(long k) const;  // k may be negative (requires invertibility)

  std::string to_string(int digits = 20) const;
};

bool is_zero(const CBall& x, const ZeroPolicy& p);

// ---------------------------------------------------------- quantum numbers

// [k]_q with q + 1/q = delta: [0]=0, [1]=1, [k+1] = delta*[k] - [k-1].
// Negative k follows [-k] = -[k].
Ball quantum_number(long k, const Ball& delta);

}  // namespace jf
