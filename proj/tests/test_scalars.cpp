#include "doctest.h"
#include "jf/lambda.hpp"
#include "jf/scalar.hpp"

#include <random>

using namespace jf;

namespace {

Ball eval_real(const std::string& text) {
  CBall v = eval_scalar(parse_scalar(text));
  REQUIRE(v.im.magnitude_below_2exp(-60));
  return v.re;
}

}  // namespace

TEST_CASE("ball arithmetic encloses exact results") {
  PrecisionGuard g(256);
  Ball third = Ball::from_ratio(1, 3);
  Ball one = third + third + third;
  CHECK(one.overlaps(Ball::from_int(1)));
  CHECK(!one.is_exact());  // rounding happened and was absorbed
  CHECK(one.radius_below_2exp(-250));

  Ball two = sqrt(Ball::from_int(2)) * sqrt(Ball::from_int(2));
  CHECK(two.overlaps(Ball::from_int(2)));
  CHECK(two.radius_below_2exp(-250));

  Ball q = Ball::from_ratio(-7, 4) / Ball::from_ratio(7, 2);
  CHECK(q.overlaps(Ball::from_ratio(-1, 2)));
}

TEST_CASE("division by a ball containing zero escalates") {
  PrecisionGuard g(256);
  Ball tiny = sqrt(Ball::from_int(2)) * sqrt(Ball::from_int(2)) - Ball::from_int(2);
  CHECK(tiny.contains_zero());
  CHECK_THROWS_AS(Ball::from_int(1) / tiny, need_more_precision);
}

TEST_CASE("sign decisions follow the zero policy") {
  PrecisionGuard g(256);
  ZeroPolicy pol = ZeroPolicy::for_precision(256);
  CHECK(decide_sign(Ball::from_int(3), pol) == Sign::positive);
  CHECK(decide_sign(Ball::from_ratio(-1, 7), pol) == Sign::negative);
  Ball tiny = sqrt(Ball::from_int(2)) * sqrt(Ball::from_int(2)) - Ball::from_int(2);
  CHECK(decide_sign(tiny, pol) == Sign::zero);
  // a genuinely small but resolvable number: 2^-100 is nonzero at threshold -128
  Ball small = mul_2exp(Ball::from_int(1), -100);
  CHECK(decide_sign(small, pol) == Sign::positive);
  // wide ball straddling zero -> indeterminate
  Ball wide = Ball::from_int(0).widened_2exp(-10);
  CHECK(decide_sign(wide, pol) == Sign::indeterminate);
  CHECK_THROWS_AS(decide_sign_or_escalate(wide, pol), need_more_precision);
}

TEST_CASE("escalation driver doubles precision until decidable") {
  int calls = 0;
  ZeroPolicy pol;
  pol.base_precision = 256;
  pol.max_precision = 4096;
  long got = run_with_escalation(pol, [&](const ZeroPolicy&) -> long {
    ++calls;
    if (working_precision() < 1024) throw need_more_precision("demo");
    return static_cast<long>(working_precision());
  });
  CHECK(got == 1024);
  CHECK(calls == 3);

  ZeroPolicy tight = pol;
  tight.max_precision = 512;
  CHECK_THROWS_AS(run_with_escalation(tight,
                                      [&](const ZeroPolicy&) -> int {
                                        throw need_more_precision("never");
                                      }),
                  precision_exhausted);
}

TEST_CASE("quantum numbers: recurrence matches the q-power formula") {
  PrecisionGuard g(256);
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> dist(2.001, 2.999);
  for (int trial = 0; trial < 5; ++trial) {
    Ball delta = Ball::from_decimal(std::to_string(dist(rng)));
    Ball q = (delta + sqrt(delta * delta - Ball::from_int(4))) / Ball::from_int(2);
    Ball qinv = Ball::from_int(1) / q;
    Ball denom = q - qinv;
    for (long k = 0; k <= 12; ++k) {
      Ball lhs = quantum_number(k, delta);
      Ball qk = Ball::from_int(1), qmk = Ball::from_int(1);
      for (long j = 0; j < k; ++j) {
        qk *= q;
        qmk *= qinv;
      }
      Ball rhs = (qk - qmk) / denom;
      CHECK(lhs.overlaps(rhs));
    }
    // negative arguments are odd
    CHECK(quantum_number(-3, delta).overlaps(-quantum_number(3, delta)));
  }
}

TEST_CASE("quantum number [5] at delta^2 = (5+sqrt(13))/2 is 3+sqrt(13)") {
  PrecisionGuard g(256);
  Ball delta = sqrt(eval_real("(5+sqrt(13))/2"));
  Ball v = quantum_number(5, delta);
  CHECK(v.overlaps(eval_real("3+sqrt(13)")));
  CHECK(v.radius_below_2exp(-200));
}

TEST_CASE("scalar expression grammar") {
  PrecisionGuard g(256);
  CHECK(eval_real("1/2").overlaps(Ball::from_ratio(1, 2)));
  CHECK(eval_real("sqrt(13)").overlaps(sqrt(Ball::from_int(13))));
  CHECK(eval_real("(3*sqrt(5)-7)/4")
            .overlaps((Ball::from_int(3) * sqrt(Ball::from_int(5)) -
                       Ball::from_int(7)) /
                      Ball::from_int(4)));
  CHECK(eval_real("-3/4").overlaps(Ball::from_ratio(-3, 4)));

  CBall z = eval_scalar(parse_scalar("2.52i"));
  CHECK(z.re.magnitude_below_2exp(-100));
  CHECK(z.im.overlaps(Ball::from_ratio(252, 100)));

  CBall w = eval_scalar(parse_scalar("-i*sqrt(2)"));
  CHECK(w.im.overlaps(-sqrt(Ball::from_int(2))));

  CHECK_THROWS_AS(parse_scalar("3 +"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar("sqrt(2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar("1/0x"), std::invalid_argument);
}

TEST_CASE("lambda literal parse and verbatim reprint") {
  auto e = parse_scalar("L[243,0,-132,0,16]@0.6005");
  REQUIRE(e->kind == ScalarExpr::Kind::lambda);
  CHECK(e->lam.coeffs == std::vector<long long>{243, 0, -132, 0, 16});
  CHECK(e->lam.approx == "0.6005");
  CHECK(!e->lam.imaginary);
  CHECK(print_scalar(e) == "L[243,0,-132,0,16]@0.6005");

  auto ei = parse_scalar("L[16,0,-116,0,-1]@0.09279i");
  REQUIRE(ei->kind == ScalarExpr::Kind::lambda);
  CHECK(ei->lam.imaginary);
  CHECK(print_scalar(ei) == "L[16,0,-116,0,-1]@0.09279i");
}

TEST_CASE("lambda resolution certifies an isolated root") {
  PrecisionGuard g(256);
  // 243 x^4 - 132 x^2 + 16: roots +/-0.60052, +/-0.42729
  CBall v = eval_scalar(parse_scalar("L[243,0,-132,0,16]@0.6005"));
  CHECK(v.im.magnitude_below_2exp(-100));
  // check against the closed form sqrt((132+sqrt(1872))/486)
  Ball target = sqrt(eval_real("(132+sqrt(1872))/486"));
  CHECK(v.re.overlaps(target));
  CHECK(v.radius_below_2exp(-200));

  // purely imaginary root
  CBall w = eval_scalar(parse_scalar("L[16,0,-116,0,-1]@0.09279i"));
  CHECK(w.re.magnitude_below_2exp(-100));
  Ball wt = sqrt(eval_real("(-116+sqrt(13520))/32"));
  CHECK(w.im.overlaps(wt));

  // conjugate literal picks the other root
  CBall wc = eval_scalar(parse_scalar("L[16,0,-116,0,-1]@-0.09279i"));
  CHECK(wc.im.overlaps(-wt));
}

TEST_CASE("ambiguous lambda literals are rejected") {
  PrecisionGuard g(256);
  // equidistant from +/- sqrt(2)
  CHECK_THROWS_AS(eval_scalar(parse_scalar("L[1,0,-2]@0.0")),
                  std::invalid_argument);
  // far too few digits: 0.5 sits between the roots 0.42729 and 0.60052
  CHECK_THROWS_AS(eval_scalar(parse_scalar("L[243,0,-132,0,16]@0.5")),
                  std::invalid_argument);
}

TEST_CASE("identification accepts the right root and rejects others") {
  PrecisionGuard g(256);
  Ball target = sqrt(eval_real("(132+sqrt(1872))/486"));
  CHECK(identify(CBall(target), "L[243,0,-132,0,16]@0.6005"));
  CHECK(!identify(CBall(-target), "L[243,0,-132,0,16]@0.6005"));
  CHECK(!identify(CBall(target + Ball::from_ratio(1, 100)),
                  "L[243,0,-132,0,16]@0.6005"));
  CHECK(identify(CBall(eval_real("3+sqrt(13)")), "3+sqrt(13)"));
}

TEST_CASE("printed-digit enclosures cover their rounding neighborhood") {
  PrecisionGuard g(256);
  Ball b = Ball::from_decimal_digits("0.6005");
  CHECK(b.contains(Ball::from_decimal("0.60052")));
  CHECK(b.contains(Ball::from_decimal("0.60048")));
  CHECK(!b.contains(Ball::from_decimal("0.6012")));
}

TEST_CASE("certified roots of an even octic are pairwise disjoint") {
  PrecisionGuard g(256);
  // x^8 + 6x^6 + 3x^4 + 34x^2 + 9
  IntPoly p{{9, 0, 34, 0, 3, 0, 6, 0, 1}};
  auto roots = certified_roots(p);
  REQUIRE(roots.size() == 8);
  for (const auto& r : roots) {
    CBall val = p.eval(r);
    CHECK(val.re.contains_zero());
    CHECK(val.im.contains_zero());
  }
}
