#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lognumber.hpp"

using cm::CompensatedSum;
using cm::LogNumber;

TEST_CASE("construction and canonical zero") {
  const LogNumber zero;
  CHECK(zero.is_zero());
  CHECK(zero.sign() == 0);
  CHECK(std::isinf(zero.log_abs()));
  CHECK(LogNumber::from_value(0.0).is_zero());

  const LogNumber a = LogNumber::from_value(-3.5);
  CHECK(a.sign() == -1);
  CHECK(a.value() == doctest::Approx(-3.5).epsilon(1e-15));
  CHECK(LogNumber::from_log(1, 0.0).value() == 1.0);
  CHECK_THROWS_AS(LogNumber::from_log(2, 0.0), std::invalid_argument);
}

TEST_CASE("field operations match double arithmetic") {
  const double xs[] = {3.25, -0.125, 7.0, -2.0};
  for (double x : xs) {
    for (double y : xs) {
      const LogNumber a = LogNumber::from_value(x);
      const LogNumber b = LogNumber::from_value(y);
      CHECK((a * b).value() == doctest::Approx(x * y).epsilon(1e-14));
      CHECK((a / b).value() == doctest::Approx(x / y).epsilon(1e-14));
      CHECK((a + b).value() == doctest::Approx(x + y).epsilon(1e-14));
      CHECK((a - b).value() == doctest::Approx(x - y).epsilon(1e-14));
    }
  }
}

TEST_CASE("exact cancellation collapses to canonical zero") {
  const LogNumber a = LogNumber::from_value(42.0);
  const LogNumber d = a - a;
  CHECK(d.is_zero());
  CHECK(d.sign() == 0);
}

TEST_CASE("magnitudes far beyond double range") {
  const LogNumber big = LogNumber::from_log(1, 5000.0);
  const LogNumber bigger = big * big;
  CHECK(bigger.log_abs() == doctest::Approx(10000.0));
  CHECK((bigger / big).log_abs() == doctest::Approx(5000.0));
  // Adding a tiny number to a huge one leaves the huge one.
  const LogNumber tiny = LogNumber::from_log(1, -5000.0);
  CHECK((big + tiny).log_abs() == doctest::Approx(5000.0));
}

TEST_CASE("integer powers track sign parity") {
  const LogNumber m = LogNumber::from_value(-2.0);
  CHECK(m.pow_int(3).value() == doctest::Approx(-8.0));
  CHECK(m.pow_int(4).value() == doctest::Approx(16.0));
  CHECK(m.pow_int(0).value() == 1.0);
  CHECK(LogNumber().pow_int(5).is_zero());
  CHECK_THROWS_AS(LogNumber().pow_int(-1), cm::numeric_error);
}

TEST_CASE("division by zero signals a numeric failure") {
  const LogNumber a = LogNumber::from_value(1.0);
  CHECK_THROWS_AS(a / LogNumber(), cm::numeric_error);
}

TEST_CASE("abs_less orders by magnitude only") {
  CHECK(abs_less(LogNumber::from_value(-1.0), LogNumber::from_value(2.0)));
  CHECK(!abs_less(LogNumber::from_value(-3.0), LogNumber::from_value(2.0)));
  CHECK(abs_less(LogNumber(), LogNumber::from_value(1e-300)));
  CHECK(!abs_less(LogNumber::from_value(1.0), LogNumber()));
}

TEST_CASE("compensated sum beats naive accumulation") {
  // 1 + 1e16 - 1e16 repeated: naive sum loses the ones.
  CompensatedSum s;
  double naive = 0.0;
  for (int i = 0; i < 1000; ++i) {
    for (double x : {1.0, 1e16, -1e16}) {
      s.add(x);
      naive += x;
    }
  }
  CHECK(s.result() == doctest::Approx(1000.0));
  CHECK(naive != doctest::Approx(1000.0).epsilon(1e-3));
}
