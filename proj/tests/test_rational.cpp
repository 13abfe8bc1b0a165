#include "doctest.h"
#include "orbitlab/errors.hpp"
#include "orbitlab/rational.hpp"

#include <cmath>

using namespace orbitlab;

TEST_CASE("parse_rational accepts integers, fractions and decimals exactly") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-3/10") == Rational(-3, 10));
  CHECK(parse_rational("0.3") == Rational(3, 10));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("1e-2") == Rational(1, 100));
  CHECK(parse_rational("2.5e1") == 25);
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
}

TEST_CASE("canonical text form round-trips") {
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(-4, 2)) == "-2");
  for (const char* s : {"7/13", "-1/3", "0", "123456789012345678901234567891/7"})
    CHECK(to_string(parse_rational(s)) == s);
}

TEST_CASE("floor and ceil on negatives") {
  CHECK(floor(Rational(-7, 2)) == -4);
  CHECK(ceil(Rational(-7, 2)) == -3);
  CHECK(floor(Rational(7, 2)) == 3);
  CHECK(ceil(Rational(4)) == 4);
}

TEST_CASE("from_double is exact") {
  CHECK(from_double(0.5) == Rational(1, 2));
  CHECK(from_double(0.1).get_d() == 0.1);
}

TEST_CASE("sqrt_upper bounds the root from above") {
  for (int q : {0, 1, 2, 3, 10, 1000003}) {
    const Rational u = sqrt_upper(q);
    CHECK(u * u >= q);
    CHECK(u.get_d() <= std::sqrt(q) + 1e-6);
  }
}

TEST_CASE("integer_window lists exactly the integers within the radius") {
  // Brute-force oracle over a wide range.
  for (const auto& [c, r2] : std::vector<std::pair<Rational, Rational>>{
           {Rational(1, 3), 2}, {Rational(-5, 2), Rational(1, 4)}, {0, 0}, {Rational(1, 2), Rational(1, 5)}}) {
    long lo = 1000, hi = -1000;
    for (long n = -50; n <= 50; ++n) {
      const Rational d = Rational(n) - c;
      if (d * d <= r2) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
    }
    const auto w = integer_window(c, r2);
    if (lo > hi) {
      CHECK_FALSE(w.has_value());
    } else {
      REQUIRE(w.has_value());
      CHECK(w->first == lo);
      CHECK(w->second == hi);
    }
  }
}

TEST_CASE("Radius containment is exact at the boundary") {
  const Radius r = Radius::exact(5);
  CHECK(r.contains(25));
  CHECK_FALSE(r.contains(Rational(2500000001, 100000000)));
  const Radius s = Radius::sqrt_of(2);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(Rational(200001, 100000)));
  // 1 + sqrt(2): squared value 3 + 2 sqrt(2) is irrational; probe both sides.
  const Radius t = Radius::sum(1, 2);
  const double exact = (1 + std::sqrt(2.0)) * (1 + std::sqrt(2.0));
  CHECK(t.contains(from_double(exact - 1e-9)));
  CHECK_FALSE(t.contains(from_double(exact + 1e-9)));
  CHECK(t.contains(1));
  CHECK(t.squared_upper() >= from_double(exact));
  CHECK(Radius::sum(0, 0).contains(0));
  CHECK_FALSE(Radius::sum(0, 0).contains(Rational(1, 1000000)));
}
