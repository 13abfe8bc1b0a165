#include "doctest.h"
#include "orbitlab/errors.hpp"
#include "orbitlab/lattice.hpp"

#include <set>

using namespace orbitlab;

TEST_CASE("coordinates and membership") {
  const Lattice l({{2, 0}, {1, 3}}, 2);
  const auto c = l.coordinates({5, 9});
  REQUIRE(c.has_value());
  CHECK((*c)[0] == 1);
  CHECK((*c)[1] == 3);
  CHECK_FALSE(l.contains({1, 0}));
  CHECK(l.combination({Integer(1), Integer(3)}) == Vec{5, 9});
  CHECK(l.gram_determinant() == 36);
}

TEST_CASE("lower-rank lattice in higher dimension") {
  const Lattice l({{2, 0, 0}, {0, 0, 1}}, 3);
  CHECK(l.rank() == 2);
  CHECK(l.contains({4, 0, -3}));
  CHECK_FALSE(l.contains({4, 1, -3}));
  CHECK(l.perpendicular_part({3, 5, 7}) == Vec{0, 5, 0});
  CHECK(l.orthogonal_to_span({0, 1, 0}));
  CHECK_FALSE(l.orthogonal_to_span({1, 1, 0}));
}

TEST_CASE("degenerate bases are rejected") {
  CHECK_THROWS_AS(Lattice({{1, 2}, {2, 4}}, 2), PreconditionError);
  CHECK_THROWS_AS(Lattice({{0, 0}}, 2), PreconditionError);
}

TEST_CASE("enumerate_near matches a box sweep on a skewed lattice") {
  const Lattice l({{1, 0}, {Rational(7, 3), Rational(1, 5)}}, 2);
  const Vec center{Rational(1, 7), Rational(-2, 9)};
  for (const Rational bound : {Rational(0), Rational(1, 100), Rational(1), Rational(9), Rational(37, 2)}) {
    std::set<std::pair<long, long>> expect, got;
    // Any hit has |b|/5 <= 5 and |a + 7b/3| <= 5.
    for (long b = -30; b <= 30; ++b)
      for (long a = -80; a <= 80; ++a) {
        const Vec p = l.combination({Integer(a), Integer(b)});
        if (norm2(p - center) <= bound) expect.insert({a, b});
      }
    l.enumerate_near(center, bound, [&](const std::vector<Integer>& c, const Vec& p, const Rational& d) {
      CHECK(norm2(p - center) == d);
      got.insert({c[0].get_si(), c[1].get_si()});
    });
    CHECK(got == expect);
  }
}
