#include "doctest.h"
#include "orbitlab/errors.hpp"
#include "orbitlab/orbit.hpp"

#include <cmath>

using namespace orbitlab;

namespace {

// d <= r + sqrt(r0_sq), decided exactly from d^2.
bool within(const Rational& d_sq, const Rational& r, const Rational& r0_sq) {
  const Rational lhs = d_sq - r * r - r0_sq;
  return lhs <= 0 || lhs * lhs <= 4 * r * r * r0_sq;
}

// #{g in Gamma : d(x, gx) <= r + sqrt(r0_sq)} by sweeping coset reps and a box of lattice coefficients.
std::size_t box_count(const DeckGroup& deck, const Point& x, const Rational& r, const Rational& r0_sq, long box) {
  std::size_t n = 0;
  const auto& basis = deck.lattice().basis();
  std::vector<long> c(basis.size(), -box);
  const std::size_t k = basis.size();
  const std::size_t side = static_cast<std::size_t>(2 * box + 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= side;
  for (const auto& h : deck.coset_reps()) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      Vec t(deck.dimension());
      for (std::size_t i = 0; i < k; ++i) {
        const long ci = static_cast<long>(rest % side) - box;
        rest /= side;
        t = t + Rational(ci) * basis[i];
      }
      const Isometry g = Isometry::translation(t) * h;
      if (within(dist2(apply(g, x), x), r, r0_sq)) ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("orbit ball counts") {
  const auto z2 = bundled_deck("Z^2");
  const Point o{{0, 0}};
  CHECK(orbit_ball_count(z2, o, 1) == 5);
  CHECK(orbit_ball_count(z2, o, 2) == 13);
  for (const auto& name : bundled_deck_names())
    CHECK(orbit_ball_count(bundled_deck(name), bundled_base_point(name), 0) == 1);
  CHECK_THROWS_AS(orbit_ball_count(z2, o, -1), PreconditionError);
}

TEST_CASE("orbit counts are monotone and base-point equivariant") {
  for (const char* name : {"moebius2", "klein2", "moebiusxT"}) {
    const auto deck = bundled_deck(name);
    const Point x = bundled_base_point(name);
    const Isometry g = deck.generators().front();
    std::size_t prev = 0;
    for (long r = 1; r <= 12; ++r) {
      const auto n = orbit_ball_count(deck, x, r);
      CHECK(n >= prev);
      prev = n;
      CHECK(orbit_ball_count(deck, apply(g, x), r) == n);
    }
  }
}

TEST_CASE("growth fits") {
  {
    std::vector<Rational> radii{2, 4, 8, 16};
    const auto s = growth_exponent(radii, {2, 4, 8, 16});
    CHECK(s.fit.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    std::vector<Rational> radii{3, 5, 7, 11};
    std::vector<double> counts;
    for (const auto& r : radii) counts.push_back(2.5 * std::pow(r.get_d(), 2.7));
    CHECK(growth_exponent(radii, counts).fit.exponent == doctest::Approx(2.7).epsilon(1e-12));
  }
  const auto z3 = orbit_growth(bundled_deck("Z^3"), Point{{0, 0, 0}}, {4, 8, 16, 32});
  CHECK(z3.fit.exponent >= 2.9);
  CHECK(z3.fit.exponent <= 3.1);
  CHECK_THROWS_AS(growth_exponent({1, 2}, {1, 2}), PreconditionError);
  CHECK_THROWS_AS(growth_exponent({1, 2, 3}, {1, 0, 2}), PreconditionError);
  CHECK_THROWS_AS(growth_exponent({1, 3, 2}, {1, 2, 3}), PreconditionError);
}

TEST_CASE("Heisenberg word growth exponent") {
  const auto ball = word_ball(heisenberg_group(), 12);
  std::vector<Rational> radii;
  std::vector<double> counts;
  for (int r = 4; r <= 12; r += 2) {
    radii.emplace_back(r);
    counts.push_back(static_cast<double>(ball.ball_count(r)));
  }
  const auto s = growth_exponent(radii, counts);
  CHECK(s.fit.exponent >= 3.5);
  CHECK(s.fit.exponent <= 4.5);
}

TEST_CASE("Milnor containment examples") {
  const auto z2 = bundled_deck("Z^2").generated();
  CHECK(milnor_containment(z2, Point{{0, 0}}, 0).holds);
  const auto m = milnor_containment(z2, Point{{0, 0}}, 5);
  CHECK(m.h_sq == 1);
  CHECK(m.checked == 61);
  CHECK(m.holds);
  const auto mob = bundled_deck("moebius2").generated();
  const auto r = milnor_containment(mob, Point{{0, Rational(3, 10)}}, 4);
  CHECK(r.h_sq == 1 + Rational(9, 25));
  CHECK(r.checked == 9);
  CHECK(r.holds);
  CHECK(r.violations.empty());
}

TEST_CASE("Milnor containment on bundled groups up to r = 20") {
  for (const char* name : {"Z^2", "Z^3", "moebius2", "klein2", "cylinder2", "moebiusxT"}) {
    const auto rep = milnor_containment(bundled_deck(name).generated(), bundled_base_point(name), 20);
    CHECK_MESSAGE(rep.holds, name);
  }
}

TEST_CASE("finite index comparison") {
  const auto klein = bundled_deck("klein2");
  const Point x{{Rational(1, 10), Rational(1, 10)}};
  {
    const auto same = finite_index_comparison(klein, klein, {Isometry::identity(2)}, x, {1, 2, 4});
    CHECK(same.index == 1);
    CHECK(same.r0_sq == 0);
    for (const auto& row : same.rows) CHECK(row.count_big == row.count_small);
    CHECK(same.holds);
  }
  const auto cmp = lattice_index_comparison(klein, x, {2, 4, 8});
  CHECK(cmp.index == 2);
  CHECK(cmp.holds);
  const auto lattice = lattice_subgroup(klein);
  for (const auto& row : cmp.rows) {
    CHECK(row.count_big == box_count(klein, x, row.radius, 0, 12));
    CHECK(row.count_small == box_count(lattice, x, row.radius, cmp.r0_sq, 12));
  }
  const auto mob = lattice_index_comparison(bundled_deck("moebius2"), bundled_base_point("moebius2"), {1, 2, 4});
  CHECK(mob.index == 2);
  CHECK(mob.holds);
}

TEST_CASE("inconsistent coset data is rejected") {
  const auto klein = bundled_deck("klein2");
  const auto lattice = lattice_subgroup(klein);
  const Point x{{Rational(1, 10), Rational(1, 10)}};
  // Missing the s coset.
  CHECK_THROWS_AS(finite_index_comparison(klein, lattice, {Isometry::identity(2)}, x, {1}), PreconditionError);
  // Two representatives of the same coset.
  CHECK_THROWS_AS(finite_index_comparison(klein, lattice, {Isometry::identity(2), Isometry::translation({0, 1})}, x, {1}),
                  PreconditionError);
  // K not inside H.
  const auto half = DeckGroup("half", {Isometry::translation({Rational(1, 2), 0})}, {{Rational(1, 2), 0}},
                              {Isometry::identity(2)});
  CHECK_THROWS_AS(finite_index_comparison(bundled_deck("cylinder2"), half, {Isometry::identity(2)}, Point{{0, 0}}, {1}),
                  PreconditionError);
}
