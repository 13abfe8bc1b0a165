#include "doctest.h"
#include "orbitlab/errors.hpp"
#include "orbitlab/groups.hpp"

#include <cmath>
#include <random>
#include <set>
#include <tuple>

using namespace orbitlab;

namespace {

// Points of Z^k with l1-norm <= r, by recursion on the dimension.
long l1_count(int k, int r) {
  if (r < 0) return 0;
  if (k == 0) return 1;
  long total = 0;
  for (int a = -r; a <= r; ++a) total += l1_count(k - 1, r - std::abs(a));
  return total;
}

using Triple = std::tuple<long, long, long>;
Triple heis_mul(Triple g, Triple h) {
  const auto [a, b, c] = g;
  const auto [x, y, z] = h;
  return {a + x, b + y, c + z + a * y};
}

std::set<std::string> naive_orbit(const DeckGroup& deck, const Point& x, const Rational& r) {
  const auto group = deck.generated();
  Rational min_disp = -1;
  for (const auto& g : group.generators()) {
    const Rational d = dist2(apply(g, x), x);
    if (min_disp < 0 || d < min_disp) min_disp = d;
  }
  const long length = static_cast<long>(std::ceil(3 * r.get_d() / std::sqrt(min_disp.get_d())));
  std::set<std::string> seen{canonical_encoding(group.identity())};
  std::vector<Isometry> frontier{group.identity()};
  std::set<std::string> out;
  if (r >= 0) out.insert(canonical_encoding(group.identity()));
  for (long l = 0; l < length; ++l) {
    std::vector<Isometry> next;
    for (const auto& w : frontier)
      for (const auto& g : group.generators()) {
        const Isometry h = w * g;
        if (!seen.insert(canonical_encoding(h)).second) continue;
        if (dist2(apply(h, x), x) <= r * r) out.insert(canonical_encoding(h));
        next.push_back(h);
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("Z^2 word balls") {
  const auto z2 = bundled_deck("Z^2").generated();
  CHECK(word_ball(z2, 0).size() == 1);
  CHECK(word_ball(z2, 2).size() == 13);
}

TEST_CASE("Z^k word balls agree with the l1 count for r <= 20") {
  for (int k = 1; k <= 3; ++k) {
    const auto g = bundled_deck("Z^" + std::to_string(k)).generated();
    const auto ball = word_ball(g, 20);
    for (int r = 0; r <= 20; ++r) CHECK(static_cast<long>(ball.ball_count(r)) == l1_count(k, r));
  }
}

TEST_CASE("Heisenberg ball of radius 2 against exhaustive word products") {
  const std::vector<Triple> gens = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  std::set<Triple> oracle{{0, 0, 0}};
  for (const auto& g : gens) {
    oracle.insert(g);
    for (const auto& h : gens) oracle.insert(heis_mul(g, h));
  }
  CHECK(word_ball(heisenberg_group(), 2).size() == oracle.size());
}

TEST_CASE("word lengths") {
  const auto z2 = bundled_deck("Z^2").generated();
  CHECK(word_length(z2, Isometry::identity(2)) == 0);
  CHECK(word_length(z2, Isometry::translation({3, -2})) == 5);
  CHECK(word_length(heisenberg_group(), HeisenbergElement{0, 0, 1}) == 4);
  const HeisenbergElement x{1, 0, 0}, y{0, 1, 0};
  CHECK(x * y * inverse_of(x) * inverse_of(y) == HeisenbergElement{0, 0, 1});
  CHECK_THROWS_AS(word_length(z2, Isometry::translation({Rational(1, 2), 0}), 1000), CapExceeded);
}

TEST_CASE("Heisenberg law is associative and abelianization is a homomorphism") {
  std::mt19937_64 rng(5);
  const auto rnd = [&] { return static_cast<std::int64_t>(rng() % 41) - 20; };
  for (int k = 0; k < 500; ++k) {
    const HeisenbergElement g{rnd(), rnd(), rnd()}, h{rnd(), rnd(), rnd()}, f{rnd(), rnd(), rnd()};
    CHECK((g * h) * f == g * (h * f));
    CHECK(g * inverse_of(g) == HeisenbergElement{});
    const auto gh = g * h;
    CHECK(gh.a == g.a + h.a);
    CHECK(gh.b == g.b + h.b);
  }
}

TEST_CASE("word balls are nested and monotone") {
  const auto ball = word_ball(bundled_deck("klein2").generated(), 6);
  for (int r = 0; r < 6; ++r) CHECK(ball.ball_count(r) <= ball.ball_count(r + 1));
  const auto small = word_ball(bundled_deck("klein2").generated(), 5);
  std::set<std::string> big;
  for (const auto& e : ball.elements) big.insert(canonical_encoding(e));
  for (const auto& e : small.elements) CHECK(big.count(canonical_encoding(e)) == 1);
}

TEST_CASE("generating sets must be symmetric and omit the identity") {
  CHECK_THROWS_AS(GeneratedGroup<HeisenbergElement>("g", {}, {{1, 0, 0}}), PreconditionError);
  CHECK_THROWS_AS(GeneratedGroup<HeisenbergElement>("g", {}, {{0, 0, 0}}), PreconditionError);
  CHECK_THROWS_AS(word_ball(bundled_deck("Z^2").generated(), 100, 1000), CapExceeded);
}

TEST_CASE("orbit enumeration examples") {
  const auto z2 = bundled_deck("Z^2");
  CHECK(deck_enumerate_orbit(z2, Point{{0, 0}}, Radius::exact(1)).size() == 5);
  CHECK(deck_enumerate_orbit(z2, Point{{0, 0}}, Radius::exact(5)).size() == 81);
  const auto m = bundled_deck("moebius2");
  const Point x{{0, Rational(3, 10)}};
  const auto hits = deck_enumerate_orbit(m, x, Radius::exact(Rational(5, 2)));
  CHECK(hits.size() == 5);
  // d(x, s^k x)^2 = k^2 + (3/5)^2 [k odd]
  std::multiset<Rational> expect;
  for (long k = -2; k <= 2; ++k) expect.insert(Rational(k * k) + (k % 2 ? Rational(9, 25) : Rational(0)));
  std::multiset<Rational> got;
  for (const auto& h : hits) got.insert(h.dist_sq);
  CHECK(got == expect);
  CHECK_THROWS_AS(deck_enumerate_orbit(z2, Point{{0, 0}}, Radius::exact(100), 50), CapExceeded);
}

TEST_CASE("orbit enumeration agrees with naive word multiplication on bundled groups") {
  for (const auto& name : bundled_deck_names()) {
    const auto deck = bundled_deck(name);
    const Point x = bundled_base_point(name);
    for (const Rational r : {Rational(0), Rational(1), Rational(5, 2), Rational(10)}) {
      std::set<std::string> got;
      for (const auto& h : deck_enumerate_orbit(deck, x, Radius::exact(r))) got.insert(canonical_encoding(h.element));
      CHECK_MESSAGE(got == naive_orbit(deck, x, r), name << " r=" << to_string(r));
    }
  }
}

TEST_CASE("deck group validation") {
  const auto e = Isometry::identity(2);
  const auto t = Isometry::translation({1, 0});
  CHECK_THROWS_AS(DeckGroup("same-coset", {t}, {{1, 0}}, {e, t}), PreconditionError);
  const Isometry quarter(Matrix(2, {0, -1, 1, 0}), {0, 0});
  CHECK_THROWS_AS(DeckGroup("not-normal", {quarter}, {{2, 0}}, {e, quarter}), PreconditionError);
  CHECK_THROWS_AS(DeckGroup("no-identity", {t}, {{2, 0}}, {t}), PreconditionError);
  CHECK_THROWS_AS(DeckGroup("outside", {Isometry::translation({Rational(1, 2), 0})}, {{1, 0}}, {e}), PreconditionError);
  CHECK_THROWS_AS(bundled_deck("nope"), PreconditionError);
  const auto klein = bundled_deck("klein2");
  CHECK(klein.index() == 2);
  CHECK(klein.contains(Isometry::translation({4, -3})));
  CHECK_FALSE(klein.contains(Isometry::translation({1, 0})));
}

TEST_CASE("ball JSON export is sorted by canonical encoding") {
  const auto j = word_ball_json(word_ball(heisenberg_group(), 2));
  for (std::size_t i = 1; i < j.size(); ++i) CHECK(j[i - 1]["element"].dump() < j[i]["element"].dump());
}
