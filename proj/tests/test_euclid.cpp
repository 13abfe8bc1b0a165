#include "doctest.h"
#include "orbitlab/errors.hpp"
#include "orbitlab/euclid.hpp"

#include <random>

using namespace orbitlab;

namespace {

Isometry iso(std::vector<long> diag, std::vector<Rational> v) {
  Vec d;
  for (long x : diag) d.emplace_back(x);
  return Isometry(Matrix::diagonal(d), std::move(v));
}

// Signed permutation matrices with random rational translations.
Isometry random_isometry(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix a(n);
  Vec v;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, perm[i]) = (rng() % 2) ? 1 : -1;
    v.emplace_back(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 7) + 1);
  }
  return Isometry(a, v);
}

}  // namespace

TEST_CASE("compose examples") {
  const auto g = iso({1, -1}, {1, 0});
  CHECK(compose(Isometry::identity(2), g) == g);
  CHECK(compose(Isometry::translation({1, 0}), Isometry::translation({0, 1})) == Isometry::translation({1, 1}));
  // Hand multiplication: diag(1,-1)^2 = I, diag(1,-1)(1,0) + (1,0) = (2,0).
  CHECK(compose(g, g) == Isometry::translation({2, 0}));
}

TEST_CASE("inverse examples") {
  CHECK(inverse(Isometry::identity(2)) == Isometry::identity(2));
  CHECK(inverse(Isometry::translation({1, 2})) == Isometry::translation({-1, -2}));
  CHECK(inverse(iso({1, -1}, {1, 0})) == iso({1, -1}, {-1, 0}));
}

TEST_CASE("apply examples") {
  CHECK(apply(Isometry::identity(2), Point{{3, 4}}) == Point{{3, 4}});
  CHECK(apply(Isometry::translation({1, 0}), Point{{0, 0}}) == Point{{1, 0}});
  CHECK(apply(iso({1, -1}, {1, 0}), Point{{0, Rational(3, 10)}}) == Point{{1, Rational(-3, 10)}});
}

TEST_CASE("group laws on random exact instances") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng() % 4;
    const auto f = random_isometry(rng, n), g = random_isometry(rng, n), h = random_isometry(rng, n);
    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
    CHECK(compose(f, inverse(f)).is_identity());
    CHECK(inverse(f).orthogonal_part() == f.orthogonal_part().transpose());
    Point x{Vec(n)}, y{Vec(n)};
    for (std::size_t i = 0; i < n; ++i) {
      x.coords[i] = Rational(static_cast<long>(rng() % 100) - 50, 9);
      y.coords[i] = Rational(static_cast<long>(rng() % 100) - 50, 11);
    }
    CHECK(apply(compose(f, g), x) == apply(f, apply(g, x)));
    CHECK(dist2(apply(f, x), apply(f, y)) == dist2(x, y));
  }
}

TEST_CASE("construction rejects non-orthogonal parts and mismatched sizes") {
  CHECK_THROWS_AS(Isometry(Matrix::diagonal({2, 1}), {0, 0}), PreconditionError);
  CHECK_THROWS_AS(Isometry(Matrix::identity(2), {0, 0, 0}), DimensionMismatch);
  CHECK_THROWS_AS(compose(Isometry::identity(2), Isometry::identity(3)), DimensionMismatch);
  CHECK_THROWS_AS(apply(Isometry::identity(2), Point{{1, 2, 3}}), DimensionMismatch);
}

TEST_CASE("a rational rotation is orthogonal") {
  // 3-4-5 rotation.
  Matrix a(2, {Rational(3, 5), Rational(-4, 5), Rational(4, 5), Rational(3, 5)});
  CHECK(a.is_orthogonal());
  const Isometry r(a, {0, 0});
  CHECK(dist2(apply(r, Point{{1, 2}}), Point{{0, 0}}) == 5);
}

TEST_CASE("JSON round trip is bit-exact") {
  const Isometry f(Matrix(2, {Rational(3, 5), Rational(-4, 5), Rational(4, 5), Rational(3, 5)}),
                   {Rational(1, 3), Rational(-7, 2)});
  const auto j = to_json(f);
  CHECK(j["A"][0][0] == "3/5");
  CHECK(j["v"][1] == "-7/2");
  CHECK(isometry_from_json(j) == f);
  CHECK(isometry_from_json(nlohmann::json::parse(j.dump())) == f);
  CHECK(isometry_from_json(nlohmann::json{{"A", {{1, 0}, {0, -1}}}, {"v", {"1", "0"}}}) == iso({1, -1}, {1, 0}));
  CHECK(canonical_encoding(f) == canonical_encoding(isometry_from_json(j)));
}

TEST_CASE("parse_point") {
  CHECK(parse_point("0,0.3") == Point{{0, Rational(3, 10)}});
  CHECK(parse_point("1/2, -3") == Point{{Rational(1, 2), -3}});
  CHECK(to_string(Point{{Rational(1, 2), 0}}) == "1/2,0");
}
