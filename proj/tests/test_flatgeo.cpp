#include "doctest.h"
#include "orbitlab/errors.hpp"
#include "orbitlab/flatgeo.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace orbitlab;

namespace {

constexpr double kPi = std::numbers::pi;

Isometry iso(std::vector<long> diag, std::vector<Rational> v) {
  Vec d;
  for (long x : diag) d.emplace_back(x);
  return Isometry(Matrix::diagonal(d), std::move(v));
}

// Composite Simpson rule.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

// Largest lambda on a grid for which p + lambda u is still closest to p among orbit points of p.
double sampled_prolongation(const FlatQuotient& q, const Point& p, const Vec& u, double lambda_max, int steps) {
  const auto orbit = deck_enumerate_orbit(q.deck(), p, Radius::exact(60));
  const auto pd = to_doubles(p.coords);
  const auto ud = to_doubles(u);
  double last = 1;
  for (int i = 0; i <= steps; ++i) {
    const double lambda = 1 + (lambda_max - 1) * i / steps;
    std::vector<double> y(pd.size());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = pd[k] + lambda * ud[k];
    double own = 0;
    for (std::size_t k = 0; k < y.size(); ++k) own += (lambda * ud[k]) * (lambda * ud[k]);
    bool minimal = true;
    for (const auto& hit : orbit) {
      double d = 0;
      for (std::size_t k = 0; k < y.size(); ++k) {
        const double t = y[k] - hit.image.coords[k].get_d();
        d += t * t;
      }
      if (d < own - 1e-12) minimal = false;
    }
    if (!minimal) break;
    last = lambda;
  }
  return last;
}

}  // namespace

TEST_CASE("quotient distances") {
  const auto torus = FlatQuotient::bundled("torus2");
  CHECK(quotient_distance(torus, Point{{0, 0}}, Point{{Rational(7, 10), 0}}) == Rational(9, 100));
  const auto mob = FlatQuotient::bundled("moebius2");
  CHECK(quotient_distance(mob, Point{{0, Rational(3, 10)}}, Point{{Rational(1, 2), Rational(3, 10)}}) ==
        Rational(1, 4));
  CHECK(quotient_distance(mob, Point{{3, 5}}, Point{{3, 5}}) == 0);
}

TEST_CASE("quotient distance is a metric on random triples") {
  std::mt19937_64 rng(3);
  for (const char* name : {"torus2", "klein2", "moebius2", "moebiusxT"}) {
    const auto q = FlatQuotient::bundled(name);
    const auto rnd = [&] {
      Point p{Vec(q.dimension())};
      for (auto& c : p.coords) c = Rational(static_cast<long>(rng() % 200) - 100, 37);
      return p;
    };
    for (int k = 0; k < 30; ++k) {
      const Point a = rnd(), b = rnd(), c = rnd();
      const double ab = std::sqrt(quotient_distance(q, a, b).get_d());
      const double bc = std::sqrt(quotient_distance(q, b, c).get_d());
      const double ac = std::sqrt(quotient_distance(q, a, c).get_d());
      CHECK(ac <= ab + bc + 1e-12);
      CHECK(quotient_distance(q, a, b) == quotient_distance(q, b, a));
    }
  }
}

TEST_CASE("minimal lifts") {
  const auto torus = FlatQuotient::bundled("torus2");
  CHECK(minimal_lifts(torus, Point{{0, 0}}, Point{{Rational(1, 2), 0}}).size() == 2);
  CHECK(minimal_lifts(torus, Point{{0, 0}}, Point{{Rational(1, 2), Rational(1, 2)}}).size() == 4);
  const auto cyl = FlatQuotient::bundled("cylinder2");
  const auto lifts = minimal_lifts(cyl, Point{{0, 0}}, Point{{3, Rational(1, 5)}});
  REQUIRE(lifts.size() == 1);
  CHECK(lifts[0].image == Point{{3, Rational(1, 5)}});
}

TEST_CASE("extension bound examples on the cylinder") {
  const auto cyl = FlatQuotient::bundled("cylinder2");
  const Point p{{0, 0}};
  CHECK(extension_bound(cyl, p, Point{{5, 0}}).bound.infinite);
  const auto tie = extension_bound(cyl, p, Point{{0, Rational(1, 2)}});
  CHECK_FALSE(tie.bound.infinite);
  CHECK(tie.minimal_lift_count == 2);
  CHECK(tie.bound.value() == 0);
  for (const auto& [t, s] : std::vector<std::pair<Rational, Rational>>{
           {3, Rational(1, 5)}, {Rational(-7, 3), Rational(2, 5)}, {0, Rational(1, 10)}}) {
    const auto e = extension_bound(cyl, p, Point{{t, s}});
    CHECK(e.bound.equals(1 / (2 * s) - 1, t * t + s * s));
    CHECK(e.bound.value() == doctest::Approx(std::sqrt(Rational(t * t + s * s).get_d()) * (1 / (2 * s.get_d()) - 1)));
  }
  CHECK_THROWS_AS(extension_bound(cyl, p, Point{{0, 1}}), PreconditionError);
}

TEST_CASE("extension bound agrees with dense sampling of the prolonged segment") {
  std::mt19937_64 rng(17);
  for (const char* name : {"cylinder2", "torus2"}) {
    const auto q = FlatQuotient::bundled(name);
    const Point p = q.base();
    for (int k = 0; k < 12; ++k) {
      const Point x{{Rational(static_cast<long>(rng() % 200) - 100, 101), Rational(static_cast<long>(rng() % 98) + 1, 199)}};
      const auto lifts = minimal_lifts(q, p, x);
      if (lifts.size() != 1) continue;
      const auto e = extension_bound(q, p, x);
      REQUIRE_FALSE(e.bound.infinite);
      const double lambda = 1 + e.bound.factor.get_d();
      const Vec u = lifts[0].image - p;
      const int steps = 1000;
      const double top = 1 + 2 * (lambda - 1) + 0.5;
      const double sampled = sampled_prolongation(q, p, u, top, steps);
      CHECK(std::abs(sampled - lambda) <= (top - 1) / steps + 1e-9);
    }
  }
}

TEST_CASE("thin set membership and volumes") {
  const auto cyl = FlatQuotient::bundled("cylinder2");
  const Point p{{0, 0}};
  CHECK(in_thin_set(cyl, p, Point{{0, Rational(1, 2)}}, 4, 1));
  CHECK_FALSE(in_thin_set(cyl, p, Point{{3, 0}}, 4, 1));
  CHECK_FALSE(in_thin_set(cyl, p, p, 4, 1));
  CHECK_FALSE(in_thin_set(cyl, p, Point{{5, Rational(1, 2)}}, 4, 1));
  CHECK(thin_set_volume(cyl, p, 0, 1, 1000, 1).value == 0);
  CHECK_THROWS_AS(thin_set_volume(cyl, p, 4, 0, 1000, 1), PreconditionError);
  CHECK_THROWS_AS(thin_set_volume(cyl, p, 4, 1, 999, 1), PreconditionError);
  const auto torus = FlatQuotient::bundled("torus2");
  CHECK(thin_set_volume(torus, Point{{0, 0}}, Rational(1, 4), Rational(1, 100), 20000, 1).value == 0);
}

TEST_CASE("thin set trend on the Moebius band") {
  const auto q = FlatQuotient::bundled("moebius2");
  double prev = 1e300;
  for (const long r : {4L, 8L, 16L}) {
    const Estimate v = thin_set_volume(q, q.base(), r, 1, 100000, 11);
    CHECK(v.value / r < prev);
    prev = v.value / r;
  }
}

TEST_CASE("ball volumes") {
  const auto torus = FlatQuotient::bundled("torus2");
  CHECK(ball_volume(torus, torus.base(), Rational(1, 4), VolumeMethod::ExactStrip).value ==
        doctest::Approx(kPi / 16).epsilon(1e-12));
  CHECK(ball_volume(torus, torus.base(), 1, VolumeMethod::ExactStrip).value == doctest::Approx(1).epsilon(1e-12));
  const Estimate mc = ball_volume(torus, torus.base(), Rational(1, 4), VolumeMethod::MonteCarlo, 50000, 3);
  CHECK(std::abs(mc.value - kPi / 16) <= 3 * mc.std_error + 1e-12);
  CHECK(ball_volume(torus, torus.base(), 1, VolumeMethod::MonteCarlo, 20000, 3).value == doctest::Approx(1));

  const auto cyl = FlatQuotient::bundled("cylinder2");
  for (const double r : {0.3, 1.0, 3.0}) {
    const double half = std::min(r, 0.5);
    const double oracle = simpson([r](double u) { return 2 * std::sqrt(std::max(0.0, r * r - u * u)); }, -half, half);
    CHECK(ball_volume(cyl, cyl.base(), from_double(r), VolumeMethod::ExactStrip).value ==
          doctest::Approx(oracle).epsilon(1e-7));
  }
  CHECK(ball_volume(cyl, cyl.base(), 1, VolumeMethod::ExactStrip).value ==
        doctest::Approx(std::sqrt(3.0) / 2 + kPi / 3).epsilon(1e-12));
  const auto mob = FlatQuotient::bundled("moebius2");
  CHECK_THROWS_AS(ball_volume(mob, mob.base(), 1, VolumeMethod::ExactStrip), PreconditionError);
  CHECK_THROWS_AS(ball_volume(cyl, cyl.base(), 0, VolumeMethod::MonteCarlo), PreconditionError);
}

TEST_CASE("projection does not increase ball volume, and the Dirichlet cell carries the quotient ball") {
  for (const char* name : {"cylinder2", "moebius2", "klein2", "moebiusxT"}) {
    const auto q = FlatQuotient::bundled(name);
    for (const long r : {1L, 2L}) {
      const Estimate quotient = ball_volume(q, q.base(), r, VolumeMethod::MonteCarlo, 40000, 5);
      const double cover = euclidean_ball_volume(q.dimension(), static_cast<double>(r));
      CHECK(quotient.value <= cover + 3 * quotient.std_error);
      const Estimate cell = dirichlet_ball_volume_mc(q, r, 40000, 9);
      const double sigma = std::hypot(quotient.std_error, cell.std_error);
      CHECK_MESSAGE(std::abs(cell.value - quotient.value) <= 3 * sigma, name << " r=" << r);
    }
  }
  const Estimate unit = cover_ball_volume_mc(3, 1, 40000, 2);
  CHECK(std::abs(unit.value - 4 * kPi / 3) <= 3 * unit.std_error);
}

TEST_CASE("Dirichlet membership") {
  const auto torus = FlatQuotient::bundled("torus2");
  CHECK(dirichlet_membership(torus, Point{{Rational(1, 5), Rational(1, 10)}}) == DirichletVerdict::Interior);
  CHECK(dirichlet_membership(torus, Point{{Rational(1, 2), 0}}) == DirichletVerdict::Boundary);
  CHECK(dirichlet_membership(torus, Point{{Rational(7, 10), 0}}) == DirichletVerdict::Exterior);
  CHECK(dirichlet_membership(torus, Point{{Rational(49, 100), 0}}, Rational(1, 10)) == DirichletVerdict::Boundary);
  CHECK(dirichlet_membership(torus, Point{{0, 0}}) == DirichletVerdict::Interior);
}

TEST_CASE("covering inequalities: spot examples") {
  const auto cyl = FlatQuotient::bundled("cylinder2");
  const auto rows = verify_dual(cyl, {3}, 50000, 7);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].count_2r == 13);
  CHECK(rows[0].count_r == 7);
  const double strip = ball_volume(cyl, cyl.base(), 3, VolumeMethod::ExactStrip).value;
  CHECK(std::abs(rows[0].quotient_volume.value - strip) <= 3 * rows[0].quotient_volume.std_error);
  CHECK(rows[0].lower_holds);
  CHECK(rows[0].upper_holds);

  const auto torus = FlatQuotient::bundled("torus2");
  for (const auto& row : verify_dual(torus, {Rational(1, 5), 1, 3}, 20000, 7)) {
    CHECK(row.lower_holds);
    CHECK(row.upper_holds);
  }
  const auto tiny = verify_dual(torus, {Rational(1, 5)}, 20000, 7).front();
  CHECK(tiny.count_r == 1);
  CHECK(tiny.count_2r == 1);
}

TEST_CASE("classification of the canonical examples") {
  const auto cyl = classify_flat(2, {Isometry::translation({1, 0})});
  CHECK(cyl.kind == FlatKind::Product);
  CHECK(cyl.reflecting == std::vector<bool>{false});
  const auto mob = classify_flat(2, {iso({1, -1}, {1, 0})});
  CHECK(mob.kind == FlatKind::Moebius);
  const auto two = classify_flat(3, {iso({1, 1, -1}, {1, 0, 0}), iso({1, 1, -1}, {0, 1, 0})});
  CHECK(two.kind == FlatKind::Moebius);
  REQUIRE(two.generators.size() == 2);
  CHECK(two.generators[0] == iso({1, 1, -1}, {1, 0, 0}));
  // e2 e1^{-1}: a pure translation
  CHECK(two.generators[1] == Isometry::translation({-1, 1, 0}));
  CHECK(two.reflecting == std::vector<bool>{true, false});
}

TEST_CASE("classification is invariant under permutation and translation conjugation") {
  std::mt19937_64 rng(23);
  const std::vector<Isometry> gens = {iso({1, 1, -1}, {1, 0, 0}), iso({1, 1, -1}, {0, 1, 0}), Isometry::translation({0, 0, 0})};
  for (int k = 0; k < 20; ++k) {
    std::vector<Isometry> g = {gens[0], gens[1]};
    if (rng() % 2) std::swap(g[0], g[1]);
    Vec tau{Rational(static_cast<long>(rng() % 21) - 10, 3), Rational(static_cast<long>(rng() % 21) - 10, 5),
            Rational(static_cast<long>(rng() % 21) - 10, 7)};
    const auto t = Isometry::translation(tau);
    for (auto& e : g) e = t * e * inverse(t);
    const auto c = classify_flat(3, g);
    CHECK(c.kind == FlatKind::Moebius);
    CHECK(std::count(c.reflecting.begin(), c.reflecting.end(), true) == 1);
    for (std::size_t i = 0; i < c.generators.size(); ++i)
      CHECK(c.reflecting[i] == !c.generators[i].orthogonal_part().is_identity());
  }
}

TEST_CASE("classification diagnostics") {
  using R = ClassifyError::Reason;
  const auto reason = [](std::size_t n, const std::vector<Isometry>& g) {
    try {
      classify_flat(n, g);
    } catch (const ClassifyError& e) {
      return static_cast<int>(e.reason());
    }
    return -1;
  };
  CHECK(reason(3, {iso({1, -1, 1}, {1, 0, 0}), Isometry::translation({0, 1, 0})}) == static_cast<int>(R::NonCommuting));
  CHECK(reason(3, {Isometry::translation({1, 0, 0})}) == static_cast<int>(R::WrongRank));
  CHECK(reason(3, {Isometry::translation({1, 0, 0}), Isometry::translation({2, 0, 0})}) == static_cast<int>(R::WrongRank));
  const Isometry quarter(Matrix(2, {0, -1, 1, 0}), {1, 0});
  CHECK(reason(2, {quarter}) == static_cast<int>(R::SubspaceNotFixed));
}

TEST_CASE("soul dimension and volume growth") {
  CHECK(soul_dimension(bundled_deck("torus2")) == 2);
  CHECK(soul_dimension(bundled_deck("moebius2")) == 1);
  CHECK(soul_dimension(bundled_deck("cylinder2")) == 1);
  CHECK(soul_dimension(bundled_deck("moebiusxT")) == 2);
  for (const char* name : {"torus2", "cylinder2", "moebius2", "klein2", "moebiusxT"}) {
    const auto deck = bundled_deck(name);
    const auto s = orbit_growth(deck, bundled_base_point(name), {4, 8, 16, 32, 64});
    CHECK_MESSAGE(std::abs(s.fit.exponent - static_cast<double>(soul_dimension(deck))) <= 0.15, name);
  }
  const auto cyl = FlatQuotient::bundled("cylinder2");
  CHECK(volume_growth(cyl, {4, 8, 16, 32}, 20000, 1).linear);
}

TEST_CASE("free action is checked at the base point") {
  const auto e = Isometry::identity(2);
  const auto flip = iso({1, -1}, {0, 0});
  const DeckGroup reflected("reflected", {Isometry::translation({1, 0}), flip}, {{1, 0}}, {e, flip});
  CHECK_THROWS_AS(FlatQuotient(reflected, Point{{0, 0}}), PreconditionError);
  CHECK_NOTHROW(FlatQuotient(reflected, Point{{0, Rational(1, 3)}}));
  const auto torus = FlatQuotient::bundled("torus2");
  CHECK(torus.injectivity_margin() == doctest::Approx(0.5));
  REQUIRE(torus.min_displacement_sq().has_value());
  CHECK(*torus.min_displacement_sq() == 1);
}
