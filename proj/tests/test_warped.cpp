#include "doctest.h"
#include "orbitlab/warped.hpp"

#include <cmath>
#include <functional>
#include <numbers>

using namespace orbitlab::warped;

namespace {

constexpr double kPi = std::numbers::pi;

Options coarse() {
  Options o;
  o.grid = {0.2, 0.2};
  return o;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

// Area of the band |t| <= a of N.
double band_area(double a) {
  return simpson([](double t) { return 2 * kPi * std::sqrt(warp_value(t)); }, -a, a);
}

}  // namespace

TEST_CASE("warping function") {
  CHECK(warp_value(0.5) == 1);
  CHECK(warp_value(1) == 1);
  CHECK(warp_value(3) == doctest::Approx(1.0 / 9).epsilon(1e-14));
  CHECK(warp_value(2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(warp_value(1.5) > 0.25);
  CHECK(warp_value(1.5) < 1);
  double prev = 2;
  for (double r = 0; r < 6; r += 0.01) {
    CHECK(warp_value(r) <= prev);
    CHECK(warp_value(-r) == warp_value(r));
    prev = warp_value(r);
  }
  const Warp w;
  for (const double knot : {1.0, 2.0}) {
    const double eps = 1e-9;
    CHECK(std::abs(w(knot + eps) - w(knot - eps)) < 1e-8);
    CHECK(std::abs(w.derivative(knot + eps) - w.derivative(knot - eps)) < 1e-7);
    const double fd = (w(knot + 1e-6) - w(knot - 1e-6)) / 2e-6;
    CHECK(std::abs(fd - w.derivative(knot)) < 1e-6);
  }
  CHECK(Warp{true}(3) == doctest::Approx(1.0 / 81));
}

TEST_CASE("graph weights") {
  const MetricGraph g(Space::Cover, {0.1, 0.1}, Warp{}, 40, 40, false);
  CHECK(g.steps_per_turn() % 2 == 0);
  CHECK(g.ds() * g.steps_per_turn() == doctest::Approx(2 * kPi));
  for (long i = -30; i <= 30; i += 7)
    for (const auto& k : MetricGraph::kStencil) {
      CHECK(g.edge_weight(i, k[0], k[1]) == doctest::Approx(g.edge_weight(i + k[0], -k[0], -k[1])));
      CHECK(g.edge_weight(i, k[0], k[1]) > 0);
    }
  CHECK(g.edge_weight(0, 1, 0) == doctest::Approx(0.1));
  CHECK(g.edge_weight(0, 0, 1) == doctest::Approx(g.ds()));
}

TEST_CASE("graph distances satisfy the triangle inequality") {
  const MetricGraph g(Space::Cover, {0.25, 0.25}, Warp{}, 16, 16, false);
  const long pts[3][2] = {{-4, 3}, {9, -2}, {2, 12}};
  std::vector<MetricGraph::Sweep> sweeps;
  for (const auto& p : pts) sweeps.push_back(g.dijkstra(p[0], p[1], 1e9));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double ab = sweeps[a].dist[*g.node(pts[b][0], pts[b][1])];
        const double bc = sweeps[b].dist[*g.node(pts[c][0], pts[c][1])];
        const double ac = sweeps[a].dist[*g.node(pts[c][0], pts[c][1])];
        CHECK(ac <= ab + bc + 1e-12);
      }
}

TEST_CASE("certified distances") {
  const auto axial = graph_distance(Space::N, {0, 0}, {3, 0}, coarse());
  CHECK(axial.value == doctest::Approx(3).epsilon(1e-9));
  const auto half = graph_distance(Space::N, {0, 0}, {0, kPi}, coarse());
  CHECK(half.value == doctest::Approx(kPi).epsilon(0.01));
  CHECK(graph_distance(Space::Cover, {0.4, 0.6}, {0.4, 0.6}, coarse()).value == 0);
  const auto d0 = deck_orbit_distance(0, coarse());
  CHECK(d0.value == 0);
  const auto d1 = deck_orbit_distance(1, coarse());
  CHECK(d1.value > 0);
  CHECK(d1.value <= 2 * kPi * 1.001);
  for (const long k : {4L, 16L}) {
    // out to radius R, around, and back: 2R + 2 pi k / R at R = sqrt(pi k)
    const double lpath = 4 * std::sqrt(kPi * k);
    const auto d = deck_orbit_distance(k, coarse());
    CHECK(d.value <= lpath * 1.02);
    CHECK(d.value <= 2 * kPi * k);
  }
}

TEST_CASE("ball volumes") {
  const auto small = ball_volume_warped(Space::Cover, {0, 0}, 0.5, coarse());
  CHECK(std::abs(small.value / (kPi / 4) - 1) <= 0.05);
  double prev = 0;
  for (const double r : {1.0, 2.0, 4.0}) {
    const double n = ball_volume_warped(Space::N, {0, 0}, r, coarse()).value;
    const double cover = ball_volume_warped(Space::Cover, {0, 0}, r, coarse()).value;
    CHECK(n > prev);
    CHECK(n <= cover * 1.02);
    prev = n;
  }
  for (const double r : {8.0, 16.0}) {
    // |t| + pi/|t| bounds the distance to (t, s), so the ball holds the band |t| <= r - 2
    const double n = ball_volume_warped(Space::N, {0, 0}, r, coarse()).value;
    CHECK(n >= band_area(r - 2) * 0.98);
    CHECK(n <= band_area(r) * 1.02);
  }
}

TEST_CASE("word ball and counterexample ratio") {
  CHECK(word_ball_count(1, 5) == 11);
  CHECK(word_ball_count(0.5, 3) == 3);
  CHECK(word_ball_count(2, 0) == 1);
  const auto rows = counterexample_ratios({1.0}, {4.0, 8.0}, coarse());
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.ratio > 0);
    CHECK(row.word_count == word_ball_count(row.c, row.r));
    CHECK(row.ratio == doctest::Approx(row.word_count * row.volume_n.value / row.volume_cover.value));
  }
  CHECK(rows[1].ratio < rows[0].ratio);
}
