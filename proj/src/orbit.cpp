#include "orbitlab/orbit.hpp"

#include <cmath>

namespace orbitlab {

std::size_t orbit_ball_count(const DeckGroup& deck, const Point& x, const Rational& r) {
  if (r < 0) throw PreconditionError("orbit ball radius must be nonnegative");
  return deck_enumerate_orbit(deck, x, Radius::exact(r)).size();
}

GrowthFit fit_growth(std::span<const double> radii, std::span<const double> counts) {
  if (radii.size() != counts.size()) throw DimensionMismatch("growth fit: radii and counts differ in length");
  if (radii.size() < 3) throw PreconditionError("growth fit needs at least 3 points");
  const std::size_t n = radii.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(radii[i] > 0)) throw PreconditionError("growth fit: radii must be positive");
    if (!(counts[i] > 0)) throw PreconditionError("growth fit: zero count");
    xs[i] = std::log(radii[i]);
    ys[i] = std::log(counts[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw PreconditionError("growth fit: radii must not all coincide");
  GrowthFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    sse += e * e;
  }
  fit.r2 = syy == 0 ? 1.0 : std::clamp(1.0 - sse / syy, 0.0, 1.0);
  return fit;
}

GrowthSeries growth_exponent(std::vector<Rational> radii, std::vector<double> counts) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i - 1] < radii[i])) throw PreconditionError("growth series radii must be strictly increasing");
  }
  std::vector<double> r(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) r[i] = radii[i].get_d();
  GrowthSeries s{std::move(radii), std::move(counts), {}};
  s.fit = fit_growth(r, s.counts);
  return s;
}

GrowthSeries orbit_growth(const DeckGroup& deck, const Point& x, std::vector<Rational> radii) {
  std::vector<double> counts;
  counts.reserve(radii.size());
  for (const auto& r : radii) counts.push_back(static_cast<double>(orbit_ball_count(deck, x, r)));
  return growth_exponent(std::move(radii), std::move(counts));
}

MilnorReport milnor_containment(const GeneratedGroup<Isometry>& group, const Point& x, int radius,
                                std::size_t cap) {
  MilnorReport report;
  report.radius = radius;
  for (const auto& g : group.generators()) {
    const Rational d2 = dist2(x, apply(g, x));
    if (d2 > report.h_sq) report.h_sq = d2;
  }
  const WordBall<Isometry> ball = word_ball(group, radius, cap);
  const Rational bound = report.h_sq * radius * radius;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Rational d2 = dist2(x, apply(ball.elements[i], x));
    const int len = ball.lengths[i];
    ++report.checked;
    if (d2 > bound) {
      report.holds = false;
      report.violations.push_back(ball.elements[i]);
    }
    if (d2 > report.h_sq * len * len) report.holds_per_length = false;
  }
  return report;
}

namespace {

std::optional<std::size_t> coset_in(const DeckGroup& small, const std::vector<Isometry>& reps,
                                    const Isometry& g) {
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (small.contains(inverse(reps[i]) * g)) return i;
  }
  return std::nullopt;
}

void check_coset_data(const DeckGroup& big, const DeckGroup& small, const std::vector<Isometry>& reps) {
  const auto fail = [&](const std::string& why) {
    throw PreconditionError("coset data inconsistent with subgroup claim (" + small.label() + " in " +
                            big.label() + "): " + why);
  };
  if (reps.empty()) fail("no coset representatives");
  if (big.dimension() != small.dimension()) fail("dimension mismatch");
  for (const auto& g : small.structural_generators()) {
    if (!big.contains(g)) fail("subgroup element outside the group");
  }
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (!big.contains(reps[i])) fail("representative outside the group");
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      if (small.contains(inverse(reps[i]) * reps[j])) fail("two representatives share a coset");
    }
  }
  // The set of cosets {h_i K} must be stable under left multiplication by a
  // generating set of H; since it contains K itself it is then all of H/K.
  for (const auto& s : big.structural_generators()) {
    for (const auto& t : {s, inverse(s)}) {
      for (const auto& h : reps) {
        if (!coset_in(small, reps, t * h)) fail("representatives miss a coset");
      }
    }
  }
  if (!coset_in(small, reps, Isometry::identity(big.dimension()))) fail("no representative in the subgroup");
}

}  // namespace

IndexComparison finite_index_comparison(const DeckGroup& big, const DeckGroup& small,
                                        const std::vector<Isometry>& coset_reps, const Point& x,
                                        const std::vector<Rational>& radii) {
  check_coset_data(big, small, coset_reps);
  IndexComparison out;
  out.index = coset_reps.size();
  for (const auto& h : coset_reps) {
    const Rational d2 = dist2(x, apply(h, x));
    if (d2 > out.r0_sq) out.r0_sq = d2;
  }
  for (const auto& r : radii) {
    if (r < 0) throw PreconditionError("radii must be nonnegative");
    IndexRow row;
    row.radius = r;
    row.count_big = deck_enumerate_orbit(big, x, Radius::exact(r)).size();
    row.count_small = deck_enumerate_orbit(small, x, Radius::sum(r, out.r0_sq)).size();
    row.bound_holds = row.count_big <= out.index * row.count_small;
    out.holds = out.holds && row.bound_holds;
    out.rows.push_back(row);
  }
  return out;
}

DeckGroup lattice_subgroup(const DeckGroup& deck) {
  std::vector<Isometry> gens;
  for (const auto& b : deck.lattice().basis()) gens.push_back(Isometry::translation(b));
  return DeckGroup(deck.label() + "/lattice", gens, deck.lattice().basis(), {Isometry::identity(deck.dimension())});
}

IndexComparison lattice_index_comparison(const DeckGroup& deck, const Point& x, const std::vector<Rational>& radii) {
  return finite_index_comparison(deck, lattice_subgroup(deck), deck.coset_reps(), x, radii);
}

}  // namespace orbitlab
