#pragma once

// Orbit growth: counting D^Gamma(x, r), log-log growth fits, the containment
// of word balls in orbit balls, and the finite-index comparison of orbit counts.

#include <span>
#include <vector>

#include "orbitlab/groups.hpp"

namespace orbitlab {

struct GrowthFit {
  double exponent = 0;
  double intercept = 0;
  double r2 = 0;
};

struct GrowthSeries {
  std::vector<Rational> radii;
  std::vector<double> counts;
  GrowthFit fit;
};

std::size_t orbit_ball_count(const DeckGroup& deck, const Point& x, const Rational& r);

/// Ordinary least squares of log(count) on log(radius). Needs >= 3 points and positive data.
GrowthFit fit_growth(std::span<const double> radii, std::span<const double> counts);
GrowthSeries growth_exponent(std::vector<Rational> radii, std::vector<double> counts);
GrowthSeries orbit_growth(const DeckGroup& deck, const Point& x, std::vector<Rational> radii);

struct MilnorReport {
  Rational h_sq;          // max_i |g_i x - x|^2 over the generators
  int radius = 0;
  std::size_t checked = 0;
  bool holds = true;      // every g with |g| <= radius has d(x, g x) <= h * radius
  bool holds_per_length = true;  // sharper: d(x, g x) <= h * |g| for every checked g
  std::vector<Isometry> violations;
};

MilnorReport milnor_containment(const GeneratedGroup<Isometry>& group, const Point& x, int radius,
                                std::size_t cap = kDefaultElementCap);

struct IndexRow {
  Rational radius;
  std::size_t count_big = 0;    // #D^H(x, r)
  std::size_t count_small = 0;  // #D^K(x, r + r0)
  bool bound_holds = false;     // count_big <= index * count_small
};

struct IndexComparison {
  Rational r0_sq;
  std::size_t index = 0;
  std::vector<IndexRow> rows;
  bool holds = true;
};

/// Compares #D^H(x, r) with l * #D^K(x, r + r0), where H = h_1 K u ... u h_l K
/// and r0 = max d(x, h_i x). Throws PreconditionError when the coset data
/// does not describe K as an index-l subgroup of H.
IndexComparison finite_index_comparison(const DeckGroup& big, const DeckGroup& small,
                                        const std::vector<Isometry>& coset_reps, const Point& x,
                                        const std::vector<Rational>& radii);

/// The pure-translation lattice of `deck` as a deck group of its own.
DeckGroup lattice_subgroup(const DeckGroup& deck);

/// finite_index_comparison against the lattice subgroup, using deck's own coset representatives.
IndexComparison lattice_index_comparison(const DeckGroup& deck, const Point& x, const std::vector<Rational>& radii);

}  // namespace orbitlab
