#pragma once

// Metric geometry of flat quotients R^n / Gamma: quotient distances and
// minimizing lifts, extension of minimal geodesics past their endpoint,
// Dirichlet domains, ball volumes, the covering-volume inequalities, and the
// classification of flat manifolds with an (n-1)-torus soul.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "orbitlab/groups.hpp"
#include "orbitlab/orbit.hpp"
#include "orbitlab/sampling.hpp"

namespace orbitlab {

/// R^n / Gamma with a chosen base point (the lift x0-bar of the quotient base point).
class FlatQuotient {
 public:
  /// Throws PreconditionError when some g != e fixes `base`.
  FlatQuotient(DeckGroup deck, Point base);
  static FlatQuotient bundled(std::string_view name);

  const DeckGroup& deck() const { return deck_; }
  const Point& base() const { return base_; }
  std::size_t dimension() const { return deck_.dimension(); }

  /// min over g != e of |g x0 - x0|^2; nullopt for the trivial group.
  const std::optional<Rational>& min_displacement_sq() const { return min_disp_sq_; }
  /// Half the minimal orbit displacement at the base point (infinite for the trivial group).
  double injectivity_margin() const;

 private:
  DeckGroup deck_;
  Point base_;
  std::optional<Rational> min_disp_sq_;
};

/// Squared quotient distance min_g |x - g y|^2.
Rational quotient_distance(const FlatQuotient& q, const Point& x, const Point& y);

/// The lifts g y realizing the quotient distance from x (all ties).
std::vector<OrbitHit> minimal_lifts(const FlatQuotient& q, const Point& x, const Point& y);

/// A length of the form factor * sqrt(length_sq), or +infinity.
struct ExtensionLength {
  bool infinite = false;
  Rational factor;
  Rational length_sq;

  double value() const;
  /// Exact test value <= h.
  bool at_most(const Rational& h) const;
  /// Exact equality with factor' * sqrt(length_sq'), factor' >= 0.
  bool equals(const Rational& other_factor, const Rational& other_length_sq) const;
};

struct ExtensionReport {
  std::size_t minimal_lift_count = 0;
  Rational dist_sq;          // squared quotient distance d(p, x)^2
  ExtensionLength bound;     // max over minimal geodesics of the extra minimizing length
};

/// How far the minimal geodesics from p to x can be prolonged past x while
/// staying minimizing. x lies in C_h(p) iff bound <= h.
/// Throws PreconditionError when x and p coincide in the quotient.
ExtensionReport extension_bound(const FlatQuotient& q, const Point& p, const Point& x);

/// Membership of x in W_r^h(p) = D_r(p) n C_h(p), exact. p itself is excluded.
bool in_thin_set(const FlatQuotient& q, const Point& p, const Point& x, const Rational& r, const Rational& h);

enum class VolumeMethod { ExactStrip, MonteCarlo };

/// Volume of the quotient ball B_r([x]).
Estimate ball_volume(const FlatQuotient& q, const Point& x, const Rational& r, VolumeMethod method,
                     std::size_t samples = 200'000, std::uint64_t seed = kDefaultSeed);

/// omega_n r^n, the volume of a Euclidean n-ball.
double euclidean_ball_volume(std::size_t n, double r);
Estimate cover_ball_volume_mc(std::size_t n, double r, std::size_t samples, std::uint64_t seed);
/// Vol(B_r(x0-bar) n F) for the Dirichlet domain F of the base point.
Estimate dirichlet_ball_volume_mc(const FlatQuotient& q, const Rational& r, std::size_t samples, std::uint64_t seed);
/// Vol(W_r^h(p)).
Estimate thin_set_volume(const FlatQuotient& q, const Point& p, const Rational& r, const Rational& h,
                         std::size_t samples, std::uint64_t seed);

enum class DirichletVerdict { Interior, Boundary, Exterior };
const char* to_string(DirichletVerdict v);

/// Position of a cover point relative to the Dirichlet domain of the base point.
DirichletVerdict dirichlet_membership(const FlatQuotient& q, const Point& x, const Rational& tolerance = 0);

struct DualRow {
  Rational radius;
  std::size_t count_2r = 0;  // #D(x0, 2r)
  std::size_t count_r = 0;   // #D(x0, r)
  Estimate quotient_volume;  // Vol(B_r(x0))
  double cover_volume_r = 0;
  double cover_volume_2r = 0;
  Estimate lhs_lower;        // #D(2r) Vol(B_r(x0)), compared against Vol(B_r(x0-bar))
  bool lower_holds = false;
  Estimate lhs_upper;        // #D(r) Vol(B_r(x0)), compared against Vol(B_2r(x0-bar))
  bool upper_holds = false;
};

inline constexpr double kGuardSigmas = 3.0;

/// Both covering inequalities #D(2r) Vol(B_r) >= Vol(B~_r) and
/// #D(r) Vol(B_r) <= Vol(B~_2r) per radius, with 3-sigma guard bands.
std::vector<DualRow> verify_dual(const FlatQuotient& q, const std::vector<Rational>& radii, std::size_t samples,
                                 std::uint64_t seed);

enum class FlatKind { Product, Moebius };
const char* to_string(FlatKind k);

struct Classification {
  FlatKind kind = FlatKind::Product;
  std::vector<Isometry> generators;  // after the change of generators when kind == Moebius
  std::vector<bool> reflecting;      // per output generator: acts by -1 on the normal line
  Vec normal;                        // spans the orthogonal complement of the soul direction
};

class ClassifyError : public PreconditionError {
 public:
  enum class Reason { NonCommuting, WrongRank, SubspaceNotFixed };
  ClassifyError(Reason reason, const std::string& what) : PreconditionError(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// Decides R x T^{n-1} versus Moebius x T^{n-2} for Gamma = Z^{n-1} given by
/// n-1 commuting generators.
Classification classify_flat(std::size_t n, const std::vector<Isometry>& generators);

/// Rank of the declared translation lattice.
std::size_t soul_dimension(const DeckGroup& deck);

struct VolumeGrowthReport {
  GrowthSeries quotient;      // Monte-Carlo Vol(B_r(x0)) against r
  bool linear = false;        // fitted exponent within tolerance of 1
  double cover_ratio = 0;     // Vol(B~_r) / r^n, constant omega_n in the flat case
};

VolumeGrowthReport volume_growth(const FlatQuotient& q, const std::vector<Rational>& radii, std::size_t samples,
                                 std::uint64_t seed, double tolerance = 0.15);

namespace detail {

/// Orbit of a point as floating-point coordinates, for Monte-Carlo indicators.
class OrbitCloud {
 public:
  OrbitCloud(const FlatQuotient& q, const Point& p, const Radius& reach);

  std::size_t size() const { return points_.size() / dim_; }
  /// Squared distance to the closest orbit point and its index.
  std::pair<double, std::size_t> nearest(std::span<const double> y) const;
  bool any_within(std::span<const double> y, double r_sq) const;
  /// Extension length beyond y of the segment from its closest orbit point.
  double extension(std::span<const double> y) const;
  /// d(y, p) <= r and extension(y) <= h.
  bool in_thin_set(std::span<const double> y, double r, double h) const;

 private:
  std::size_t dim_;
  std::vector<double> points_;  // sorted by distance from p
};

}  // namespace detail

}  // namespace orbitlab
