#include "orbitlab/flatgeo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace orbitlab {

// ---------------------------------------------------------------------------
// FlatQuotient

FlatQuotient::FlatQuotient(DeckGroup deck, Point base) : deck_(std::move(deck)), base_(std::move(base)) {
  if (base_.dimension() != deck_.dimension()) throw DimensionMismatch("base point dimension");
  if (deck_enumerate_orbit(deck_, base_, Radius::exact(0)).size() != 1) {
    throw PreconditionError(deck_.label() + ": action is not free at base point " + to_string(base_));
  }
  if (deck_.lattice().rank() == 0 && deck_.index() == 1) return;
  Rational reach_sq = 1;
  for (;;) {
    const auto hits = deck_enumerate_orbit(deck_, base_, Radius::sqrt_of(reach_sq));
    if (hits.size() >= 2) {
      min_disp_sq_ = hits[1].dist_sq;
      return;
    }
    reach_sq *= 4;
  }
}

FlatQuotient FlatQuotient::bundled(std::string_view name) {
  return FlatQuotient(bundled_deck(name), bundled_base_point(name));
}

double FlatQuotient::injectivity_margin() const {
  if (!min_disp_sq_) return std::numeric_limits<double>::infinity();
  return 0.5 * std::sqrt(min_disp_sq_->get_d());
}

// ---------------------------------------------------------------------------
// Distances and lifts

Rational quotient_distance(const FlatQuotient& q, const Point& x, const Point& y) {
  const auto hits = orbit_points_near(q.deck(), x, y, Radius::sqrt_of(dist2(x, y)));
  return hits.front().dist_sq;
}

std::vector<OrbitHit> minimal_lifts(const FlatQuotient& q, const Point& x, const Point& y) {
  auto hits = orbit_points_near(q.deck(), x, y, Radius::sqrt_of(dist2(x, y)));
  const Rational best = hits.front().dist_sq;
  hits.erase(std::remove_if(hits.begin(), hits.end(), [&](const OrbitHit& h) { return h.dist_sq != best; }),
             hits.end());
  return hits;
}

// ---------------------------------------------------------------------------
// Extension of minimal geodesics

double ExtensionLength::value() const {
  if (infinite) return std::numeric_limits<double>::infinity();
  return factor.get_d() * std::sqrt(length_sq.get_d());
}

bool ExtensionLength::at_most(const Rational& h) const {
  if (infinite) return false;
  if (h < 0) return false;
  return factor * factor * length_sq <= h * h;
}

bool ExtensionLength::equals(const Rational& other_factor, const Rational& other_length_sq) const {
  if (infinite || other_factor < 0) return false;
  return factor * factor * length_sq == other_factor * other_factor * other_length_sq;
}

namespace {

/// Largest t such that the segment from p to p + t u is still minimizing in the
/// quotient, i.e. p stays a closest orbit point of p + t u. Competitor g p with
/// w = g p - p caps t at |w|^2 / (2 u.w) whenever u.w > 0. nullopt means no cap.
std::optional<Rational> max_prolongation(const DeckGroup& deck, const Point& p, const Vec& u) {
  const Rational u2 = norm2(u);
  if (deck.lattice().orthogonal_to_span(u)) {
    // Lattice translations are orthogonal to u, so u.w only depends on the coset.
    bool capped = false;
    for (const auto& h : deck.coset_reps()) {
      if (dot(u, apply(h, p) - p) > 0) capped = true;
    }
    if (!capped) return std::nullopt;
  }
  Rational reach_sq = 4 * u2;
  for (;;) {
    std::optional<Rational> best;
    for (const auto& hit : deck_enumerate_orbit(deck, p, Radius::sqrt_of(reach_sq))) {
      const Vec w = hit.image - p;
      const Rational uw = dot(u, w);
      if (uw <= 0) continue;
      const Rational t = norm2(w) / (2 * uw);
      if (!best || t < *best) best = t;
    }
    // A better competitor would need |w| < 2 t |u| <= reach.
    if (best && 4 * (*best) * (*best) * u2 <= reach_sq) return best;
    reach_sq *= 4;
  }
}

}  // namespace

ExtensionReport extension_bound(const FlatQuotient& q, const Point& p, const Point& x) {
  const auto lifts = minimal_lifts(q, p, x);
  ExtensionReport report;
  report.dist_sq = lifts.front().dist_sq;
  if (report.dist_sq == 0) throw PreconditionError("extension bound needs p != x in the quotient");
  report.minimal_lift_count = lifts.size();
  report.bound.length_sq = report.dist_sq;
  report.bound.factor = 0;
  for (const auto& lift : lifts) {
    const auto t = max_prolongation(q.deck(), p, lift.image - p);
    if (!t) {
      report.bound.infinite = true;
      report.bound.factor = 0;
      break;
    }
    const Rational f = *t - 1;
    if (f > report.bound.factor) report.bound.factor = f;
  }
  return report;
}

bool in_thin_set(const FlatQuotient& q, const Point& p, const Point& x, const Rational& r, const Rational& h) {
  const Rational d2 = quotient_distance(q, p, x);
  if (d2 == 0 || d2 > r * r) return false;
  return extension_bound(q, p, x).bound.at_most(h);
}

// ---------------------------------------------------------------------------
// Floating-point orbit clouds and sampling regions

namespace detail {

OrbitCloud::OrbitCloud(const FlatQuotient& q, const Point& p, const Radius& reach) : dim_(q.dimension()) {
  for (const auto& hit : deck_enumerate_orbit(q.deck(), p, reach)) {
    for (const auto& c : hit.image.coords) points_.push_back(c.get_d());
  }
}

std::pair<double, std::size_t> OrbitCloud::nearest(std::span<const double> y) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0, n = size(); i < n; ++i) {
    double d = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double t = y[k] - points_[i * dim_ + k];
      d += t * t;
    }
    if (d < best) {
      best = d;
      arg = i;
    }
  }
  return {best, arg};
}

bool OrbitCloud::any_within(std::span<const double> y, double r_sq) const {
  for (std::size_t i = 0, n = size(); i < n; ++i) {
    double d = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double t = y[k] - points_[i * dim_ + k];
      d += t * t;
    }
    if (d <= r_sq) return true;
  }
  return false;
}

double OrbitCloud::extension(std::span<const double> y) const {
  const auto [d0, i0] = nearest(y);
  const double* q0 = &points_[i0 * dim_];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0, n = size(); j < n; ++j) {
    if (j == i0) continue;
    double uw = 0, w2 = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double w = points_[j * dim_ + k] - q0[k];
      uw += (y[k] - q0[k]) * w;
      w2 += w * w;
    }
    if (uw > 0) best = std::min(best, w2 / (2 * uw));
  }
  return (best - 1) * std::sqrt(d0);
}

bool OrbitCloud::in_thin_set(std::span<const double> y, double r, double h) const {
  const auto [d0, i0] = nearest(y);
  if (d0 > r * r || d0 == 0) return false;
  const double limit = 2 * (1 + h / std::sqrt(d0));
  const double* q0 = &points_[i0 * dim_];
  for (std::size_t j = 0, n = size(); j < n; ++j) {
    if (j == i0) continue;
    double uw = 0, w2 = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double w = points_[j * dim_ + k] - q0[k];
      uw += (y[k] - q0[k]) * w;
      w2 += w * w;
    }
    if (uw > 0 && w2 <= limit * uw) return true;
  }
  return false;
}

}  // namespace detail

namespace {

/// y = origin + sum_i u_i axes[i], u in [0,1)^n. The region is a fundamental
/// parallelepiped of the lattice (centered at p) times a box in the orthogonal
/// complement wide enough to hold every point within `reach` of the orbit.
struct Region {
  std::vector<double> origin;
  std::vector<std::vector<double>> axes;
  double volume = 1;
  double max_offset = 0;  // sup |y - p|

  void point(std::span<const double> u, std::span<double> y) const {
    for (std::size_t k = 0; k < origin.size(); ++k) y[k] = origin[k];
    for (std::size_t i = 0; i < axes.size(); ++i)
      for (std::size_t k = 0; k < origin.size(); ++k) y[k] += u[i] * axes[i][k];
  }
};

double dotd(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<std::vector<double>> complement_basis(const Lattice& lattice) {
  const std::size_t n = lattice.dimension();
  std::vector<std::vector<double>> ortho;
  for (const auto& b : lattice.basis()) {
    auto v = to_doubles(b);
    for (const auto& o : ortho) {
      const double c = dotd(v, o);
      for (std::size_t k = 0; k < n; ++k) v[k] -= c * o[k];
    }
    const double len = std::sqrt(dotd(v, v));
    for (auto& x : v) x /= len;
    ortho.push_back(std::move(v));
  }
  std::vector<std::vector<double>> out;
  for (std::size_t e = 0; e < n && ortho.size() < n; ++e) {
    std::vector<double> v(n, 0.0);
    v[e] = 1;
    for (const auto& o : ortho) {
      const double c = dotd(v, o);
      for (std::size_t k = 0; k < n; ++k) v[k] -= c * o[k];
    }
    const double len = std::sqrt(dotd(v, v));
    if (len < 1e-9) continue;
    for (auto& x : v) x /= len;
    ortho.push_back(v);
    out.push_back(std::move(v));
  }
  return out;
}

Region quotient_region(const FlatQuotient& q, const Point& p, double reach) {
  const auto& lattice = q.deck().lattice();
  const std::size_t n = q.dimension();
  Region region;
  region.origin = to_doubles(p.coords);
  double half_diag = 0;
  for (const auto& b : lattice.basis()) {
    auto axis = to_doubles(b);
    for (std::size_t k = 0; k < n; ++k) region.origin[k] -= 0.5 * axis[k];
    half_diag += 0.5 * std::sqrt(dotd(axis, axis));
    region.axes.push_back(std::move(axis));
  }
  region.volume = std::sqrt(lattice.gram_determinant().get_d());
  double perp_sq = 0;
  for (const auto& c : complement_basis(lattice)) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& h : q.deck().coset_reps()) {
      const auto z = to_doubles(apply(h, p) - p);
      const double t = dotd(z, c);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    lo -= reach;
    hi += reach;
    for (std::size_t k = 0; k < n; ++k) region.origin[k] += lo * c[k];
    std::vector<double> axis(c);
    for (auto& x : axis) x *= (hi - lo);
    region.axes.push_back(std::move(axis));
    region.volume *= (hi - lo);
    perp_sq += std::max(lo * lo, hi * hi);
  }
  region.max_offset = half_diag + std::sqrt(perp_sq);
  return region;
}

Radius cloud_reach(double r) { return Radius::exact(from_double(r * (1 + 1e-9) + 1e-9)); }

/// Monte-Carlo volume of {y : indicator(y)} inside q, measured through the region.
template <class Indicator>
Estimate region_volume(const FlatQuotient& q, const Region& region, std::size_t samples, std::uint64_t seed,
                       Indicator&& indicator) {
  std::vector<double> y(q.dimension());
  const Estimate mean = stratified_mean(region.axes.size(), samples, seed, [&](std::span<const double> u) {
    region.point(u, y);
    return indicator(std::span<const double>(y)) ? 1.0 : 0.0;
  });
  return scaled(mean, region.volume / static_cast<double>(q.deck().index()));
}

/// Exact-strip volume for 2-dimensional translation quotients (cylinders and rectangular tori).
std::optional<double> strip_volume(const FlatQuotient& q, double r) {
  const auto& deck = q.deck();
  if (q.dimension() != 2 || deck.index() != 1) return std::nullopt;
  const auto& basis = deck.lattice().basis();
  // Antiderivative of 2 sqrt(r^2 - u^2).
  const auto g = [r](double u) { return u * std::sqrt(std::max(0.0, r * r - u * u)) + r * r * std::asin(std::min(1.0, u / r)); };
  if (basis.size() == 1) {
    const double circumference = std::sqrt(norm2(basis[0]).get_d());
    const double m = std::min(r, circumference / 2);
    return 2 * g(m);
  }
  if (basis.size() == 2 && dot(basis[0], basis[1]) == 0) {
    const double a = std::sqrt(norm2(basis[0]).get_d());
    const double b = std::sqrt(norm2(basis[1]).get_d());
    const double m = std::min(r, a / 2);
    // Chord 2 sqrt(r^2 - u^2) is clipped at b for |u| <= sqrt(r^2 - b^2/4).
    double u1 = 0;
    if (r > b / 2) u1 = std::min(m, std::sqrt(r * r - b * b / 4));
    return 2 * (b * u1 + g(m) - g(u1));
  }
  return std::nullopt;
}

}  // namespace

double euclidean_ball_volume(std::size_t n, double r) {
  const double half = static_cast<double>(n) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0) * std::pow(r, static_cast<double>(n));
}

Estimate ball_volume(const FlatQuotient& q, const Point& x, const Rational& r, VolumeMethod method,
                     std::size_t samples, std::uint64_t seed) {
  if (r <= 0) throw PreconditionError("ball volume needs r > 0");
  const double rd = r.get_d();
  if (method == VolumeMethod::ExactStrip) {
    const auto v = strip_volume(q, rd);
    if (!v) throw PreconditionError("unsupported method/space combination: exact-strip on " + q.deck().label());
    return {*v, 0.0};
  }
  const Region region = quotient_region(q, x, rd);
  const detail::OrbitCloud cloud(q, x, cloud_reach(region.max_offset + rd));
  const double r2 = rd * rd;
  return region_volume(q, region, samples, seed, [&](std::span<const double> y) { return cloud.any_within(y, r2); });
}

Estimate cover_ball_volume_mc(std::size_t n, double r, std::size_t samples, std::uint64_t seed) {
  const Estimate mean = stratified_mean(n, samples, seed, [&](std::span<const double> u) {
    double d = 0;
    for (const double t : u) d += (2 * t - 1) * (2 * t - 1);
    return d <= 1.0 ? 1.0 : 0.0;
  });
  return scaled(mean, std::pow(2 * r, static_cast<double>(n)));
}

Estimate dirichlet_ball_volume_mc(const FlatQuotient& q, const Rational& r, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = q.dimension();
  const double rd = r.get_d();
  const auto base = to_doubles(q.base().coords);
  const detail::OrbitCloud cloud(q, q.base(), cloud_reach(2 * rd));
  std::vector<double> y(n);
  const Estimate mean = stratified_mean(n, samples, seed, [&](std::span<const double> u) {
    double d = 0;
    for (std::size_t k = 0; k < n; ++k) {
      y[k] = base[k] + (2 * u[k] - 1) * rd;
      d += (y[k] - base[k]) * (y[k] - base[k]);
    }
    if (d > rd * rd) return 0.0;
    // Interior of F: the base point (cloud index 0) is the unique nearest orbit point.
    const auto [best, arg] = cloud.nearest(y);
    return (arg == 0 && best == d) ? 1.0 : 0.0;
  });
  return scaled(mean, std::pow(2 * rd, static_cast<double>(n)));
}

Estimate thin_set_volume(const FlatQuotient& q, const Point& p, const Rational& r, const Rational& h,
                         std::size_t samples, std::uint64_t seed) {
  if (h <= 0) throw PreconditionError("thin set needs h > 0");
  if (r < 0) throw PreconditionError("thin set needs r >= 0");
  if (samples < kMinSamples) throw PreconditionError("insufficient samples");
  if (r == 0) return {0.0, 0.0};
  const double rd = r.get_d();
  const double hd = h.get_d();
  const Region region = quotient_region(q, p, rd);
  const detail::OrbitCloud cloud(q, p, cloud_reach(region.max_offset + rd + 2 * (rd + hd)));
  return region_volume(q, region, samples, seed,
                       [&](std::span<const double> y) { return cloud.in_thin_set(y, rd, hd); });
}

// ---------------------------------------------------------------------------
// Dirichlet domain

const char* to_string(DirichletVerdict v) {
  switch (v) {
    case DirichletVerdict::Interior: return "interior";
    case DirichletVerdict::Boundary: return "boundary";
    case DirichletVerdict::Exterior: return "exterior";
  }
  return "?";
}

DirichletVerdict dirichlet_membership(const FlatQuotient& q, const Point& x, const Rational& tolerance) {
  const Point& base = q.base();
  const Rational d0 = dist2(x, base);
  if (d0 == 0) return DirichletVerdict::Interior;
  // |x - g b| <= |x - b| forces |b - g b| <= 2 |x - b|.
  const auto hits = deck_enumerate_orbit(q.deck(), base, Radius::sqrt_of(4 * (d0 + tolerance)));
  bool tie = false;
  for (const auto& hit : hits) {
    if (hit.dist_sq == 0) continue;  // the identity: the action is free at the base point
    const Rational diff = dist2(x, hit.image) - d0;
    if (diff < -tolerance) return DirichletVerdict::Exterior;
    if (diff <= tolerance) tie = true;
  }
  return tie ? DirichletVerdict::Boundary : DirichletVerdict::Interior;
}

// ---------------------------------------------------------------------------
// Covering inequalities

std::vector<DualRow> verify_dual(const FlatQuotient& q, const std::vector<Rational>& radii, std::size_t samples,
                                 std::uint64_t seed) {
  std::vector<DualRow> rows;
  const std::size_t n = q.dimension();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const Rational& r = radii[i];
    if (r <= 0) throw PreconditionError("verify_dual radii must be positive");
    DualRow row;
    row.radius = r;
    row.count_2r = orbit_ball_count(q.deck(), q.base(), 2 * r);
    row.count_r = orbit_ball_count(q.deck(), q.base(), r);
    row.quotient_volume = ball_volume(q, q.base(), r, VolumeMethod::MonteCarlo, samples, mix_seed(seed, i));
    row.cover_volume_r = euclidean_ball_volume(n, r.get_d());
    row.cover_volume_2r = euclidean_ball_volume(n, 2 * r.get_d());
    row.lhs_lower = scaled(row.quotient_volume, static_cast<double>(row.count_2r));
    row.lhs_upper = scaled(row.quotient_volume, static_cast<double>(row.count_r));
    row.lower_holds = row.lhs_lower.value + kGuardSigmas * row.lhs_lower.std_error >= row.cover_volume_r;
    row.upper_holds = row.lhs_upper.value - kGuardSigmas * row.lhs_upper.std_error <= row.cover_volume_2r;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Classification

const char* to_string(FlatKind k) { return k == FlatKind::Product ? "product" : "moebius"; }

namespace {

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

/// Generalized cross product of n-1 vectors in Q^n: orthogonal to all of them,
/// nonzero iff they are independent.
Vec normal_vector(const std::vector<Vec>& rows, std::size_t n) {
  Vec normal(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::vector<Rational>> minor;
    for (const auto& r : rows) {
      std::vector<Rational> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) row.push_back(r[j]);
      minor.push_back(std::move(row));
    }
    const Rational d = determinant(std::move(minor));
    normal[k] = (k % 2 == 0) ? d : Rational(-d);
  }
  return normal;
}

}  // namespace

Classification classify_flat(std::size_t n, const std::vector<Isometry>& generators) {
  using Reason = ClassifyError::Reason;
  if (n < 2) throw ClassifyError(Reason::WrongRank, "dimension must be at least 2");
  if (generators.size() != n - 1) {
    throw ClassifyError(Reason::WrongRank, "expected " + std::to_string(n - 1) + " generators, got " +
                                               std::to_string(generators.size()));
  }
  for (const auto& g : generators) {
    if (g.dimension() != n) throw DimensionMismatch("classify: generator dimension");
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (generators[i] * generators[j] != generators[j] * generators[i])
        throw ClassifyError(Reason::NonCommuting, "generators " + std::to_string(i) + " and " + std::to_string(j) +
                                                      " do not commute");

  // g^2 = (A^2, (I + A) v); (I + A) v is the translation along the fixed
  // directions and does not change when all generators are conjugated by a
  // common translation. These span the soul direction.
  std::vector<Vec> fixed;
  for (const auto& g : generators) fixed.push_back(g.translation_part() + g.orthogonal_part() * g.translation_part());
  if (rank_over_q(fixed) != n - 1) {
    throw ClassifyError(Reason::WrongRank, "translation directions do not span an (n-1)-dimensional subspace");
  }
  for (const auto& g : generators)
    for (const auto& w : fixed)
      if (g.orthogonal_part() * w != w)
        throw ClassifyError(Reason::SubspaceNotFixed, "an orthogonal part moves the soul direction");

  Classification out;
  out.normal = normal_vector(fixed, n);
  std::vector<bool> reflects;
  for (const auto& g : generators) {
    const Vec image = g.orthogonal_part() * out.normal;
    if (image == out.normal) {
      reflects.push_back(false);
    } else if (image == -out.normal) {
      reflects.push_back(true);
    } else {
      throw ClassifyError(Reason::SubspaceNotFixed, "orthogonal part does not preserve the normal line");
    }
  }
  const auto first = std::find(reflects.begin(), reflects.end(), true);
  if (first == reflects.end()) {
    out.kind = FlatKind::Product;
    out.generators = generators;
    out.reflecting = reflects;
    return out;
  }
  // <e_1, e_2 - e_1, ..., e_l - e_1, e_{l+1}, ...> with e_1 the first reflecting generator.
  out.kind = FlatKind::Moebius;
  const std::size_t f = static_cast<std::size_t>(first - reflects.begin());
  const Isometry& e1 = generators[f];
  const Isometry e1_inv = inverse(e1);
  out.generators.push_back(e1);
  out.reflecting.push_back(true);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i == f || !reflects[i]) continue;
    out.generators.push_back(generators[i] * e1_inv);
    out.reflecting.push_back(false);
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (reflects[i]) continue;
    out.generators.push_back(generators[i]);
    out.reflecting.push_back(false);
  }
  return out;
}

std::size_t soul_dimension(const DeckGroup& deck) { return rank_over_q(deck.lattice().basis()); }

VolumeGrowthReport volume_growth(const FlatQuotient& q, const std::vector<Rational>& radii, std::size_t samples,
                                 std::uint64_t seed, double tolerance) {
  std::vector<double> volumes;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    volumes.push_back(ball_volume(q, q.base(), radii[i], VolumeMethod::MonteCarlo, samples, mix_seed(seed, i)).value);
  }
  VolumeGrowthReport report;
  report.quotient = growth_exponent(radii, std::move(volumes));
  report.linear = std::abs(report.quotient.fit.exponent - 1.0) <= tolerance;
  report.cover_ratio = euclidean_ball_volume(q.dimension(), 1.0);
  return report;
}

}  // namespace orbitlab
