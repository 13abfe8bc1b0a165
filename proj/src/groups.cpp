#include "orbitlab/groups.hpp"

namespace orbitlab {

DeckGroup::DeckGroup(std::string label, std::vector<Isometry> generators, std::vector<Vec> lattice_basis,
                     std::vector<Isometry> coset_reps)
    : label_(std::move(label)), generators_(std::move(generators)), coset_reps_(std::move(coset_reps)) {
  if (coset_reps_.empty()) throw PreconditionError(label_ + ": at least one coset representative required");
  dimension_ = coset_reps_.front().dimension();
  lattice_ = Lattice(std::move(lattice_basis), dimension_);
  for (const auto& h : coset_reps_) {
    if (h.dimension() != dimension_) throw DimensionMismatch(label_ + ": coset representative dimension");
    for (const auto& b : lattice_.basis()) {
      if (!lattice_.contains(h.orthogonal_part() * b)) {
        throw PreconditionError(label_ + ": coset representative does not normalize the lattice");
      }
    }
  }
  bool has_identity_coset = false;
  for (std::size_t i = 0; i < coset_reps_.size(); ++i) {
    const Isometry& hi = coset_reps_[i];
    if (hi.is_translation() && lattice_.contains(hi.translation_part())) has_identity_coset = true;
    const Isometry hi_inv = inverse(hi);
    for (std::size_t j = i + 1; j < coset_reps_.size(); ++j) {
      const Isometry q = hi_inv * coset_reps_[j];
      if (q.is_translation() && lattice_.contains(q.translation_part())) {
        throw PreconditionError(label_ + ": coset representatives " + std::to_string(i) + " and " +
                                std::to_string(j) + " lie in the same coset");
      }
    }
  }
  if (!has_identity_coset) throw PreconditionError(label_ + ": no coset representative lies in the lattice");
  for (const auto& hi : coset_reps_) {
    for (const auto& hj : coset_reps_) {
      if (!coset_of(hi * hj)) throw PreconditionError(label_ + ": coset representatives not closed under products");
    }
  }
  for (const auto& g : generators_) {
    if (g.dimension() != dimension_) throw DimensionMismatch(label_ + ": generator dimension");
    if (!coset_of(g)) throw PreconditionError(label_ + ": generator outside the declared group");
  }
}

std::optional<std::size_t> DeckGroup::coset_of(const Isometry& g) const {
  for (std::size_t i = 0; i < coset_reps_.size(); ++i) {
    const Isometry q = inverse(coset_reps_[i]) * g;
    if (q.is_translation() && lattice_.contains(q.translation_part())) return i;
  }
  return std::nullopt;
}

std::vector<Isometry> DeckGroup::structural_generators() const {
  std::vector<Isometry> out;
  for (const auto& h : coset_reps_) {
    if (!h.is_identity()) out.push_back(h);
  }
  for (const auto& b : lattice_.basis()) out.push_back(Isometry::translation(b));
  return out;
}

GeneratedGroup<Isometry> DeckGroup::generated() const {
  return GeneratedGroup<Isometry>::symmetric_closure(label_, Isometry::identity(dimension_), generators_);
}

std::vector<OrbitHit> orbit_points_near(const DeckGroup& deck, const Point& center, const Point& moved,
                                        const Radius& radius, std::size_t cap) {
  if (center.dimension() != deck.dimension() || moved.dimension() != deck.dimension()) {
    throw DimensionMismatch(deck.label() + ": point dimension");
  }
  std::vector<OrbitHit> hits;
  const Rational bound = radius.squared_upper();
  for (std::size_t i = 0; i < deck.coset_reps().size(); ++i) {
    const Isometry& h = deck.coset_reps()[i];
    // g = h o t_lambda maps y to A(y + lambda) + v, and
    // |g y - x| = |lambda - (A^T (x - v) - y)|.
    const Vec target = h.orthogonal_part().transpose() * (center.coords - h.translation_part()) - moved.coords;
    deck.lattice().enumerate_near(target, bound, [&](const std::vector<Integer>&, const Vec& lambda,
                                                     const Rational& d2) {
      if (!radius.contains(d2)) return;
      if (hits.size() >= cap) throw CapExceeded(deck.label() + ": orbit enumeration exceeds cap");
      Isometry g = h * Isometry::translation(lambda);
      Point image = apply(g, moved);
      hits.push_back(OrbitHit{std::move(g), std::move(image), d2, i});
    });
  }
  std::sort(hits.begin(), hits.end(), [](const OrbitHit& a, const OrbitHit& b) {
    if (a.dist_sq != b.dist_sq) return a.dist_sq < b.dist_sq;
    if (a.image.coords != b.image.coords) return a.image.coords < b.image.coords;
    return a.coset < b.coset;
  });
  return hits;
}

namespace {

Isometry glide(std::size_t n) {
  // (x, y, ...) -> (x + 1, -y, ...)
  Vec d(n, Rational(1));
  d[1] = -1;
  Vec v(n);
  v[0] = 1;
  return Isometry(Matrix::diagonal(d), v);
}

Vec unit(std::size_t n, std::size_t i, Rational scale = 1) {
  Vec v(n);
  v[i] = scale;
  return v;
}

DeckGroup integer_lattice(std::size_t k, std::string label) {
  std::vector<Isometry> gens;
  std::vector<Vec> basis;
  for (std::size_t i = 0; i < k; ++i) {
    gens.push_back(Isometry::translation(unit(k, i)));
    basis.push_back(unit(k, i));
  }
  return DeckGroup(std::move(label), gens, basis, {Isometry::identity(k)});
}

}  // namespace

std::vector<std::string> bundled_deck_names() {
  return {"Z^1", "Z^2", "Z^3", "torus2", "cylinder2", "moebius2", "klein2", "moebiusxT"};
}

DeckGroup bundled_deck(std::string_view name) {
  if (name == "Z^1") return integer_lattice(1, "Z^1");
  if (name == "Z^2") return integer_lattice(2, "Z^2");
  if (name == "Z^3") return integer_lattice(3, "Z^3");
  if (name == "torus2") return integer_lattice(2, "torus2");
  if (name == "cylinder2") {
    const auto t = Isometry::translation(unit(2, 1));
    return DeckGroup("cylinder2", {t}, {unit(2, 1)}, {Isometry::identity(2)});
  }
  if (name == "moebius2") {
    return DeckGroup("moebius2", {glide(2)}, {unit(2, 0, 2)}, {Isometry::identity(2), glide(2)});
  }
  if (name == "klein2") {
    const auto t = Isometry::translation(unit(2, 1));
    return DeckGroup("klein2", {glide(2), t}, {unit(2, 0, 2), unit(2, 1)}, {Isometry::identity(2), glide(2)});
  }
  if (name == "moebiusxT") {
    const auto t = Isometry::translation(unit(3, 2));
    return DeckGroup("moebiusxT", {glide(3), t}, {unit(3, 0, 2), unit(3, 2)}, {Isometry::identity(3), glide(3)});
  }
  throw PreconditionError("unknown group or space '" + std::string(name) + "'");
}

Point bundled_base_point(std::string_view name) {
  const DeckGroup deck = bundled_deck(name);
  Point p{Vec(deck.dimension())};
  if (name == "moebius2" || name == "moebiusxT") p.coords[1] = Rational(3, 10);
  if (name == "klein2") p.coords = {Rational(1, 10), Rational(1, 10)};
  return p;
}

GeneratedGroup<HeisenbergElement> heisenberg_group() {
  return GeneratedGroup<HeisenbergElement>::symmetric_closure("heisenberg", HeisenbergElement{},
                                                              {{1, 0, 0}, {0, 1, 0}});
}

}  // namespace orbitlab
