#pragma once

// Concretely presented groups: word balls by breadth-first search over the
// Cayley graph, and deck groups Gamma = h_1 L u ... u h_l L of flat quotients
// with exact orbit enumeration.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "orbitlab/errors.hpp"
#include "orbitlab/euclid.hpp"
#include "orbitlab/lattice.hpp"

namespace orbitlab {

inline constexpr std::size_t kDefaultElementCap = 10'000'000;

/// Element (a, b, c) of the discrete Heisenberg group with
/// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b').
struct HeisenbergElement {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  bool operator==(const HeisenbergElement&) const = default;
  auto operator<=>(const HeisenbergElement&) const = default;
};

inline HeisenbergElement operator*(const HeisenbergElement& g, const HeisenbergElement& h) {
  return {g.a + h.a, g.b + h.b, g.c + h.c + g.a * h.b};
}

inline HeisenbergElement inverse_of(const HeisenbergElement& g) { return {-g.a, -g.b, -g.c + g.a * g.b}; }

inline bool is_identity(const HeisenbergElement& g) { return g == HeisenbergElement{}; }
inline bool is_identity(const Isometry& g) { return g.is_identity(); }

inline nlohmann::json element_json(const HeisenbergElement& g) { return {g.a, g.b, g.c}; }
inline nlohmann::json element_json(const Isometry& g) { return to_json(g); }

}  // namespace orbitlab

template <>
struct std::hash<orbitlab::HeisenbergElement> {
  std::size_t operator()(const orbitlab::HeisenbergElement& g) const noexcept {
    std::size_t h = static_cast<std::size_t>(g.a) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::size_t>(g.b) * 0xc2b2ae3d27d4eb4fULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(g.c) * 0x165667b19e3779f9ULL + (h << 6) + (h >> 2);
    return h;
  }
};

namespace orbitlab {

/// A group given by a symmetric generating set S (closed under inverses,
/// identity excluded). Elements are compared exactly.
template <class E>
class GeneratedGroup {
 public:
  GeneratedGroup(std::string label, E identity, std::vector<E> generators)
      : label_(std::move(label)), identity_(std::move(identity)), generators_(std::move(generators)) {
    if (generators_.empty()) throw PreconditionError(label_ + ": empty generating set");
    std::unordered_set<E> set(generators_.begin(), generators_.end());
    for (const auto& g : generators_) {
      if (g == identity_) throw PreconditionError(label_ + ": identity listed as a generator");
      if (!set.count(inverse_of(g))) throw PreconditionError(label_ + ": generating set is not symmetric");
    }
  }

  /// Adds the missing inverses of `generators`.
  static GeneratedGroup symmetric_closure(std::string label, E identity, const std::vector<E>& generators) {
    std::vector<E> sym;
    std::unordered_set<E> seen;
    auto add = [&](const E& g) {
      if (seen.insert(g).second) sym.push_back(g);
    };
    for (const auto& g : generators) {
      add(g);
      add(inverse_of(g));
    }
    return GeneratedGroup(std::move(label), std::move(identity), std::move(sym));
  }

  const std::string& label() const { return label_; }
  const E& identity() const { return identity_; }
  const std::vector<E>& generators() const { return generators_; }

 private:
  std::string label_;
  E identity_;
  std::vector<E> generators_;
};

/// The word ball {g : |g| <= radius} in breadth-first order, each element
/// tagged with its word length.
template <class E>
struct WordBall {
  std::vector<E> elements;
  std::vector<int> lengths;
  std::vector<std::size_t> sphere_sizes;  // sphere_sizes[l] = #{g : |g| = l}

  std::size_t size() const { return elements.size(); }
  /// #{g : |g| <= r}, for r up to the computed radius.
  std::size_t ball_count(int r) const {
    std::size_t n = 0;
    for (int l = 0; l <= r && l < static_cast<int>(sphere_sizes.size()); ++l) n += sphere_sizes[l];
    return n;
  }
};

template <class E>
WordBall<E> word_ball(const GeneratedGroup<E>& group, int radius, std::size_t cap = kDefaultElementCap) {
  if (radius < 0) throw PreconditionError("word ball radius must be nonnegative");
  WordBall<E> ball;
  std::unordered_set<E> seen;
  seen.insert(group.identity());
  ball.elements.push_back(group.identity());
  ball.lengths.push_back(0);
  ball.sphere_sizes.push_back(1);
  std::size_t frontier_begin = 0;
  for (int l = 1; l <= radius; ++l) {
    const std::size_t frontier_end = ball.elements.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& s : group.generators()) {
        E next = ball.elements[i] * s;
        if (seen.count(next)) continue;
        if (ball.elements.size() >= cap) {
          throw CapExceeded(group.label() + ": word ball exceeds element cap " + std::to_string(cap));
        }
        seen.insert(next);
        ball.elements.push_back(std::move(next));
        ball.lengths.push_back(l);
      }
    }
    ball.sphere_sizes.push_back(ball.elements.size() - frontier_end);
    frontier_begin = frontier_end;
  }
  return ball;
}

/// Minimal number of generators whose product is `target`.
template <class E>
int word_length(const GeneratedGroup<E>& group, const E& target, std::size_t cap = kDefaultElementCap) {
  if (target == group.identity()) return 0;
  std::unordered_set<E> seen{group.identity()};
  std::vector<E> frontier{group.identity()};
  for (int l = 1;; ++l) {
    std::vector<E> next;
    for (const auto& g : frontier) {
      for (const auto& s : group.generators()) {
        E h = g * s;
        if (h == target) return l;
        if (!seen.insert(h).second) continue;
        if (seen.size() > cap) {
          throw CapExceeded(group.label() + ": element not found within cap " + std::to_string(cap));
        }
        next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
  }
}

template <class E>
E power(const E& identity, const E& g, long exponent) {
  E base = exponent < 0 ? inverse_of(g) : g;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  E acc = identity;
  while (e) {
    if (e & 1UL) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

/// JSON export of a ball: [{"element": ..., "length": n}] sorted by the
/// element's canonical encoding.
template <class E>
nlohmann::json word_ball_json(const WordBall<E>& ball) {
  std::vector<std::pair<std::string, std::size_t>> keyed;
  keyed.reserve(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) keyed.emplace_back(element_json(ball.elements[i]).dump(), i);
  std::sort(keyed.begin(), keyed.end());
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, i] : keyed) {
    out.push_back({{"element", element_json(ball.elements[i])}, {"length", ball.lengths[i]}});
  }
  return out;
}

/// A discrete group of isometries of R^n presented as Gamma = h_1 L u ... u h_l L,
/// L a pure-translation lattice normalized by every h_i.
class DeckGroup {
 public:
  DeckGroup(std::string label, std::vector<Isometry> generators, std::vector<Vec> lattice_basis,
            std::vector<Isometry> coset_reps);

  const std::string& label() const { return label_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<Isometry>& generators() const { return generators_; }
  const Lattice& lattice() const { return lattice_; }
  const std::vector<Isometry>& coset_reps() const { return coset_reps_; }
  std::size_t index() const { return coset_reps_.size(); }

  /// Index i with g in h_i L, or nullopt when g is not in Gamma.
  std::optional<std::size_t> coset_of(const Isometry& g) const;
  bool contains(const Isometry& g) const { return coset_of(g).has_value(); }

  /// Coset representatives together with the lattice translations; these generate Gamma.
  std::vector<Isometry> structural_generators() const;
  /// The supplied generators closed under inverses.
  GeneratedGroup<Isometry> generated() const;

 private:
  std::string label_;
  std::size_t dimension_ = 0;
  std::vector<Isometry> generators_;
  Lattice lattice_;
  std::vector<Isometry> coset_reps_;
};

struct OrbitHit {
  Isometry element;
  Point image;
  Rational dist_sq;
  std::size_t coset = 0;
};

/// Every g in Gamma with |g(moved) - center| <= radius, sorted by distance and
/// then lexicographically by image. Inclusive boundary, exact.
std::vector<OrbitHit> orbit_points_near(const DeckGroup& deck, const Point& center, const Point& moved,
                                        const Radius& radius, std::size_t cap = kDefaultElementCap);

/// D^Gamma(x, r) = {g : d(x, g x) <= r}.
inline std::vector<OrbitHit> deck_enumerate_orbit(const DeckGroup& deck, const Point& x, const Radius& r,
                                                  std::size_t cap = kDefaultElementCap) {
  return orbit_points_near(deck, x, x, r, cap);
}

// Bundled examples.
std::vector<std::string> bundled_deck_names();
DeckGroup bundled_deck(std::string_view name);
/// Base point used for a bundled space (free action, generic where it matters).
Point bundled_base_point(std::string_view name);
GeneratedGroup<HeisenbergElement> heisenberg_group();

}  // namespace orbitlab
