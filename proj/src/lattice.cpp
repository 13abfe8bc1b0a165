#include "orbitlab/lattice.hpp"

#include "orbitlab/errors.hpp"

namespace orbitlab {

Lattice::Lattice(std::vector<Vec> basis, std::size_t ambient_dimension)
    : basis_(std::move(basis)), dimension_(ambient_dimension) {
  const std::size_t k = basis_.size();
  for (const auto& b : basis_) {
    if (b.size() != dimension_) throw DimensionMismatch("lattice basis vector has wrong dimension");
  }
  mu_.assign(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i) {
    Vec w = basis_[i];
    for (std::size_t j = 0; j < i; ++j) {
      mu_[i][j] = dot(basis_[i], ortho_[j]) / ortho_norm2_[j];
      w = w - mu_[i][j] * ortho_[j];
    }
    const Rational n2 = norm2(w);
    if (n2 == 0) throw PreconditionError("degenerate lattice basis");
    ortho_.push_back(std::move(w));
    ortho_norm2_.push_back(n2);
  }
}

Vec Lattice::perpendicular_part(const Vec& v) const {
  Vec w = v;
  for (std::size_t j = 0; j < ortho_.size(); ++j) w = w - (dot(v, ortho_[j]) / ortho_norm2_[j]) * ortho_[j];
  return w;
}

bool Lattice::orthogonal_to_span(const Vec& v) const {
  for (const auto& b : basis_) {
    if (dot(v, b) != 0) return false;
  }
  return true;
}

std::optional<std::vector<Integer>> Lattice::coordinates(const Vec& v) const {
  if (v.size() != dimension_) throw DimensionMismatch("lattice coordinates: wrong dimension");
  if (!is_zero(perpendicular_part(v))) return std::nullopt;
  const std::size_t k = rank();
  std::vector<Rational> y(k);
  for (std::size_t j = 0; j < k; ++j) y[j] = dot(v, ortho_[j]) / ortho_norm2_[j];
  std::vector<Integer> m(k);
  for (std::size_t jj = k; jj-- > 0;) {
    Rational c = y[jj];
    for (std::size_t i = jj + 1; i < k; ++i) c -= mu_[i][jj] * Rational(m[i]);
    if (c.get_den() != 1) return std::nullopt;
    m[jj] = c.get_num();
  }
  return m;
}

Vec Lattice::combination(const std::vector<Integer>& coeffs) const {
  Vec p(dimension_);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0) continue;
    p = p + Rational(coeffs[j]) * basis_[j];
  }
  return p;
}

Rational Lattice::gram_determinant() const {
  Rational d = 1;
  for (const auto& n2 : ortho_norm2_) d *= n2;
  return d;
}

void Lattice::enumerate_near(const Vec& center, const Rational& bound_sq, const Visitor& visit) const {
  if (center.size() != dimension_) throw DimensionMismatch("lattice enumeration: wrong dimension");
  const std::size_t k = rank();
  std::vector<Rational> y(k);
  Rational along = 0;
  for (std::size_t j = 0; j < k; ++j) {
    y[j] = dot(center, ortho_[j]) / ortho_norm2_[j];
    along += y[j] * y[j] * ortho_norm2_[j];
  }
  const Rational perp2 = norm2(center) - along;
  if (perp2 > bound_sq) return;

  std::vector<Integer> m(k);
  // Depth-first over levels k-1 .. 0; `used` is the squared length spent so far.
  std::function<void(std::size_t, const Rational&)> descend = [&](std::size_t level,
                                                                  const Rational& used) {
    if (level == 0) {
      const Vec p = combination(m);
      visit(m, p, used);
      return;
    }
    const std::size_t j = level - 1;
    Rational c = y[j];
    for (std::size_t i = j + 1; i < k; ++i) c -= mu_[i][j] * Rational(m[i]);
    const Rational room = (bound_sq - used) / ortho_norm2_[j];
    const auto window = integer_window(c, room);
    if (!window) return;
    for (Integer t = window->first; t <= window->second; ++t) {
      m[j] = t;
      const Rational d = Rational(t) - c;
      descend(j, used + ortho_norm2_[j] * d * d);
    }
    m[j] = 0;
  };
  descend(k, perp2);
}

}  // namespace orbitlab
