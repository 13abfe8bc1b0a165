#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "orbitlab/euclid.hpp"

namespace orbitlab {

/// A full-rank lattice L = Z b_1 + ... + Z b_k inside Q^n (k <= n).
///
/// Holds the exact Gram-Schmidt data of the basis so that the points of L
/// inside any ball can be listed without a bounding-box sweep: with
/// b*_j the orthogonalized basis and mu_ij the projection coefficients,
///
///   |sum_j m_j b_j - c|^2 = |c_perp|^2 + sum_j |b*_j|^2 (m_j + sum_{i>j} mu_ij m_i - y_j)^2,
///
/// so each coordinate m_j ranges over an exact integer window once the
/// coordinates above it are fixed.
class Lattice {
 public:
  Lattice() = default;
  /// Throws PreconditionError("degenerate lattice basis") unless the vectors are independent.
  explicit Lattice(std::vector<Vec> basis, std::size_t ambient_dimension);

  std::size_t rank() const { return basis_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<Vec>& basis() const { return basis_; }

  /// Integer coordinates of v in the basis, or nullopt when v is not in L.
  std::optional<std::vector<Integer>> coordinates(const Vec& v) const;
  bool contains(const Vec& v) const { return coordinates(v).has_value(); }
  Vec combination(const std::vector<Integer>& coeffs) const;

  /// Orthogonal projection onto span(L)^perp.
  Vec perpendicular_part(const Vec& v) const;
  bool orthogonal_to_span(const Vec& v) const;

  /// det of the Gram matrix: the squared covolume of L in its span.
  Rational gram_determinant() const;

  using Visitor = std::function<void(const std::vector<Integer>& coeffs, const Vec& point,
                                     const Rational& dist_sq)>;
  /// Calls `visit` for every lattice point p with |p - center|^2 <= bound_sq.
  void enumerate_near(const Vec& center, const Rational& bound_sq, const Visitor& visit) const;

 private:
  std::vector<Vec> basis_;
  std::size_t dimension_ = 0;
  std::vector<Vec> ortho_;              // b*_j
  std::vector<Rational> ortho_norm2_;   // |b*_j|^2
  std::vector<std::vector<Rational>> mu_;  // mu_[i][j] for i > j
};

}  // namespace orbitlab
