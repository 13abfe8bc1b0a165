#pragma once

// Exact Euclidean isometries x -> A x + v over the rationals.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "orbitlab/rational.hpp"

namespace orbitlab {

using Vec = std::vector<Rational>;

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator-(const Vec& a);
Vec operator*(const Rational& s, const Vec& a);
Rational dot(const Vec& a, const Vec& b);
inline Rational norm2(const Vec& a) { return dot(a, a); }
bool is_zero(const Vec& a);
std::vector<double> to_doubles(const Vec& a);

/// Rank over Q of a list of vectors (fraction-free elimination).
std::size_t rank_over_q(const std::vector<Vec>& rows);

/// Square n x n matrix of rationals, row major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n);
  Matrix(std::size_t n, std::vector<Rational> entries);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vec& d);

  std::size_t size() const { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Vec operator*(const Vec& x) const;
  bool operator==(const Matrix& other) const = default;

  bool is_identity() const;
  bool is_orthogonal() const;
  const std::vector<Rational>& entries() const { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

struct Point {
  Vec coords;

  std::size_t dimension() const { return coords.size(); }
  bool operator==(const Point&) const = default;
};

inline Vec operator-(const Point& a, const Point& b) { return a.coords - b.coords; }
inline Rational dist2(const Point& a, const Point& b) { return norm2(a - b); }

/// Parses a comma separated coordinate list such as "0,0.3" or "1/10,1/10".
Point parse_point(std::string_view text);
std::string to_string(const Point& p);

/// A rigid motion x -> A x + v of R^n with A orthogonal.
class Isometry {
 public:
  Isometry() = default;
  /// Throws PreconditionError unless A is orthogonal, DimensionMismatch on shape errors.
  Isometry(Matrix orthogonal_part, Vec translation_part);

  static Isometry identity(std::size_t n);
  static Isometry translation(Vec v);

  std::size_t dimension() const { return v_.size(); }
  const Matrix& orthogonal_part() const { return a_; }
  const Vec& translation_part() const { return v_; }
  bool is_identity() const;
  bool is_translation() const { return a_.is_identity(); }

  bool operator==(const Isometry&) const = default;

 private:
  Matrix a_;
  Vec v_;
};

/// f o g: orthogonal part f.A g.A, translation f.A g.v + f.v.
Isometry compose(const Isometry& f, const Isometry& g);
Isometry inverse(const Isometry& f);
Point apply(const Isometry& f, const Point& x);
inline Isometry operator*(const Isometry& f, const Isometry& g) { return compose(f, g); }
inline Isometry inverse_of(const Isometry& f) { return inverse(f); }

/// {"A": [[...]], "v": [...]} with canonical rational strings.
nlohmann::json to_json(const Isometry& f);
Isometry isometry_from_json(const nlohmann::json& j);
std::string canonical_encoding(const Isometry& f);

std::size_t hash_value(const Rational& q);

}  // namespace orbitlab

template <>
struct std::hash<orbitlab::Isometry> {
  std::size_t operator()(const orbitlab::Isometry& f) const noexcept;
};
