#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace orbitlab {

using Integer = mpz_class;

/// mpq_class whose numerator/denominator constructor reduces to lowest terms;
/// exact equality and hashing rely on canonical form.
class Rational : public mpq_class {
 public:
  using mpq_class::mpq_class;
  Rational() = default;
  Rational(const mpq_class& q) : mpq_class(q) {}
  Rational(mpq_class&& q) : mpq_class(std::move(q)) {}
  Rational(const mpz_class& num, const mpz_class& den);
};

/// Parses "p", "p/q" or a finite decimal such as "-0.3" or "2.5e-1" exactly.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise (lowest terms).
std::string to_string(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
inline double to_double(const Rational& q) { return q.get_d(); }
Rational from_double(double x);

/// Rational upper bound u with u >= sqrt(q) and u*u close to q.
Rational sqrt_upper(const Rational& q);

/// All integers n with (n - center)^2 <= radius_sq, as an inclusive pair,
/// or nullopt when no integer qualifies.
std::optional<std::pair<Integer, Integer>> integer_window(const Rational& center,
                                                          const Rational& radius_sq);

/// A nonnegative radius of the form `linear + sqrt(root_sq)`, compared exactly.
///
/// Orbit-ball queries need radii such as r, h*r with h = sqrt(h^2), and
/// r + r0 with r0 = sqrt(r0^2); none of these is rational in general, but all
/// comparisons `d <= radius` against a squared rational distance reduce to
/// exact rational inequalities.
class Radius {
 public:
  Radius() = default;
  static Radius exact(const Rational& r);
  static Radius sqrt_of(const Rational& r_sq);
  static Radius sum(const Rational& linear, const Rational& root_sq);

  /// True iff sqrt(dist_sq) <= *this, decided exactly.
  bool contains(const Rational& dist_sq) const;
  /// A rational bound B with B >= (*this)^2, used for pruning only.
  Rational squared_upper() const;
  double value() const;

  const Rational& linear() const { return linear_; }
  const Rational& root_sq() const { return root_sq_; }

 private:
  Radius(Rational linear, Rational root_sq);
  Rational linear_{0};
  Rational root_sq_{0};
};

}  // namespace orbitlab
