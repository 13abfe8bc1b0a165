#include "orbitlab/rational.hpp"

#include <cctype>
#include <cmath>

#include "orbitlab/errors.hpp"

namespace orbitlab {

Rational::Rational(const mpz_class& num, const mpz_class& den) : mpq_class(num, den) {
  if (den == 0) throw PreconditionError("zero denominator");
  canonicalize();
}

namespace {

Rational pow10(long e) {
  Integer p = 1;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) p *= 10;
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  Integer mantissa = 0;
  long scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) --scale;
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw ParseError("not a number: '" + std::string(text) + "'");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    const std::string rest(text.substr(pos));
    std::size_t used = 0;
    long exponent = 0;
    try {
      exponent = std::stol(rest, &used);
    } catch (const std::exception&) {
      throw ParseError("bad exponent in '" + std::string(text) + "'");
    }
    if (std::labs(exponent) > 4096) throw ParseError("exponent out of range");
    scale += exponent;
    pos += used;
  }
  if (pos != text.size()) throw ParseError("trailing characters in '" + std::string(text) + "'");
  Rational q = Rational(mantissa) * pow10(scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q = num / den;
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw ParseError("non-finite value cannot be made rational");
  return Rational(x);
}

Rational sqrt_upper(const Rational& q) {
  if (q <= 0) return 0;
  Rational u = from_double(std::sqrt(q.get_d()) * (1.0 + 1e-15));
  if (u <= 0) u = 1;
  while (u * u < q) u = u * Rational(1025, 1024) + Rational(1, 1 << 30);
  return u;
}

std::optional<std::pair<Integer, Integer>> integer_window(const Rational& center,
                                                          const Rational& radius_sq) {
  if (radius_sq < 0) return std::nullopt;
  auto ok = [&](const Integer& n) {
    const Rational d = Rational(n) - center;
    return d * d <= radius_sq;
  };
  const Integer mid = floor(center + Rational(1, 2));
  if (!ok(mid)) return std::nullopt;
  const double c = center.get_d();
  const double s = std::sqrt(radius_sq.get_d());

  Integer lo(std::floor(c - s));
  if (lo > mid) lo = mid;
  if (ok(lo)) {
    while (ok(lo - 1)) lo -= 1;
  } else {
    while (!ok(lo)) lo += 1;
  }
  Integer hi(std::ceil(c + s));
  if (hi < mid) hi = mid;
  if (ok(hi)) {
    while (ok(hi + 1)) hi += 1;
  } else {
    while (!ok(hi)) hi -= 1;
  }
  return std::make_pair(lo, hi);
}

Radius::Radius(Rational linear, Rational root_sq)
    : linear_(std::move(linear)), root_sq_(std::move(root_sq)) {
  if (linear_ < 0 || root_sq_ < 0) throw PreconditionError("radius must be nonnegative");
}

Radius Radius::exact(const Rational& r) { return Radius(r, 0); }
Radius Radius::sqrt_of(const Rational& r_sq) { return Radius(0, r_sq); }
Radius Radius::sum(const Rational& linear, const Rational& root_sq) {
  return Radius(linear, root_sq);
}

bool Radius::contains(const Rational& dist_sq) const {
  const Rational t = dist_sq - linear_ * linear_ - root_sq_;
  if (t <= 0) return true;
  if (linear_ == 0 || root_sq_ == 0) return false;
  return t * t <= 4 * linear_ * linear_ * root_sq_;
}

Rational Radius::squared_upper() const {
  return linear_ * linear_ + root_sq_ + 2 * linear_ * sqrt_upper(root_sq_);
}

double Radius::value() const { return linear_.get_d() + std::sqrt(root_sq_.get_d()); }

}  // namespace orbitlab
