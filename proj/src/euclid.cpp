#include "orbitlab/euclid.hpp"

#include <sstream>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

}  // namespace

Vec operator+(const Vec& a, const Vec& b) {
  require_same(a.size(), b.size(), "vector sum");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec operator-(const Vec& a, const Vec& b) {
  require_same(a.size(), b.size(), "vector difference");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec operator-(const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

Vec operator*(const Rational& s, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

Rational dot(const Vec& a, const Vec& b) {
  require_same(a.size(), b.size(), "dot product");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero(const Vec& a) {
  for (const auto& x : a) {
    if (x != 0) return false;
  }
  return true;
}

std::vector<double> to_doubles(const Vec& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].get_d();
  return out;
}

std::size_t rank_over_q(const std::vector<Vec>& rows) {
  if (rows.empty()) return 0;
  std::vector<Vec> m = rows;
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

Matrix::Matrix(std::size_t n) : n_(n), a_(n * n) {}

Matrix::Matrix(std::size_t n, std::vector<Rational> entries) : n_(n), a_(std::move(entries)) {
  require_same(a_.size(), n * n, "matrix entries");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  require_same(n_, other.n_, "matrix product");
  Matrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const Rational& aik = (*this)(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) out(i, j) += aik * other(k, j);
    }
  return out;
}

Vec Matrix::operator*(const Vec& x) const {
  require_same(n_, x.size(), "matrix-vector product");
  Vec out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const Rational& aij = (*this)(i, j);
      if (aij != 0) s += aij * x[j];
    }
    out[i] = s;
  }
  return out;
}

bool Matrix::is_identity() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool Matrix::is_orthogonal() const { return ((*this) * transpose()).is_identity(); }

Point parse_point(std::string_view text) {
  Point p;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start);
    p.coords.push_back(parse_rational(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return p;
}

std::string to_string(const Point& p) {
  std::string out;
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) out += ',';
    out += to_string(p.coords[i]);
  }
  return out;
}

Isometry::Isometry(Matrix orthogonal_part, Vec translation_part)
    : a_(std::move(orthogonal_part)), v_(std::move(translation_part)) {
  require_same(a_.size(), v_.size(), "isometry");
  if (v_.empty()) throw DimensionMismatch("isometry of dimension 0");
  if (!a_.is_orthogonal()) throw PreconditionError("orthogonal part is not orthogonal");
}

Isometry Isometry::identity(std::size_t n) { return Isometry(Matrix::identity(n), Vec(n)); }

Isometry Isometry::translation(Vec v) {
  const std::size_t n = v.size();
  return Isometry(Matrix::identity(n), std::move(v));
}

bool Isometry::is_identity() const { return a_.is_identity() && is_zero(v_); }

Isometry compose(const Isometry& f, const Isometry& g) {
  require_same(f.dimension(), g.dimension(), "compose");
  const Matrix& fa = f.orthogonal_part();
  return Isometry(fa * g.orthogonal_part(), fa * g.translation_part() + f.translation_part());
}

Isometry inverse(const Isometry& f) {
  Matrix at = f.orthogonal_part().transpose();
  Vec v = -(at * f.translation_part());
  return Isometry(std::move(at), std::move(v));
}

Point apply(const Isometry& f, const Point& x) {
  require_same(f.dimension(), x.dimension(), "apply");
  return Point{f.orthogonal_part() * x.coords + f.translation_part()};
}

nlohmann::json to_json(const Isometry& f) {
  nlohmann::json rows = nlohmann::json::array();
  const std::size_t n = f.dimension();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(to_string(f.orthogonal_part()(i, j)));
    rows.push_back(std::move(row));
  }
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : f.translation_part()) v.push_back(to_string(x));
  return {{"A", std::move(rows)}, {"v", std::move(v)}};
}

namespace {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw ParseError("rational entries must be strings or integers, got " + j.dump());
}

}  // namespace

Isometry isometry_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("v"))
    throw ParseError("isometry JSON needs keys \"A\" and \"v\"");
  const auto& rows = j.at("A");
  const auto& v = j.at("v");
  const std::size_t n = v.size();
  if (!rows.is_array() || rows.size() != n) throw DimensionMismatch("isometry JSON: A is not n x n");
  std::vector<Rational> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) throw DimensionMismatch("isometry JSON: ragged A");
    for (const auto& x : row) entries.push_back(rational_from_json(x));
  }
  Vec t;
  for (const auto& x : v) t.push_back(rational_from_json(x));
  return Isometry(Matrix(n, std::move(entries)), std::move(t));
}

std::string canonical_encoding(const Isometry& f) { return to_json(f).dump(); }

std::size_t hash_value(const Rational& q) {
  const auto limb = [](const mpz_class& z) -> std::size_t {
    const std::size_t low = mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0;
    return low ^ (static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1) << 61);
  };
  return limb(q.get_num()) * 0x9e3779b97f4a7c15ULL ^ limb(q.get_den());
}

}  // namespace orbitlab

std::size_t std::hash<orbitlab::Isometry>::operator()(const orbitlab::Isometry& f) const noexcept {
  std::size_t h = f.dimension();
  const auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& x : f.orthogonal_part().entries()) mix(orbitlab::hash_value(x));
  for (const auto& x : f.translation_part()) mix(orbitlab::hash_value(x));
  return h;
}
