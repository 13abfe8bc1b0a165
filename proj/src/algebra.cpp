#include "orbitlab/algebra.hpp"

#include <algorithm>
#include <cstdlib>

namespace orbitlab {

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
  IntegerMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionMismatch("ragged integer matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& other) const {
  if (cols_ != other.rows_) throw DimensionMismatch("matrix product shapes");
  IntegerMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += (*this)(i, k) * other(k, j);
    }
  return out;
}

bool IntegerMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

IntegerMatrix IntegerMatrix::stack(const IntegerMatrix& top, const IntegerMatrix& bottom) {
  if (top.cols_ != bottom.cols_) throw DimensionMismatch("stacked matrices need equal widths");
  IntegerMatrix out(top.rows_ + bottom.rows_, top.cols_);
  std::copy(top.a_.begin(), top.a_.end(), out.a_.begin());
  std::copy(bottom.a_.begin(), bottom.a_.end(), out.a_.begin() + static_cast<long>(top.a_.size()));
  return out;
}

namespace {

Integer integer_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    Integer z;
    if (z.set_str(v.get<std::string>(), 10) != 0) throw ParseError("not an integer: " + v.get<std::string>());
    return z;
  }
  throw ParseError("matrix entries must be integers");
}

}  // namespace

IntegerMatrix integer_matrix_from_json(const nlohmann::json& j, std::size_t cols) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  if (!j.empty()) {
    if (!j.front().is_array()) throw ParseError("matrix rows must be arrays");
    cols = j.front().size();
  }
  IntegerMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = integer_from_json(j[i][c]);
  }
  return m;
}

nlohmann::json to_json(const IntegerMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Integer& z = m(i, j);
      if (z.fits_slong_p()) {
        row.push_back(z.get_si());
      } else {
        row.push_back(z.get_str());
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

Integer determinant(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntegerMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::size_t rank_over_q(const IntegerMatrix& m) {
  IntegerMatrix a = m;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t p = rank;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(rank, j), a(p, j));
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      const Integer f = a(i, c);
      const Integer g = a(rank, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) = a(i, j) * g - a(rank, j) * f;
    }
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

void swap_rows(IntegerMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntegerMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

/// row_dst += f * row_src
void add_row(IntegerMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}

void add_col(IntegerMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}

}  // namespace

std::vector<Integer> SmithForm::invariants() const {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
    if (d(i, i) != 0) out.push_back(d(i, i));
  return out;
}

SmithForm smith_normal_form(const IntegerMatrix& m) {
  SmithForm s{IntegerMatrix::identity(m.rows()), m, IntegerMatrix::identity(m.cols())};
  IntegerMatrix& d = s.d;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  // Row operations act on U from the left, column operations on V from the right.
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Pivot: smallest nonzero magnitude in the trailing block.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (d(i, j) != 0 && (pi == rows || abs(d(i, j)) < abs(d(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    swap_rows(d, t, pi);
    swap_rows(s.u, t, pi);
    swap_cols(d, t, pj);
    swap_cols(s.v, t, pj);

    for (;;) {
      bool clear = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        add_row(d, i, t, -q);
        add_row(s.u, i, t, -q);
        if (d(i, t) != 0) clear = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        add_col(d, j, t, -q);
        add_col(s.v, j, t, -q);
        if (d(t, j) != 0) clear = false;
      }
      if (!clear) {
        // A remainder smaller than the pivot is left in row or column t; move it in.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < abs(d(bi, bj))) {
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < abs(d(bi, bj))) {
            bi = t;
            bj = j;
          }
        swap_rows(d, t, bi);
        swap_rows(s.u, t, bi);
        swap_cols(d, t, bj);
        swap_cols(s.v, t, bj);
        continue;
      }
      // Divisibility: pull a non-multiple of the pivot into row t and repeat.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            add_row(d, t, i, 1);
            add_row(s.u, t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      add_row(d, t, t, -2);
      add_row(s.u, t, t, -2);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Abelian groups

AbelianPresentation presentation_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("generators")) throw ParseError("presentation needs \"generators\"");
  AbelianPresentation p;
  const long m = j.at("generators").get<long>();
  if (m < 0) throw ParseError("generator count must be nonnegative");
  p.generators = static_cast<std::size_t>(m);
  p.relations = integer_matrix_from_json(j.value("relations", nlohmann::json::array()), p.generators);
  if (p.relations.cols() != p.generators) throw DimensionMismatch("relation width differs from generator count");
  return p;
}

namespace {

std::size_t snf_rank(const IntegerMatrix& m) { return smith_normal_form(m).invariants().size(); }

}  // namespace

std::size_t abelian_rank(const AbelianPresentation& p) {
  if (p.relations.rows() > 0 && p.relations.cols() != p.generators) throw DimensionMismatch("relation width");
  return p.generators - (p.relations.rows() == 0 ? 0 : snf_rank(p.relations));
}

bool independence_check(const std::vector<std::vector<long>>& elements, const AbelianPresentation& p) {
  const IntegerMatrix e = IntegerMatrix::from_rows(elements, p.generators);
  // A rational dependency l.E = mu.R clears to an integer one, so ranks decide it.
  const IntegerMatrix relations = p.relations.rows() == 0 ? IntegerMatrix(0, p.generators) : p.relations;
  const std::size_t r = relations.rows() == 0 ? 0 : snf_rank(relations);
  const IntegerMatrix stacked = IntegerMatrix::stack(e, relations);
  const std::size_t s = stacked.rows() == 0 ? 0 : snf_rank(stacked);
  return s == elements.size() + r;
}

std::vector<std::vector<long>> l1_ball(std::size_t k, int r) {
  std::vector<std::vector<long>> out;
  std::vector<long> l(k, 0);
  const std::function<void(std::size_t, int)> rec = [&](std::size_t i, int budget) {
    if (i == k) {
      out.push_back(l);
      return;
    }
    for (long v = -budget; v <= budget; ++v) {
      l[i] = v;
      rec(i + 1, budget - static_cast<int>(std::labs(v)));
    }
    l[i] = 0;
  };
  if (r >= 0) rec(0, r);
  return out;
}

}  // namespace orbitlab
