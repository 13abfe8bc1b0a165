#pragma once

// Integer linear algebra and group rank: Smith normal form, abelian rank,
// independence modulo relations, and the two injections ball -> group.

#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "orbitlab/groups.hpp"
#include "orbitlab/rational.hpp"

namespace orbitlab {

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols);
  static IntegerMatrix identity(std::size_t n);
  static IntegerMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntegerMatrix operator*(const IntegerMatrix& other) const;
  bool operator==(const IntegerMatrix& other) const = default;
  bool is_diagonal() const;
  /// Rows of `top` followed by rows of `bottom`.
  static IntegerMatrix stack(const IntegerMatrix& top, const IntegerMatrix& bottom);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> a_;
};

/// Row-major array of integers (numbers or decimal strings). `cols` fixes the
/// width of an empty matrix.
IntegerMatrix integer_matrix_from_json(const nlohmann::json& j, std::size_t cols = 0);
nlohmann::json to_json(const IntegerMatrix& m);

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntegerMatrix& m);
/// Rank over Q by fraction-free elimination.
std::size_t rank_over_q(const IntegerMatrix& m);

struct SmithForm {
  IntegerMatrix u;  // rows x rows, unimodular
  IntegerMatrix d;  // rows x cols, diagonal, d_1 | d_2 | ..., all >= 0
  IntegerMatrix v;  // cols x cols, unimodular
  std::vector<Integer> invariants() const;  // nonzero diagonal entries
};

SmithForm smith_normal_form(const IntegerMatrix& m);

/// Z^m modulo the row span of `relations` (relations.cols() == m).
struct AbelianPresentation {
  std::size_t generators = 0;
  IntegerMatrix relations;
};

AbelianPresentation presentation_from_json(const nlohmann::json& j);
std::size_t abelian_rank(const AbelianPresentation& p);
/// True iff no nonzero integer combination of `elements` lies in the relation lattice.
bool independence_check(const std::vector<std::vector<long>>& elements, const AbelianPresentation& p);

struct HurewiczReport {
  int radius = 0;
  std::size_t group_ball = 0;   // #W_G(r)
  std::size_t image_ball = 0;   // #W_2(r), the l1-ball in the span of the images
  bool injective = true;        // l -> g_1^l_1 ... g_k^l_k is one-to-one on the ball
  bool section_holds = true;    // abelianizing g_1^l_1 ... g_k^l_k gives sum l_i gamma_i
  bool growth_holds = false;    // group_ball >= image_ball
};

/// All l in Z^k with |l_1| + ... + |l_k| <= r, in a fixed order.
std::vector<std::vector<long>> l1_ball(std::size_t k, int r);

template <class E>
HurewiczReport hurewicz_ball_injection(const GeneratedGroup<E>& group, const std::vector<E>& lifts,
                                       const std::vector<std::vector<long>>& images,
                                       const AbelianPresentation& abelianization,
                                       const std::function<std::vector<long>(const E&)>& abelianize, int radius,
                                       std::size_t cap = kDefaultElementCap) {
  if (lifts.size() != images.size()) throw DimensionMismatch("one abelianization image per lifted element");
  if (!independence_check(images, abelianization)) throw PreconditionError("abelianization images are dependent");
  HurewiczReport report;
  report.radius = radius;
  report.group_ball = word_ball(group, radius, cap).size();
  const auto ball = l1_ball(lifts.size(), radius);
  report.image_ball = ball.size();
  std::unordered_set<E> seen;
  for (const auto& l : ball) {
    E g = group.identity();
    for (std::size_t i = 0; i < l.size(); ++i) g = g * power(group.identity(), lifts[i], l[i]);
    if (!seen.insert(g).second) report.injective = false;
    if (abelianize) {
      std::vector<long> expect(abelianization.generators, 0);
      for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t c = 0; c < expect.size(); ++c) expect[c] += l[i] * images[i][c];
      if (abelianize(g) != expect) report.section_holds = false;
    }
  }
  report.growth_holds = report.group_ball >= report.image_ball;
  return report;
}

struct PolycyclicReport {
  long box = 0;
  std::size_t points = 0;
  bool injective = true;
  std::vector<std::pair<std::vector<long>, std::vector<long>>> collisions;
};

/// Evaluates (l_1..l_k) -> h_1^l_1 ... h_k^l_k on [-L, L]^k and reports coincidences.
template <class E>
PolycyclicReport polycyclic_injection(const E& identity, const std::vector<E>& series, long box,
                                      std::size_t cap = kDefaultElementCap) {
  if (box < 0) throw PreconditionError("box bound must be nonnegative");
  PolycyclicReport report;
  report.box = box;
  const std::size_t k = series.size();
  const std::size_t side = static_cast<std::size_t>(2 * box + 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > cap / side) throw CapExceeded("box has more than " + std::to_string(cap) + " points");
    total *= side;
  }
  std::unordered_map<E, std::vector<long>> first;
  std::vector<long> l(k, -box);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rest = n;
    for (std::size_t i = k; i-- > 0;) {
      l[i] = static_cast<long>(rest % side) - box;
      rest /= side;
    }
    E g = identity;
    for (std::size_t i = 0; i < k; ++i) g = g * power(identity, series[i], l[i]);
    auto [it, fresh] = first.emplace(g, l);
    if (!fresh) {
      report.injective = false;
      report.collisions.emplace_back(it->second, l);
    }
  }
  report.points = total;
  return report;
}

inline std::vector<long> heisenberg_abelianization(const HeisenbergElement& g) { return {g.a, g.b}; }

}  // namespace orbitlab
