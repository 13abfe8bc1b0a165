#include "orbitlab/warped.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "orbitlab/errors.hpp"

namespace orbitlab::warped {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2 * std::numbers::pi;

}  // namespace

double Warp::operator()(double r) const {
  const double a = std::abs(r);
  double phi;
  if (a <= 1) {
    phi = 1;
  } else if (a >= 2) {
    phi = 1 / (a * a);
  } else {
    // Hermite data phi(1)=1, phi'(1)=0, phi(2)=1/4, phi'(2)=-1/4.
    const double t = a - 1;
    phi = 1.25 * t * t * t - 2 * t * t + 1;
  }
  return squared ? phi * phi : phi;
}

double Warp::derivative(double r) const {
  const double a = std::abs(r);
  const double sign = r < 0 ? -1.0 : 1.0;
  double d;
  if (a <= 1) {
    d = 0;
  } else if (a >= 2) {
    d = -2 / (a * a * a);
  } else {
    const double t = a - 1;
    d = t * (15 * t - 16) / 4;
  }
  if (squared) d *= 2 * Warp{}(r);
  return sign * d;
}

double warp_value(double r) { return Warp{}(r); }

const char* to_string(Space s) { return s == Space::N ? "N" : "cover"; }

// ---------------------------------------------------------------------------
// Grid graph

const int MetricGraph::kStencil[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1},
                                          {-1, 1}, {-1, -1}, {1, 2},  {1, -2}, {-1, 2}, {-1, -2},
                                          {2, 1},  {2, -1}, {-2, 1}, {-2, -1}};

namespace {

long turn_steps(double ds) {
  if (!(ds > 0)) throw PreconditionError("grid spacing must be positive");
  long m = std::max(4L, std::lround(kTwoPi / ds));
  if (m % 2) ++m;
  return m;
}

Grid snapped(Grid g) {
  if (!(g.dr > 0)) throw PreconditionError("grid spacing must be positive");
  g.ds = kTwoPi / static_cast<double>(turn_steps(g.ds));
  return g;
}

long floor_mod(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

MetricGraph::MetricGraph(Space space, Grid grid, Warp warp, long i_max, long j_max, bool folded)
    : space_(space), dr_(grid.dr), m_(turn_steps(grid.ds)), warp_(warp), folded_(folded) {
  if (!(dr_ > 0)) throw PreconditionError("grid spacing must be positive");
  ds_ = kTwoPi / static_cast<double>(m_);
  i_hi_ = i_max;
  i_lo_ = folded ? 0 : -i_max;
  if (space == Space::N) {
    j_lo_ = 0;
    j_hi_ = folded ? m_ / 2 : m_ - 1;
  } else {
    j_hi_ = j_max;
    j_lo_ = folded ? 0 : -j_max;
  }
  weights_.resize(static_cast<std::size_t>(i_hi_ - i_lo_ + 1) * 16);
  for (long i = i_lo_; i <= i_hi_; ++i) {
    for (int k = 0; k < 16; ++k) {
      const int a = kStencil[k][0];
      const int b = kStencil[k][1];
      const double r_mid = (static_cast<double>(i) + 0.5 * a) * dr_;
      const double x = a * dr_;
      const double y = b * ds_;
      weights_[static_cast<std::size_t>(i - i_lo_) * 16 + k] = std::sqrt(x * x + warp_(r_mid) * y * y);
    }
  }
}

std::size_t MetricGraph::node_count() const {
  return static_cast<std::size_t>(i_hi_ - i_lo_ + 1) * static_cast<std::size_t>(j_hi_ - j_lo_ + 1);
}

std::optional<std::size_t> MetricGraph::node(long i, long j) const {
  if (folded_) i = std::abs(i);
  if (space_ == Space::N) {
    j = floor_mod(j, m_);
    if (folded_ && j > m_ / 2) j = m_ - j;
  } else if (folded_) {
    j = std::abs(j);
  }
  if (i < i_lo_ || i > i_hi_ || j < j_lo_ || j > j_hi_) return std::nullopt;
  return static_cast<std::size_t>(i - i_lo_) * static_cast<std::size_t>(j_hi_ - j_lo_ + 1) +
         static_cast<std::size_t>(j - j_lo_);
}

double MetricGraph::edge_weight(long i, int a, int b) const {
  for (int k = 0; k < 16; ++k) {
    if (kStencil[k][0] == a && kStencil[k][1] == b) {
      if (i < i_lo_ || i > i_hi_) break;
      return weights_[static_cast<std::size_t>(i - i_lo_) * 16 + k];
    }
  }
  throw PreconditionError("not a stencil edge inside the window");
}

double MetricGraph::cell_area(long i) const {
  return std::sqrt(warp_(static_cast<double>(i) * dr_)) * dr_ * ds_;
}

int MetricGraph::multiplicity(long i, long j) const {
  if (!folded_) return 1;
  int m = i == 0 ? 1 : 2;
  const bool on_axis = j == 0 || (space_ == Space::N && j == m_ / 2);
  return on_axis ? m : 2 * m;
}

namespace {

/// Binary min-heap over node indices with decrease-key.
class IndexedHeap {
 public:
  explicit IndexedHeap(std::size_t n) : pos_(n, kAbsent) {}
  bool empty() const { return heap_.empty(); }

  void push_or_decrease(std::uint32_t v, double key, const std::vector<double>& dist) {
    if (pos_[v] == kAbsent) {
      pos_[v] = static_cast<std::uint32_t>(heap_.size());
      heap_.push_back(v);
    }
    (void)key;
    up(pos_[v], dist);
  }

  std::uint32_t pop(const std::vector<double>& dist) {
    const std::uint32_t top = heap_.front();
    pos_[top] = kDone;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      pos_[heap_.front()] = 0;
      down(0, dist);
    }
    return top;
  }

  bool done(std::uint32_t v) const { return pos_[v] == kDone; }

 private:
  static constexpr std::uint32_t kAbsent = 0xffffffffu;
  static constexpr std::uint32_t kDone = 0xfffffffeu;

  void up(std::uint32_t p, const std::vector<double>& dist) {
    const std::uint32_t v = heap_[p];
    while (p > 0) {
      const std::uint32_t parent = (p - 1) / 2;
      if (dist[heap_[parent]] <= dist[v]) break;
      heap_[p] = heap_[parent];
      pos_[heap_[p]] = p;
      p = parent;
    }
    heap_[p] = v;
    pos_[v] = p;
  }

  void down(std::uint32_t p, const std::vector<double>& dist) {
    const std::uint32_t v = heap_[p];
    const std::uint32_t n = static_cast<std::uint32_t>(heap_.size());
    for (;;) {
      std::uint32_t c = 2 * p + 1;
      if (c >= n) break;
      if (c + 1 < n && dist[heap_[c + 1]] < dist[heap_[c]]) ++c;
      if (dist[heap_[c]] >= dist[v]) break;
      heap_[p] = heap_[c];
      pos_[heap_[p]] = p;
      p = c;
    }
    heap_[p] = v;
    pos_[v] = p;
  }

  std::vector<std::uint32_t> heap_;
  std::vector<std::uint32_t> pos_;
};

}  // namespace

MetricGraph::Sweep MetricGraph::dijkstra(long i0, long j0, double cutoff, std::optional<std::size_t> target) const {
  const std::size_t n = node_count();
  if (n >= 0xfffffff0u) throw TruncationError("grid window too large");
  Sweep out;
  out.dist.assign(n, kInf);
  out.escape = kInf;
  const auto src = node(i0, j0);
  if (!src) throw PreconditionError("source node outside the grid window");
  const long width = j_hi_ - j_lo_ + 1;
  IndexedHeap heap(n);
  out.dist[*src] = 0;
  heap.push_or_decrease(static_cast<std::uint32_t>(*src), 0, out.dist);
  while (!heap.empty()) {
    const std::uint32_t u = heap.pop(out.dist);
    const double du = out.dist[u];
    if (du > cutoff) {
      out.dist[u] = kInf;
      break;
    }
    const long i = static_cast<long>(u / width) + i_lo_;
    const long j = static_cast<long>(u % width) + j_lo_;
    const double* w = &weights_[static_cast<std::size_t>(i - i_lo_) * 16];
    for (int k = 0; k < 16; ++k) {
      const double nd = du + w[k];
      const auto v = node(i + kStencil[k][0], j + kStencil[k][1]);
      if (!v) {
        out.escape = std::min(out.escape, nd);
        continue;
      }
      const auto vi = static_cast<std::uint32_t>(*v);
      if (heap.done(vi) || nd >= out.dist[vi]) continue;
      out.dist[vi] = nd;
      heap.push_or_decrease(vi, nd, out.dist);
    }
    if (target && u == *target) break;
  }
  // Anything still queued is tentative only.
  for (std::size_t v = 0; v < n; ++v)
    if (!heap.done(static_cast<std::uint32_t>(v))) out.dist[v] = kInf;
  return out;
}

// ---------------------------------------------------------------------------
// Windowed solves

namespace {

struct Field {
  MetricGraph graph;
  MetricGraph::Sweep sweep;

  double at(long i, long j) const {
    const auto v = graph.node(i, j);
    return v ? sweep.dist[*v] : kInf;
  }

  double volume_within(double rho) const {
    double total = 0;
    for (long i = graph.i_min(); i <= graph.i_max(); ++i) {
      double row = 0;
      for (long j = graph.j_min(); j <= graph.j_max(); ++j) {
        const double d = sweep.dist[*graph.node(i, j)];
        if (d <= rho) row += graph.multiplicity(i, j);
      }
      total += row * graph.cell_area(i);
    }
    return total;
  }

  /// #{k : d(x0-bar, T^k x0-bar) <= rho}, read off a cover field from the origin.
  std::size_t deck_count(double rho) const {
    std::size_t count = 0;
    const long m = graph.steps_per_turn();
    for (long k = -(graph.j_max() / m); k <= graph.j_max() / m; ++k)
      if (at(0, k * m) <= rho) ++count;
    return count;
  }
};

struct Source {
  long i = 0;
  long j = 0;
};

Source snap(const MetricGraph& probe, Coord c) {
  Source s{std::lround(c.r / probe.dr()), std::lround(c.s / probe.ds())};
  if (probe.space() == Space::N) s.j = floor_mod(s.j, probe.steps_per_turn());
  return s;
}

/// Dijkstra in a window grown until no path shorter than the answer can leave it.
/// With a target the answer is the target distance, otherwise the cutoff.
Field solve(Space space, Grid grid, Warp warp, Coord from, double cutoff, std::optional<Coord> to) {
  const MetricGraph probe(space, grid, warp, 0, 0, true);
  const Source a = snap(probe, from);
  const std::optional<Source> b = to ? std::optional<Source>(snap(probe, *to)) : std::nullopt;
  const bool folded = a.i == 0 && a.j == 0;
  const double dr = probe.dr();
  const double ds = probe.ds();

  double r_extent = std::abs(a.i) * dr;
  double s_extent = std::abs(a.j) * ds + kTwoPi;
  if (b) {
    r_extent = std::max(r_extent, std::abs(b->i) * dr) + 4;
    s_extent = std::max(s_extent, std::abs(b->j) * ds + kTwoPi);
  } else {
    r_extent += cutoff;
    // Cover balls reach |s| ~ c r^2 through the thin far region.
    s_extent += 0.15 * cutoff * cutoff + cutoff;
  }
  for (int attempt = 0; attempt < 24; ++attempt) {
    const long i_max = static_cast<long>(std::ceil(r_extent / dr)) + 2;
    const long j_max = static_cast<long>(std::ceil(s_extent / ds)) + 2;
    MetricGraph graph(space, grid, warp, i_max, j_max, folded);
    std::optional<std::size_t> target;
    if (b) target = graph.node(b->i, b->j);
    if (b && !target) {
      r_extent *= 2;
      s_extent *= 2;
      continue;
    }
    auto sweep = graph.dijkstra(a.i, a.j, b ? kInf : cutoff, target);
    const double value = b ? sweep.dist[*target] : cutoff;
    if (std::isfinite(value) && sweep.escape > value) return Field{std::move(graph), std::move(sweep)};
    if (b) r_extent *= 2;
    s_extent *= 2;
  }
  throw TruncationError("warped grid window did not contain the query after repeated doubling");
}

Grid halved(Grid g) { return {g.dr / 2, g.ds / 2}; }

double relative_change(double fine, double coarse) {
  if (fine == coarse) return 0;
  return std::abs(fine - coarse) / std::max(std::abs(fine), std::abs(coarse));
}

/// Evaluates `f` on the grid and its halvings until every quantity moves by
/// less than the tolerance.
std::vector<Certified> certify(const Options& opt, const std::function<std::vector<double>(Grid)>& f) {
  Grid grid = snapped(opt.grid);
  std::vector<double> coarse = f(grid);
  for (int h = 0; h <= opt.max_halvings; ++h) {
    const Grid fine_grid = halved(grid);
    const std::vector<double> fine = f(fine_grid);
    std::vector<Certified> out(fine.size());
    bool ok = true;
    for (std::size_t q = 0; q < fine.size(); ++q) {
      out[q] = {fine[q], coarse[q], fine_grid, relative_change(fine[q], coarse[q])};
      if (out[q].relative_change >= opt.tolerance) ok = false;
    }
    if (ok) return out;
    grid = fine_grid;
    coarse = fine;
  }
  throw ConvergenceError("warped grid did not converge within the allowed halvings");
}

Warp warp_of(const Options& opt) { return Warp{opt.squared}; }

}  // namespace

Certified graph_distance(Space space, Coord a, Coord b, const Options& opt) {
  return certify(opt, [&](Grid g) {
           const Field f = solve(space, g, warp_of(opt), a, kInf, b);
           const Source t = snap(f.graph, b);
           return std::vector<double>{f.at(t.i, t.j)};
         })
      .front();
}

Certified ball_volume_warped(Space space, Coord center, double r, const Options& opt) {
  if (!(r >= 0)) throw PreconditionError("ball radius must be nonnegative");
  return certify(opt, [&](Grid g) {
           const Field f = solve(space, g, warp_of(opt), center, r, std::nullopt);
           return std::vector<double>{f.volume_within(r)};
         })
      .front();
}

Certified deck_orbit_distance(long k, const Options& opt) {
  return graph_distance(Space::Cover, {0, 0}, {0, kTwoPi * static_cast<double>(k)}, opt);
}

std::size_t word_ball_count(double c, double r) {
  if (!(c > 0) || !(r >= 0)) throw PreconditionError("word ball count needs c > 0 and r >= 0");
  return 2 * static_cast<std::size_t>(std::floor(c * r)) + 1;
}

std::vector<RatioRow> counterexample_ratios(const std::vector<double>& cs, const std::vector<double>& radii,
                                            const Options& opt) {
  if (cs.empty() || radii.empty()) return {};
  for (double c : cs)
    if (!(c > 0)) throw PreconditionError("c must be positive");
  for (double r : radii)
    if (!(r > 0)) throw PreconditionError("radii must be positive");
  const double r_max = *std::max_element(radii.begin(), radii.end());
  const double c_max = *std::max_element(cs.begin(), cs.end());
  // One sweep per space and grid; cover volumes are shared across c.
  const auto values = certify(opt, [&](Grid g) {
    const Field cover = solve(Space::Cover, g, warp_of(opt), {0, 0}, r_max, std::nullopt);
    const Field n = solve(Space::N, g, warp_of(opt), {0, 0}, c_max * r_max, std::nullopt);
    std::vector<double> v;
    for (double r : radii) v.push_back(cover.volume_within(r));
    for (double c : cs)
      for (double r : radii) v.push_back(n.volume_within(c * r));
    return v;
  });
  std::vector<RatioRow> rows;
  std::size_t q = radii.size();
  for (double c : cs) {
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      RatioRow row;
      row.c = c;
      row.r = radii[ri];
      row.word_count = word_ball_count(c, radii[ri]);
      row.volume_cover = values[ri];
      row.volume_n = values[q++];
      row.ratio = static_cast<double>(row.word_count) * row.volume_n.value / row.volume_cover.value;
      rows.push_back(row);
    }
  }
  return rows;
}

double counterexample_ratio(double c, double r, const Options& opt) {
  return counterexample_ratios({c}, {r}, opt).front().ratio;
}

std::vector<DualRow> verify_dual(const std::vector<double>& radii, const Options& opt) {
  if (radii.empty()) return {};
  for (double r : radii)
    if (!(r > 0)) throw PreconditionError("radii must be positive");
  const double r_max = *std::max_element(radii.begin(), radii.end());
  std::vector<std::size_t> counts;
  const auto values = certify(opt, [&](Grid g) {
    const Field cover = solve(Space::Cover, g, warp_of(opt), {0, 0}, 2 * r_max, std::nullopt);
    const Field n = solve(Space::N, g, warp_of(opt), {0, 0}, r_max, std::nullopt);
    std::vector<double> v;
    counts.clear();
    for (double r : radii) {
      v.push_back(n.volume_within(r));
      v.push_back(cover.volume_within(r));
      v.push_back(cover.volume_within(2 * r));
      counts.push_back(cover.deck_count(2 * r));
      counts.push_back(cover.deck_count(r));
    }
    return v;
  });
  // `counts` holds the finest grid's values.
  std::vector<DualRow> rows;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    DualRow row;
    row.radius = radii[i];
    row.volume_n = values[3 * i];
    row.volume_cover_r = values[3 * i + 1];
    row.volume_cover_2r = values[3 * i + 2];
    row.count_2r = counts[2 * i];
    row.count_r = counts[2 * i + 1];
    const double vn = row.volume_n.value;
    row.lower_holds = static_cast<double>(row.count_2r) * vn >= row.volume_cover_r.value * (1 - opt.tolerance);
    row.upper_holds = static_cast<double>(row.count_r) * vn <= row.volume_cover_2r.value * (1 + opt.tolerance);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace orbitlab::warped
