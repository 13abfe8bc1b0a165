#pragma once

// The warped cylinder N = R x S^1 with metric dr^2 + phi(r) ds^2 and its
// universal cover, approximated by shortest paths on a coordinate grid.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace orbitlab::warped {

/// phi(r): 1 on |r| <= 1, r^-2 on |r| >= 2, cubic Hermite in between.
/// With `squared` the ds^2 coefficient is phi^2 instead of phi.
struct Warp {
  bool squared = false;
  double operator()(double r) const;
  double derivative(double r) const;
};

double warp_value(double r);

enum class Space { N, Cover };
const char* to_string(Space s);

/// Requested spacings. The s spacing is snapped to 2*pi / M with M even.
struct Grid {
  double dr = 0.1;
  double ds = 0.1;
};

struct Options {
  Grid grid;
  bool squared = false;
  double tolerance = 0.02;   // relative change allowed between a grid and its halving
  int max_halvings = 2;      // further halvings tried when certification fails
};

/// Grid node (i, j) sits at (i*dr, j*ds). For `Space::N`, j is taken mod M.
/// A folded graph stores only i >= 0 and j in [0, M/2] (N) or j >= 0 (cover);
/// neighbours are reflected back, which is exact for distances from the origin.
class MetricGraph {
 public:
  MetricGraph(Space space, Grid grid, Warp warp, long i_max, long j_max, bool folded);

  Space space() const { return space_; }
  double dr() const { return dr_; }
  double ds() const { return ds_; }
  long steps_per_turn() const { return m_; }
  bool folded() const { return folded_; }
  long i_min() const { return i_lo_; }
  long i_max() const { return i_hi_; }
  long j_min() const { return j_lo_; }
  long j_max() const { return j_hi_; }
  std::size_t node_count() const;

  /// Index of the node representing (i, j), or nullopt outside the window.
  std::optional<std::size_t> node(long i, long j) const;
  /// Length of the straight coordinate segment (i,j) -> (i+a, j+b), midpoint rule.
  double edge_weight(long i, int a, int b) const;
  /// sqrt(phi) dr ds at row i.
  double cell_area(long i) const;
  /// Number of grid nodes the stored node stands for.
  int multiplicity(long i, long j) const;

  struct Sweep {
    std::vector<double> dist;       // +inf where not settled
    double escape = 0;              // least d(u) + w over edges leaving the window
  };
  /// Dijkstra from (i0, j0); settles every node with distance <= cutoff, or
  /// stops once `target` is settled.
  Sweep dijkstra(long i0, long j0, double cutoff, std::optional<std::size_t> target = std::nullopt) const;

  static const int kStencil[16][2];

 private:
  Space space_;
  double dr_, ds_;
  long m_;
  Warp warp_;
  bool folded_;
  long i_lo_, i_hi_, j_lo_, j_hi_;
  std::vector<double> weights_;  // [(i - i_lo) * 16 + k] for row i and stencil k
};

/// Snap a coordinate pair to the nearest grid node.
struct Coord {
  double r = 0;
  double s = 0;
};

/// A grid quantity certified by halving the grid.
struct Certified {
  double value = 0;    // on the finest grid used
  double coarse = 0;   // on the grid before it
  Grid grid;           // finest grid used
  double relative_change = 0;
};

Certified graph_distance(Space space, Coord a, Coord b, const Options& opt = {});
Certified ball_volume_warped(Space space, Coord center, double r, const Options& opt = {});
/// d(x0-bar, T^k x0-bar) in the cover, T: s -> s + 2 pi.
Certified deck_orbit_distance(long k, const Options& opt = {});

/// #U(cr) = 2 floor(cr) + 1 for the deck group Z with |T^k| = |k|.
std::size_t word_ball_count(double c, double r);

struct RatioRow {
  double c = 0;
  double r = 0;
  std::size_t word_count = 0;
  Certified volume_n;      // Vol(B_{cr}(x0)) in N
  Certified volume_cover;  // Vol(B_r(x0-bar)) in the cover
  double ratio = 0;
};

/// #U(cr) Vol(B_{cr}(x0)) / Vol(B_r(x0-bar)) over all (c, r) pairs.
std::vector<RatioRow> counterexample_ratios(const std::vector<double>& cs, const std::vector<double>& radii,
                                            const Options& opt = {});
double counterexample_ratio(double c, double r, const Options& opt = {});

struct DualRow {
  double radius = 0;
  std::size_t count_2r = 0;
  std::size_t count_r = 0;
  Certified volume_n;         // Vol(B_r(x0))
  Certified volume_cover_r;   // Vol(B_r(x0-bar))
  Certified volume_cover_2r;  // Vol(B_2r(x0-bar))
  bool lower_holds = false;   // #D(2r) Vol(B_r) >= Vol(B~_r)
  bool upper_holds = false;   // #D(r) Vol(B_r) <= Vol(B~_2r)
};

/// Covering inequalities for N -> cover. Volumes carry the certification
/// tolerance as their error band.
std::vector<DualRow> verify_dual(const std::vector<double>& radii, const Options& opt = {});

}  // namespace orbitlab::warped
