#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace bfpp {

using Point = std::vector<double>;

/// Open Euclidean ball.
struct Ball {
  Point center;
  double radius = 0.0;
};

/// Non-owning view of a ball stored in a BallSet.
struct BallView {
  std::span<const double> center;
  double radius;

  BallView(std::span<const double> c, double r) : center(c), radius(r) {}
  BallView(const Ball& b) : center(b.center), radius(b.radius) {}  // NOLINT(google-explicit-constructor)
};

/// Balls in R^d stored as flat coordinate and radius arrays.
class BallSet {
 public:
  explicit BallSet(int dim = 2);
  BallSet(int dim, const std::vector<Ball>& balls);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return radii_.size(); }
  bool empty() const noexcept { return radii_.empty(); }

  void reserve(std::size_t n);
  void add(std::span<const double> center, double radius);
  void add(const Ball& b) { add(b.center, b.radius); }
  void append(const BallSet& other);

  std::span<const double> center(std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double radius(std::size_t i) const noexcept { return radii_[i]; }
  BallView operator[](std::size_t i) const noexcept { return {center(i), radii_[i]}; }
  Ball ball(std::size_t i) const { return {Point(center(i).begin(), center(i).end()), radii_[i]}; }

  BallSet subset(std::span<const std::size_t> indices) const;
  const std::vector<double>& radii() const noexcept { return radii_; }

  friend bool operator==(const BallSet&, const BallSet&) = default;

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<double> radii_;
};

struct PointTerminal {
  Point at;
};

struct SphereTerminal {
  Point center;
  double radius;
};

/// Endpoint set of a travel-time query: a single point or a sphere surface.
using Terminal = std::variant<PointTerminal, SphereTerminal>;

Terminal point_at(Point x);
/// Throws unless radius > 0.
Terminal sphere_around(Point center, double radius);
int terminal_dim(const Terminal& t);

double distance(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Strict overlap of open balls: |c1 - c2| < r1 + r2.
bool overlaps(const BallView& a, const BallView& b);

/// Euclidean distance between closures, clamped at 0. Symmetric.
double gap(const BallView& a, const BallView& b);
double gap(const BallView& b, const Terminal& t);
double gap(const Terminal& t, const BallView& b);
double gap(const Terminal& a, const Terminal& b);

/// A pair of points realizing a set gap: `on_first` in the closure of the
/// first set, `on_second` in the closure of the second, |on_first - on_second| = gap.
struct ClosestPoints {
  Point on_first;
  Point on_second;
};

ClosestPoints closest_points(const BallView& a, const BallView& b);
ClosestPoints closest_points(const Terminal& t, const BallView& b);
ClosestPoints closest_points(const BallView& b, const Terminal& t);
ClosestPoints closest_points(const Terminal& a, const Terminal& b);

/// Polygonal path; consecutive vertices must be distinct.
class Polyline {
 public:
  /// Throws unless there are >= 2 vertices, consecutive ones distinct.
  explicit Polyline(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  double length() const;

 private:
  std::vector<Point> vertices_;
};

/// Length of segment [a, b] inside the union of `balls`.
double covered_length(const BallSet& balls, std::span<const double> a, std::span<const double> b);
double covered_length(const BallSet& balls, const Polyline& path);

/// Length of the path outside the union of `balls`.
double tau_of_segment(const BallSet& balls, std::span<const double> a, std::span<const double> b);
double tau_of_path(const BallSet& balls, const Polyline& path);

/// Uniform grid over ball bounding boxes. Balls whose box would cover more
/// than `max_cells_per_ball` cells go to an overflow list reported by every
/// query. Queries may return false positives, never false negatives.
class GridIndex {
 public:
  static constexpr std::size_t max_cells_per_ball = 64;

  /// cell_size <= 0 selects the median ball diameter.
  explicit GridIndex(const BallSet& balls, double cell_size = 0.0);

  double cell_size() const noexcept { return cell_; }

  /// Candidate balls meeting the axis-aligned box [lo, hi]; sorted, unique.
  std::vector<std::size_t> query_box(std::span<const double> lo, std::span<const double> hi) const;
  /// Candidate balls meeting the closed ball B(center, radius); sorted, unique.
  std::vector<std::size_t> query_near(std::span<const double> center, double radius) const;

  /// Calls fn(j) for each candidate j (duplicates possible) meeting the box
  /// of B(center, radius).
  template <class Fn>
  void for_each_candidate(std::span<const double> center, double radius, Fn&& fn) const;

 private:
  std::uint64_t key_of(std::span<const std::int64_t> cell) const noexcept;
  bool box_cells(std::span<const double> lo, std::span<const double> hi, std::vector<std::int64_t>& lo_cell,
                 std::vector<std::int64_t>& hi_cell, std::size_t& count) const;
  template <class Fn>
  void visit_cells(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi, Fn&& fn) const;

  const BallSet* balls_;
  int dim_;
  double cell_ = 1.0;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries_;  // sorted by key
  std::vector<std::uint32_t> overflow_;
};

// ---- template implementation ----

template <class Fn>
void GridIndex::visit_cells(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi,
                            Fn&& fn) const {
  std::vector<std::int64_t> cur = lo;
  while (true) {
    std::uint64_t key = key_of(cur);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<std::uint64_t, std::uint32_t>{key, 0});
    for (; it != entries_.end() && it->first == key; ++it) fn(static_cast<std::size_t>(it->second));
    int k = 0;
    for (; k < dim_; ++k) {
      if (cur[k] < hi[k]) {
        ++cur[k];
        break;
      }
      cur[k] = lo[k];
    }
    if (k == dim_) break;
  }
}

template <class Fn>
void GridIndex::for_each_candidate(std::span<const double> center, double radius, Fn&& fn) const {
  std::vector<double> lo(dim_), hi(dim_);
  for (int k = 0; k < dim_; ++k) {
    lo[k] = center[k] - radius;
    hi[k] = center[k] + radius;
  }
  std::vector<std::int64_t> lo_cell, hi_cell;
  std::size_t count = 0;
  if (box_cells(lo, hi, lo_cell, hi_cell, count)) {
    visit_cells(lo_cell, hi_cell, fn);
  } else {
    for (std::size_t j = 0; j < balls_->size(); ++j) fn(j);
    return;
  }
  for (auto j : overflow_) fn(static_cast<std::size_t>(j));
}

}  // namespace bfpp
