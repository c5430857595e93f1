#include "bfpp/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bfpp/rng.hpp"

namespace bfpp {

namespace {

constexpr double kSnap = 1e-12;

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

// Unit vector from a to b; first axis when a == b.
Point unit_from(std::span<const double> a, std::span<const double> b, double& dist) {
  Point u(a.size());
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    u[k] = b[k] - a[k];
    s += u[k] * u[k];
  }
  dist = std::sqrt(s);
  if (dist > 0.0) {
    for (auto& x : u) x /= dist;
  } else {
    std::fill(u.begin(), u.end(), 0.0);
    u[0] = 1.0;
  }
  return u;
}

Point along(std::span<const double> c, const Point& u, double t) {
  Point p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = c[k] + t * u[k];
  return p;
}

// Some unit vector orthogonal to u.
Point orthogonal_to(const Point& u) {
  std::size_t axis = 0;
  for (std::size_t k = 1; k < u.size(); ++k) {
    if (std::abs(u[k]) < std::abs(u[axis])) axis = k;
  }
  Point w(u.size(), 0.0);
  w[axis] = 1.0;
  double dot = u[axis];
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    w[k] -= dot * u[k];
    s += w[k] * w[k];
  }
  s = std::sqrt(s);
  for (auto& x : w) x /= s;
  return w;
}

double sphere_sphere_gap(const SphereTerminal& a, const SphereTerminal& b) {
  double d = distance(a.center, b.center);
  if (d >= a.radius + b.radius) return d - (a.radius + b.radius);
  double inner = std::abs(a.radius - b.radius);
  if (d <= inner) return inner - d;
  return 0.0;
}

}  // namespace

// ---- BallSet ----

BallSet::BallSet(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
}

BallSet::BallSet(int dim, const std::vector<Ball>& balls) : BallSet(dim) {
  reserve(balls.size());
  for (const auto& b : balls) add(b);
}

void BallSet::reserve(std::size_t n) {
  coords_.reserve(n * static_cast<std::size_t>(dim_));
  radii_.reserve(n);
}

void BallSet::add(std::span<const double> center, double radius) {
  require_same_dim(center.size(), static_cast<std::size_t>(dim_));
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  coords_.insert(coords_.end(), center.begin(), center.end());
  radii_.push_back(radius);
}

void BallSet::append(const BallSet& other) {
  require_same_dim(static_cast<std::size_t>(other.dim_), static_cast<std::size_t>(dim_));
  coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
  radii_.insert(radii_.end(), other.radii_.begin(), other.radii_.end());
}

BallSet BallSet::subset(std::span<const std::size_t> indices) const {
  BallSet out(dim_);
  out.reserve(indices.size());
  for (auto i : indices) out.add(center(i), radii_[i]);
  return out;
}

// ---- terminals ----

Terminal point_at(Point x) { return PointTerminal{std::move(x)}; }

Terminal sphere_around(Point center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  return SphereTerminal{std::move(center), radius};
}

int terminal_dim(const Terminal& t) {
  return std::visit(
      [](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, PointTerminal>) {
          return static_cast<int>(v.at.size());
        } else {
          return static_cast<int>(v.center.size());
        }
      },
      t);
}

// ---- distances ----

double distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size());
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

bool overlaps(const BallView& a, const BallView& b) {
  return distance(a.center, b.center) < a.radius + b.radius;
}

double gap(const BallView& a, const BallView& b) {
  return std::max(0.0, distance(a.center, b.center) - (a.radius + b.radius));
}

double gap(const BallView& b, const Terminal& t) {
  if (const auto* p = std::get_if<PointTerminal>(&t)) {
    return std::max(0.0, distance(p->at, b.center) - b.radius);
  }
  const auto& s = std::get<SphereTerminal>(t);
  return std::max(0.0, std::abs(distance(b.center, s.center) - s.radius) - b.radius);
}

double gap(const Terminal& t, const BallView& b) { return gap(b, t); }

double gap(const Terminal& a, const Terminal& b) {
  const auto* pa = std::get_if<PointTerminal>(&a);
  const auto* pb = std::get_if<PointTerminal>(&b);
  if (pa && pb) return distance(pa->at, pb->at);
  if (pa) {
    const auto& s = std::get<SphereTerminal>(b);
    return std::abs(distance(pa->at, s.center) - s.radius);
  }
  if (pb) {
    const auto& s = std::get<SphereTerminal>(a);
    return std::abs(distance(pb->at, s.center) - s.radius);
  }
  return sphere_sphere_gap(std::get<SphereTerminal>(a), std::get<SphereTerminal>(b));
}

// ---- closest points ----

ClosestPoints closest_points(const BallView& a, const BallView& b) {
  double d = 0.0;
  Point u = unit_from(a.center, b.center, d);
  if (d <= a.radius + b.radius) {
    Point p = along(a.center, u, std::min(a.radius, d));
    return {p, p};
  }
  return {along(a.center, u, a.radius), along(b.center, u, -b.radius)};
}

ClosestPoints closest_points(const Terminal& t, const BallView& b) {
  if (const auto* p = std::get_if<PointTerminal>(&t)) {
    double d = 0.0;
    Point u = unit_from(b.center, p->at, d);
    if (d <= b.radius) return {p->at, p->at};
    return {p->at, along(b.center, u, b.radius)};
  }
  const auto& s = std::get<SphereTerminal>(t);
  double d = 0.0;
  Point u = unit_from(s.center, b.center, d);
  Point on_sphere = along(s.center, u, s.radius);
  if (std::abs(d - s.radius) <= b.radius) return {on_sphere, on_sphere};
  double e = 0.0;
  Point v = unit_from(b.center, on_sphere, e);
  return {on_sphere, along(b.center, v, b.radius)};
}

ClosestPoints closest_points(const BallView& b, const Terminal& t) {
  auto cp = closest_points(t, b);
  return {cp.on_second, cp.on_first};
}

ClosestPoints closest_points(const Terminal& a, const Terminal& b) {
  const auto* pa = std::get_if<PointTerminal>(&a);
  const auto* pb = std::get_if<PointTerminal>(&b);
  if (pa && pb) return {pa->at, pb->at};
  if (pa || pb) {
    const auto& p = pa ? pa->at : pb->at;
    const auto& s = std::get<SphereTerminal>(pa ? b : a);
    double d = 0.0;
    Point u = unit_from(s.center, p, d);
    Point q = along(s.center, u, s.radius);
    if (pa) return {p, q};
    return {q, p};
  }
  const auto& s1 = std::get<SphereTerminal>(a);
  const auto& s2 = std::get<SphereTerminal>(b);
  double d = 0.0;
  Point u = unit_from(s1.center, s2.center, d);
  if (d >= s1.radius + s2.radius) return {along(s1.center, u, s1.radius), along(s2.center, u, -s2.radius)};
  if (d <= std::abs(s1.radius - s2.radius)) {
    if (s1.radius >= s2.radius) return {along(s1.center, u, s1.radius), along(s2.center, u, s2.radius)};
    return {along(s1.center, u, -s1.radius), along(s2.center, u, -s2.radius)};
  }
  double t = (d * d + s1.radius * s1.radius - s2.radius * s2.radius) / (2.0 * d);
  double h = std::sqrt(std::max(0.0, s1.radius * s1.radius - t * t));
  Point w = orthogonal_to(u);
  Point p = along(s1.center, u, t);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] += h * w[k];
  return {p, p};
}

// ---- paths ----

Polyline::Polyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw std::invalid_argument("polyline needs at least two vertices");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    require_same_dim(vertices_[i].size(), vertices_[0].size());
    if (vertices_[i] == vertices_[i - 1]) throw std::invalid_argument("polyline has repeated consecutive vertex");
  }
}

double Polyline::length() const {
  double s = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) s += distance(vertices_[i - 1], vertices_[i]);
  return s;
}

double covered_length(const BallSet& balls, std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size());
  require_same_dim(a.size(), static_cast<std::size_t>(balls.dim()));
  const std::size_t dim = a.size();
  Point v(dim);
  double vv = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    v[k] = b[k] - a[k];
    vv += v[k] * v[k];
  }
  double len = std::sqrt(vv);
  if (len == 0.0) return 0.0;

  std::vector<std::pair<double, double>> pieces;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    auto c = balls.center(i);
    double r = balls.radius(i);
    bool far = false;
    for (std::size_t k = 0; k < dim && !far; ++k) {
      double lo = std::min(a[k], b[k]), hi = std::max(a[k], b[k]);
      far = c[k] + r < lo || c[k] - r > hi;
    }
    if (far) continue;
    // |a + t v - c|^2 < r^2  <=>  vv t^2 + 2 (v.w) t + (w.w - r^2) < 0, w = a - c
    double bw = 0.0, ww = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      double w = a[k] - c[k];
      bw += v[k] * w;
      ww += w * w;
    }
    double cc = ww - r * r;
    double disc = bw * bw - vv * cc;
    if (disc <= 0.0) continue;
    double sq = std::sqrt(disc);
    double q = -(bw + std::copysign(sq, bw));
    double t1 = q / vv;
    double t2 = q != 0.0 ? cc / q : t1;
    if (t1 > t2) std::swap(t1, t2);
    t1 = std::max(t1, 0.0);
    t2 = std::min(t2, 1.0);
    if (t1 <= kSnap) t1 = 0.0;
    if (t2 >= 1.0 - kSnap) t2 = 1.0;
    if (t2 > t1) pieces.emplace_back(t1, t2);
  }
  if (pieces.empty()) return 0.0;
  std::sort(pieces.begin(), pieces.end());
  double covered = 0.0;
  double lo = pieces[0].first, hi = pieces[0].second;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].first <= hi + kSnap) {
      hi = std::max(hi, pieces[i].second);
    } else {
      covered += hi - lo;
      lo = pieces[i].first;
      hi = pieces[i].second;
    }
  }
  covered += hi - lo;
  if (covered >= 1.0) return len;
  return covered * len;
}

double covered_length(const BallSet& balls, const Polyline& path) {
  const auto& v = path.vertices();
  double s = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) s += covered_length(balls, v[i - 1], v[i]);
  return s;
}

double tau_of_segment(const BallSet& balls, std::span<const double> a, std::span<const double> b) {
  double len = distance(a, b);
  return std::max(0.0, len - covered_length(balls, a, b));
}

double tau_of_path(const BallSet& balls, const Polyline& path) {
  const auto& v = path.vertices();
  double s = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) s += tau_of_segment(balls, v[i - 1], v[i]);
  return s;
}

// ---- grid index ----

GridIndex::GridIndex(const BallSet& balls, double cell_size) : balls_(&balls), dim_(balls.dim()) {
  if (cell_size > 0.0) {
    cell_ = cell_size;
  } else if (!balls.empty()) {
    std::vector<double> r = balls.radii();
    auto mid = r.begin() + static_cast<std::ptrdiff_t>(r.size() / 2);
    std::nth_element(r.begin(), mid, r.end());
    cell_ = 2.0 * *mid;
  }
  std::vector<std::int64_t> lo_cell, hi_cell;
  std::vector<double> lo(dim_), hi(dim_);
  entries_.reserve(balls.size() * (dim_ == 2 ? 4 : 8));
  for (std::size_t i = 0; i < balls.size(); ++i) {
    auto c = balls.center(i);
    double r = balls.radius(i);
    for (int k = 0; k < dim_; ++k) {
      lo[k] = c[k] - r;
      hi[k] = c[k] + r;
    }
    std::size_t count = 0;
    bool ok = box_cells(lo, hi, lo_cell, hi_cell, count);
    if (!ok || count > max_cells_per_ball) {
      overflow_.push_back(static_cast<std::uint32_t>(i));
      continue;
    }
    std::vector<std::int64_t> cur = lo_cell;
    while (true) {
      entries_.emplace_back(key_of(cur), static_cast<std::uint32_t>(i));
      int k = 0;
      for (; k < dim_; ++k) {
        if (cur[k] < hi_cell[k]) {
          ++cur[k];
          break;
        }
        cur[k] = lo_cell[k];
      }
      if (k == dim_) break;
    }
  }
  std::sort(entries_.begin(), entries_.end());
}

std::uint64_t GridIndex::key_of(std::span<const std::int64_t> cell) const noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (auto c : cell) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

bool GridIndex::box_cells(std::span<const double> lo, std::span<const double> hi, std::vector<std::int64_t>& lo_cell,
                          std::vector<std::int64_t>& hi_cell, std::size_t& count) const {
  lo_cell.resize(dim_);
  hi_cell.resize(dim_);
  double total = 1.0;
  constexpr double kLimit = 4.0e18;
  for (int k = 0; k < dim_; ++k) {
    double a = std::floor(lo[k] / cell_), b = std::floor(hi[k] / cell_);
    if (!(std::abs(a) < kLimit) || !(std::abs(b) < kLimit)) return false;
    lo_cell[k] = static_cast<std::int64_t>(a);
    hi_cell[k] = static_cast<std::int64_t>(b);
    total *= (b - a + 1.0);
  }
  // Walking more cells than there are balls is slower than a scan.
  if (total > static_cast<double>(std::max<std::size_t>(balls_->size(), max_cells_per_ball))) return false;
  count = static_cast<std::size_t>(total);
  return true;
}

std::vector<std::size_t> GridIndex::query_box(std::span<const double> lo, std::span<const double> hi) const {
  std::vector<std::size_t> out;
  std::vector<std::int64_t> lo_cell, hi_cell;
  std::size_t count = 0;
  if (box_cells(lo, hi, lo_cell, hi_cell, count)) {
    visit_cells(lo_cell, hi_cell, [&](std::size_t j) { out.push_back(j); });
    out.insert(out.end(), overflow_.begin(), overflow_.end());
  } else {
    out.resize(balls_->size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = j;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> GridIndex::query_near(std::span<const double> center, double radius) const {
  std::vector<double> lo(dim_), hi(dim_);
  for (int k = 0; k < dim_; ++k) {
    lo[k] = center[k] - radius;
    hi[k] = center[k] + radius;
  }
  return query_box(lo, hi);
}

}  // namespace bfpp
