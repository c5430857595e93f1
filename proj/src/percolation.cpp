#include "bfpp/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bfpp {

namespace {

// Union-find whose root is always the smallest member index.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns the surviving root.
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
};

ComponentLabeling make_labeling(DisjointSets& sets, std::size_t n) {
  ComponentLabeling out;
  out.label.resize(n);
  out.component_index.resize(n);
  std::vector<std::size_t> slot_of_root(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = sets.find(i);
    out.label[i] = root;
    if (slot_of_root[root] == n) {
      slot_of_root[root] = out.components.size();
      out.components.emplace_back();
    }
    out.component_index[i] = slot_of_root[root];
    out.components[slot_of_root[root]].push_back(i);
  }
  return out;
}

void require_complete(const BallSample& sample, double radius) {
  if (sample.complete_for_radius < radius * (1.0 - 1e-12)) {
    throw std::invalid_argument("incomplete sample: need completeness radius " + std::to_string(radius));
  }
}

bool touches_sphere(const BallView& b, std::span<const double> origin, double radius) {
  return std::abs(distance(b.center, origin) - radius) - b.radius <= kSphereTouchTolerance;
}

// Does some component of `balls` touch both S(origin, inner) and S(origin, outer)?
bool spheres_connected(const BallSet& balls, std::span<const double> origin, double inner, double outer) {
  if (balls.empty()) return false;
  auto labels = connected_components(balls);
  std::vector<char> in(labels.count(), 0), out(labels.count(), 0);
  for (std::size_t i = 0; i < balls.size(); ++i) {
    auto c = labels.component_index[i];
    if (touches_sphere(balls[i], origin, inner)) in[c] = 1;
    if (touches_sphere(balls[i], origin, outer)) out[c] = 1;
    if (in[c] && out[c]) return true;
  }
  return false;
}

}  // namespace

ComponentLabeling connected_components(const BallSet& balls) {
  const std::size_t n = balls.size();
  DisjointSets sets(n);
  if (n > 1) {
    GridIndex grid(balls);
    for (std::size_t i = 0; i < n; ++i) {
      auto ci = balls.center(i);
      double ri = balls.radius(i);
      grid.for_each_candidate(ci, ri, [&](std::size_t j) {
        if (j > i && overlaps(balls[i], balls[j])) sets.unite(i, j);
      });
    }
  }
  return make_labeling(sets, n);
}

ComponentLabeling connected_components_reference(const BallSet& balls) {
  const std::size_t n = balls.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (overlaps(balls[i], balls[j])) sets.unite(i, j);
    }
  }
  return make_labeling(sets, n);
}

std::vector<bool> crossing_events(const BallSample& sample, double r, std::span<const double> multipliers) {
  if (!(r > 0.0)) throw std::invalid_argument("crossing_event needs r > 0");
  if (multipliers.empty()) return {};
  for (double m : multipliers) {
    if (!(m >= 2.0)) throw std::invalid_argument("crossing multiplier must be >= 2");
  }
  const double m_max = *std::max_element(multipliers.begin(), multipliers.end());
  require_complete(sample, m_max * r);

  const auto& origin = sample.region_center;
  // Balls meeting B(0, m_max r), in order of their reach |c| - rho.
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < sample.balls.size(); ++i) {
    double reach = distance(sample.balls.center(i), origin) - sample.balls.radius(i);
    if (reach < m_max * r) order.emplace_back(reach, i);
  }
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> idx(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) idx[i] = order[i].second;
  BallSet balls = sample.balls.subset(idx);

  std::vector<std::size_t> by_multiplier(multipliers.size());
  std::iota(by_multiplier.begin(), by_multiplier.end(), std::size_t{0});
  std::sort(by_multiplier.begin(), by_multiplier.end(),
            [&](std::size_t a, std::size_t b) { return multipliers[a] < multipliers[b]; });

  const std::size_t n = balls.size();
  DisjointSets sets(n);
  std::vector<char> inner(n, 0), outer(n, 0);
  bool crossed = false;
  std::vector<bool> result(multipliers.size(), false);
  GridIndex grid(balls);

  std::size_t added = 0;
  for (auto which : by_multiplier) {
    const double limit = multipliers[which] * r;
    for (; added < n && order[added].first < limit; ++added) {
      const std::size_t i = added;
      std::size_t root = i;
      inner[i] = touches_sphere(balls[i], origin, r);
      outer[i] = touches_sphere(balls[i], origin, 2.0 * r);
      grid.for_each_candidate(balls.center(i), balls.radius(i), [&](std::size_t j) {
        if (j >= i || !overlaps(balls[i], balls[j])) return;
        std::size_t a = sets.find(j), b = sets.find(root);
        if (a == b) return;
        std::size_t merged = sets.unite(a, b);
        inner[merged] = inner[a] || inner[b];
        outer[merged] = outer[a] || outer[b];
        root = merged;
      });
      root = sets.find(i);
      if (inner[root] && outer[root]) crossed = true;
    }
    result[which] = crossed;
  }
  return result;
}

bool crossing_event(const BallSample& sample, double r, double multiplier) {
  const double m[] = {multiplier};
  return crossing_events(sample, r, m).front();
}

bool pi_event(const BallSample& sample, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("pi_event needs alpha > 0");
  require_complete(sample, 10.0 * alpha);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < sample.balls.size(); ++i) {
    if (distance(sample.balls.center(i), sample.region_center) < 10.0 * alpha) idx.push_back(i);
  }
  return spheres_connected(sample.balls.subset(idx), sample.region_center, alpha, 8.0 * alpha);
}

bool h_event(const BallSample& sample, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("h_event needs alpha > 0");
  require_complete(sample, 9.0 * alpha);
  for (std::size_t i = 0; i < sample.balls.size(); ++i) {
    double c = distance(sample.balls.center(i), sample.region_center);
    if (c >= 10.0 * alpha && c - sample.balls.radius(i) < 9.0 * alpha) return true;
  }
  return false;
}

}  // namespace bfpp
