#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bfpp/geometry.hpp"
#include "bfpp/radius_law.hpp"

namespace bfpp {

/// Points with nonnegative weights (ball radii), anchored at an origin.
///
/// Index 0 in a path refers to the origin; indices 1..size() refer to
/// `points`. The origin's own weight never enters r(path).
struct WeightedPointSet {
  struct Entry {
    Point position;
    double weight;
  };

  Point origin;
  double origin_weight = 0.0;
  std::vector<Entry> points;

  std::size_t size() const noexcept { return points.size(); }
  const Point& position(std::size_t index) const { return index == 0 ? origin : points[index - 1].position; }
  double weight(std::size_t index) const { return index == 0 ? origin_weight : points[index - 1].weight; }
};

/// r(path) / l(path). The path must start at index 0, visit at least one other
/// point, and never repeat an index.
double path_ratio(const WeightedPointSet& set, std::span<const std::size_t> path);

/// Largest ratio over all origin-anchored paths of distinct points, by
/// exhaustive enumeration. Returns 0 for an empty set. Throws when the set has
/// more than `max_points` points or max_points > 10.
double greedy_sup_exact(const WeightedPointSet& set, std::size_t max_points = 10);

/// Lower bound on the greedy supremum: Dinkelbach iteration over the
/// parametric objective r(path) - t * l(path), each step maximized by a beam
/// search of width `beam`. Never below the best single-point ratio; equal to the
/// exact value when the beam holds every partial path.
double greedy_sup_heuristic(const WeightedPointSet& set, std::size_t beam);

/// Integral over (0, inf) of (lambda * nu_rho((r, inf)))^(1/d) dr, where
/// nu_rho is nu restricted to [rho, inf). Throws std::domain_error when the
/// integral diverges.
double greedy_tail_integral(const RadiusLaw& law, double lambda, double rho, int d);

}  // namespace bfpp
