#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bfpp/geometry.hpp"
#include "bfpp/sampler.hpp"

namespace bfpp {

/// Connected components of a union of open balls.
///
/// Labels are canonical: the label of a ball is the smallest ball index in its
/// component, so the labeling does not depend on traversal order.
/// `components` lists the member indices of each component, ordered by label.
struct ComponentLabeling {
  std::vector<std::size_t> label;
  std::vector<std::size_t> component_index;  // ball -> position in `components`
  std::vector<std::vector<std::size_t>> components;

  std::size_t count() const noexcept { return components.size(); }
};

/// Union-find over strict overlaps, accelerated with a GridIndex.
ComponentLabeling connected_components(const BallSet& balls);

/// O(n^2) pairwise reference.
ComponentLabeling connected_components_reference(const BallSet& balls);

/// Tolerance for a component touching a deterministic sphere.
inline constexpr double kSphereTouchTolerance = 1e-12;

/// Crossing S(r) <-> S(2r) inside the union of the balls meeting
/// B(0, multiplier * r). Requires complete_for_radius >= multiplier * r and
/// multiplier >= 2.
bool crossing_event(const BallSample& sample, double r, double multiplier = 3.0);

/// crossing_event for several multipliers at once (one incremental union-find).
/// Results are in the order of `multipliers`.
std::vector<bool> crossing_events(const BallSample& sample, double r, std::span<const double> multipliers);

/// Crossing S(alpha) <-> S(8 alpha) using only balls centered in B(0, 10 alpha).
bool pi_event(const BallSample& sample, double alpha);

/// Some ball with center outside B(0, 10 alpha) touches B(0, 9 alpha).
bool h_event(const BallSample& sample, double alpha);

}  // namespace bfpp
