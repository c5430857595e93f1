#pragma once

#include <cstddef>
#include <vector>

#include "bfpp/geometry.hpp"
#include "bfpp/percolation.hpp"
#include "bfpp/sampler.hpp"

namespace bfpp {

/// Complete graph on the components of the ball union plus two terminals.
///
/// Vertices 0..k-1 are components (ordered by canonical label), k is the
/// start terminal and k+1 the end terminal. `weight` is the row-major
/// (k+2)x(k+2) matrix of set gaps; `argmin` holds the realizing ball pair
/// (npos for a terminal side).
struct CostGraph {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ComponentLabeling labeling;
  std::size_t vertex_count = 0;
  std::vector<double> weight;
  std::vector<std::pair<std::size_t, std::size_t>> argmin;

  double w(std::size_t a, std::size_t b) const { return weight[a * vertex_count + b]; }
  std::size_t start() const noexcept { return vertex_count - 2; }
  std::size_t end() const noexcept { return vertex_count - 1; }
};

/// Full O(n^2) construction. Intended for inspection and small instances.
CostGraph build_cost_graph(const BallSet& balls, const Terminal& a, const Terminal& b);

/// Role of a witness vertex, following the entry/exit construction.
enum class WitnessRole {
  start,       // on the start terminal
  exit,        // y_i: leaves a component
  entry,       // x_{i+1}: enters a component
  connector,   // ball center inside a component
  end,         // on the end terminal
};

struct WitnessVertex {
  Point point;
  WitnessRole role;
  std::size_t component = CostGraph::npos;  // canonical label, npos on terminals
};

struct TravelTimeResult {
  double value = 0.0;
  std::size_t component_count = 0;
  /// Canonical labels of the visited components, in order.
  std::vector<std::size_t> components_visited;
  std::vector<WitnessVertex> witness;
  /// tau of the witness polyline, computed independently of `value`.
  double tau_check = 0.0;
  /// Largest (arc-length spread of the witness inside a ball) / (ball radius).
  double max_ball_spread_ratio = 0.0;

  std::vector<Point> witness_points() const;
};

struct TravelTimeOptions {
  bool witness = true;
};

/// Travel time between two terminals through the union of `balls`.
/// Uses all given balls; exact when every geodesic stays among them.
TravelTimeResult travel_time(const BallSet& balls, const Terminal& a, const Terminal& b,
                             const TravelTimeOptions& options = {});

/// Travel time on a hitting sample. Both terminals must lie in the closed
/// completeness ball. When one terminal is a sphere enclosing the other, only
/// balls meeting that sphere's closed ball are used (geodesics stay inside).
TravelTimeResult travel_time(const BallSample& sample, const Terminal& a, const Terminal& b,
                             const TravelTimeOptions& options = {});

/// T(0, S(r)) with both centered at the sample's region center.
TravelTimeResult travel_time_radial(const BallSample& sample, double r, const TravelTimeOptions& options = {});

/// T(S(r), S(2r)) centered at the sample's region center.
TravelTimeResult annulus_time(const BallSample& sample, double r, const TravelTimeOptions& options = {});

/// Shortest-path value over an explicit CostGraph (dense label-setting search).
double shortest_path_value(const CostGraph& graph);

}  // namespace bfpp
