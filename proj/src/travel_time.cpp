#include "bfpp/travel_time.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace bfpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t npos = CostGraph::npos;

struct Bounds {
  Point center;
  double radius = 0.0;
};

Bounds bounding_sphere(const BallSet& balls, const std::vector<std::size_t>& members) {
  const int d = balls.dim();
  Bounds b{Point(d, 0.0), 0.0};
  for (auto i : members) {
    auto c = balls.center(i);
    for (int k = 0; k < d; ++k) b.center[k] += c[k];
  }
  for (auto& x : b.center) x /= static_cast<double>(members.size());
  for (auto i : members) b.radius = std::max(b.radius, distance(balls.center(i), b.center) + balls.radius(i));
  return b;
}

bool same_terminal(const Terminal& a, const Terminal& b) {
  const auto* pa = std::get_if<PointTerminal>(&a);
  const auto* pb = std::get_if<PointTerminal>(&b);
  if (pa && pb) return pa->at == pb->at;
  if (pa || pb) return false;
  const auto& sa = std::get<SphereTerminal>(a);
  const auto& sb = std::get<SphereTerminal>(b);
  return sa.center == sb.center && sa.radius == sb.radius;
}

// Per-component minimum gap to a terminal, with the realizing ball.
void terminal_gaps(const BallSet& balls, const ComponentLabeling& labels, const Terminal& t, std::vector<double>& gaps,
                   std::vector<std::size_t>& arg) {
  gaps.assign(labels.count(), kInf);
  arg.assign(labels.count(), npos);
  for (std::size_t i = 0; i < balls.size(); ++i) {
    auto c = labels.component_index[i];
    double g = gap(balls[i], t);
    if (g < gaps[c]) {
      gaps[c] = g;
      arg[c] = i;
    }
  }
}

// Ball centers from `from` to `to` along the overlap graph of one component.
std::vector<std::size_t> connector_chain(const BallSet& balls, const std::vector<std::size_t>& members, std::size_t from,
                                         std::size_t to) {
  if (from == to) return {from};
  BallSet local = balls.subset(members);
  GridIndex grid(local);
  auto pos = [&](std::size_t ball) {
    return static_cast<std::size_t>(std::find(members.begin(), members.end(), ball) - members.begin());
  };
  const std::size_t src = pos(from), dst = pos(to);
  std::vector<std::size_t> parent(members.size(), npos);
  parent[src] = src;
  std::deque<std::size_t> queue{src};
  while (!queue.empty() && parent[dst] == npos) {
    std::size_t u = queue.front();
    queue.pop_front();
    grid.for_each_candidate(local.center(u), local.radius(u), [&](std::size_t v) {
      if (parent[v] == npos && overlaps(local[u], local[v])) {
        parent[v] = u;
        queue.push_back(v);
      }
    });
  }
  if (parent[dst] == npos) throw std::logic_error("component is not connected");
  std::vector<std::size_t> chain;
  for (std::size_t v = dst;; v = parent[v]) {
    chain.push_back(members[v]);
    if (v == src) break;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

void push_vertex(std::vector<WitnessVertex>& out, Point p, WitnessRole role, std::size_t component) {
  if (!out.empty() && out.back().point == p) {
    // Terminal roles win over component roles; connectors yield to anything.
    if (role == WitnessRole::end || out.back().role == WitnessRole::connector) {
      out.back().role = role;
      out.back().component = component;
    }
    return;
  }
  out.push_back({std::move(p), role, component});
}

// Largest arc-length spread of the path inside any ball, relative to its radius.
double spread_ratio(const BallSet& balls, const std::vector<Point>& pts) {
  if (pts.size() < 2) return 0.0;
  const int d = balls.dim();
  std::vector<double> first(balls.size(), kInf), last(balls.size(), -kInf);
  double offset = 0.0;
  for (std::size_t s = 1; s < pts.size(); ++s) {
    const auto& a = pts[s - 1];
    const auto& b = pts[s];
    double len = distance(a, b);
    if (len == 0.0) continue;
    for (std::size_t i = 0; i < balls.size(); ++i) {
      auto c = balls.center(i);
      double r = balls.radius(i);
      double bw = 0.0, ww = 0.0;
      for (int k = 0; k < d; ++k) {
        double v = (b[k] - a[k]) / len;
        double w = a[k] - c[k];
        bw += v * w;
        ww += w * w;
      }
      double disc = bw * bw - (ww - r * r);
      if (disc <= 0.0) continue;
      double sq = std::sqrt(disc);
      double t1 = std::max(0.0, -bw - sq), t2 = std::min(len, -bw + sq);
      if (t2 <= t1) continue;
      first[i] = std::min(first[i], offset + t1);
      last[i] = std::max(last[i], offset + t2);
    }
    offset += len;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (last[i] > first[i]) worst = std::max(worst, (last[i] - first[i]) / balls.radius(i));
  }
  return worst;
}

bool inside_closed_ball(const Terminal& t, const SphereTerminal& s) {
  if (const auto* p = std::get_if<PointTerminal>(&t)) return distance(p->at, s.center) <= s.radius;
  const auto& o = std::get<SphereTerminal>(t);
  return distance(o.center, s.center) + o.radius <= s.radius;
}

double reach_from(const Terminal& t, const Point& origin) {
  if (const auto* p = std::get_if<PointTerminal>(&t)) return distance(p->at, origin);
  const auto& s = std::get<SphereTerminal>(t);
  return distance(s.center, origin) + s.radius;
}

}  // namespace

std::vector<Point> TravelTimeResult::witness_points() const {
  std::vector<Point> out;
  out.reserve(witness.size());
  for (const auto& v : witness) out.push_back(v.point);
  return out;
}

CostGraph build_cost_graph(const BallSet& balls, const Terminal& a, const Terminal& b) {
  CostGraph g;
  g.labeling = connected_components(balls);
  const std::size_t k = g.labeling.count();
  const std::size_t n = k + 2;
  g.vertex_count = n;
  g.weight.assign(n * n, kInf);
  g.argmin.assign(n * n, {npos, npos});
  for (std::size_t v = 0; v < n; ++v) g.weight[v * n + v] = 0.0;
  auto set = [&](std::size_t u, std::size_t v, double w, std::size_t bu, std::size_t bv) {
    if (w < g.weight[u * n + v]) {
      g.weight[u * n + v] = w;
      g.weight[v * n + u] = w;
      g.argmin[u * n + v] = {bu, bv};
      g.argmin[v * n + u] = {bv, bu};
    }
  };
  for (std::size_t i = 0; i < balls.size(); ++i) {
    auto ci = g.labeling.component_index[i];
    set(ci, k, gap(balls[i], a), i, npos);
    set(ci, k + 1, gap(balls[i], b), i, npos);
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      auto cj = g.labeling.component_index[j];
      if (ci != cj) set(ci, cj, gap(balls[i], balls[j]), i, j);
    }
  }
  set(k, k + 1, gap(a, b), npos, npos);
  return g;
}

double shortest_path_value(const CostGraph& graph) {
  const std::size_t n = graph.vertex_count;
  std::vector<double> dist(n, kInf);
  std::vector<char> done(n, 0);
  dist[graph.start()] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = npos;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && (u == npos || dist[v] < dist[u])) u = v;
    }
    if (u == graph.end()) break;
    done[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v]) dist[v] = std::min(dist[v], dist[u] + graph.w(u, v));
    }
  }
  return dist[graph.end()];
}

TravelTimeResult travel_time(const BallSet& balls, const Terminal& a, const Terminal& b,
                             const TravelTimeOptions& options) {
  if (terminal_dim(a) != balls.dim() || terminal_dim(b) != balls.dim()) {
    throw std::invalid_argument("terminal dimension mismatch");
  }
  TravelTimeResult result;
  if (same_terminal(a, b)) {
    if (options.witness) {
      auto p = closest_points(a, b);
      result.witness.push_back({p.on_first, WitnessRole::start, npos});
    }
    return result;
  }

  const auto labels = connected_components(balls);
  const std::size_t k = labels.count();
  result.component_count = k;
  const std::size_t start = k, end = k + 1;

  std::vector<Bounds> bounds(k);
  for (std::size_t c = 0; c < k; ++c) bounds[c] = bounding_sphere(balls, labels.components[c]);
  std::vector<double> gap_a, gap_b;
  std::vector<std::size_t> arg_a, arg_b;
  terminal_gaps(balls, labels, a, gap_a, arg_a);
  terminal_gaps(balls, labels, b, gap_b, arg_b);

  // Dense label-setting search; settling the start relaxes every vertex, so
  // each tentative distance is finite and bounds the pair search below.
  std::vector<double> dist(k + 2, kInf);
  std::vector<std::size_t> prev(k + 2, npos);
  std::vector<std::pair<std::size_t, std::size_t>> via(k + 2, {npos, npos});
  std::vector<char> done(k + 2, 0);
  done[start] = 1;
  dist[start] = 0.0;
  dist[end] = gap(a, b);
  prev[end] = start;
  for (std::size_t c = 0; c < k; ++c) {
    dist[c] = gap_a[c];
    prev[c] = start;
    via[c] = {npos, arg_a[c]};
  }

  while (true) {
    std::size_t u = npos;
    for (std::size_t v = 0; v < k + 2; ++v) {
      if (!done[v] && (u == npos || dist[v] < dist[u])) u = v;
    }
    if (u == end || u == npos) break;
    done[u] = 1;
    const double du = dist[u];
    if (du + gap_b[u] < dist[end]) {
      dist[end] = du + gap_b[u];
      prev[end] = u;
      via[end] = {arg_b[u], npos};
    }
    const auto& mu = labels.components[u];
    for (std::size_t v = 0; v < k; ++v) {
      if (done[v]) continue;
      double budget = dist[v] - du;
      if (budget <= 0.0) continue;
      double lower = distance(bounds[u].center, bounds[v].center) - bounds[u].radius - bounds[v].radius;
      if (lower >= budget) continue;
      double best = budget;
      std::pair<std::size_t, std::size_t> pair{npos, npos};
      const auto& mv = labels.components[v];
      for (auto i : mu) {
        double li = distance(balls.center(i), bounds[v].center) - balls.radius(i) - bounds[v].radius;
        if (li >= best) continue;
        for (auto j : mv) {
          double g = gap(balls[i], balls[j]);
          if (g < best) {
            best = g;
            pair = {i, j};
          }
        }
      }
      if (pair.first != npos) {
        dist[v] = du + best;
        prev[v] = u;
        via[v] = pair;
      }
    }
  }
  result.value = dist[end];

  std::vector<std::size_t> order;
  for (std::size_t v = end; v != start; v = prev[v]) order.push_back(v);
  order.push_back(start);
  std::reverse(order.begin(), order.end());
  for (std::size_t i = 1; i + 1 < order.size(); ++i) result.components_visited.push_back(labels.components[order[i]][0]);

  if (!options.witness) return result;

  // Gap segment y_i -> x_{i+1} for each hop, then connectors inside components.
  auto& w = result.witness;
  std::size_t entry_ball = npos;
  for (std::size_t s = 1; s < order.size(); ++s) {
    const std::size_t u = order[s - 1], v = order[s];
    const auto [from_ball, to_ball] = via[v];
    ClosestPoints cp;
    if (u == start && v == end) {
      cp = closest_points(a, b);
    } else if (u == start) {
      cp = closest_points(a, balls[to_ball]);
    } else if (v == end) {
      cp = closest_points(balls[from_ball], b);
    } else {
      cp = closest_points(balls[from_ball], balls[to_ball]);
    }
    if (u == start) {
      push_vertex(w, cp.on_first, WitnessRole::start, npos);
    } else {
      const auto label = labels.components[u][0];
      auto chain = connector_chain(balls, labels.components[u], entry_ball, from_ball);
      if (chain.size() > 1) {
        for (auto ball : chain) {
          auto c = balls.center(ball);
          push_vertex(w, Point(c.begin(), c.end()), WitnessRole::connector, label);
        }
      }
      push_vertex(w, cp.on_first, WitnessRole::exit, label);
    }
    if (v == end) {
      push_vertex(w, cp.on_second, WitnessRole::end, npos);
    } else {
      push_vertex(w, cp.on_second, WitnessRole::entry, labels.components[v][0]);
      entry_ball = to_ball;
    }
  }
  auto pts = result.witness_points();
  if (pts.size() >= 2) {
    Polyline path(pts);
    result.tau_check = tau_of_path(balls, path);
    result.max_ball_spread_ratio = spread_ratio(balls, pts);
  }
  return result;
}

TravelTimeResult travel_time(const BallSample& sample, const Terminal& a, const Terminal& b,
                             const TravelTimeOptions& options) {
  const double slack = 1e-12 * (1.0 + sample.complete_for_radius);
  if (reach_from(a, sample.region_center) > sample.complete_for_radius + slack ||
      reach_from(b, sample.region_center) > sample.complete_for_radius + slack) {
    throw std::invalid_argument("terminal outside the sample's completeness region");
  }
  for (const auto* outer : {&b, &a}) {
    const auto* s = std::get_if<SphereTerminal>(outer);
    if (s && inside_closed_ball(outer == &b ? a : b, *s)) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < sample.balls.size(); ++i) {
        if (distance(sample.balls.center(i), s->center) < s->radius + sample.balls.radius(i)) idx.push_back(i);
      }
      if (idx.size() == sample.balls.size()) break;
      return travel_time(sample.balls.subset(idx), a, b, options);
    }
  }
  return travel_time(sample.balls, a, b, options);
}

TravelTimeResult travel_time_radial(const BallSample& sample, double r, const TravelTimeOptions& options) {
  return travel_time(sample, point_at(sample.region_center), sphere_around(sample.region_center, r), options);
}

TravelTimeResult annulus_time(const BallSample& sample, double r, const TravelTimeOptions& options) {
  return travel_time(sample, sphere_around(sample.region_center, r), sphere_around(sample.region_center, 2.0 * r),
                     options);
}

}  // namespace bfpp
