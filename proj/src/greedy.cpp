#include "bfpp/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace bfpp {

namespace {

constexpr double kDinkelbachTolerance = 1e-9;

struct BeamState {
  std::vector<std::uint32_t> path;  // point indices 1..m, origin implicit
  std::vector<char> used;
  double weight = 0.0;
  double length = 0.0;
};

void collect_breakpoints(const RadiusLaw& law, std::vector<double>& out) {
  switch (law.kind()) {
    case RadiusLaw::Kind::dirac:
      out.push_back(law.dirac_value());
      break;
    case RadiusLaw::Kind::uniform:
      out.push_back(law.lower());
      out.push_back(law.upper());
      break;
    case RadiusLaw::Kind::pareto:
      out.push_back(law.scale());
      break;
    case RadiusLaw::Kind::mixture:
      for (const auto& c : law.components()) collect_breakpoints(*c.law, out);
      break;
  }
}

}  // namespace

double path_ratio(const WeightedPointSet& set, std::span<const std::size_t> path) {
  if (path.size() < 2) throw std::invalid_argument("path needs at least one point after the origin");
  if (path[0] != 0) throw std::invalid_argument("path must start at the origin");
  std::vector<char> seen(set.size() + 1, 0);
  double weight = 0.0, length = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] > set.size()) throw std::out_of_range("path index out of range");
    if (seen[path[i]]) throw std::invalid_argument("path repeats an index");
    seen[path[i]] = 1;
    if (i > 0) {
      weight += set.weight(path[i]);
      length += distance(set.position(path[i - 1]), set.position(path[i]));
    }
  }
  return weight / length;
}

double greedy_sup_exact(const WeightedPointSet& set, std::size_t max_points) {
  if (max_points > 10) throw std::invalid_argument("exact greedy supremum is capped at 10 points");
  const std::size_t m = set.size();
  if (m > max_points) throw std::invalid_argument("too many points for exact greedy supremum");
  if (m == 0) return 0.0;

  // dist[i][j] over indices 0..m
  std::vector<double> dist((m + 1) * (m + 1));
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= m; ++j) dist[i * (m + 1) + j] = distance(set.position(i), set.position(j));
  }
  double best = 0.0;
  std::vector<char> used(m + 1, 0);
  auto dfs = [&](auto&& self, std::size_t at, double weight, double length) -> void {
    for (std::size_t next = 1; next <= m; ++next) {
      if (used[next]) continue;
      double w = weight + set.weight(next);
      double l = length + dist[at * (m + 1) + next];
      best = std::max(best, w / l);
      used[next] = 1;
      self(self, next, w, l);
      used[next] = 0;
    }
  };
  dfs(dfs, 0, 0.0, 0.0);
  return best;
}

double greedy_sup_heuristic(const WeightedPointSet& set, std::size_t beam) {
  if (beam < 1) throw std::invalid_argument("beam width must be at least 1");
  const std::size_t m = set.size();
  if (m == 0) return 0.0;

  double best = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    best = std::max(best, set.weight(i) / distance(set.origin, set.position(i)));
  }

  double t = best;
  for (int iteration = 0; iteration < 100; ++iteration) {
    auto score = [t](const BeamState& s) { return s.weight - t * s.length; };
    auto better = [&](const BeamState& x, const BeamState& y) {
      double sx = score(x), sy = score(y);
      if (sx != sy) return sx > sy;
      return x.path < y.path;
    };

    std::vector<BeamState> frontier(1);
    frontier[0].used.assign(m + 1, 0);
    double best_score = -std::numeric_limits<double>::infinity();
    double best_score_ratio = 0.0;
    for (std::size_t depth = 0; depth < m && !frontier.empty(); ++depth) {
      std::vector<BeamState> children;
      for (const auto& s : frontier) {
        std::size_t at = s.path.empty() ? 0 : s.path.back();
        for (std::size_t next = 1; next <= m; ++next) {
          if (s.used[next]) continue;
          BeamState c = s;
          c.path.push_back(static_cast<std::uint32_t>(next));
          c.used[next] = 1;
          c.weight += set.weight(next);
          c.length += distance(set.position(at), set.position(next));
          double ratio = c.weight / c.length;
          best = std::max(best, ratio);
          double sc = score(c);
          if (sc > best_score) {
            best_score = sc;
            best_score_ratio = ratio;
          }
          children.push_back(std::move(c));
        }
      }
      if (children.size() > beam) {
        std::nth_element(children.begin(), children.begin() + static_cast<std::ptrdiff_t>(beam), children.end(), better);
        children.resize(beam);
      }
      std::sort(children.begin(), children.end(), better);
      frontier = std::move(children);
    }
    if (best_score <= kDinkelbachTolerance || best_score_ratio <= t) break;
    t = best_score_ratio;
  }
  return best;
}

double greedy_tail_integral(const RadiusLaw& law, double lambda, double rho, int d) {
  if (!(lambda > 0.0) || !(rho > 0.0)) throw std::invalid_argument("greedy_tail_integral needs lambda > 0, rho > 0");
  if (!check_greedy_condition(law, d)) throw std::domain_error("greedy tail integral diverges for this law");
  const RadiusLaw truncated = law.truncated_above(rho);
  if (truncated.total_mass() == 0.0) return 0.0;

  auto integrand = [&](double r) { return std::pow(lambda * truncated.survival(r), 1.0 / d); };

  std::vector<double> cuts{0.0, rho};
  collect_breakpoints(truncated, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += gauss_kronrod<double, 61>::integrate(integrand, cuts[i - 1], cuts[i], 15, 1e-13);
  }
  const double last = cuts.back();
  if (!std::isfinite(truncated.support_max())) {
    // r = last * e^s turns the power-law tail into an exponential one.
    boost::math::quadrature::exp_sinh<double> tail;
    auto g = [&](double s) {
      double x = last * std::exp(s);
      return std::isfinite(x) ? integrand(x) * x : 0.0;
    };
    total += tail.integrate(g, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
  }
  return total;
}

}  // namespace bfpp
