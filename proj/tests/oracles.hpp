#pragma once

// Independent reference computations for tests. Nothing here calls the
// library code it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bfpp/geometry.hpp"
#include "bfpp/greedy.hpp"

namespace oracle {

using bfpp::Ball;
using bfpp::Point;

inline double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// BFS over the strict-overlap graph; labels are component ids in order of
// first appearance.
inline std::vector<int> components(const std::vector<Ball>& balls) {
  std::vector<int> label(balls.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < balls.size(); ++s) {
    if (label[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      auto i = q.front();
      q.pop();
      for (std::size_t j = 0; j < balls.size(); ++j) {
        if (label[j] < 0 && dist(balls[i].center, balls[j].center) < balls[i].radius + balls[j].radius) {
          label[j] = next;
          q.push(j);
        }
      }
    }
    ++next;
  }
  return label;
}

// Terminal for the brute-force oracle: a point, or a sphere when radius > 0.
struct Term {
  Point c;
  double radius = 0.0;
};

inline double gap_ball_term(const Ball& b, const Term& t) {
  double d = dist(b.center, t.c);
  if (t.radius == 0.0) return std::max(0.0, d - b.radius);
  return std::max(0.0, std::abs(d - t.radius) - b.radius);
}

inline double gap_term_term(const Term& a, const Term& b) {
  double d = dist(a.c, b.c);
  if (a.radius == 0.0 && b.radius == 0.0) return d;
  if (a.radius == 0.0) return std::abs(d - b.radius);
  if (b.radius == 0.0) return std::abs(d - a.radius);
  // sphere-sphere
  double lo = std::abs(a.radius - b.radius), hi = a.radius + b.radius;
  if (d > hi) return d - hi;
  if (d < lo) return lo - d;
  return 0.0;
}

// Minimum over every sequence of distinct components C_1..C_k (k >= 0) of
// gap(A, C_1) + sum gap(C_i, C_{i+1}) + gap(C_k, B).
inline double travel_time_by_orders(const std::vector<Ball>& balls, const Term& a, const Term& b) {
  auto label = components(balls);
  int k = balls.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> ga(k, inf), gb(k, inf), gg(k * k, inf);
  for (std::size_t i = 0; i < balls.size(); ++i) {
    ga[label[i]] = std::min(ga[label[i]], gap_ball_term(balls[i], a));
    gb[label[i]] = std::min(gb[label[i]], gap_ball_term(balls[i], b));
    for (std::size_t j = 0; j < balls.size(); ++j) {
      double g = std::max(0.0, dist(balls[i].center, balls[j].center) - balls[i].radius - balls[j].radius);
      auto& slot = gg[label[i] * k + label[j]];
      slot = std::min(slot, g);
    }
  }
  double best = gap_term_term(a, b);
  std::vector<char> used(k, 0);
  std::function<void(int, double)> go = [&](int at, double cost) {
    best = std::min(best, cost + gb[at]);
    for (int n = 0; n < k; ++n) {
      if (used[n]) continue;
      used[n] = 1;
      go(n, cost + gg[at * k + n]);
      used[n] = 0;
    }
  };
  for (int s = 0; s < k; ++s) {
    used[s] = 1;
    go(s, ga[s]);
    used[s] = 0;
  }
  return best;
}

// Length of a segment outside the union, by midpoint rule on n cells.
inline double tau_by_sampling(const std::vector<Ball>& balls, const Point& a, const Point& b, int n) {
  double len = dist(a, b), outside = 0;
  for (int i = 0; i < n; ++i) {
    double t = (i + 0.5) / n;
    Point p(a.size());
    for (std::size_t c = 0; c < a.size(); ++c) p[c] = a[c] + t * (b[c] - a[c]);
    bool in = false;
    for (const auto& ball : balls) in = in || dist(p, ball.center) < ball.radius;
    if (!in) outside += 1.0;
  }
  return len * outside / n;
}

// Radius law given by its density pieces (or atoms), for quadrature.
struct LawSpec {
  struct Part {
    enum Kind { atom, uniform, pareto } kind;
    double weight, p0, p1;
  };
  std::vector<Part> parts;

  // Integral of f against the law over [from, inf).
  double integrate(const std::function<double(double)>& f, double from = 0.0) const {
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    for (const auto& p : parts) {
      switch (p.kind) {
        case Part::atom:
          if (p.p0 >= from) total += p.weight * f(p.p0);
          break;
        case Part::uniform: {
          double lo = std::max(p.p0, from);
          if (lo < p.p1) {
            auto g = [&](double x) { return f(x) / (p.p1 - p.p0); };
            total += p.weight * gauss_kronrod<double, 61>::integrate(g, lo, p.p1, 20, 1e-14);
          }
          break;
        }
        case Part::pareto: {
          double a = p.p0, s = p.p1, lo = std::max(s, from);
          // density a s^a x^(-a-1); substitute x = lo e^u
          auto g = [&](double u) {
            double x = lo * std::exp(u);
            if (!std::isfinite(x)) return 0.0;
            double v = f(x) * a * std::pow(s / x, a);
            return std::isfinite(v) ? v : 0.0;
          };
          boost::math::quadrature::exp_sinh<double> integrator;
          total += p.weight * integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
          break;
        }
      }
    }
    return total;
  }
};

// Naive sup over all ordered non-empty subsets via std::next_permutation.
inline double greedy_sup_by_permutations(const bfpp::WeightedPointSet& set) {
  const std::size_t m = set.size();
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) idx.push_back(i + 1);
    }
    do {
      double w = 0.0, l = 0.0;
      Point prev = set.origin;
      for (auto i : idx) {
        w += set.points[i - 1].weight;
        l += dist(prev, set.points[i - 1].position);
        prev = set.points[i - 1].position;
      }
      best = std::max(best, w / l);
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return best;
}

// CDF of the law proportional to (rho + r)^2 Pareto(shape, 1)(d rho), d = 2.
inline double tilted_pareto_cdf_d2(double shape, double r, double x) {
  if (x <= 1.0) return 0.0;
  const double a = shape;
  auto piece = [&](double p) { return (1.0 - std::pow(x, -p)) / p; };
  auto full = [&](double p) { return 1.0 / p; };
  // (rho^2 + 2 r rho + r^2) rho^(-a-1)
  double num = piece(a - 2) + 2 * r * piece(a - 1) + r * r * piece(a);
  double den = full(a - 2) + 2 * r * full(a - 1) + r * r * full(a);
  return num / den;
}

// Two-sided KS statistic of sorted data against a CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// Asymptotic two-sided critical value at level alpha.
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

// Asymptotic Kolmogorov p-value with Stephens' finite-n correction.
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double t = d * (sn + 0.12 + 0.11 / sn);
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    p += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace oracle
