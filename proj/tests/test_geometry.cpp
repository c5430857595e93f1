#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "bfpp/geometry.hpp"
#include "oracles.hpp"

using namespace bfpp;

namespace {

Ball B(double x, double y, double r) { return {{x, y}, r}; }

}  // namespace

TEST(Geometry, GapExamples) {
  EXPECT_DOUBLE_EQ(gap(B(0, 0, 1), B(3, 0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(gap(B(0, 0, 2), B(3, 0, 2)), 0.0);
  EXPECT_DOUBLE_EQ(gap(B(3, 0, 1), sphere_around({0, 0}, 5)), 1.0);
  EXPECT_DOUBLE_EQ(gap(point_at({0, 0}), point_at({3, 4})), 5.0);
  EXPECT_DOUBLE_EQ(gap(point_at({1, 0}), sphere_around({0, 0}, 4)), 3.0);
  EXPECT_DOUBLE_EQ(gap(point_at({0, 0}), B(5, 0, 2)), 3.0);
}

TEST(Geometry, GapMatchesDenseSampling) {
  // ball-sphere gap against a minimum over points on both sets
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-6, 6), ur(0.2, 2);
  for (int t = 0; t < 30; ++t) {
    Ball b = B(u(gen), u(gen), ur(gen));
    Point sc{u(gen) / 3, u(gen) / 3};
    double sr = 1 + std::abs(u(gen));
    double best = 1e300;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
      double th = 2 * std::numbers::pi * i / n;
      Point s{sc[0] + sr * std::cos(th), sc[1] + sr * std::sin(th)};
      best = std::min(best, std::max(0.0, oracle::dist(s, b.center) - b.radius));
    }
    EXPECT_NEAR(gap(b, sphere_around(sc, sr)), best, 2e-5 * (sr + 1));
  }
}

TEST(Geometry, GapSymmetric) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-5, 5), ur(0.1, 3);
  for (int t = 0; t < 200; ++t) {
    Ball a = B(u(gen), u(gen), ur(gen)), b = B(u(gen), u(gen), ur(gen));
    Terminal s = sphere_around({u(gen), u(gen)}, ur(gen));
    Terminal p = point_at({u(gen), u(gen)});
    EXPECT_EQ(gap(a, b), gap(b, a));
    EXPECT_EQ(gap(a, s), gap(s, a));
    EXPECT_EQ(gap(p, s), gap(s, p));
    auto cp = closest_points(a, s);
    EXPECT_NEAR(oracle::dist(cp.on_first, cp.on_second), gap(a, s), 1e-9);
  }
}

TEST(Geometry, StrictOverlap) {
  EXPECT_FALSE(overlaps(B(0, 0, 1), B(2, 0, 1)));
  EXPECT_TRUE(overlaps(B(0, 0, 1), B(1.999, 0, 1)));
}

TEST(Geometry, TauExamples) {
  BallSet none(2);
  Point a{0, 0}, b{8, 0};
  EXPECT_DOUBLE_EQ(tau_of_segment(none, a, b), 8.0);
  BallSet two(2, {B(3, 0, 1), B(6, 0, 1)});
  EXPECT_NEAR(tau_of_segment(two, a, b), 4.0, 1e-12);
  EXPECT_NEAR(oracle::tau_by_sampling({B(3, 0, 1), B(6, 0, 1)}, a, b, 100000), 4.0, 1e-3);
  BallSet big(2, {B(0, 0, 10)});
  EXPECT_EQ(tau_of_path(big, Polyline({{-3, 1}, {2, 2}, {5, -4}})), 0.0);
}

TEST(Geometry, TauMatchesIndicatorIntegration) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5, 5), ur(0.3, 2);
  for (int t = 0; t < 20; ++t) {
    std::vector<Ball> balls;
    for (int i = 0; i < 8; ++i) balls.push_back(B(u(gen), u(gen), ur(gen)));
    Point a{u(gen), u(gen)}, b{u(gen), u(gen)};
    BallSet set(2, balls);
    EXPECT_NEAR(tau_of_segment(set, a, b), oracle::tau_by_sampling(balls, a, b, 200000), 1e-3);
  }
}

TEST(Geometry, TauProperties) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-5, 5), ur(0.3, 2);
  for (int t = 0; t < 100; ++t) {
    BallSet set(2);
    for (int i = 0; i < 6; ++i) set.add(B(u(gen), u(gen), ur(gen)));
    Polyline path({{u(gen), u(gen)}, {u(gen), u(gen)}, {u(gen), u(gen)}});
    double tau = tau_of_path(set, path);
    EXPECT_GE(tau, 0.0);
    EXPECT_LE(tau, path.length() + 1e-12);
    // additive under subdivision
    const auto& v = path.vertices();
    Point mid{(v[0][0] + v[1][0]) / 2, (v[0][1] + v[1][1]) / 2};
    Polyline split({v[0], mid, v[1], v[2]});
    EXPECT_NEAR(tau_of_path(set, split), tau, 1e-12);
    // more balls never increase tau
    BallSet more = set;
    more.add(B(u(gen), u(gen), ur(gen)));
    EXPECT_LE(tau_of_path(more, path), tau + 1e-12);
  }
}

TEST(Geometry, PolylineValidation) {
  EXPECT_THROW(Polyline({{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Polyline({{0, 0}, {0, 0}}), std::invalid_argument);
}

TEST(GridIndex, SmallCases) {
  BallSet empty(2);
  GridIndex e(empty);
  Point c{0, 0};
  EXPECT_TRUE(e.query_near(c, 100).empty());
  BallSet one(2, {B(1, 1, 0.5)});
  GridIndex g(one);
  EXPECT_EQ(g.query_near(c, 5), std::vector<std::size_t>{0});
}

TEST(GridIndex, SupersetOfExhaustiveScan) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-50, 50);
  std::exponential_distribution<double> er(1.0);
  BallSet set(2);
  for (int i = 0; i < 1000; ++i) set.add(B(u(gen), u(gen), 0.05 + er(gen)));
  set.add(B(0, 0, 80));  // overflow ball
  GridIndex index(set);
  for (int q = 0; q < 200; ++q) {
    Point c{u(gen), u(gen)};
    double r = 0.5 + 5 * er(gen);
    auto got = index.query_near(c, r);
    std::set<std::size_t> have(got.begin(), got.end());
    for (std::size_t i = 0; i < set.size(); ++i) {
      Point ci(set.center(i).begin(), set.center(i).end());
      if (oracle::dist(ci, c) < r + set.radius(i)) EXPECT_TRUE(have.count(i)) << i;
    }
  }
}
