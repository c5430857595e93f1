#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bfpp/travel_time.hpp"
#include "oracles.hpp"

using namespace bfpp;

namespace {

BallSample sample_of(std::vector<Ball> balls, double complete) {
  BallSample s;
  s.balls = BallSet(2, balls);
  s.params.dim = 2;
  s.region_center = {0, 0};
  s.complete_for_radius = complete;
  return s;
}

}  // namespace

TEST(TravelTime, Examples) {
  BallSet none(2);
  EXPECT_DOUBLE_EQ(travel_time(none, point_at({0, 0}), point_at({8, 0})).value, 8.0);
  BallSet two(2, {{{3, 0}, 1}, {{6, 0}, 1}});
  auto r = travel_time(two, point_at({0, 0}), point_at({8, 0}));
  EXPECT_NEAR(r.value, 4.0, 1e-12);
  EXPECT_NEAR(r.value, tau_of_segment(two, Point{0, 0}, Point{8, 0}), 1e-12);
  EXPECT_NEAR(r.tau_check, 4.0, 1e-12);
  EXPECT_EQ(r.component_count, 2u);
  BallSet one(2, {{{4, 0}, 2}});
  EXPECT_NEAR(travel_time(one, point_at({0, 0}), sphere_around({0, 0}, 10)).value, 6.0, 1e-12);
  EXPECT_NEAR(oracle::travel_time_by_orders({{{4, 0}, 2}}, {{0, 0}, 0}, {{0, 0}, 10}), 6.0, 1e-12);
}

TEST(TravelTime, RadialExamples) {
  EXPECT_DOUBLE_EQ(travel_time_radial(sample_of({}, 7), 7).value, 7.0);
  EXPECT_NEAR(travel_time_radial(sample_of({{{0, 0}, 3.5}}, 7), 7).value, 3.5, 1e-12);
  EXPECT_DOUBLE_EQ(annulus_time(sample_of({}, 10), 5).value, 5.0);
  EXPECT_DOUBLE_EQ(annulus_time(sample_of({{{7, 0}, 3}}, 10), 5).value, 0.0);
  EXPECT_THROW(annulus_time(sample_of({}, 9), 5), std::invalid_argument);
}

TEST(TravelTime, SameTerminalIsZero) {
  BallSet none(2);
  EXPECT_EQ(travel_time(none, point_at({1, 2}), point_at({1, 2})).value, 0.0);
}

TEST(TravelTime, MatchesOrderEnumeration) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-10, 10), ur(0.3, 2.5);
  for (int t = 0; t < 100; ++t) {
    std::vector<Ball> balls;
    int n = 1 + t % 9;
    for (int i = 0; i < n; ++i) balls.push_back({{u(gen), u(gen)}, ur(gen)});
    oracle::Term a{{u(gen), u(gen)}, 0}, b{{u(gen), u(gen)}, t % 3 == 0 ? 4 + ur(gen) : 0.0};
    Terminal ta = point_at(a.c);
    Terminal tb = b.radius > 0 ? sphere_around(b.c, b.radius) : point_at(b.c);
    BallSet set(2, balls);
    auto got = travel_time(set, ta, tb);
    EXPECT_NEAR(got.value, oracle::travel_time_by_orders(balls, a, b), 1e-9);
    CostGraph g = build_cost_graph(set, ta, tb);
    EXPECT_NEAR(shortest_path_value(g), got.value, 1e-12);
  }
}

TEST(TravelTime, WitnessRealizesValue) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-10, 10), ur(0.3, 2.5);
  for (int t = 0; t < 100; ++t) {
    BallSet set(2);
    for (int i = 0; i < 25; ++i) set.add(Ball{{u(gen), u(gen)}, ur(gen)});
    auto r = travel_time(set, point_at({u(gen), u(gen)}), point_at({u(gen), u(gen)}));
    EXPECT_NEAR(r.tau_check, r.value, 1e-9 * std::max(1.0, r.value));
    ASSERT_GE(r.witness.size(), 2u);
    EXPECT_EQ(r.witness.front().role, WitnessRole::start);
    EXPECT_EQ(r.witness.back().role, WitnessRole::end);
    EXPECT_TRUE(std::isfinite(r.max_ball_spread_ratio));
  }
}

TEST(TravelTime, NeverExceedsCandidatePaths) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-8, 8), ur(0.3, 2);
  for (int t = 0; t < 30; ++t) {
    BallSet set(2);
    for (int i = 0; i < 15; ++i) set.add(Ball{{u(gen), u(gen)}, ur(gen)});
    Point a{u(gen), u(gen)}, b{u(gen), u(gen)};
    double v = travel_time(set, point_at(a), point_at(b)).value;
    for (int k = 0; k < 50; ++k) {
      std::vector<Point> pts{a};
      for (int j = 0; j < 1 + k % 4; ++j) pts.push_back({u(gen), u(gen)});
      pts.push_back(b);
      EXPECT_LE(v, tau_of_path(set, Polyline(pts)) + 1e-9);
    }
  }
}

TEST(TravelTime, BoundsAndTriangle) {
  ModelParams p;
  p.lambda = 0.3;
  RandomStream rng(4);
  std::uniform_real_distribution<double> u(-6, 6);
  std::mt19937_64 gen(4);
  for (int t = 0; t < 50; ++t) {
    auto s = sample_hitting(p, {0, 0}, 9, rng);
    Point a{u(gen), u(gen)}, b{u(gen), u(gen)}, c{u(gen), u(gen)};
    double ab = travel_time(s, point_at(a), point_at(b), {false}).value;
    double bc = travel_time(s, point_at(b), point_at(c), {false}).value;
    double ac = travel_time(s, point_at(a), point_at(c), {false}).value;
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, oracle::dist(a, b) + 1e-9);
    EXPECT_LE(ac, ab + bc + 1e-9);
    double r = 3 + t % 2;
    EXPECT_LE(travel_time_radial(s, r).value + annulus_time(s, r).value, travel_time_radial(s, 2 * r).value + 1e-9);
  }
}

TEST(TravelTime, EnclosingSphereFilterIsExact) {
  // Result on the filtered sample equals the result on all balls.
  ModelParams p;
  p.lambda = 0.25;
  RandomStream rng(5);
  for (int t = 0; t < 50; ++t) {
    auto s = sample_hitting(p, {0, 0}, 12, rng);
    double filtered = travel_time_radial(s, 6).value;
    double full = travel_time(s.balls, point_at({0, 0}), sphere_around({0, 0}, 6)).value;
    EXPECT_NEAR(filtered, full, 1e-12);
  }
}

TEST(TravelTime, MonotoneInBallSet) {
  ModelParams p;
  p.lambda = 0.2;
  RandomStream rng(6);
  for (int t = 0; t < 50; ++t) {
    auto s = sample_hitting(p, {0, 0}, 10, rng);
    auto more = superpose(s, 0.1, rng);
    EXPECT_LE(travel_time_radial(more, 10).value, travel_time_radial(s, 10).value + 1e-12);
  }
}

TEST(TravelTime, ThreeDimensions) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-5, 5), ur(0.3, 1.5);
  for (int t = 0; t < 30; ++t) {
    std::vector<Ball> balls;
    for (int i = 0; i < 6; ++i) balls.push_back({{u(gen), u(gen), u(gen)}, ur(gen)});
    Point a{u(gen), u(gen), u(gen)}, b{u(gen), u(gen), u(gen)};
    auto r = travel_time(BallSet(3, balls), point_at(a), point_at(b));
    EXPECT_NEAR(r.value, oracle::travel_time_by_orders(balls, {a, 0}, {b, 0}), 1e-9);
    EXPECT_NEAR(r.tau_check, r.value, 1e-9 * std::max(1.0, r.value));
  }
}
