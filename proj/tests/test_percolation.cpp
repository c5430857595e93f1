#include <random>

#include <gtest/gtest.h>

#include "bfpp/percolation.hpp"
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

void expect_same_partition(const ComponentLabeling& got, const std::vector<int>& want) {
  ASSERT_EQ(got.label.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    for (std::size_t j = 0; j < want.size(); ++j) {
      EXPECT_EQ(got.label[i] == got.label[j], want[i] == want[j]);
    }
  }
}

}  // namespace

TEST(Components, Examples) {
  auto c = connected_components(BallSet(2, {{{0, 0}, 1}, {{1.5, 0}, 1}, {{10, 0}, 1}}));
  EXPECT_EQ(c.count(), 2u);
  EXPECT_EQ(c.label[0], c.label[1]);
  EXPECT_NE(c.label[0], c.label[2]);
  EXPECT_EQ(connected_components(BallSet(2)).count(), 0u);
  EXPECT_EQ(connected_components(BallSet(2, {{{0, 0}, 1}, {{2, 0}, 1}})).count(), 2u);
}

TEST(Components, MatchBreadthFirstOracle) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-20, 20);
  std::exponential_distribution<double> er(2.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<Ball> balls;
    for (int i = 0; i < 300; ++i) balls.push_back({{u(gen), u(gen)}, 0.05 + er(gen) * (i % 50 == 0 ? 15 : 1)});
    BallSet set(2, balls);
    auto want = oracle::components(balls);
    auto grid = connected_components(set);
    expect_same_partition(grid, want);
    EXPECT_EQ(grid.label, connected_components_reference(set).label);
    // canonical labels: smallest member index
    for (const auto& comp : grid.components) {
      for (auto i : comp) EXPECT_EQ(grid.label[i], comp.front());
    }
  }
}

TEST(Components, ThreeDimensions) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-6, 6);
  std::vector<Ball> balls;
  for (int i = 0; i < 200; ++i) balls.push_back({{u(gen), u(gen), u(gen)}, 0.9});
  expect_same_partition(connected_components(BallSet(3, balls)), oracle::components(balls));
}

TEST(Crossing, Examples) {
  EXPECT_FALSE(crossing_event(sample_of({}, 3), 1));
  EXPECT_TRUE(crossing_event(sample_of({{{1.0, 0}, 0.3}, {{1.5, 0}, 0.3}, {{2.0, 0}, 0.35}}, 3), 1));
  EXPECT_TRUE(crossing_event(sample_of({{{0, 0}, 5}}, 3), 1));
  EXPECT_THROW(crossing_event(sample_of({}, 2.5), 1, 3), std::invalid_argument);
  EXPECT_THROW(crossing_event(sample_of({}, 10), 1, 1.5), std::invalid_argument);
}

TEST(Crossing, NondecreasingInMultiplier) {
  ModelParams p;
  p.lambda = 0.3;
  RandomStream rng(3);
  std::vector<double> ms{2, 3, 5};
  for (int t = 0; t < 100; ++t) {
    auto s = sample_hitting(p, {0, 0}, 25, rng);
    auto hits = crossing_events(s, 5, ms);
    EXPECT_LE(hits[0], hits[1]);
    EXPECT_LE(hits[1], hits[2]);
    for (std::size_t m = 0; m < ms.size(); ++m) EXPECT_EQ(hits[m], crossing_event(s, 5, ms[m]));
  }
}

TEST(Crossing, MatchesComponentOracle) {
  ModelParams p;
  p.lambda = 0.33;
  RandomStream rng(4);
  const double r = 4;
  for (int t = 0; t < 100; ++t) {
    auto s = sample_hitting(p, {0, 0}, 3 * r, rng);
    std::vector<Ball> balls;
    for (std::size_t i = 0; i < s.balls.size(); ++i) balls.push_back(s.balls.ball(i));
    auto label = oracle::components(balls);
    std::vector<char> inner(balls.size() + 1, 0), outer(balls.size() + 1, 0);
    for (std::size_t i = 0; i < balls.size(); ++i) {
      double d = oracle::dist(balls[i].center, {0, 0});
      if (std::abs(d - r) <= balls[i].radius) inner[label[i]] = 1;
      if (std::abs(d - 2 * r) <= balls[i].radius) outer[label[i]] = 1;
    }
    bool want = false;
    for (std::size_t k = 0; k <= balls.size(); ++k) want = want || (inner[k] && outer[k]);
    EXPECT_EQ(crossing_event(s, r, 3), want);
  }
}

TEST(PiEvent, Examples) {
  const double a = 1.5;
  EXPECT_FALSE(pi_event(sample_of({}, 10 * a), a));
  EXPECT_TRUE(pi_event(sample_of({{{0, 0}, 9 * a}}, 10 * a), a));
  EXPECT_FALSE(pi_event(sample_of({{{11 * a, 0}, 2.5 * a}}, 10 * a), a));
  EXPECT_THROW(pi_event(sample_of({}, 9 * a), a), std::invalid_argument);
}

TEST(HEvent, Examples) {
  const double a = 0.5;
  EXPECT_FALSE(h_event(sample_of({}, 10 * a), a));
  EXPECT_TRUE(h_event(sample_of({{{12 * a, 0}, 4 * a}}, 10 * a), a));
  EXPECT_FALSE(h_event(sample_of({{{12 * a, 0}, a}}, 10 * a), a));
}
