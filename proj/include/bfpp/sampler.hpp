#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "bfpp/geometry.hpp"
#include "bfpp/radius_law.hpp"
#include "bfpp/rng.hpp"

namespace bfpp {

/// (d, lambda, nu) of the Boolean model.
struct ModelParams {
  int dim = 2;
  double lambda = 1.0;  // centers per unit d-volume
  RadiusLaw law = RadiusLaw::dirac(1.0);

  /// Throws std::invalid_argument when d < 2, lambda <= 0, or the d-th moment diverges.
  void validate() const;
};

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Expected number of balls touching a closed ball of radius r:
/// lambda * v_d * integral of (rho + r)^d nu(d rho).
double hitting_intensity(const ModelParams& params, double r);

/// All balls of the process whose closure meets the closed ball
/// B(region_center, complete_for_radius).
struct BallSample {
  BallSet balls;
  ModelParams params;
  Point region_center;
  double complete_for_radius = 0.0;
  std::uint64_t seed = 0;

  /// Indices of balls whose closure meets the closed ball B(region_center, radius).
  std::vector<std::size_t> touching(double radius) const;
  /// Sub-sample restricted to balls meeting B(region_center, radius); radius must
  /// not exceed complete_for_radius. The result is itself an exact hitting sample.
  BallSample restricted(double radius) const;
};

/// Exact draw of every ball of the process whose closure meets B(center, r).
///
/// Stream order: one Poisson count, then per ball its radius (tilted law),
/// then d Gaussians for the direction and one uniform for the distance.
BallSample sample_hitting(const ModelParams& params, const Point& center, double r, RandomStream& rng);

/// `base` plus an independent hitting sample at intensity `extra_lambda` over
/// the same region; base balls come first, unchanged.
BallSample superpose(const BallSample& base, double extra_lambda, RandomStream& rng);

/// Union of two independent samples over the same region and law.
BallSample superpose(const BallSample& base, const BallSample& extra);

/// JSON header line (params, seed, region) followed by a CSV table
/// `x1,...,xd,radius`, one row per ball.
void write_sample(std::ostream& os, const BallSample& sample);
BallSample read_sample(std::istream& is);

/// Shortest round-trip decimal rendering, locale-independent.
std::string format_double(double v);

}  // namespace bfpp
