#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bfpp/rng.hpp"

namespace bfpp {

/// Radius measure of the ball process.
///
/// A law is one of four parametric shapes (point mass, uniform interval,
/// Pareto, finite mixture) scaled by a total mass. Probability laws have
/// mass 1; `truncated_above` produces the unnormalized restriction to
/// [rho, +inf), whose mass is the surviving probability.
///
/// Pareto(shape, scale) has survival (scale / r)^shape for r >= scale.
///
/// Mixture components are stored normalized; their weights sum to the
/// total mass. All functionals below are closed form.
class RadiusLaw {
 public:
  enum class Kind { dirac, uniform, pareto, mixture };

  struct Component {
    double weight;
    std::shared_ptr<const RadiusLaw> law;
  };

  static RadiusLaw dirac(double rho0);
  static RadiusLaw uniform(double a, double b);
  static RadiusLaw pareto(double shape, double scale);
  /// Weights must be positive and sum to 1 (within 1e-9); they are rescaled to sum exactly.
  static RadiusLaw mixture(const std::vector<std::pair<double, RadiusLaw>>& parts);

  /// Parses `dirac:r0`, `uniform:a:b`, `pareto:shape:scale`,
  /// `mix:w1*<law1>,w2*<law2>` (angle brackets optional unless nested).
  static RadiusLaw parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double total_mass() const noexcept { return mass_; }
  bool is_probability() const noexcept { return mass_ == 1.0; }

  // Shape parameters. Meaningful only for the matching kind.
  double dirac_value() const noexcept { return p0_; }
  double lower() const noexcept { return p0_; }
  double upper() const noexcept { return p1_; }
  double shape() const noexcept { return p0_; }
  double scale() const noexcept { return p1_; }
  const std::vector<Component>& components() const noexcept { return parts_; }

  /// Integral of rho^k against the measure (mass included); +inf when divergent.
  double moment(double k) const;
  /// Integral of rho^k over [alpha, +inf) against the measure.
  double tail_moment(double k, double alpha) const;
  /// nu([r, +inf)).
  double survival(double r) const;
  /// nu((0, r)).
  double mass_below(double r) const;
  /// Supremum of the support (+inf for Pareto tails).
  double support_max() const;

  RadiusLaw truncated_above(double rho) const;
  /// Same shape with mass 1. Throws if the mass is 0.
  RadiusLaw normalized() const;

  /// Config-syntax rendering of the shape (mass is not encoded).
  std::string to_string() const;

  friend bool operator==(const RadiusLaw& a, const RadiusLaw& b);

 private:
  RadiusLaw(Kind kind, double p0, double p1, double mass)
      : kind_(kind), p0_(p0), p1_(p1), mass_(mass) {}

  double unit_moment(double k) const;
  double unit_tail_moment(double k, double alpha) const;
  double unit_survival(double r) const;

  Kind kind_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  double mass_ = 1.0;
  std::vector<Component> parts_;
};

/// True iff the d-th moment of the law is finite.
bool check_moment_d(const RadiusLaw& law, int d);

/// True iff the integral over (0, inf) of nu([r, inf))^(1/d) dr is finite.
bool check_greedy_condition(const RadiusLaw& law, int d);

/// Tail d-th moment over [alpha, +inf). Throws if the d-th moment is infinite.
double epsilon_tail(const RadiusLaw& law, double alpha, int d);

RadiusLaw truncate_above(const RadiusLaw& law, double rho);

/// Inverse-transform draw from a probability law.
double sample_radius(const RadiusLaw& law, RandomStream& rng);

/// Draw from the density proportional to rho^k nu(d rho).
double sample_moment_tilted_radius(const RadiusLaw& law, int k, RandomStream& rng);

/// Draw from the density proportional to (rho + r)^d nu(d rho): the radius
/// law of a ball that touches a fixed ball of radius r.
double sample_hitting_tilted_radius(const RadiusLaw& law, double r, int d, RandomStream& rng);

/// Binomial coefficient as a double.
double binomial(int n, int k);

}  // namespace bfpp
