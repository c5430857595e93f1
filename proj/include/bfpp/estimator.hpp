#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bfpp/sampler.hpp"

namespace bfpp {

/// How replica loops run. Both produce identical results: every replica owns
/// an independent stream and results are aggregated in replica order.
enum class Execution { serial, parallel };

struct EstimatorOptions {
  Execution execution = Execution::parallel;
  int threads = 0;  // 0: OpenMP default
  /// Number of fixed directions u for the per-direction T(0, r u) / r records.
  std::size_t directions = 4;
  /// Directional samples cover B(0, r (1 + direction_slack)).
  double direction_slack = 0.5;
};

/// Mean and standard error of replica values. Batches merge in any order
/// (pairwise update of count, mean and centered sum of squares).
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Sample standard deviation over sqrt(count); 0 when count < 2.
  double stderr_of_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EstimateRecord {
  std::string quantity;  // mu, mu_direction, crossing, pi, pi_10alpha, h, ...
  double lambda = 0.0;
  double scale = 0.0;  // r or alpha
  std::string law;
  int dim = 2;
  double multiplier = 0.0;  // crossing search multiplier, 0 when unused
  int direction = -1;       // direction index for mu_direction, -1 otherwise
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::uint64_t fingerprint = 0;
};

/// FNV-1a 64-bit hash.
std::uint64_t stable_hash(std::string_view text);

/// Fixed unit vectors used for directional travel times. In d = 2 they are
/// evenly spaced angles; otherwise signed axes followed by diagonals.
std::vector<Point> fixed_directions(int dim, std::size_t count);

/// T(0, S(r)) / r per replica on exact hitting samples, plus per-direction
/// T(0, r u) / r. Replica k of r_list[i] uses stream replica_seed(replica_seed(seed, i), k).
std::vector<EstimateRecord> estimate_mu(const ModelParams& params, const std::vector<double>& r_list,
                                        std::size_t replicas, std::uint64_t seed, const EstimatorOptions& options = {});

/// Frequency of the crossing S(r) <-> S(2r) for each r and search multiplier.
std::vector<EstimateRecord> estimate_crossing(const ModelParams& params, const std::vector<double>& r_list,
                                              std::size_t replicas, std::uint64_t seed,
                                              const std::vector<double>& multipliers,
                                              const EstimatorOptions& options = {});

struct PiTableRow {
  double alpha = 0.0;
  double pi = 0.0;
  double pi_stderr = 0.0;
  double pi_10alpha = 0.0;
  double pi_squared = 0.0;
  double lambda_epsilon = 0.0;  // lambda * epsilon(alpha), analytic
  double h = 0.0;
  double ratio = 0.0;  // pi / (lambda alpha^d)
};

struct PiEstimate {
  std::vector<EstimateRecord> records;
  std::vector<PiTableRow> table;
};

/// Unbiased frequency of the local crossing event (balls centered in
/// B(0, 10 alpha)), its value at 10 alpha, and the H(alpha) frequency.
PiEstimate estimate_pi(const ModelParams& params, const std::vector<double>& alpha_list, std::size_t replicas,
                       std::uint64_t seed, const EstimatorOptions& options = {});

/// Per-replica observations along a superposition-coupled intensity grid:
/// replica k draws its sample at lambda_grid[0] and adds independent
/// increments, so every indicator is monotone in lambda replica by replica.
struct CoupledGrid {
  std::vector<double> lambdas;
  std::vector<double> multipliers;
  double r = 0.0;
  std::vector<std::vector<double>> mu;                    // [replica][lambda] T(0,S(r))/r
  std::vector<std::vector<std::vector<char>>> crossing;   // [replica][lambda][multiplier]
};

CoupledGrid observe_coupled_grid(int dim, const RadiusLaw& law, const std::vector<double>& lambda_grid, double r,
                                 const std::vector<double>& multipliers, std::size_t replicas, std::uint64_t seed,
                                 const EstimatorOptions& options = {});

/// A pair of adjacent grid points bracketing a transition.
struct Bracket {
  enum class Status { inside, below_grid, above_grid };
  Status status = Status::above_grid;
  std::size_t lo_index = 0;
  std::size_t hi_index = 0;
  double lo = 0.0;
  double hi = 0.0;

  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// When mu-hat at the largest r counts as zero.
///
/// A value is zero if mean <= stderr_multiple * stderr, or, with
/// decay_exponent > 0, if mu-hat between the smallest and largest r decays
/// at least like r^(-decay_exponent), as it does when T(r) stays bounded.
struct MuZeroRule {
  double stderr_multiple = 3.0;
  double decay_exponent = 0.5;
};

struct ThresholdScan {
  std::vector<double> lambdas;
  std::vector<double> r_list;
  std::vector<double> multipliers;
  std::vector<EstimateRecord> records;  // crossing and mu, every (lambda, r)
  MuZeroRule rule;
  std::vector<double> crossing_at_max_r;  // largest multiplier
  std::vector<double> mu_at_max_r;
  std::vector<double> mu_stderr_at_max_r;
  std::vector<double> mu_decay_exponent;  // between smallest and largest r
  std::vector<char> mu_zero;
  Bracket lambda_c_hat;
  Bracket lambda_mu;
  bool brackets_agree = false;  // overlapping or adjacent cells
};

ThresholdScan scan_lambda(int dim, const RadiusLaw& law, const std::vector<double>& lambda_grid,
                          const std::vector<double>& r_list, const std::vector<double>& multipliers,
                          std::size_t replicas, std::uint64_t seed, const MuZeroRule& rule = {},
                          const EstimatorOptions& options = {});

struct BracketDiagnostics {
  double r = 0.0;
  std::size_t replicas = 0;
  std::size_t net_size = 0;
  std::size_t lower_violations = 0;  // T(0,S(r)) + T(S(r),S(2r)) > T(0,S(2r)) + 1e-9
  Accumulator radial_r, annulus, radial_2r, net_sup;
  /// sup_net + T(S(r),S(2r)) - T(0,S(2r)); negative values reflect the net gap.
  Accumulator upper_slack;
  double min_upper_slack = 0.0;
};

/// Checks T(0,S(r)) + T(S(r),S(2r)) <= T(0,S(2r)) on every replica and reports
/// the slack of the upper bound using a net of `net_size` directions on S(r).
BracketDiagnostics diagnostics_bracket(const ModelParams& params, double r, std::size_t replicas,
                                       std::uint64_t seed, std::size_t net_size = 64,
                                       const EstimatorOptions& options = {});

struct GreedyReplica {
  std::size_t replica = 0;
  std::size_t points = 0;
  double value = 0.0;
  bool exact = false;
};

/// Greedy supremum over the centers of balls with radius >= rho hitting
/// B(0, region_radius), one value per replica (exact up to 10 points).
std::vector<GreedyReplica> estimate_greedy(const ModelParams& params, double rho, double region_radius,
                                           std::size_t replicas, std::uint64_t seed, std::size_t beam,
                                           const EstimatorOptions& options = {});

}  // namespace bfpp
