#include "bfpp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "bfpp/greedy.hpp"
#include "bfpp/percolation.hpp"
#include "bfpp/travel_time.hpp"

namespace bfpp {

namespace {

// Runs fn(k) for k in [0, n). Each call writes only its own result slot.
template <class Fn>
void for_each_replica(std::size_t n, const EstimatorOptions& options, Fn&& fn) {
  if (options.execution == Execution::serial) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::exception_ptr error;
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      fn(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(bfpp_replica_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void require_replicas(std::size_t replicas) {
  if (replicas < 2) throw std::invalid_argument("need at least 2 replicas");
}

void require_increasing(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + " must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
    if (i > 0 && !(v[i] > v[i - 1])) throw std::invalid_argument(std::string(what) + " must be increasing");
  }
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_double(v[i]);
  }
  return s;
}

std::uint64_t fingerprint_of(std::string_view op, const ModelParams& p, const std::string& extra, std::size_t replicas,
                             std::uint64_t seed) {
  std::ostringstream os;
  os << op << "|d=" << p.dim << "|lambda=" << format_double(p.lambda) << "|law=" << p.law.to_string() << "|"
     << extra << "|replicas=" << replicas << "|seed=" << seed;
  return stable_hash(os.str());
}

EstimateRecord make_record(std::string quantity, const ModelParams& p, double scale, const Accumulator& acc,
                           std::uint64_t seed, std::uint64_t fp) {
  EstimateRecord r;
  r.quantity = std::move(quantity);
  r.lambda = p.lambda;
  r.scale = scale;
  r.law = p.law.to_string();
  r.dim = p.dim;
  r.mean = acc.mean();
  r.stderr_of_mean = acc.stderr_of_mean();
  r.replicas = acc.count();
  r.seed = seed;
  r.fingerprint = fp;
  return r;
}

Point origin(int dim) { return Point(static_cast<std::size_t>(dim), 0.0); }

const TravelTimeOptions kValueOnly{.witness = false};

}  // namespace

// ---- Accumulator ----

void Accumulator::add(double x) {
  ++n_;
  double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ = (na * mean_ + nb * other.mean_) / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double Accumulator::stderr_of_mean() const {
  if (n_ < 2) return 0.0;
  double var = std::max(0.0, m2_ / static_cast<double>(n_ - 1));
  return std::sqrt(var / static_cast<double>(n_));
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<Point> fixed_directions(int dim, std::size_t count) {
  std::vector<Point> out;
  if (dim == 2) {
    for (std::size_t j = 0; j < count; ++j) {
      double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
      out.push_back({std::cos(a), std::sin(a)});
    }
    return out;
  }
  for (std::size_t j = 0; out.size() < count; ++j) {
    Point u(dim, 0.0);
    if (j < 2 * static_cast<std::size_t>(dim)) {
      u[j / 2] = (j % 2 == 0) ? 1.0 : -1.0;
    } else {
      // sign pattern from the bits of j
      std::size_t bits = j - 2 * static_cast<std::size_t>(dim);
      for (int k = 0; k < dim; ++k) u[k] = ((bits >> k) & 1U) ? -1.0 : 1.0;
      for (auto& x : u) x /= std::sqrt(static_cast<double>(dim));
    }
    out.push_back(u);
  }
  return out;
}

// ---- mu ----

std::vector<EstimateRecord> estimate_mu(const ModelParams& params, const std::vector<double>& r_list,
                                        std::size_t replicas, std::uint64_t seed, const EstimatorOptions& options) {
  params.validate();
  require_replicas(replicas);
  require_increasing(r_list, "r list");
  const auto dirs = fixed_directions(params.dim, options.directions);
  const auto fp = fingerprint_of("mu", params,
                                 "r=" + join(r_list) + "|dirs=" + std::to_string(dirs.size()) +
                                     "|slack=" + format_double(options.direction_slack),
                                 replicas, seed);
  const Point o = origin(params.dim);
  std::vector<EstimateRecord> out;

  for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
    const double r = r_list[ri];
    const double reach = dirs.empty() ? r : r * (1.0 + options.direction_slack);
    const std::uint64_t r_seed = replica_seed(seed, ri);
    // [replica][0] radial, [replica][1 + j] direction j
    std::vector<std::vector<double>> values(replicas, std::vector<double>(1 + dirs.size()));
    for_each_replica(replicas, options, [&](std::size_t k) {
      auto rng = RandomStream::for_replica(r_seed, k);
      auto sample = sample_hitting(params, o, reach, rng);
      values[k][0] = travel_time_radial(sample, r, kValueOnly).value / r;
      for (std::size_t j = 0; j < dirs.size(); ++j) {
        Point target(params.dim);
        for (int c = 0; c < params.dim; ++c) target[c] = r * dirs[j][c];
        values[k][1 + j] = travel_time(sample, point_at(o), point_at(target), kValueOnly).value / r;
      }
    });
    std::vector<Accumulator> acc(1 + dirs.size());
    for (const auto& row : values) {
      for (std::size_t c = 0; c < row.size(); ++c) acc[c].add(row[c]);
    }
    out.push_back(make_record("mu", params, r, acc[0], seed, fp));
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      auto rec = make_record("mu_direction", params, r, acc[1 + j], seed, fp);
      rec.direction = static_cast<int>(j);
      out.push_back(rec);
    }
  }
  return out;
}

// ---- crossing ----

std::vector<EstimateRecord> estimate_crossing(const ModelParams& params, const std::vector<double>& r_list,
                                              std::size_t replicas, std::uint64_t seed,
                                              const std::vector<double>& multipliers,
                                              const EstimatorOptions& options) {
  params.validate();
  require_replicas(replicas);
  require_increasing(r_list, "r list");
  if (multipliers.empty()) throw std::invalid_argument("need at least one multiplier");
  const double m_max = *std::max_element(multipliers.begin(), multipliers.end());
  const auto fp = fingerprint_of("crossing", params, "r=" + join(r_list) + "|m=" + join(multipliers), replicas, seed);
  const Point o = origin(params.dim);
  std::vector<EstimateRecord> out;

  for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
    const double r = r_list[ri];
    const std::uint64_t r_seed = replica_seed(seed, ri);
    std::vector<std::vector<bool>> hits(replicas);
    for_each_replica(replicas, options, [&](std::size_t k) {
      auto rng = RandomStream::for_replica(r_seed, k);
      auto sample = sample_hitting(params, o, m_max * r, rng);
      hits[k] = crossing_events(sample, r, multipliers);
    });
    for (std::size_t m = 0; m < multipliers.size(); ++m) {
      Accumulator acc;
      for (const auto& h : hits) acc.add(h[m] ? 1.0 : 0.0);
      auto rec = make_record("crossing", params, r, acc, seed, fp);
      rec.multiplier = multipliers[m];
      out.push_back(rec);
    }
  }
  return out;
}

// ---- pi ----

PiEstimate estimate_pi(const ModelParams& params, const std::vector<double>& alpha_list, std::size_t replicas,
                       std::uint64_t seed, const EstimatorOptions& options) {
  params.validate();
  require_replicas(replicas);
  require_increasing(alpha_list, "alpha list");
  const auto fp = fingerprint_of("pi", params, "alpha=" + join(alpha_list), replicas, seed);
  const Point o = origin(params.dim);
  PiEstimate out;

  for (std::size_t ai = 0; ai < alpha_list.size(); ++ai) {
    const double alpha = alpha_list[ai];
    const std::uint64_t a_seed = replica_seed(seed, ai);
    struct Obs {
      bool pi, h, pi10;
    };
    std::vector<Obs> obs(replicas);
    for_each_replica(replicas, options, [&](std::size_t k) {
      auto rng = RandomStream::for_replica(a_seed, k);
      auto near = sample_hitting(params, o, 10.0 * alpha, rng);
      auto far = sample_hitting(params, o, 100.0 * alpha, rng);
      obs[k] = {pi_event(near, alpha), h_event(near, alpha), pi_event(far, 10.0 * alpha)};
    });
    Accumulator pi, h, pi10;
    for (const auto& x : obs) {
      pi.add(x.pi);
      h.add(x.h);
      pi10.add(x.pi10);
    }
    out.records.push_back(make_record("pi", params, alpha, pi, seed, fp));
    out.records.push_back(make_record("pi_10alpha", params, alpha, pi10, seed, fp));
    out.records.push_back(make_record("h", params, alpha, h, seed, fp));
    PiTableRow row;
    row.alpha = alpha;
    row.pi = pi.mean();
    row.pi_stderr = pi.stderr_of_mean();
    row.pi_10alpha = pi10.mean();
    row.pi_squared = pi.mean() * pi.mean();
    row.lambda_epsilon = params.lambda * epsilon_tail(params.law, alpha, params.dim);
    row.h = h.mean();
    row.ratio = pi.mean() / (params.lambda * std::pow(alpha, params.dim));
    out.table.push_back(row);
  }
  return out;
}

// ---- coupled grid and scan ----

CoupledGrid observe_coupled_grid(int dim, const RadiusLaw& law, const std::vector<double>& lambda_grid, double r,
                                 const std::vector<double>& multipliers, std::size_t replicas, std::uint64_t seed,
                                 const EstimatorOptions& options) {
  require_increasing(lambda_grid, "lambda grid");
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  ModelParams base{dim, lambda_grid.front(), law};
  base.validate();
  const double m_max = multipliers.empty() ? 1.0 : *std::max_element(multipliers.begin(), multipliers.end());
  const Point o = origin(dim);

  CoupledGrid out;
  out.lambdas = lambda_grid;
  out.multipliers = multipliers;
  out.r = r;
  out.mu.assign(replicas, std::vector<double>(lambda_grid.size()));
  out.crossing.assign(replicas, std::vector<std::vector<char>>(lambda_grid.size()));
  for_each_replica(replicas, options, [&](std::size_t k) {
    auto rng = RandomStream::for_replica(seed, k);
    BallSample sample = sample_hitting(base, o, m_max * r, rng);
    for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
      if (li > 0) sample = superpose(sample, lambda_grid[li] - lambda_grid[li - 1], rng);
      out.mu[k][li] = travel_time_radial(sample, r, kValueOnly).value / r;
      if (!multipliers.empty()) {
        auto hits = crossing_events(sample, r, multipliers);
        out.crossing[k][li].assign(hits.begin(), hits.end());
      }
    }
  });
  return out;
}

namespace {

// First index where pred holds; the bracket is the cell ending there.
template <class Pred>
Bracket bracket_first(const std::vector<double>& grid, Pred&& pred) {
  Bracket b;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!pred(i)) continue;
    if (i == 0) {
      b.status = Bracket::Status::below_grid;
      b.lo_index = b.hi_index = 0;
    } else {
      b.status = Bracket::Status::inside;
      b.lo_index = i - 1;
      b.hi_index = i;
    }
    b.lo = grid[b.lo_index];
    b.hi = grid[b.hi_index];
    return b;
  }
  b.status = Bracket::Status::above_grid;
  b.lo_index = b.hi_index = grid.size() - 1;
  b.lo = b.hi = grid.back();
  return b;
}

}  // namespace

ThresholdScan scan_lambda(int dim, const RadiusLaw& law, const std::vector<double>& lambda_grid,
                          const std::vector<double>& r_list, const std::vector<double>& multipliers,
                          std::size_t replicas, std::uint64_t seed, const MuZeroRule& rule,
                          const EstimatorOptions& options) {
  require_replicas(replicas);
  require_increasing(r_list, "r list");
  require_increasing(lambda_grid, "lambda grid");
  if (multipliers.empty()) throw std::invalid_argument("need at least one multiplier");
  ModelParams p0{dim, lambda_grid.front(), law};
  p0.validate();
  const auto fp = fingerprint_of("scan", p0,
                                 "grid=" + join(lambda_grid) + "|r=" + join(r_list) + "|m=" + join(multipliers) +
                                     "|rule=" + format_double(rule.stderr_multiple) + ";" +
                                     format_double(rule.decay_exponent),
                                 replicas, seed);
  const std::size_t m_top = static_cast<std::size_t>(
      std::max_element(multipliers.begin(), multipliers.end()) - multipliers.begin());

  ThresholdScan scan;
  scan.lambdas = lambda_grid;
  scan.r_list = r_list;
  scan.multipliers = multipliers;
  scan.rule = rule;
  const std::size_t L = lambda_grid.size();
  std::vector<std::vector<Accumulator>> mu_acc(r_list.size(), std::vector<Accumulator>(L));
  std::vector<std::vector<double>> cross_top(r_list.size(), std::vector<double>(L));

  for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
    auto grid = observe_coupled_grid(dim, law, lambda_grid, r_list[ri], multipliers, replicas, replica_seed(seed, ri),
                                     options);
    for (std::size_t li = 0; li < L; ++li) {
      ModelParams p{dim, lambda_grid[li], law};
      Accumulator& mu = mu_acc[ri][li];
      std::vector<Accumulator> cross(multipliers.size());
      for (std::size_t k = 0; k < replicas; ++k) {
        mu.add(grid.mu[k][li]);
        for (std::size_t m = 0; m < multipliers.size(); ++m) cross[m].add(grid.crossing[k][li][m]);
      }
      scan.records.push_back(make_record("mu", p, r_list[ri], mu, seed, fp));
      for (std::size_t m = 0; m < multipliers.size(); ++m) {
        auto rec = make_record("crossing", p, r_list[ri], cross[m], seed, fp);
        rec.multiplier = multipliers[m];
        scan.records.push_back(rec);
      }
      cross_top[ri][li] = cross[m_top].mean();
    }
  }

  const std::size_t last = r_list.size() - 1;
  scan.crossing_at_max_r = cross_top[last];
  for (std::size_t li = 0; li < L; ++li) {
    const auto& top = mu_acc[last][li];
    const auto& bottom = mu_acc[0][li];
    scan.mu_at_max_r.push_back(top.mean());
    scan.mu_stderr_at_max_r.push_back(top.stderr_of_mean());
    double exponent = 0.0;
    if (last > 0 && bottom.mean() > 0.0) {
      exponent = top.mean() > 0.0 ? -std::log(top.mean() / bottom.mean()) / std::log(r_list[last] / r_list[0])
                                  : std::numeric_limits<double>::infinity();
    }
    scan.mu_decay_exponent.push_back(exponent);
    bool zero = top.mean() <= rule.stderr_multiple * top.stderr_of_mean();
    if (rule.decay_exponent > 0.0 && last > 0 && exponent >= rule.decay_exponent) zero = true;
    scan.mu_zero.push_back(zero ? 1 : 0);
  }
  scan.lambda_c_hat = bracket_first(lambda_grid, [&](std::size_t i) { return scan.crossing_at_max_r[i] >= 0.5; });
  scan.lambda_mu = bracket_first(lambda_grid, [&](std::size_t i) { return scan.mu_zero[i] != 0; });
  const auto& c = scan.lambda_c_hat;
  const auto& m = scan.lambda_mu;
  scan.brackets_agree = c.status == Bracket::Status::inside && m.status == Bracket::Status::inside &&
                        (c.hi_index > m.hi_index ? c.hi_index - m.hi_index : m.hi_index - c.hi_index) <= 1;
  return scan;
}

// ---- diagnostics ----

BracketDiagnostics diagnostics_bracket(const ModelParams& params, double r, std::size_t replicas, std::uint64_t seed,
                                       std::size_t net_size, const EstimatorOptions& options) {
  params.validate();
  require_replicas(replicas);
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (net_size < 1) throw std::invalid_argument("net size must be positive");
  const Point o = origin(params.dim);
  const auto net = fixed_directions(params.dim, net_size);
  struct Obs {
    double radial_r, annulus, radial_2r, sup;
  };
  std::vector<Obs> obs(replicas);
  for_each_replica(replicas, options, [&](std::size_t k) {
    auto rng = RandomStream::for_replica(seed, k);
    auto sample = sample_hitting(params, o, 2.0 * r, rng);
    Obs x{};
    x.radial_r = travel_time_radial(sample, r, kValueOnly).value;
    x.annulus = annulus_time(sample, r, kValueOnly).value;
    x.radial_2r = travel_time_radial(sample, 2.0 * r, kValueOnly).value;
    for (const auto& u : net) {
      Point target(params.dim);
      for (int c = 0; c < params.dim; ++c) target[c] = r * u[c];
      x.sup = std::max(x.sup, travel_time(sample, point_at(o), point_at(target), kValueOnly).value);
    }
    obs[k] = x;
  });
  BracketDiagnostics out;
  out.r = r;
  out.replicas = replicas;
  out.net_size = net.size();
  out.min_upper_slack = std::numeric_limits<double>::infinity();
  for (const auto& x : obs) {
    if (x.radial_r + x.annulus > x.radial_2r + 1e-9) ++out.lower_violations;
    out.radial_r.add(x.radial_r);
    out.annulus.add(x.annulus);
    out.radial_2r.add(x.radial_2r);
    out.net_sup.add(x.sup);
    double slack = x.sup + x.annulus - x.radial_2r;
    out.upper_slack.add(slack);
    out.min_upper_slack = std::min(out.min_upper_slack, slack);
  }
  return out;
}

// ---- greedy ----

std::vector<GreedyReplica> estimate_greedy(const ModelParams& params, double rho, double region_radius,
                                           std::size_t replicas, std::uint64_t seed, std::size_t beam,
                                           const EstimatorOptions& options) {
  params.validate();
  if (!(rho > 0.0) || !(region_radius > 0.0)) throw std::invalid_argument("rho and region radius must be positive");
  ModelParams truncated = params;
  truncated.law = params.law.truncated_above(rho);
  const Point o = origin(params.dim);
  std::vector<GreedyReplica> out(replicas);
  for_each_replica(replicas, options, [&](std::size_t k) {
    auto rng = RandomStream::for_replica(seed, k);
    auto sample = sample_hitting(truncated, o, region_radius, rng);
    WeightedPointSet set;
    set.origin = o;
    for (std::size_t i = 0; i < sample.balls.size(); ++i) {
      auto c = sample.balls.center(i);
      set.points.push_back({Point(c.begin(), c.end()), sample.balls.radius(i)});
    }
    GreedyReplica g;
    g.replica = k;
    g.points = set.size();
    g.exact = set.size() <= 10;
    g.value = g.exact ? greedy_sup_exact(set) : greedy_sup_heuristic(set, beam);
    out[k] = g;
  });
  return out;
}

}  // namespace bfpp
