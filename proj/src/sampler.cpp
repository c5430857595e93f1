#include "bfpp/sampler.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bfpp {

void ModelParams::validate() const {
  if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!check_moment_d(law, dim)) throw std::invalid_argument("radius law has infinite d-th moment");
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double hitting_intensity(const ModelParams& params, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("hitting_intensity needs r >= 0");
  const int d = params.dim;
  double s = 0.0;
  for (int k = 0; k <= d; ++k) {
    double m = params.law.moment(k);
    if (!std::isfinite(m)) throw std::domain_error("hitting_intensity: infinite moment");
    s += binomial(d, k) * std::pow(r, d - k) * m;
  }
  return params.lambda * unit_ball_volume(d) * s;
}

std::vector<std::size_t> BallSample::touching(double radius) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (distance(balls.center(i), region_center) < radius + balls.radius(i)) out.push_back(i);
  }
  return out;
}

BallSample BallSample::restricted(double radius) const {
  if (radius > complete_for_radius) throw std::invalid_argument("restriction radius exceeds completeness radius");
  auto idx = touching(radius);
  BallSample out{balls.subset(idx), params, region_center, radius, seed};
  return out;
}

BallSample sample_hitting(const ModelParams& params, const Point& center, double r, RandomStream& rng) {
  params.validate();
  if (!(r > 0.0)) throw std::invalid_argument("sample_hitting needs r > 0");
  const int d = params.dim;
  if (static_cast<int>(center.size()) != d) throw std::invalid_argument("region center has wrong dimension");
  BallSample out{BallSet(d), params, center, r, rng.seed()};
  if (params.law.total_mass() == 0.0) return out;

  const auto n = rng.poisson(hitting_intensity(params, r));
  out.balls.reserve(n);
  Point c(d);
  for (std::uint64_t i = 0; i < n; ++i) {
    double rho = sample_hitting_tilted_radius(params.law, r, d, rng);
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      c[k] = rng.normal();
      s += c[k] * c[k];
    }
    double dist = (r + rho) * std::pow(rng.uniform(), 1.0 / d);
    s = std::sqrt(s);
    for (int k = 0; k < d; ++k) c[k] = center[k] + dist * c[k] / s;
    out.balls.add(c, rho);
  }
  return out;
}

BallSample superpose(const BallSample& base, const BallSample& extra) {
  if (base.region_center != extra.region_center || base.complete_for_radius != extra.complete_for_radius) {
    throw std::invalid_argument("superpose: region mismatch");
  }
  if (!(base.params.law == extra.params.law) || base.params.dim != extra.params.dim) {
    throw std::invalid_argument("superpose: law mismatch");
  }
  BallSample out = base;
  out.params.lambda = base.params.lambda + extra.params.lambda;
  out.balls.append(extra.balls);
  return out;
}

BallSample superpose(const BallSample& base, double extra_lambda, RandomStream& rng) {
  if (!(extra_lambda > 0.0)) throw std::invalid_argument("superpose needs extra_lambda > 0");
  ModelParams p = base.params;
  p.lambda = extra_lambda;
  return superpose(base, sample_hitting(p, base.region_center, base.complete_for_radius, rng));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad number in sample CSV");
  return v;
}

}  // namespace

void write_sample(std::ostream& os, const BallSample& sample) {
  nlohmann::json header = {
      {"dim", sample.params.dim},
      {"lambda", sample.params.lambda},
      {"law", sample.params.law.to_string()},
      {"seed", sample.seed},
      {"region_center", sample.region_center},
      {"complete_for_radius", sample.complete_for_radius},
      {"balls", sample.balls.size()},
  };
  os << header.dump() << '\n';
  const int d = sample.params.dim;
  for (int k = 1; k <= d; ++k) os << 'x' << k << ',';
  os << "radius\n";
  for (std::size_t i = 0; i < sample.balls.size(); ++i) {
    for (double x : sample.balls.center(i)) os << format_double(x) << ',';
    os << format_double(sample.balls.radius(i)) << '\n';
  }
}

BallSample read_sample(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("sample: missing header");
  auto header = nlohmann::json::parse(line);
  ModelParams params;
  params.dim = header.at("dim").get<int>();
  params.lambda = header.at("lambda").get<double>();
  params.law = RadiusLaw::parse(header.at("law").get<std::string>());
  BallSample out{BallSet(params.dim), params, header.at("region_center").get<Point>(),
                 header.at("complete_for_radius").get<double>(), header.at("seed").get<std::uint64_t>()};
  if (!std::getline(is, line)) throw std::invalid_argument("sample: missing column line");
  Point c(params.dim);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (int k = 0; k <= params.dim; ++k) {
      auto comma = line.find(',', pos);
      bool last = k == params.dim;
      if (last != (comma == std::string::npos)) throw std::invalid_argument("sample: wrong column count");
      auto field = std::string_view(line).substr(pos, last ? std::string::npos : comma - pos);
      double v = parse_double(field);
      if (last) {
        out.balls.add(c, v);
      } else {
        c[k] = v;
      }
      pos = comma + 1;
    }
  }
  return out;
}

}  // namespace bfpp
