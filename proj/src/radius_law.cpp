#include "bfpp/radius_law.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bfpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto first = s.data();
  auto last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw std::invalid_argument("radius law: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '<') ++depth;
    if (s[i] == '>') --depth;
    if (depth < 0) throw std::invalid_argument("radius law: unbalanced '>'");
    if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) throw std::invalid_argument("radius law: unbalanced '<'");
  out.push_back(s.substr(start));
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

RadiusLaw RadiusLaw::dirac(double rho0) {
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) throw std::invalid_argument("dirac radius must be positive");
  return RadiusLaw(Kind::dirac, rho0, 0.0, 1.0);
}

RadiusLaw RadiusLaw::uniform(double a, double b) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) throw std::invalid_argument("uniform law needs 0 < a < b");
  return RadiusLaw(Kind::uniform, a, b, 1.0);
}

RadiusLaw RadiusLaw::pareto(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    throw std::invalid_argument("pareto law needs shape > 0 and scale > 0");
  }
  return RadiusLaw(Kind::pareto, shape, scale, 1.0);
}

RadiusLaw RadiusLaw::mixture(const std::vector<std::pair<double, RadiusLaw>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mixture needs at least one component");
  double total = 0.0;
  for (const auto& [w, law] : parts) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("mixture weights must be positive");
    if (!law.is_probability()) throw std::invalid_argument("mixture components must be probability laws");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to 1");
  RadiusLaw out(Kind::mixture, 0.0, 0.0, 1.0);
  for (const auto& [w, law] : parts) {
    out.parts_.push_back({w / total, std::make_shared<const RadiusLaw>(law)});
  }
  return out;
}

RadiusLaw RadiusLaw::parse(std::string_view text) {
  if (text.size() >= 2 && text.front() == '<' && text.back() == '>') text = text.substr(1, text.size() - 2);
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("radius law: missing ':' in '" + std::string(text) + "'");
  auto head = text.substr(0, colon);
  auto rest = text.substr(colon + 1);
  if (head == "mix") {
    std::vector<std::pair<double, RadiusLaw>> parts;
    for (auto item : split_top_level(rest, ',')) {
      auto star = item.find('*');
      if (star == std::string_view::npos) throw std::invalid_argument("radius law: mixture item needs 'w*law'");
      parts.emplace_back(parse_number(item.substr(0, star), "mixture weight"), parse(item.substr(star + 1)));
    }
    return mixture(parts);
  }
  auto fields = split_top_level(rest, ':');
  if (head == "dirac" && fields.size() == 1) return dirac(parse_number(fields[0], "dirac radius"));
  if (head == "uniform" && fields.size() == 2) {
    return uniform(parse_number(fields[0], "uniform lower bound"), parse_number(fields[1], "uniform upper bound"));
  }
  if (head == "pareto" && fields.size() == 2) {
    return pareto(parse_number(fields[0], "pareto shape"), parse_number(fields[1], "pareto scale"));
  }
  throw std::invalid_argument("radius law: unrecognized '" + std::string(text) + "'");
}

std::string RadiusLaw::to_string() const {
  switch (kind_) {
    case Kind::dirac:
      return "dirac:" + fmt(p0_);
    case Kind::uniform:
      return "uniform:" + fmt(p0_) + ":" + fmt(p1_);
    case Kind::pareto:
      return "pareto:" + fmt(p0_) + ":" + fmt(p1_);
    case Kind::mixture: {
      std::string s = "mix:";
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ',';
        const auto& sub = *parts_[i].law;
        auto inner = sub.to_string();
        s += fmt(parts_[i].weight / mass_) + "*" + (sub.kind_ == Kind::mixture ? "<" + inner + ">" : inner);
      }
      return s;
    }
  }
  return {};
}

bool operator==(const RadiusLaw& a, const RadiusLaw& b) {
  if (a.kind_ != b.kind_ || a.mass_ != b.mass_ || a.p0_ != b.p0_ || a.p1_ != b.p1_) return false;
  if (a.parts_.size() != b.parts_.size()) return false;
  for (std::size_t i = 0; i < a.parts_.size(); ++i) {
    if (a.parts_[i].weight != b.parts_[i].weight || !(*a.parts_[i].law == *b.parts_[i].law)) return false;
  }
  return true;
}

// Unit-mass functionals. Mixtures carry their mass in the weights, so the
// mixture branch returns the already-scaled value; callers divide accordingly.

double RadiusLaw::unit_moment(double k) const {
  switch (kind_) {
    case Kind::dirac:
      return std::pow(p0_, k);
    case Kind::uniform:
      if (std::abs(k + 1.0) < 1e-300) return std::log(p1_ / p0_) / (p1_ - p0_);
      return (std::pow(p1_, k + 1.0) - std::pow(p0_, k + 1.0)) / ((k + 1.0) * (p1_ - p0_));
    case Kind::pareto:
      if (p0_ <= k) return kInf;
      return p0_ * std::pow(p1_, k) / (p0_ - k);
    case Kind::mixture: {
      double s = 0.0;
      for (const auto& c : parts_) {
        if (c.weight > 0.0) s += c.weight * c.law->moment(k);
      }
      return s;
    }
  }
  return kInf;
}

double RadiusLaw::unit_tail_moment(double k, double alpha) const {
  switch (kind_) {
    case Kind::dirac:
      return p0_ >= alpha ? std::pow(p0_, k) : 0.0;
    case Kind::uniform: {
      if (alpha >= p1_) return 0.0;
      double lo = std::max(p0_, alpha);
      return (std::pow(p1_, k + 1.0) - std::pow(lo, k + 1.0)) / ((k + 1.0) * (p1_ - p0_));
    }
    case Kind::pareto: {
      if (p0_ <= k) return kInf;
      if (alpha <= p1_) return p0_ * std::pow(p1_, k) / (p0_ - k);
      return p0_ * std::pow(p1_, p0_) * std::pow(alpha, k - p0_) / (p0_ - k);
    }
    case Kind::mixture: {
      double s = 0.0;
      for (const auto& c : parts_) {
        if (c.weight > 0.0) s += c.weight * c.law->tail_moment(k, alpha);
      }
      return s;
    }
  }
  return kInf;
}

double RadiusLaw::unit_survival(double r) const {
  switch (kind_) {
    case Kind::dirac:
      return r <= p0_ ? 1.0 : 0.0;
    case Kind::uniform:
      if (r <= p0_) return 1.0;
      if (r >= p1_) return 0.0;
      return (p1_ - r) / (p1_ - p0_);
    case Kind::pareto:
      return r <= p1_ ? 1.0 : std::pow(p1_ / r, p0_);
    case Kind::mixture: {
      double s = 0.0;
      for (const auto& c : parts_) s += c.weight * c.law->survival(r);
      return s;
    }
  }
  return 0.0;
}

double RadiusLaw::moment(double k) const {
  if (mass_ == 0.0) return 0.0;
  return kind_ == Kind::mixture ? unit_moment(k) : mass_ * unit_moment(k);
}

double RadiusLaw::tail_moment(double k, double alpha) const {
  if (mass_ == 0.0) return 0.0;
  return kind_ == Kind::mixture ? unit_tail_moment(k, alpha) : mass_ * unit_tail_moment(k, alpha);
}

double RadiusLaw::survival(double r) const {
  if (mass_ == 0.0) return 0.0;
  return kind_ == Kind::mixture ? unit_survival(r) : mass_ * unit_survival(r);
}

double RadiusLaw::mass_below(double r) const { return mass_ - survival(r); }

double RadiusLaw::support_max() const {
  switch (kind_) {
    case Kind::dirac:
      return p0_;
    case Kind::uniform:
      return p1_;
    case Kind::pareto:
      return kInf;
    case Kind::mixture: {
      double m = 0.0;
      for (const auto& c : parts_) {
        if (c.weight > 0.0) m = std::max(m, c.law->support_max());
      }
      return m;
    }
  }
  return kInf;
}

RadiusLaw RadiusLaw::truncated_above(double rho) const {
  if (!(rho > 0.0)) throw std::invalid_argument("truncation radius must be positive");
  RadiusLaw out = *this;
  switch (kind_) {
    case Kind::dirac:
      out.mass_ = p0_ >= rho ? mass_ : 0.0;
      break;
    case Kind::uniform:
      if (rho >= p1_) {
        out.mass_ = 0.0;
      } else if (rho > p0_) {
        out.p0_ = rho;
        out.mass_ = mass_ * (p1_ - rho) / (p1_ - p0_);
      }
      break;
    case Kind::pareto:
      if (rho > p1_) {
        out.mass_ = mass_ * std::pow(p1_ / rho, p0_);
        out.p1_ = rho;
      }
      break;
    case Kind::mixture: {
      double total = 0.0;
      for (auto& c : out.parts_) {
        double kept = c.law->survival(rho);
        if (kept > 0.0) {
          c.law = std::make_shared<const RadiusLaw>(c.law->truncated_above(rho).normalized());
        }
        c.weight *= kept;
        total += c.weight;
      }
      out.mass_ = total;
      break;
    }
  }
  return out;
}

RadiusLaw RadiusLaw::normalized() const {
  if (!(mass_ > 0.0)) throw std::invalid_argument("cannot normalize a zero-mass law");
  RadiusLaw out = *this;
  if (kind_ == Kind::mixture) {
    for (auto& c : out.parts_) c.weight /= mass_;
  }
  out.mass_ = 1.0;
  return out;
}

bool check_moment_d(const RadiusLaw& law, int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  return std::isfinite(law.moment(d));
}

bool check_greedy_condition(const RadiusLaw& law, int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  switch (law.kind()) {
    case RadiusLaw::Kind::dirac:
    case RadiusLaw::Kind::uniform:
      return true;
    case RadiusLaw::Kind::pareto:
      return law.total_mass() == 0.0 || law.shape() / d > 1.0;
    case RadiusLaw::Kind::mixture:
      // (sum w_i s_i)^(1/d) is integrable iff every weighted s_i^(1/d) is.
      return std::all_of(law.components().begin(), law.components().end(), [d](const auto& c) {
        return c.weight == 0.0 || check_greedy_condition(*c.law, d);
      });
  }
  return false;
}

double epsilon_tail(const RadiusLaw& law, double alpha, int d) {
  if (!(alpha > 0.0)) throw std::invalid_argument("epsilon_tail needs alpha > 0");
  if (!check_moment_d(law, d)) throw std::domain_error("epsilon_tail: d-th moment is infinite");
  return law.tail_moment(d, alpha);
}

RadiusLaw truncate_above(const RadiusLaw& law, double rho) { return law.truncated_above(rho); }

double sample_radius(const RadiusLaw& law, RandomStream& rng) {
  if (!law.is_probability()) throw std::invalid_argument("sample_radius needs a normalized law");
  switch (law.kind()) {
    case RadiusLaw::Kind::dirac:
      return law.dirac_value();
    case RadiusLaw::Kind::uniform: {
      double u = rng.uniform();
      return std::min(law.upper(), law.lower() + u * (law.upper() - law.lower()));
    }
    case RadiusLaw::Kind::pareto: {
      double u = rng.uniform();
      return law.scale() * std::pow(1.0 - u, -1.0 / law.shape());
    }
    case RadiusLaw::Kind::mixture: {
      double u = rng.uniform();
      const auto& parts = law.components();
      double acc = 0.0;
      std::size_t pick = parts.size() - 1;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        acc += parts[i].weight;
        if (u < acc) {
          pick = i;
          break;
        }
      }
      return sample_radius(*parts[pick].law, rng);
    }
  }
  return 0.0;
}

double sample_moment_tilted_radius(const RadiusLaw& law, int k, RandomStream& rng) {
  if (k == 0) return sample_radius(law.is_probability() ? law : law.normalized(), rng);
  switch (law.kind()) {
    case RadiusLaw::Kind::dirac:
      return law.dirac_value();
    case RadiusLaw::Kind::uniform: {
      // density ~ rho^k on [a, b]
      double u = rng.uniform();
      double a = law.lower(), b = law.upper();
      double ak = std::pow(a, k + 1.0), bk = std::pow(b, k + 1.0);
      double v = std::pow(ak + u * (bk - ak), 1.0 / (k + 1.0));
      return std::clamp(v, a, b);
    }
    case RadiusLaw::Kind::pareto: {
      if (law.shape() <= k) throw std::domain_error("tilted sampling: moment is infinite");
      double u = rng.uniform();
      return law.scale() * std::pow(1.0 - u, -1.0 / (law.shape() - k));
    }
    case RadiusLaw::Kind::mixture: {
      const auto& parts = law.components();
      std::vector<double> w(parts.size());
      for (std::size_t i = 0; i < parts.size(); ++i) {
        w[i] = parts[i].weight > 0.0 ? parts[i].weight * parts[i].law->moment(k) : 0.0;
        if (!std::isfinite(w[i])) throw std::domain_error("tilted sampling: moment is infinite");
      }
      double total = std::accumulate(w.begin(), w.end(), 0.0);
      double u = rng.uniform() * total;
      double acc = 0.0;
      std::size_t pick = parts.size() - 1;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        acc += w[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
      return sample_moment_tilted_radius(*parts[pick].law, k, rng);
    }
  }
  return 0.0;
}

double sample_hitting_tilted_radius(const RadiusLaw& law, double r, int d, RandomStream& rng) {
  if (!(r >= 0.0)) throw std::invalid_argument("tilted sampling needs r >= 0");
  if (!check_moment_d(law, d)) throw std::domain_error("tilted sampling: d-th moment is infinite");
  if (law.kind() == RadiusLaw::Kind::dirac) return law.dirac_value();
  // (rho + r)^d = sum_k C(d,k) r^(d-k) rho^k: pick the term, then draw from the rho^k tilt.
  int k = d;
  if (r > 0.0) {
    std::vector<double> w(d + 1);
    double total = 0.0;
    for (int j = 0; j <= d; ++j) {
      w[j] = binomial(d, j) * std::pow(r, d - j) * law.moment(j);
      total += w[j];
    }
    double u = rng.uniform() * total;
    double acc = 0.0;
    for (int j = 0; j <= d; ++j) {
      acc += w[j];
      if (u < acc) {
        k = j;
        break;
      }
    }
  }
  return sample_moment_tilted_radius(law, k, rng);
}

}  // namespace bfpp
