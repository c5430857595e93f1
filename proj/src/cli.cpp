#include "bfpp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bfpp/estimator.hpp"
#include "bfpp/greedy.hpp"
#include "bfpp/travel_time.hpp"
#include "json.hpp"

namespace bfpp {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kUnits =
    "lengths in the natural units of the radius law; lambda in ball centers per unit d-volume";

const char* role_name(WitnessRole r) {
  switch (r) {
    case WitnessRole::start: return "start";
    case WitnessRole::exit: return "exit";
    case WitnessRole::entry: return "entry";
    case WitnessRole::connector: return "connector";
    case WitnessRole::end: return "end";
  }
  return "?";
}

const char* status_name(Bracket::Status s) {
  switch (s) {
    case Bracket::Status::inside: return "inside";
    case Bracket::Status::below_grid: return "below_grid";
    case Bracket::Status::above_grid: return "above_grid";
  }
  return "?";
}

ordered_json bracket_json(const Bracket& b) {
  return {{"status", status_name(b.status)}, {"lo", b.lo}, {"hi", b.hi}, {"midpoint", b.midpoint()}};
}

// Collects output files under temporary names; commit() renames them into
// place, the destructor removes whatever was not committed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    std::error_code ec;
    for (const auto& f : pending_) fs::remove(dir_ / (f + ".partial"), ec);
    for (const auto& f : committed_) fs::remove(dir_ / f, ec);
  }

  void write(const std::string& name, const std::string& body) {
    fs::create_directories(dir_);
    pending_.push_back(name);
    std::ofstream out(dir_ / (name + ".partial"), std::ios::binary);
    out << body;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  }

  const std::vector<std::string>& names() const { return pending_; }

  void commit() {
    for (const auto& f : pending_) {
      fs::rename(dir_ / (f + ".partial"), dir_ / f);
      committed_.push_back(f);
    }
    pending_.clear();
    committed_.clear();
  }

 private:
  fs::path dir_;
  std::vector<std::string> pending_;
  std::vector<std::string> committed_;
};

std::string fmt(double v) { return format_double(v); }

std::string records_csv(const std::vector<EstimateRecord>& records) {
  std::ostringstream os;
  os << "quantity,dim,lambda,scale,multiplier,direction,mean,stderr,replicas\n";
  for (const auto& r : records) {
    os << r.quantity << ',' << r.dim << ',' << fmt(r.lambda) << ',' << fmt(r.scale) << ',' << fmt(r.multiplier) << ','
       << r.direction << ',' << fmt(r.mean) << ',' << fmt(r.stderr_of_mean) << ',' << r.replicas << '\n';
  }
  return os.str();
}

Point origin_of(int dim) { return Point(static_cast<std::size_t>(dim), 0.0); }

BallSample draw_sample(const RunConfig& c, double radius) {
  RandomStream rng(c.seed);
  return sample_hitting(c.model(), origin_of(c.dim), radius, rng);
}

EstimatorOptions options_of(const RunConfig& c) {
  EstimatorOptions o;
  o.threads = c.threads;
  o.directions = c.directions;
  return o;
}

// Fills the command-specific tables; returns extra manifest fields.
ordered_json dispatch(const RunConfig& c, OutputSet& out) {
  const auto params = c.model();
  const auto opts = options_of(c);
  ordered_json extra = ordered_json::object();

  if (c.command == "sample") {
    auto sample = draw_sample(c, c.r.front());
    std::ostringstream os;
    write_sample(os, sample);
    out.write("sample.csv", os.str());
    extra["balls"] = sample.balls.size();
    extra["columns"] = "header line is JSON; then x1..xd,radius";
  } else if (c.command == "travel-time") {
    const double r = c.r.front();
    BallSample sample;
    if (!c.sample_file.empty()) {
      std::ifstream in(c.sample_file);
      if (!in) throw std::runtime_error("cannot read sample file " + c.sample_file);
      sample = read_sample(in);
    } else {
      sample = draw_sample(c, c.terminal == "annulus" ? 2.0 * r : r);
    }
    auto res = c.terminal == "annulus" ? annulus_time(sample, r) : travel_time_radial(sample, r);
    ordered_json j;
    j["terminal"] = c.terminal;
    j["r"] = r;
    j["value"] = res.value;
    j["component_count"] = res.component_count;
    j["components_visited"] = res.components_visited;
    j["tau_check"] = res.tau_check;
    j["witness"] = ordered_json::array();
    for (const auto& v : res.witness) {
      ordered_json w;
      w["point"] = v.point;
      w["role"] = role_name(v.role);
      if (v.component == CostGraph::npos) {
        w["component"] = nullptr;
      } else {
        w["component"] = v.component;
      }
      j["witness"].push_back(w);
    }
    out.write("travel-time.json", j.dump(2) + "\n");
  } else if (c.command == "crossing") {
    out.write("crossing.csv", records_csv(estimate_crossing(params, c.r, c.replicas, c.seed, c.multiplier, opts)));
  } else if (c.command == "mu") {
    out.write("mu.csv", records_csv(estimate_mu(params, c.r, c.replicas, c.seed, opts)));
    extra["directions"] = fixed_directions(c.dim, c.directions);
  } else if (c.command == "pi") {
    auto est = estimate_pi(params, c.alpha, c.replicas, c.seed, opts);
    out.write("pi.csv", records_csv(est.records));
    std::ostringstream os;
    os << "alpha,pi,pi_stderr,pi_10alpha,pi_squared,lambda_epsilon,h,ratio\n";
    for (const auto& row : est.table) {
      os << fmt(row.alpha) << ',' << fmt(row.pi) << ',' << fmt(row.pi_stderr) << ',' << fmt(row.pi_10alpha) << ','
         << fmt(row.pi_squared) << ',' << fmt(row.lambda_epsilon) << ',' << fmt(row.h) << ',' << fmt(row.ratio)
         << '\n';
    }
    out.write("pi_table.csv", os.str());
    extra["note"] = "recursion table only; the inequality constant is unknown and not asserted";
  } else if (c.command == "scan") {
    MuZeroRule rule;
    auto scan = scan_lambda(c.dim, params.law, c.lambda_grid, c.r, c.multiplier, c.replicas, c.seed, rule, opts);
    out.write("scan.csv", records_csv(scan.records));
    std::ostringstream os;
    os << "lambda,crossing_max_r,mu_max_r,mu_stderr_max_r,mu_decay_exponent,mu_zero\n";
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
      os << fmt(scan.lambdas[i]) << ',' << fmt(scan.crossing_at_max_r[i]) << ',' << fmt(scan.mu_at_max_r[i]) << ','
         << fmt(scan.mu_stderr_at_max_r[i]) << ',' << fmt(scan.mu_decay_exponent[i]) << ','
         << int(scan.mu_zero[i]) << '\n';
    }
    out.write("scan_summary.csv", os.str());
    extra["mu_zero_rule"] = {{"stderr_multiple", rule.stderr_multiple}, {"decay_exponent", rule.decay_exponent}};
    extra["lambda_c_hat"] = bracket_json(scan.lambda_c_hat);
    extra["lambda_mu"] = bracket_json(scan.lambda_mu);
    extra["brackets_agree"] = scan.brackets_agree;
  } else if (c.command == "greedy") {
    auto reps = estimate_greedy(params, c.rho, c.region, c.replicas, c.seed, c.beam, opts);
    std::string tail;
    try {
      tail = fmt(greedy_tail_integral(params.law, c.lambda, c.rho, c.dim));
    } catch (const std::domain_error&) {
      tail = "inf";
    }
    std::ostringstream os;
    os << "replica,points,S,exact,tail_integral\n";
    for (const auto& g : reps) {
      os << g.replica << ',' << g.points << ',' << fmt(g.value) << ',' << (g.exact ? 1 : 0) << ',' << tail << '\n';
    }
    out.write("greedy.csv", os.str());
  } else if (c.command == "diagnostics") {
    std::ostringstream os;
    os << "r,replicas,net,lower_violations,mean_T_r,mean_T_annulus,mean_T_2r,mean_net_sup,mean_upper_slack,"
          "min_upper_slack\n";
    for (double r : c.r) {
      auto d = diagnostics_bracket(params, r, c.replicas, c.seed, c.net, opts);
      os << fmt(r) << ',' << d.replicas << ',' << d.net_size << ',' << d.lower_violations << ','
         << fmt(d.radial_r.mean()) << ',' << fmt(d.annulus.mean()) << ',' << fmt(d.radial_2r.mean()) << ','
         << fmt(d.net_sup.mean()) << ',' << fmt(d.upper_slack.mean()) << ',' << fmt(d.min_upper_slack) << '\n';
    }
    out.write("diagnostics.csv", os.str());
  } else {
    throw std::invalid_argument("unknown subcommand " + c.command);
  }
  return extra;
}

}  // namespace

int run(const RunConfig& config) {
  OutputSet out(config.out);
  try {
    validate(config);
    auto extra = dispatch(config, out);
    ordered_json m;
    m["command"] = config.command;
    m["version"] = kVersion;
    m["fingerprint"] = config_fingerprint(config);
    m["seed"] = config.seed;
    m["units"] = kUnits;
    m["config"] = ordered_json::object();
    std::istringstream lines(emit_config(config));
    for (std::string line; std::getline(lines, line);) {
      auto eq = line.find(" = ");
      m["config"][line.substr(0, eq)] = line.substr(eq + 3);
    }
    m["outputs"] = out.names();
    for (auto& [k, v] : extra.items()) m[k] = v;
    out.write(config.command + ".manifest.json", m.dump(2) + "\n");
    out.commit();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "bfpp " << config.command << ": " << e.what() << '\n';
    return 1;
  }
}

int run_main(const std::vector<std::string>& args) {
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const ConfigError& e) {
    std::cerr << "bfpp: invalid configuration: " << e.what() << '\n';
    return 2;
  }
  return run(config);
}

}  // namespace bfpp
