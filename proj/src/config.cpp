#include "bfpp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "bfpp/estimator.hpp"

namespace bfpp {

namespace {

const std::vector<std::string> kKeys = {"dim",  "lambda", "law",    "seed",     "replicas", "r",
                                        "alpha", "lambda-grid", "multiplier", "beam", "rho", "region",
                                        "terminal", "sample", "net", "directions", "threads", "out"};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  return x;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = v.find(',', start);
    out.push_back(to_double(key, trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

void require_increasing(const std::string& key, const std::vector<double>& v, bool allow_empty = false) {
  if (v.empty() && !allow_empty) throw ConfigError(key, "must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw ConfigError(key, "values must be positive");
    if (i && !(v[i] > v[i - 1])) throw ConfigError(key, "values must be strictly increasing");
  }
}

}  // namespace

ModelParams RunConfig::model() const {
  ModelParams p;
  p.dim = dim;
  p.lambda = lambda;
  p.law = RadiusLaw::parse(law);
  return p;
}

std::map<std::string, std::string> read_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(trim(line), "expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError(key, "unknown key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "dim") c.dim = to_int<int>(key, value);
  else if (key == "lambda") c.lambda = to_double(key, value);
  else if (key == "law") c.law = value;
  else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
  else if (key == "replicas") c.replicas = to_int<std::size_t>(key, value);
  else if (key == "r") c.r = to_list(key, value);
  else if (key == "alpha") c.alpha = to_list(key, value);
  else if (key == "lambda-grid") c.lambda_grid = to_list(key, value);
  else if (key == "multiplier") c.multiplier = to_list(key, value);
  else if (key == "beam") c.beam = to_int<std::size_t>(key, value);
  else if (key == "rho") c.rho = to_double(key, value);
  else if (key == "region") c.region = to_double(key, value);
  else if (key == "terminal") c.terminal = value;
  else if (key == "sample") c.sample_file = value;
  else if (key == "net") c.net = to_int<std::size_t>(key, value);
  else if (key == "directions") c.directions = to_int<std::size_t>(key, value);
  else if (key == "threads") c.threads = to_int<int>(key, value);
  else if (key == "out") c.out = value;
  else throw ConfigError(key, "unknown key");
}

void validate(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    throw ConfigError("command", "unknown subcommand '" + c.command + "'");
  }
  if (c.dim < 2 || c.dim > 10) throw ConfigError("dim", "must be in [2, 10]");
  if (!(c.lambda > 0.0)) throw ConfigError("lambda", "must be positive");
  RadiusLaw law = RadiusLaw::dirac(1.0);
  try {
    law = RadiusLaw::parse(c.law);
  } catch (const std::exception& e) {
    throw ConfigError("law", e.what());
  }
  if (!check_moment_d(law, c.dim)) {
    throw ConfigError("law", "d-th moment of the radius law is infinite (the ball union would cover space)");
  }
  if (c.replicas < 2) throw ConfigError("replicas", "must be at least 2");
  require_increasing("r", c.r);
  require_increasing("alpha", c.alpha);
  require_increasing("lambda-grid", c.lambda_grid, true);
  if (c.command == "scan" && c.lambda_grid.size() < 2) throw ConfigError("lambda-grid", "scan needs at least 2 values");
  if (c.multiplier.empty()) throw ConfigError("multiplier", "must not be empty");
  for (double m : c.multiplier) {
    if (!(m >= 2.0)) throw ConfigError("multiplier", "values must be >= 2");
  }
  if (c.beam < 1) throw ConfigError("beam", "must be at least 1");
  if (!(c.rho > 0.0)) throw ConfigError("rho", "must be positive");
  if (!(c.region > 0.0)) throw ConfigError("region", "must be positive");
  if (c.terminal != "radial" && c.terminal != "annulus") throw ConfigError("terminal", "must be radial or annulus");
  if (c.net < 1) throw ConfigError("net", "must be at least 1");
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"bfpp"};
  app.allow_extras(false);
  std::string command, config_file;
  std::map<std::string, std::string> flags;
  app.add_option("command", command)->required();
  app.add_option("--config", config_file);
  for (const auto& key : kKeys) app.add_option("--" + key, flags[key]);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError("argv", e.what());
  }

  RunConfig c;
  c.command = command;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ConfigError("config", "cannot read '" + config_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    for (const auto& [k, v] : read_config_text(ss.str())) apply_setting(c, k, v);
  }
  for (const auto& key : kKeys) {
    if (app.count("--" + key) > 0) apply_setting(c, key, flags[key]);
  }
  validate(c);
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "dim = " << c.dim << '\n'
     << "lambda = " << format_double(c.lambda) << '\n'
     << "law = " << c.law << '\n'
     << "seed = " << c.seed << '\n'
     << "replicas = " << c.replicas << '\n'
     << "r = " << list_text(c.r) << '\n'
     << "alpha = " << list_text(c.alpha) << '\n'
     << "lambda-grid = " << list_text(c.lambda_grid) << '\n'
     << "multiplier = " << list_text(c.multiplier) << '\n'
     << "beam = " << c.beam << '\n'
     << "rho = " << format_double(c.rho) << '\n'
     << "region = " << format_double(c.region) << '\n'
     << "terminal = " << c.terminal << '\n'
     << "sample = " << c.sample_file << '\n'
     << "net = " << c.net << '\n'
     << "directions = " << c.directions << '\n'
     << "threads = " << c.threads << '\n'
     << "out = " << c.out << '\n';
  return os.str();
}

std::uint64_t config_fingerprint(const RunConfig& c) {
  RunConfig k = c;
  k.out.clear();
  k.threads = 0;
  // Law text is canonicalized so equivalent spellings hash alike.
  try {
    k.law = RadiusLaw::parse(c.law).to_string();
  } catch (const std::exception&) {
  }
  return stable_hash(c.command + "\n" + emit_config(k));
}

}  // namespace bfpp
