#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfpp/sampler.hpp"

namespace bfpp {

/// Invalid configuration; `key` names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

inline const std::vector<std::string> kCommands = {"sample", "travel-time", "crossing", "pi",
                                                   "mu",     "scan",        "greedy",   "diagnostics"};

/// Resolved run configuration. Lengths are in the units of the radius law;
/// lambda counts ball centers per unit d-volume.
struct RunConfig {
  std::string command;
  int dim = 2;
  double lambda = 0.3;
  std::string law = "dirac:1";
  std::uint64_t seed = 1;
  std::size_t replicas = 100;
  std::vector<double> r = {10.0, 20.0, 40.0};
  std::vector<double> alpha = {1.0};
  std::vector<double> lambda_grid;
  std::vector<double> multiplier = {2.0, 3.0, 5.0};
  std::size_t beam = 64;
  double rho = 1.0;              // greedy: radius truncation
  double region = 10.0;          // greedy: hitting-region radius
  std::string terminal = "radial";  // travel-time: radial | annulus
  std::string sample_file;       // travel-time: read balls instead of sampling
  std::size_t net = 64;          // diagnostics: directions on S(r)
  std::size_t directions = 4;    // mu: directional records
  int threads = 0;
  std::string out = ".";

  ModelParams model() const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses `key = value` lines (`#` starts a comment). Unknown keys throw.
std::map<std::string, std::string> read_config_text(const std::string& text);

/// Builds a config from `argv[1..]`: the subcommand, then `--key value`
/// flags. `--config FILE` loads a key = value file; flags override it.
/// Throws ConfigError on unknown keys, unparsable values or out-of-range values.
RunConfig parse_config(const std::vector<std::string>& args);

/// Applies key/value settings to `config` and validates nothing.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Checks ranges and model validity.
void validate(const RunConfig& config);

/// Canonical `key = value` text; parse of this text restores the config.
std::string emit_config(const RunConfig& config);

/// Stable hash over every field that changes results (not out/threads).
std::uint64_t config_fingerprint(const RunConfig& config);

}  // namespace bfpp
