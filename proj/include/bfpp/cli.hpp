#pragma once

#include <string>
#include <vector>

#include "bfpp/config.hpp"

namespace bfpp {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one subcommand and writes `<command>.csv` (plus any extra tables) and
/// `<command>.manifest.json` into `config.out`. Returns 0 on success and 1 on
/// runtime failure, after removing every file this run created.
int run(const RunConfig& config);

/// Full front end: parse argv (without the program name), run, map errors to
/// exit codes (2 for configuration errors).
int run_main(const std::vector<std::string>& args);

}  // namespace bfpp
