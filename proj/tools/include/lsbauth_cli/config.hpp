#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsbauth/ncs_sim.hpp"
#include "lsbauth/numfmt.hpp"

namespace lsbauth::cli {

/// Everything a subcommand may read. Fields not present in the file keep the
/// hydro turbine defaults.
struct RunConfig {
  SimConfig sim;
  std::vector<NumberFormat> metric_formats;  // empty: use sim.format
  std::vector<int> metric_L;                 // empty: 0..m
  std::vector<int> security_L{2, 4, 8};
  std::vector<int> security_r{1, 2, 3};
  std::vector<std::uint64_t> security_T{1};
};

RunConfig default_config();

/// Parses the YAML schema documented in the README. Unknown keys, wrong
/// shapes and bad values throw ConfigError. The model is not validated here.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// "3", "0..8", "0,2,4" or a mix such as "0..2,8". Throws ConfigError.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace lsbauth::cli
