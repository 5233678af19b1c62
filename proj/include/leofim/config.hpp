#pragma once

#include <string>

#include "leofim/sweep.hpp"

namespace leofim {

/// Raised on any schema violation; the message names the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates a JSON run configuration. See README for the schema.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace leofim
