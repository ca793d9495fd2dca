#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace chse::cli {

using Json = nlohmann::ordered_json;

enum class Kind { Int, Double, String, DoubleList, Bool };

struct OptionDef {
  std::string key;  // snake_case in config files, --kebab-case on the command line
  Kind kind;
  Json def;
  std::string help;
};

const std::vector<std::string>& subcommands();

// Options of a subcommand, including the common `out` and `threads`.
const std::vector<OptionDef>& options_for(const std::string& subcommand);

std::string flag_name(const std::string& key);

// A double list from "a,b,c", "lo:hi:count" (inclusive, evenly spaced) or a
// JSON array.
std::vector<double> parse_double_list(const Json& v);

struct RunConfig {
  std::string subcommand;
  Json values;  // fully resolved, keys in options_for order

  long long integer(const std::string& key) const;
  unsigned uint(const std::string& key) const;
  double real(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  bool flag(const std::string& key) const;
};

// Defaults, then keys from the config file, then flags. Unknown keys and
// unparsable values raise InvalidArgument.
RunConfig resolve(const std::string& subcommand, const Json& file, const std::map<std::string, std::string>& flags);

// Range and consistency checks before any compute.
void validate(const RunConfig& cfg);

}  // namespace chse::cli
