#include "chse/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "chse/errors.hpp"
#include "chse/parallel.hpp"

namespace chse::cli {

namespace {

std::vector<OptionDef> with_common(std::vector<OptionDef> defs) {
  defs.push_back({"out", Kind::String, "chse-out", "output directory"});
  defs.push_back({"threads", Kind::Int, 0, "worker threads (0: all cores)"});
  return defs;
}

const std::map<std::string, std::vector<OptionDef>>& table() {
  static const std::map<std::string, std::vector<OptionDef>> t = {
      {"word", with_common({
                   {"m", Kind::Int, 1, "word order"},
                   {"length", Kind::Int, 13, "number of symbols"},
                   {"theta0", Kind::Double, 0.0, "rotation phase in turns (nonzero uses rotation coding)"},
                   {"method", Kind::String, "concat", "concat | rotation"},
                   {"complexity_max", Kind::Int, 0, "largest factor length for the complexity table (0: none)"},
               })},
      {"haar-moment", with_common({
                          {"d", Kind::Int, 2, "local dimension"},
                          {"k", Kind::Int, 2, "number of replicas"},
                          {"samples", Kind::Int, 0, "Monte-Carlo samples (0: analytic only)"},
                          {"seed", Kind::Int, 1, "random seed"},
                          {"bits", Kind::Int, 53, "precision bits (53: double)"},
                      })},
      {"trace-distance", with_common({
                             {"d", Kind::Int, 2, "local dimension"},
                             {"m", Kind::Int, 1, "word order"},
                             {"k", Kind::Int, 2, "number of replicas"},
                             {"n_max", Kind::Int, 30, "last Fibonacci index"},
                             {"seed", Kind::Int, 1, "random seed"},
                             {"gates", Kind::String, "haar", "haar | qubit"},
                             {"theta1", Kind::Double, 0.39, "U0 angle, units of pi (qubit gates)"},
                             {"theta2", Kind::Double, 0.39, "U1 angle, units of pi (qubit gates)"},
                             {"theta3", Kind::Double, 0.5, "U1 axis angle, units of pi (qubit gates)"},
                             {"n_states", Kind::Int, 1, "random initial states"},
                             {"bits", Kind::Int, 512, "precision bits (53: double)"},
                             {"max_bits", Kind::Int, 0, "precision ceiling for restarts (0: no restarts)"},
                             {"ledger_ratio", Kind::Double, 1e-3, "largest allowed epsilon/delta"},
                         })},
      {"gamma-map", with_common({
                        {"theta1", Kind::DoubleList, "0:0.5:6", "U0 angles, units of pi"},
                        {"theta2", Kind::DoubleList, "0:0.5:6", "U1 angles, units of pi"},
                        {"theta3", Kind::Double, 0.5, "U1 axis angle, units of pi"},
                        {"k", Kind::Int, 2, "number of replicas"},
                        {"n_max", Kind::Int, 200, "last Fibonacci index"},
                        {"n_ref", Kind::Int, 0, "reference index for zeta (0: 0.8 n_max)"},
                        {"n_states", Kind::Int, 2, "random initial states"},
                        {"seed", Kind::Int, 1, "random seed"},
                        {"bits", Kind::Int, 512, "starting precision bits (53: double)"},
                        {"max_bits", Kind::Int, 4096, "precision ceiling"},
                        {"ledger_ratio", Kind::Double, 1e-3, "largest allowed epsilon/delta"},
                    })},
      {"bound-check", with_common({
                          {"d", Kind::Int, 3, "Hilbert-space dimension"},
                          {"instances", Kind::Int, 10, "random (H, psi) pairs"},
                          {"seed", Kind::Int, 1, "random seed"},
                      })},
      {"coin-baseline", with_common({
                            {"p", Kind::Double, 0.5, "probability of symbol 1"},
                            {"k", Kind::Int, 2, "number of replicas"},
                            {"t_max", Kind::Int, 1000, "last time"},
                            {"per_decade", Kind::Int, 10, "reported times per decade"},
                            {"n_states", Kind::Int, 1, "random initial states"},
                            {"seed", Kind::Int, 1, "random seed"},
                        })},
      {"manybody", with_common({
                       {"L", Kind::Int, 8, "chain length"},
                       {"k", Kind::Int, 1, "number of replicas"},
                       {"t_max", Kind::Int, 1000, "last time"},
                       {"n_states", Kind::Int, 10, "random product initial states"},
                       {"seed", Kind::Int, 1, "random seed"},
                       {"per_decade", Kind::Int, 20, "window edges per decade"},
                       {"tau", Kind::Double, 1.0, "kick duration"},
                       {"edge", Kind::Double, 0.1, "edge-field coefficient"},
                       {"check_single_pass", Kind::Bool, false, "compare against one sequential pass"},
                   })},
      {"deep-therm", with_common({
                         {"L", Kind::Int, 10, "chain length"},
                         {"n_a", Kind::Int, 2, "sites kept in subsystem A"},
                         {"k", Kind::Int, 1, "number of replicas"},
                         {"t_max", Kind::Int, 200, "last time"},
                         {"n_states", Kind::Int, 4, "random product initial states"},
                         {"seed", Kind::Int, 1, "random seed"},
                         {"ref_samples", Kind::Int, 200, "Haar samples for the reference"},
                         {"tau", Kind::Double, 1.0, "kick duration"},
                         {"edge", Kind::Double, 0.1, "edge-field coefficient"},
                     })},
  };
  return t;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("option " + key + ": not a number: '" + s + "'");
  }
}

Json coerce(const OptionDef& def, const Json& v) {
  const auto& key = def.key;
  switch (def.kind) {
    case Kind::Int: {
      if (v.is_number_integer()) return v.get<long long>();
      if (v.is_string()) {
        const auto s = v.get<std::string>();
        long long x = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
          throw InvalidArgument("option " + key + ": not an integer: '" + s + "'");
        return x;
      }
      break;
    }
    case Kind::Double:
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return parse_double(v.get<std::string>(), key);
      break;
    case Kind::String:
      if (v.is_string()) return v;
      break;
    case Kind::DoubleList:
      return parse_double_list(v);
    case Kind::Bool:
      if (v.is_boolean()) return v;
      if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
      }
      break;
  }
  throw InvalidArgument("option " + key + ": wrong type");
}

const OptionDef* find(const std::vector<OptionDef>& defs, const std::string& key) {
  for (const auto& d : defs)
    if (d.key == key) return &d;
  return nullptr;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = {"word",          "haar-moment", "trace-distance", "gamma-map",
                                             "bound-check",   "coin-baseline", "manybody",     "deep-therm"};
  return s;
}

const std::vector<OptionDef>& options_for(const std::string& subcommand) {
  const auto it = table().find(subcommand);
  if (it == table().end()) throw InvalidArgument("unknown subcommand '" + subcommand + "'");
  return it->second;
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (auto& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

std::vector<double> parse_double_list(const Json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw InvalidArgument("list entries must be numbers");
      out.push_back(x.get<double>());
    }
  } else if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (std::count(s.begin(), s.end(), ':') == 2) {
      const auto a = s.find(':'), b = s.rfind(':');
      const double lo = parse_double(s.substr(0, a), "list");
      const double hi = parse_double(s.substr(a + 1, b - a - 1), "list");
      const double n = parse_double(s.substr(b + 1), "list");
      if (n < 1 || n != std::floor(n)) throw InvalidArgument("range count must be a positive integer");
      for (int i = 0; i < static_cast<int>(n); ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    } else {
      std::size_t start = 0;
      while (start <= s.size()) {
        const auto end = s.find(',', start);
        out.push_back(parse_double(s.substr(start, end - start), "list"));
        if (end == std::string::npos) break;
        start = end + 1;
      }
    }
  } else {
    throw InvalidArgument("expected a list of numbers");
  }
  if (out.empty()) throw InvalidArgument("empty list");
  for (double x : out)
    if (!std::isfinite(x)) throw InvalidArgument("list entries must be finite");
  return out;
}

long long RunConfig::integer(const std::string& key) const { return values.at(key).get<long long>(); }
unsigned RunConfig::uint(const std::string& key) const { return static_cast<unsigned>(values.at(key).get<long long>()); }
double RunConfig::real(const std::string& key) const { return values.at(key).get<double>(); }
std::string RunConfig::str(const std::string& key) const { return values.at(key).get<std::string>(); }
std::vector<double> RunConfig::list(const std::string& key) const { return values.at(key).get<std::vector<double>>(); }
bool RunConfig::flag(const std::string& key) const { return values.at(key).get<bool>(); }

RunConfig resolve(const std::string& subcommand, const Json& file, const std::map<std::string, std::string>& flags) {
  const auto& defs = options_for(subcommand);
  RunConfig cfg;
  cfg.subcommand = subcommand;
  cfg.values = Json::object();
  for (const auto& d : defs) cfg.values[d.key] = coerce(d, d.def);
  if (!file.is_null()) {
    if (!file.is_object()) throw InvalidArgument("config file must hold a JSON object");
    for (const auto& [key, v] : file.items()) {
      if (key == "subcommand") {
        if (v != subcommand) throw InvalidArgument("config file is for subcommand " + v.dump());
        continue;
      }
      const auto* d = find(defs, key);
      if (!d) throw InvalidArgument("unknown config key '" + key + "' for " + subcommand);
      cfg.values[key] = coerce(*d, v);
    }
  }
  for (const auto& [key, v] : flags) {
    const auto* d = find(defs, key);
    if (!d) throw InvalidArgument("unknown option " + flag_name(key) + " for " + subcommand);
    cfg.values[key] = coerce(*d, v);
  }
  if (cfg.integer("threads") == 0) cfg.values["threads"] = static_cast<long long>(default_threads());
  return cfg;
}

void validate(const RunConfig& c) {
  const auto& s = c.subcommand;
  require(c.integer("threads") >= 1 && c.integer("threads") <= 1024, "threads must lie in [1, 1024]");
  require(!c.str("out").empty(), "out must not be empty");
  auto positive = [&](const std::string& key, long long lo, long long hi) {
    const auto v = c.integer(key);
    require(v >= lo && v <= hi, key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                                    std::to_string(v));
  };
  auto bits_ok = [&](const std::string& key) {
    const auto b = c.integer(key);
    require(b == 53 || (b >= 64 && b <= 65536), key + " must be 53 (double) or in [64, 65536]");
  };
  if (s == "word") {
    positive("m", 1, 64);
    positive("length", 1, 100000000);
    positive("complexity_max", 0, 64);
    require(c.str("method") == "concat" || c.str("method") == "rotation", "method must be concat or rotation");
    require(std::isfinite(c.real("theta0")), "theta0 must be finite");
    if (c.integer("complexity_max") > 0)
      require(c.integer("length") >= 10 * c.integer("complexity_max"),
              "complexity table needs length >= 10 * complexity_max");
  } else if (s == "haar-moment") {
    positive("d", 2, 64);
    positive("k", 1, 5);
    positive("samples", 0, 100000000);
    bits_ok("bits");
  } else if (s == "trace-distance") {
    positive("d", 2, 8);
    positive("m", 1, 16);
    positive("k", 1, 3);
    positive("n_max", 1, 100000);
    positive("n_states", 1, 1000);
    bits_ok("bits");
    require(c.integer("max_bits") == 0 || c.integer("max_bits") >= c.integer("bits"), "max_bits must be 0 or >= bits");
    require(c.str("gates") == "haar" || c.str("gates") == "qubit", "gates must be haar or qubit");
    require(c.str("gates") != "qubit" || c.integer("d") == 2, "qubit gates need d = 2");
    require(c.real("ledger_ratio") > 0.0, "ledger_ratio must be positive");
  } else if (s == "gamma-map") {
    positive("k", 1, 3);
    positive("n_max", 5, 100000);
    positive("n_ref", 0, 100000);
    positive("n_states", 1, 1000);
    bits_ok("bits");
    require(c.integer("max_bits") >= c.integer("bits"), "max_bits must be >= bits");
    require(c.integer("n_ref") == 0 || c.integer("n_ref") < c.integer("n_max"), "n_ref must be below n_max");
    require(c.real("ledger_ratio") > 0.0, "ledger_ratio must be positive");
  } else if (s == "bound-check") {
    positive("d", 2, 8);
    positive("instances", 1, 1000000);
  } else if (s == "coin-baseline") {
    require(c.real("p") > 0.0 && c.real("p") < 1.0, "p must lie in (0, 1)");
    positive("k", 1, 3);
    positive("t_max", 1, 100000000);
    positive("per_decade", 1, 1000);
    positive("n_states", 1, 1000);
  } else if (s == "manybody") {
    positive("L", 2, 16);
    positive("k", 1, 4);
    positive("t_max", 1, 100000000);
    positive("n_states", 1, 1000);
    positive("per_decade", 1, 1000);
  } else if (s == "deep-therm") {
    positive("L", 3, 24);
    positive("n_a", 1, c.integer("L") - 1);
    positive("k", 1, 4);
    positive("t_max", 4, 100000000);
    positive("n_states", 1, 1000);
    positive("ref_samples", 1, 10000000);
  }
  for (const auto& key : {"seed"})
    if (c.values.contains(key)) require(c.integer(key) >= 0, "seed must be nonnegative");
}

}  // namespace chse::cli
