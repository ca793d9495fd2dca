#include "chse/cli/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include "CLI11.hpp"
#include "chse/cli/csv.hpp"
#include "chse/drive/decay.hpp"
#include "chse/manybody/deep_therm.hpp"
#include "chse/parallel.hpp"
#include "chse/stationary/stationary.hpp"
#include "chse/sweep/sweep.hpp"

namespace chse::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1";

struct Outcome {
  Json results = Json::object();
  Json flags = Json::array();
  int code = kOk;
};

std::vector<std::complex<double>> random_amplitudes(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto v = haar::random_state(d, rng);
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < d; ++i) out.emplace_back(v(i, 0).re, v(i, 0).im);
  return out;
}

std::uint64_t seed_of(const RunConfig& c) { return static_cast<std::uint64_t>(c.integer("seed")); }

Outcome run_word(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const unsigned m = c.uint("m");
  const auto length = static_cast<std::size_t>(c.integer("length"));
  const bool rotation = c.str("method") == "rotation" || c.real("theta0") != 0.0;
  const auto word = rotation ? words::code_rotation(m, c.real("theta0"), length) : words::fib_word_concat(m, length);
  out << word.str() << '\n';
  {
    CsvWriter w(dir / "word.csv", {"position", "symbol"});
    for (std::size_t i = 0; i < word.size(); ++i) w.row({std::to_string(i + 1), std::to_string(word.symbols[i])});
  }
  Outcome o;
  o.results["origin"] = rotation ? "rotation" : "concatenation";
  const auto n_max = c.uint("complexity_max");
  if (n_max > 0) {
    CsvWriter w(dir / "complexity.csv", {"n", "factors"});
    for (unsigned n = 1; n <= n_max; ++n) w.row({std::to_string(n), std::to_string(words::symbolic_complexity(word.symbols, n))});
  }
  return o;
}

template <RealScalar R>
void write_matrix(const fs::path& path, const CMatrix<R>& m) {
  CsvWriter w(path, {"row", "col", "re", "im"});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      w.row({std::to_string(i), std::to_string(j), RealTraits<R>::to_decimal(m(i, j).re),
             RealTraits<R>::to_decimal(m(i, j).im)});
}

Outcome run_haar_moment(const RunConfig& c, const fs::path& dir) {
  const auto d = static_cast<std::size_t>(c.integer("d"));
  const int k = static_cast<int>(c.integer("k"));
  const auto bits = c.uint("bits");
  Outcome o;
  if (bits == 53) {
    write_matrix(dir / "haar_moment.csv", haar::haar_moment_state<double>(d, k, PrecisionPolicy::hardware_double()).matrix);
  } else {
    const auto p = PrecisionPolicy::big_float(bits);
    PolicyScope scope(p);
    write_matrix(dir / "haar_moment.csv", haar::haar_moment_state<BigFloat>(d, k, p).matrix);
  }
  const auto samples = static_cast<std::size_t>(c.integer("samples"));
  if (samples > 0) {
    const auto mc = haar::mc_haar_moment(d, k, samples, seed_of(c), c.uint("threads"));
    const auto exact = haar::haar_moment_state<double>(d, k, PrecisionPolicy::hardware_double());
    const double dist = haar::trace_distance(mc.matrix, exact.matrix);
    CsvWriter w(dir / "mc_summary.csv", {"d", "k", "samples", "trace_distance"});
    w.row({std::to_string(d), std::to_string(k), std::to_string(samples), fmt(dist)});
    o.results["mc_trace_distance"] = dist;
  }
  return o;
}

void write_decay(const fs::path& path, const std::vector<drive::DecayPoint>& points, bool with_index) {
  std::vector<std::string> header;
  if (with_index) header.push_back("n");
  for (const char* h : {"t", "delta", "epsilon", "bits"}) header.push_back(h);
  CsvWriter w(path, header);
  for (const auto& p : points) {
    std::vector<std::string> row;
    if (with_index) row.push_back(std::to_string(p.n));
    row.push_back(p.time.get_str());
    row.push_back(p.delta);
    row.push_back(p.epsilon);
    row.push_back(std::to_string(p.bits));
    w.row(row);
  }
}

Outcome run_trace_distance(const RunConfig& c, const fs::path& dir) {
  const auto d = static_cast<std::size_t>(c.integer("d"));
  const unsigned m = c.uint("m");
  const std::uint64_t seed = seed_of(c);
  const bool qubit = c.str("gates") == "qubit";
  const sweep::QubitAngles angles{c.real("theta1"), c.real("theta2"), c.real("theta3")};
  std::vector<std::vector<std::complex<double>>> states;
  for (unsigned s = 0; s < c.uint("n_states"); ++s) states.push_back(random_amplitudes(d, mix_seed(seed, 100 + s)));

  auto make = [&]<RealScalar R>(const PrecisionPolicy& p) {
    if (qubit) return sweep::qubit_drive<R>(angles, p, m);
    return drive::make_spec<R>(m, haar::sample_haar_unitary<R>(d, mix_seed(seed, 0), p),
                               haar::sample_haar_unitary<R>(d, mix_seed(seed, 1), p));
  };
  drive::LadderOptions ladder;
  const auto bits = c.uint("bits");
  ladder.start_bits = bits;
  ladder.max_bits = bits == 53 ? 53 : std::max(bits, c.uint("max_bits"));
  ladder.ledger_ratio = c.real("ledger_ratio");
  const auto series = drive::decay_series_ladder(
      [&] { return make.template operator()<double>(PrecisionPolicy::hardware_double()); },
      [&](const PrecisionPolicy& p) { return make.template operator()<BigFloat>(p); }, static_cast<int>(c.integer("k")),
      states, c.uint("n_max"), ladder);
  write_decay(dir / "decay.csv", series.points, true);
  Outcome o;
  o.results["bits"] = series.bits;
  o.results["restarts"] = series.restarts;
  o.results["final_delta"] = series.points.back().delta;
  o.results["final_epsilon"] = series.points.back().epsilon;
  return o;
}

Outcome run_gamma_map(const RunConfig& c, const fs::path& dir) {
  sweep::GammaMapOptions opts;
  opts.theta1 = c.list("theta1");
  opts.theta2 = c.list("theta2");
  opts.theta3 = c.real("theta3");
  opts.k = static_cast<int>(c.integer("k"));
  opts.n_max = c.uint("n_max");
  opts.n_ref = c.uint("n_ref");
  opts.n_states = c.uint("n_states");
  opts.seed = seed_of(c);
  opts.ladder = {c.uint("bits"), c.uint("bits") == 53 ? 53u : c.uint("max_bits"), c.real("ledger_ratio")};
  opts.threads = c.uint("threads");
  const auto points = sweep::gamma_map(opts);
  Outcome o;
  std::size_t violations = 0;
  CsvWriter w(dir / "gamma_map.csv", {"theta1", "theta2", "theta3", "k", "gamma", "residual", "zeta", "converged",
                                      "final_delta", "bits", "flags"});
  for (const auto& p : points) {
    std::string flags;
    for (const auto& f : p.flags) flags += (flags.empty() ? "" : ";") + f;
    const bool fitted = !p.final_delta.empty() && std::find(p.flags.begin(), p.flags.end(), "fit_failed") == p.flags.end();
    w.row({fmt(p.angles.theta1), fmt(p.angles.theta2), fmt(p.angles.theta3), std::to_string(p.k),
           fitted ? fmt(p.fit.gamma) : "", fitted ? fmt(p.fit.residual) : "", p.zeta ? fmt(*p.zeta) : "",
           p.converged ? "true" : "false", p.final_delta, std::to_string(p.bits), flags});
    if (!p.flags.empty()) o.flags.push_back({{"theta1", p.angles.theta1}, {"theta2", p.angles.theta2}, {"flags", p.flags}});
    if (std::find(p.flags.begin(), p.flags.end(), "ledger_violation") != p.flags.end()) ++violations;
  }
  o.results["points"] = points.size();
  o.results["ledger_violations"] = violations;
  if (violations == points.size()) o.code = kLedgerViolation;
  return o;
}

Outcome run_bound_check(const RunConfig& c, const fs::path& dir) {
  const auto d = static_cast<std::size_t>(c.integer("d"));
  const auto n = static_cast<std::size_t>(c.integer("instances"));
  std::vector<stationary::StationaryCertificate<double>> certs(n);
  parallel_for(n, c.uint("threads"), [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(seed_of(c), i));
    const auto h = stationary::random_hermitian(d, rng);
    const auto psi = haar::random_state(d, rng);
    certs[i] = stationary::delta2_time_independent(stationary::make_hamiltonian(h, psi));
  });
  CsvWriter w(dir / "bound_check.csv",
              {"instance", "d", "delta", "dephased", "dephased_sum", "diagonal_bound", "bound", "margin"});
  Outcome o;
  double worst = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = certs[i];
    const double margin =
        std::min({x.delta - x.dephased, x.dephased_sum - x.diagonal_bound, x.diagonal_bound - x.bound});
    worst = std::min(worst, margin);
    w.row({std::to_string(i), std::to_string(d), fmt(x.delta), fmt(x.dephased), fmt(x.dephased_sum),
           fmt(x.diagonal_bound), fmt(x.bound), fmt(margin)});
    if (!x.chain_holds) o.flags.push_back({{"instance", i}, {"flags", {"chain_broken"}}});
  }
  o.results["min_margin"] = worst;
  return o;
}

Outcome run_coin_baseline(const RunConfig& c, const fs::path& dir) {
  const std::uint64_t seed = seed_of(c);
  const auto policy = PrecisionPolicy::hardware_double();
  const auto a0 = haar::sample_haar_unitary<double>(2, mix_seed(seed, 0), policy);
  const auto a1 = haar::sample_haar_unitary<double>(2, mix_seed(seed, 1), policy);
  const auto t_max = static_cast<std::size_t>(c.integer("t_max"));
  const auto symbols = drive::coin_sequence(c.real("p"), t_max, mix_seed(seed, 2));
  std::vector<CMatrix<double>> psi;
  for (unsigned s = 0; s < c.uint("n_states"); ++s)
    psi.push_back(drive::make_state<double>(random_amplitudes(2, mix_seed(seed, 100 + s)), policy));
  const auto times = drive::log_spaced_times(1, t_max, static_cast<int>(c.integer("per_decade")));
  const auto points = drive::sequence_decay(a0, a1, symbols, static_cast<int>(c.integer("k")), psi, times);
  write_decay(dir / "decay.csv", points, false);
  Outcome o;
  o.results["final_delta"] = points.back().delta;
  try {
    const auto fit = sweep::powerlaw_fit(points);
    o.results["slope"] = -fit.gamma;
    o.results["slope_stderr"] = fit.stderr_gamma;
  } catch (const InvalidArgument&) {
    o.flags.push_back({{"flags", {"fit_failed"}}});
  }
  return o;
}

manybody::ChainSpec chain_of(const RunConfig& c) {
  manybody::ChainSpec s;
  s.L = c.uint("L");
  s.tau = c.real("tau");
  s.edge = c.real("edge");
  return s;
}

Outcome run_manybody(const RunConfig& c, const fs::path& dir) {
  manybody::ManybodyOptions opts;
  opts.chain = chain_of(c);
  opts.k = static_cast<int>(c.integer("k"));
  opts.t_max = static_cast<std::size_t>(c.integer("t_max"));
  opts.n_states = c.uint("n_states");
  opts.seed = seed_of(c);
  opts.per_decade = static_cast<int>(c.integer("per_decade"));
  opts.check_single_pass = c.flag("check_single_pass");
  opts.windowed.threads = c.uint("threads");
  const auto res = manybody::manybody_series(opts);
  CsvWriter w(dir / "manybody.csv", {"t", "delta", "k", "L", "n_states"});
  for (const auto& p : res.points)
    w.row({std::to_string(p.t), fmt(p.delta), std::to_string(opts.k), std::to_string(opts.chain.L),
           std::to_string(opts.n_states)});
  Outcome o;
  Json windows = Json::array();
  for (const auto& win : res.windows) windows.push_back({win.begin, win.end});
  o.results["windows"] = windows;
  if (res.fit_ok) o.results["slope"] = -res.fit.gamma;
  else o.flags.push_back({{"flags", {"fit_failed"}}});
  if (res.single_pass_deviation >= 0.0) o.results["single_pass_deviation"] = res.single_pass_deviation;
  return o;
}

Outcome run_deep_therm(const RunConfig& c, const fs::path& dir) {
  manybody::DeepThermOptions opts;
  opts.chain = chain_of(c);
  opts.n_a = c.uint("n_a");
  opts.k = static_cast<int>(c.integer("k"));
  opts.t_max = static_cast<std::size_t>(c.integer("t_max"));
  opts.n_states = c.uint("n_states");
  opts.seed = seed_of(c);
  opts.ref_samples = static_cast<std::size_t>(c.integer("ref_samples"));
  opts.threads = c.uint("threads");
  const auto res = manybody::deep_therm_series(opts);
  CsvWriter w(dir / "deep_therm.csv", {"t", "delta_E", "k", "L", "N_A", "leakage"});
  for (const auto& p : res.points)
    w.row({std::to_string(p.t), fmt(p.delta_E), std::to_string(opts.k), std::to_string(opts.chain.L),
           std::to_string(opts.n_a), fmt(p.leakage)});
  Outcome o;
  o.results["plateau"] = res.plateau;
  o.results["reference"] = res.reference;
  if (res.fit_ok) {
    o.results["lambda"] = res.fit.gamma;
    o.results["fit_window"] = {res.fit.first, res.fit.last};
  } else {
    o.flags.push_back({{"flags", {"fit_failed"}}});
  }
  return o;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg, const Outcome& o, double wall, const Json& error) {
  Json m = Json::object();
  m["version"] = kVersion;
  m["subcommand"] = cfg.subcommand;
  m["config"] = cfg.values;
  Json seeds = Json::object();
  if (cfg.values.contains("seed")) seeds["seed"] = cfg.values["seed"];
  m["seeds"] = seeds;
  m["wall_time_s"] = wall;
  m["flags"] = o.flags;
  m["results"] = o.results;
  m["status"] = error.is_null() ? Json("ok") : error;
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  f << m.dump(2) << '\n';
}

}  // namespace

int exit_code_for(const std::string& category) {
  if (category == "invalid_argument" || category == "dimension" || category == "policy_mismatch") return kConfigError;
  if (category == "ledger_violation") return kLedgerViolation;
  if (category == "resource_limit") return kResourceLimit;
  return kFailure;
}

int run(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = cfg.str("out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  const auto& s = cfg.subcommand;
  Outcome o;
  try {
    if (s == "word") o = run_word(cfg, dir, out);
    else if (s == "haar-moment") o = run_haar_moment(cfg, dir);
    else if (s == "trace-distance") o = run_trace_distance(cfg, dir);
    else if (s == "gamma-map") o = run_gamma_map(cfg, dir);
    else if (s == "bound-check") o = run_bound_check(cfg, dir);
    else if (s == "coin-baseline") o = run_coin_baseline(cfg, dir);
    else if (s == "manybody") o = run_manybody(cfg, dir);
    else if (s == "deep-therm") o = run_deep_therm(cfg, dir);
    else throw InvalidArgument("unknown subcommand '" + s + "'");
  } catch (const Error& e) {
    Json err = {{"error", e.category()}, {"message", e.what()}};
    if (const auto* lv = dynamic_cast<const LedgerViolation*>(&e)) err["step"] = lv->step();
    write_manifest(dir, cfg, o, elapsed(), err);
    throw;
  }
  write_manifest(dir, cfg, o, elapsed(), nullptr);
  if (s != "word") out << o.results.dump() << '\n';
  return o.code;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto report = [&](const std::string& category, const std::string& message) {
    err << Json{{"error", category}, {"message", message}}.dump() << '\n';
    return exit_code_for(category);
  };
  CLI::App app{"chse: ergodicity diagnostics for Fibonacci-driven quantum systems"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> given;
  std::map<std::string, std::string> config_path;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::map<std::string, std::string>> raw;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    sub->add_option("--config", config_path[name], "JSON config file; flags override its keys");
    for (const auto& def : options_for(name)) {
      const std::string help = def.help + " (default " + (def.def.is_string() ? def.def.get<std::string>() : def.def.dump()) + ")";
      if (def.kind == Kind::Bool) {
        sub->add_flag_callback(flag_name(def.key), [&given, name, key = def.key] { given[name][key] = "true"; }, help);
      } else {
        sub->add_option(flag_name(def.key), raw[name][def.key], help);
      }
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    for (const auto* s : app.get_subcommands()) out << s->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report("invalid_argument", e.what());
  }
  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  for (const auto& def : options_for(name)) {
    if (def.kind == Kind::Bool) continue;
    if (chosen->count(flag_name(def.key)) > 0) given[name][def.key] = raw[name][def.key];
  }
  RunConfig cfg;
  try {
    Json file;
    if (!config_path[name].empty()) {
      std::ifstream f(config_path[name]);
      if (!f) throw InvalidArgument("cannot read config file " + config_path[name]);
      try {
        file = Json::parse(f);
      } catch (const Json::parse_error& e) {
        throw InvalidArgument(std::string("config file is not valid JSON: ") + e.what());
      }
    }
    cfg = resolve(name, file, given[name]);
    validate(cfg);
  } catch (const Error& e) {
    return report(e.category(), e.what());
  }
  try {
    return run(cfg, out);
  } catch (const Error& e) {
    return report(e.category(), e.what());
  } catch (const std::bad_alloc&) {
    return report("resource_limit", "out of memory");
  } catch (const std::exception& e) {
    return report("internal", e.what());
  }
}

}  // namespace chse::cli
