#pragma once

// Command-line front end: `gan_attractor <basins|capacity|check-f|ff-verify|simulate> [options]`.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gan/capacity.hpp"
#include "gan/characteristic.hpp"
#include "gan/dynamics.hpp"
#include "gan/experiments.hpp"
#include "gan/io.hpp"

namespace gan::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kThreadsEnv = "GAN_ATTRACTOR_THREADS";

/// Numerical failure (root bracketing, tolerance exceeded, nothing converged).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::optional<LearnMode> parse_mode(const std::string& s) {
  if (s == "literal-hebb") return LearnMode::literal_hebb;
  if (s == "centered-hebb") return LearnMode::centered_hebb;
  if (s == "perceptron") return LearnMode::perceptron;
  return std::nullopt;
}

/// Fills options the command line left unset from a config file.
inline void apply_config(CLI::App& sub, const std::string& path) {
  for (const auto& [key, values] : read_config_file(path)) {
    if (key == "command") {
      if (values.size() != 1 || values.front() != sub.get_name())
        throw ConfigError(key, "record belongs to another subcommand");
      continue;
    }
    std::string name = key;
    CLI::Option* opt = sub.get_option_no_throw("--" + name);
    if (opt == nullptr) {
      std::replace(name.begin(), name.end(), '_', '-');
      opt = sub.get_option_no_throw("--" + name);
    }
    if (opt == nullptr || name == "config") throw ConfigError(key, "unknown configuration key");
    if (opt->count() > 0) continue;  // command line wins
    try {
      opt->add_result(values);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError(key, e.what());
    }
  }
}

inline void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// Writes `payload` to `path` (stdout when empty) and the JSON sidecar next to it.
inline void emit(std::ostream& out, const std::string& path, const std::string& payload,
                 const json& record) {
  if (path.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("out", "cannot write '" + path + "'");
  f << payload;
  std::ofstream meta(path + ".json", std::ios::binary);
  if (!meta) throw ConfigError("out", "cannot write '" + path + ".json'");
  meta << record.dump(2) << '\n';
}

struct Common {
  std::string config_path;
  std::string out_path;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

inline void add_common(CLI::App& sub, Common& c, bool with_out = true) {
  sub.add_option("--config", c.config_path, "Flat key/value or JSON config file (flags override)");
  if (with_out) sub.add_option("--out", c.out_path, "Output CSV path (stdout when omitted)");
  c.seed_opt = sub.add_option("--seed", c.seed, "Master seed");
}

// --------------------------------------------------------------------------

struct BasinsArgs {
  Common common;
  std::string model = "gan";
  std::size_t n = 100, q = 2, sets = 100, max_epochs = 1000, max_iters = kDefaultMaxIters;
  double alpha = 0.05, rho = 0.5, kappa = 0.0;
  std::vector<double> d0;
  std::string kind = "parity", mode = "centered-hebb", ms_norm = "signal-matched";
  std::optional<double> f_mean;
  bool interacting = false;
};

inline void add_basins(CLI::App& app, BasinsArgs& a) {
  auto* s = app.add_subcommand("basins", "Basin-of-attraction curves (GAN and/or multi-state baseline)");
  add_common(*s, a.common);
  s->add_option("--model", a.model, "gan | multistate | both")
      ->check(CLI::IsMember({"gan", "multistate", "both"}));
  s->add_option("--n", a.n, "Neurons");
  s->add_option("--q", a.q, "Internal bits per neuron");
  s->add_option("--alpha", a.alpha, "Pattern load, P = round(alpha N)");
  s->add_option("--rho", a.rho, "Probability that a pattern bit is 0");
  s->add_option("--sets", a.sets, "Independent pattern sets");
  s->add_option("--d0", a.d0, "Initial distances (comma separated)")->delimiter(',');
  s->add_option("--kind,--characteristic", a.kind, "Characteristic function (text form)");
  s->add_option("--mode", a.mode, "literal-hebb | centered-hebb | perceptron")
      ->check(CLI::IsMember({"literal-hebb", "centered-hebb", "perceptron"}));
  s->add_option("--kappa", a.kappa, "Perceptron margin demand");
  s->add_option("--max-epochs", a.max_epochs, "Perceptron epoch limit");
  s->add_option("--f-mean", a.f_mean, "Centering value for centered-hebb");
  s->add_flag("--interacting", a.interacting, "Enable intra-neuron couplings");
  s->add_option("--ms-norm", a.ms_norm, "signal-matched | literal")
      ->check(CLI::IsMember({"signal-matched", "literal"}));
  s->add_option("--max-iters", a.max_iters, "Recall step limit");
  s->add_option("--threads", a.common.threads, "Worker threads (0 = all cores)")->envname(kThreadsEnv);
}

inline json basins_config_json(const BasinsArgs& a, const std::string& model,
                               const std::vector<double>& grid) {
  json c;
  c["command"] = "basins";
  c["model"] = model;
  c["n"] = a.n;
  c["q"] = a.q;
  c["alpha"] = a.alpha;
  c["rho"] = a.rho;
  c["sets"] = a.sets;
  c["d0"] = grid;
  c["kind"] = a.kind;
  c["mode"] = a.mode;
  c["kappa"] = a.kappa;
  c["max_epochs"] = a.max_epochs;
  if (a.f_mean) c["f_mean"] = *a.f_mean;
  c["interacting"] = a.interacting;
  c["ms_norm"] = a.ms_norm;
  c["max_iters"] = a.max_iters;
  return c;
}

inline int run_basins(const BasinsArgs& a, std::ostream& out) {
  require(a.common.seed_opt->count() > 0, "seed", "is required");
  require(a.alpha > 0.0, "alpha", "must be positive");
  require(a.n >= 2, "n", "must be at least 2");
  require(a.sets > 0, "sets", "must be positive");
  require(a.rho > 0.0 && a.rho < 1.0, "rho", "must lie in (0, 1)");
  require(a.max_iters > 0, "max_iters", "must be at least 1");
  require(a.max_epochs > 0, "max_epochs", "must be at least 1");
  require(a.kappa >= 0.0, "kappa", "must be non-negative");
  for (double d : a.d0) require(d >= 0.0 && d <= 1.0, "d0", "values must lie in [0, 1]");
  require(std::llround(a.alpha * static_cast<double>(a.n)) >= 1, "alpha", "alpha * n rounds to zero patterns");
  require(a.model != "both" || !a.common.out_path.empty(), "out", "model=both needs an output stem");

  BasinConfig base;
  base.n = a.n;
  base.q = a.q;
  base.alpha = a.alpha;
  base.rho = a.rho;
  base.d0_grid = a.d0;
  base.n_sets = a.sets;
  base.learn.mode = *parse_mode(a.mode);
  base.learn.kappa = a.kappa;
  base.learn.max_epochs = a.max_epochs;
  base.learn.f_mean = a.f_mean;
  base.interacting = a.interacting;
  base.ms_norm = a.ms_norm == "literal" ? MultiStateNorm::literal : MultiStateNorm::signal_matched;
  base.seed = RunSeed{a.common.seed};
  base.max_iters = a.max_iters;
  base.threads = a.common.threads;

  std::vector<BasinModel> models;
  if (a.model != "multistate") models.push_back(BasinModel::gan);
  if (a.model != "gan") models.push_back(BasinModel::multistate);
  if (std::find(models.begin(), models.end(), BasinModel::gan) != models.end()) {
    require(a.q >= 1 && a.q <= kMaxQ, "q", "must lie in [1, 64]");
    try {
      base.characteristic = parse_characteristic(a.kind, a.q);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("kind", e.what());
    }
  }

  for (BasinModel m : models) {
    const auto t0 = std::chrono::steady_clock::now();
    BasinConfig cfg = base;
    cfg.model = m;
    const BasinCurve curve = basin_curve(cfg);
    if (curve.excluded_sets == cfg.n_sets)
      throw NumericalFailure("training failed for every pattern set");
    std::ostringstream csv;
    write_basin_csv(csv, curve);
    json stats;
    stats["excluded_sets"] = curve.excluded_sets;
    stats["two_cycles"] = curve.two_cycles;
    stats["not_converged"] = curve.not_converged;
    const json record = make_run_record(basins_config_json(a, model_name(m), curve.config.d0_grid),
                                        a.common.seed, elapsed_ms(t0), stats);
    std::string path = a.common.out_path;
    if (a.model == "both") path += "." + model_name(m) + ".csv";
    emit(out, path, csv.str(), record);
  }
  return 0;
}

// --------------------------------------------------------------------------

struct CapacityArgs {
  Common common;
  std::string formula = "simple";
  std::vector<double> rho, lambda{0.0}, K{0.0}, var_phi;
};

inline void add_capacity(CLI::App& app, CapacityArgs& a) {
  auto* s = app.add_subcommand("capacity", "Information capacity E(rho) tables");
  add_common(*s, a.common);
  s->add_option("--formula", a.formula, "simple | general | interacting")
      ->check(CLI::IsMember({"simple", "general", "interacting"}));
  s->add_option("--rho", a.rho, "Bit-0 probabilities (default 0.05..0.95)")->delimiter(',');
  s->add_option("--lambda", a.lambda, "Q/N values")->delimiter(',');
  s->add_option("--K", a.K, "Normalized margins")->delimiter(',');
  s->add_option("--var-phi", a.var_phi, "Characteristic variances (default rho(1-rho))")->delimiter(',');
}

inline int run_capacity(CapacityArgs a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.rho.empty())
    for (int k = 1; k <= 19; ++k) a.rho.push_back(k / 20.0);
  for (double r : a.rho) require(r > 0.0 && r < 1.0, "rho", "values must lie strictly in (0, 1)");
  for (double l : a.lambda) require(l >= 0.0, "lambda", "values must be non-negative");
  for (double k : a.K) require(k >= 0.0, "K", "values must be non-negative");
  for (double v : a.var_phi) require(v > 0.0, "var_phi", "values must be positive");
  if (a.formula != "general") {
    for (double k : a.K) require(k == 0.0, "K", "only the general formula takes a margin");
  }
  if (a.formula == "simple") {
    for (double l : a.lambda) require(l == 0.0, "lambda", "the simple formula has lambda = 0");
  }

  std::vector<CapacityRow> rows;
  try {
    for (double rho : a.rho) {
      const std::vector<double> vars = a.var_phi.empty() ? std::vector<double>{rho * (1.0 - rho)} : a.var_phi;
      for (double lambda : a.lambda)
        for (double k : a.K)
          for (double vp : vars) {
            CapacityRow row{rho, lambda, k, vp, 0, 0, 0};
            if (a.formula == "simple") {
              const auto s = capacity_simple(rho);
              row.root = s.root;
              row.alpha_c = s.alpha_c;
              row.e_bits = s.e_bits;
            } else if (a.formula == "interacting") {
              row.root = solve_aux(rho);
              row.e_bits = capacity_interacting(rho, lambda, vp);
              row.alpha_c = row.e_bits * (1.0 + lambda) / entropy_bits(rho);
            } else {
              const auto s = alpha_critical(CapacityParams::from_K(rho, lambda, k, vp));
              row.root = s.root;
              row.alpha_c = s.alpha_c;
              row.e_bits = s.e_bits;
            }
            rows.push_back(row);
          }
    }
  } catch (const RootFindingError& e) {
    throw NumericalFailure(e.what());
  }
  std::ostringstream csv;
  write_capacity_csv(csv, rows);
  json c;
  c["command"] = "capacity";
  c["formula"] = a.formula;
  c["rho"] = a.rho;
  c["lambda"] = a.lambda;
  c["K"] = a.K;
  if (!a.var_phi.empty()) c["var_phi"] = a.var_phi;
  emit(out, a.common.out_path, csv.str(), make_run_record(c, a.common.seed, elapsed_ms(t0)));
  return 0;
}

// --------------------------------------------------------------------------

struct CheckArgs {
  Common common;
  std::string kind = "parity", method = "auto";
  std::size_t q = 2, n = 100, samples = kDefaultMomentSamples;
  double rho = 0.5, c = kDefaultConditionFactor;
};

inline void add_check(CLI::App& app, CheckArgs& a) {
  auto* s = app.add_subcommand("check-f", "Admissibility report for a characteristic function");
  add_common(*s, a.common);
  s->add_option("--kind,--characteristic", a.kind, "Characteristic function (text form)");
  s->add_option("--q", a.q, "Internal bits per neuron");
  s->add_option("--n", a.n, "Neurons");
  s->add_option("--rho", a.rho, "Probability that a bit is 0");
  s->add_option("--c", a.c, "Tolerance factor for the 'much less than' conditions");
  s->add_option("--method", a.method, "auto | exhaustive | monte-carlo")
      ->check(CLI::IsMember({"auto", "exhaustive", "monte-carlo"}));
  s->add_option("--samples", a.samples, "Monte Carlo draws");
}

inline int run_check(const CheckArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  require(a.q >= 1 && a.q <= kMaxQ, "q", "must lie in [1, 64]");
  require(a.n >= 2, "n", "must be at least 2");
  require(a.rho > 0.0 && a.rho < 1.0, "rho", "must lie in (0, 1)");
  require(a.c > 0.0, "c", "must be positive");
  require(a.samples > 0, "samples", "must be positive");
  require(a.method != "exhaustive" || a.q <= kExhaustiveMaxQ, "method", "exhaustive needs q <= 20");
  CharacteristicSpec spec;
  try {
    spec = parse_characteristic(a.kind, a.q);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("kind", e.what());
  }
  const RunSeed seed = RunSeed{a.common.seed}.derive(streams::moments, 0);
  MomentEstimate m;
  if (a.method == "exhaustive") m = moments_exhaustive(spec, a.q, a.rho);
  else if (a.method == "monte-carlo") m = moments_monte_carlo(spec, a.q, a.rho, seed, a.samples);
  else m = estimate_moments(spec, a.q, a.rho, seed, a.samples);
  const ConditionReport r = check_conditions(m, a.n, a.c);
  std::ostringstream csv;
  write_conditions_csv(csv, r);
  json c;
  c["command"] = "check-f";
  c["kind"] = to_string(spec, a.q);
  c["q"] = a.q;
  c["n"] = a.n;
  c["rho"] = a.rho;
  c["c"] = a.c;
  c["method"] = a.method;
  c["samples"] = a.samples;
  emit(out, a.common.out_path, csv.str(), make_run_record(c, a.common.seed, elapsed_ms(t0)));
  return 0;
}

// --------------------------------------------------------------------------

struct FfArgs {
  Common common;
  std::size_t networks = 100, max_n = 50, max_q = 8, trials = 100, n = 0, q = 0;
  double tol = 1e-12;
};

inline void add_ff(CLI::App& app, FfArgs& a) {
  auto* s = app.add_subcommand("ff-verify", "Feed-forward correspondence check on random linear networks");
  add_common(*s, a.common);
  s->add_option("--networks", a.networks, "Random networks to check");
  s->add_option("--trials", a.trials, "Random states per network");
  s->add_option("--max-n", a.max_n, "Largest N when N is drawn at random");
  s->add_option("--max-q", a.max_q, "Largest Q when Q is drawn at random");
  s->add_option("--n", a.n, "Fixed N (0 = random in [2, max-n])");
  s->add_option("--q", a.q, "Fixed Q (0 = random in [1, max-q])");
  s->add_option("--tol", a.tol, "Largest acceptable discrepancy");
}

inline int run_ff(const FfArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  require(a.common.seed_opt->count() > 0, "seed", "is required");
  require(a.networks > 0, "networks", "must be positive");
  require(a.trials > 0, "trials", "must be positive");
  require(a.max_n >= 2, "max_n", "must be at least 2");
  require(a.max_q >= 1 && a.max_q <= kMaxQ, "max_q", "must lie in [1, 64]");
  require(a.n == 0 || a.n >= 2, "n", "must be 0 or at least 2");
  require(a.q <= kMaxQ, "q", "must be at most 64");
  const RunSeed seed{a.common.seed};
  std::ostringstream csv;
  csv << "network,n,q,max_abs_diff\n";
  double worst = 0.0;
  for (std::size_t k = 0; k < a.networks; ++k) {
    const RunSeed net_seed = seed.derive(streams::ff_networks, k);
    Rng rng = net_seed.engine();
    const std::size_t n = a.n ? a.n : 2 + uniform_below(rng, a.max_n - 1);
    const std::size_t q = a.q ? a.q : 1 + uniform_below(rng, a.max_q);
    const Network net = random_linear_network(n, q, net_seed.derive(0, 0));
    const double diff = verify_ff_equivalence(net, a.trials, seed.derive(streams::ff_states, k));
    worst = std::max(worst, diff);
    csv << k << ',' << n << ',' << q << ',' << format_double(diff) << '\n';
  }
  json c;
  c["command"] = "ff-verify";
  c["networks"] = a.networks;
  c["trials"] = a.trials;
  c["max_n"] = a.max_n;
  c["max_q"] = a.max_q;
  c["n"] = a.n;
  c["q"] = a.q;
  c["tol"] = a.tol;
  json stats;
  stats["max_abs_diff"] = worst;
  emit(out, a.common.out_path, csv.str(), make_run_record(c, a.common.seed, elapsed_ms(t0), stats));
  if (!(worst < a.tol)) throw NumericalFailure("discrepancy " + format_double(worst) + " exceeds tol");
  return 0;
}

// --------------------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::size_t n = 100, q = 2, pattern = 0, max_epochs = 1000, max_iters = kDefaultMaxIters;
  double alpha = 0.05, rho = 0.5, d0 = 0.1, kappa = 0.0;
  std::string kind = "parity", mode = "centered-hebb";
};

inline void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto* s = app.add_subcommand("simulate", "Dump one recall trajectory");
  add_common(*s, a.common);
  s->add_option("--n", a.n, "Neurons");
  s->add_option("--q", a.q, "Internal bits per neuron");
  s->add_option("--alpha", a.alpha, "Pattern load, P = round(alpha N)");
  s->add_option("--rho", a.rho, "Probability that a pattern bit is 0");
  s->add_option("--kind,--characteristic", a.kind, "Characteristic function (text form)");
  s->add_option("--mode", a.mode, "literal-hebb | centered-hebb | perceptron")
      ->check(CLI::IsMember({"literal-hebb", "centered-hebb", "perceptron"}));
  s->add_option("--kappa", a.kappa, "Perceptron margin demand");
  s->add_option("--max-epochs", a.max_epochs, "Perceptron epoch limit");
  s->add_option("--pattern", a.pattern, "Index of the reference pattern");
  s->add_option("--d0", a.d0, "Initial distance");
  s->add_option("--max-iters", a.max_iters, "Recall step limit");
}

inline int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  require(a.common.seed_opt->count() > 0, "seed", "is required");
  require(a.n >= 2, "n", "must be at least 2");
  require(a.q >= 1 && a.q <= kMaxQ, "q", "must lie in [1, 64]");
  require(a.rho > 0.0 && a.rho < 1.0, "rho", "must lie in (0, 1)");
  require(a.d0 >= 0.0 && a.d0 <= 1.0, "d0", "must lie in [0, 1]");
  require(a.max_iters > 0, "max_iters", "must be at least 1");
  require(a.max_epochs > 0, "max_epochs", "must be at least 1");
  require(a.kappa >= 0.0, "kappa", "must be non-negative");
  const auto p = static_cast<std::size_t>(std::llround(a.alpha * static_cast<double>(a.n)));
  require(a.alpha > 0.0 && p >= 1, "alpha", "alpha * n must round to at least one pattern");
  require(a.pattern < p, "pattern", "must be below the pattern count");
  CharacteristicSpec ch;
  try {
    ch = parse_characteristic(a.kind, a.q);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("kind", e.what());
  }

  BasinConfig cfg;
  cfg.n = a.n;
  cfg.q = a.q;
  cfg.alpha = a.alpha;
  cfg.rho = a.rho;
  cfg.characteristic = ch;
  cfg.learn.mode = *parse_mode(a.mode);
  cfg.learn.kappa = a.kappa;
  cfg.learn.max_epochs = a.max_epochs;
  cfg.seed = RunSeed{a.common.seed};
  const PatternSet patterns = random_pattern_set(a.n, a.q, p, a.rho, cfg.seed.derive(streams::patterns, 0));
  const auto net = gan::detail::train_gan(cfg, patterns);
  if (!net) throw NumericalFailure("perceptron training did not converge");
  const StateMatrix& ref = patterns[a.pattern];

  std::ostringstream csv;
  csv << "step,distance,state\n";
  SyncStepper stepper(*net);
  StateMatrix prev = perturb_state(ref, a.d0, cfg.seed.derive(streams::perturbation, a.pattern));
  StateMatrix cur = prev, next(a.n, a.q);
  csv << 0 << ',' << format_double(hamming_distance(cur, ref)) << ',' << cur.to_bitstring() << '\n';
  int cycle = 0;
  std::size_t steps = 0;
  for (std::size_t it = 1; it <= a.max_iters; ++it) {
    stepper.step(cur, next);
    steps = it;
    if (next == cur) {
      cycle = 1;
      break;
    }
    csv << it << ',' << format_double(hamming_distance(next, ref)) << ',' << next.to_bitstring() << '\n';
    if (it >= 2 && next == prev) {
      cycle = 2;
      break;
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  json c;
  c["command"] = "simulate";
  c["n"] = a.n;
  c["q"] = a.q;
  c["alpha"] = a.alpha;
  c["rho"] = a.rho;
  c["kind"] = a.kind;
  c["mode"] = a.mode;
  c["kappa"] = a.kappa;
  c["max_epochs"] = a.max_epochs;
  c["pattern"] = a.pattern;
  c["d0"] = a.d0;
  c["max_iters"] = a.max_iters;
  json stats;
  stats["cycle_length"] = cycle;
  stats["iterations"] = steps;
  emit(out, a.common.out_path, csv.str(), make_run_record(c, a.common.seed, elapsed_ms(t0), stats));
  return 0;
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attractor networks of generalized artificial neurons", "gan_attractor"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  detail::BasinsArgs basins;
  detail::CapacityArgs capacity;
  detail::CheckArgs check;
  detail::FfArgs ff;
  detail::SimulateArgs simulate;
  detail::add_basins(app, basins);
  detail::add_capacity(app, capacity);
  detail::add_check(app, check);
  detail::add_ff(app, ff);
  detail::add_simulate(app, simulate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto with_config = [&](detail::Common& c) {
    if (!c.config_path.empty()) detail::apply_config(*sub, c.config_path);
  };
  try {
    const std::string name = sub->get_name();
    if (name == "basins") {
      with_config(basins.common);
      return detail::run_basins(basins, out);
    }
    if (name == "capacity") {
      with_config(capacity.common);
      return detail::run_capacity(capacity, out);
    }
    if (name == "check-f") {
      with_config(check.common);
      return detail::run_check(check, out);
    }
    if (name == "ff-verify") {
      with_config(ff.common);
      return detail::run_ff(ff, out);
    }
    with_config(simulate.common);
    return detail::run_simulate(simulate, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const RootFindingError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }
}

inline int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace gan::cli
