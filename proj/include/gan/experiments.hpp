#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gan/core.hpp"
#include "gan/dynamics.hpp"
#include "gan/learning.hpp"
#include "gan/multistate.hpp"
#include "gan/parallel.hpp"

namespace gan {

// ---------------------------------------------------------------------------
// Basins of attraction

enum class BasinModel { gan, multistate };

inline std::string model_name(BasinModel m) { return m == BasinModel::gan ? "gan" : "multistate"; }

/// {0, step, 2 step, ..., hi}.
inline std::vector<double> uniform_grid(double hi, double step) {
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::llround(hi / step));
  const double inv = std::round(1.0 / step);
  const bool exact = std::abs(1.0 / step - inv) < 1e-9;
  for (std::size_t k = 0; k <= count; ++k)
    g.push_back(exact ? static_cast<double>(k) / inv : static_cast<double>(k) * step);
  return g;
}

inline std::vector<double> default_d0_grid(BasinModel m) {
  return uniform_grid(m == BasinModel::gan ? 1.0 : 0.5, 0.05);
}

struct BasinConfig {
  std::size_t n = 100;
  std::size_t q = 2;
  double alpha = 0.05;  // P = round(alpha * N)
  double rho = 0.5;
  std::vector<double> d0_grid;  // empty: default grid for the model
  std::size_t n_sets = 100;
  BasinModel model = BasinModel::gan;
  LearnConfig learn;
  CharacteristicSpec characteristic = CharacteristicSpec::parity();
  bool interacting = false;
  MultiStateNorm ms_norm = MultiStateNorm::signal_matched;
  RunSeed seed;
  std::size_t max_iters = kDefaultMaxIters;
  std::size_t threads = 1;

  [[nodiscard]] std::size_t patterns() const {
    return static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
  }
  [[nodiscard]] std::vector<double> grid() const {
    return d0_grid.empty() ? default_d0_grid(model) : d0_grid;
  }
  [[nodiscard]] GanSpec gan_spec() const { return GanSpec{n, q, characteristic, interacting}; }

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (patterns() == 0) throw std::invalid_argument("alpha * n rounds to zero patterns");
    if (n_sets == 0) throw std::invalid_argument("sets must be positive");
    if (max_iters == 0) throw std::invalid_argument("max_iters must be at least 1");
    check_rho(rho);
    for (double d : grid())
      if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("d0 values must lie in [0, 1]");
    learn.validate();
    if (model == BasinModel::gan) gan_spec().validate();
    else if (n < 2) throw std::invalid_argument("n must be at least 2");
  }
};

struct BasinRow {
  double d0 = 0.0;
  double mean_df = 0.0;
  double stderr_df = 0.0;
  std::size_t n_trials = 0;
};

struct BasinCurve {
  BasinConfig config;
  std::vector<BasinRow> rows;
  std::size_t excluded_sets = 0;  // training did not converge
  std::size_t two_cycles = 0;
  std::size_t not_converged = 0;  // max_iters exhausted

  [[nodiscard]] const BasinRow& at(double d0) const {
    for (const auto& r : rows)
      if (std::abs(r.d0 - d0) < 1e-9) return r;
    throw std::out_of_range("d0 not on the grid");
  }
};

namespace detail {

struct SetOutcome {
  bool excluded = false;
  std::vector<double> d_f;  // [mu][g]
  std::size_t two_cycles = 0;
  std::size_t not_converged = 0;
};

inline std::optional<Network> train_gan(const BasinConfig& cfg, const PatternSet& patterns) {
  const GanSpec spec = cfg.gan_spec();
  LearnConfig learn = cfg.learn;
  learn.threads = 1;
  if (learn.mode == LearnMode::perceptron) {
    TrainResult t = perceptron_train(patterns, spec, learn);
    if (!t.converged) return std::nullopt;
    return build_network(spec, std::move(t.weights), std::move(t.couplings));
  }
  std::optional<InternalCouplings> l;
  if (spec.interacting) l = hebb_internal(patterns, spec);
  return build_network(spec, hebb_weights(patterns, spec, learn), std::move(l));
}

inline SetOutcome run_gan_set(const BasinConfig& cfg, const std::vector<double>& grid,
                              std::size_t set) {
  const std::size_t p = cfg.patterns(), g_count = grid.size();
  SetOutcome out;
  const PatternSet patterns =
      random_pattern_set(cfg.n, cfg.q, p, cfg.rho, cfg.seed.derive(streams::patterns, set));
  const auto net = train_gan(cfg, patterns);
  if (!net) {
    out.excluded = true;
    return out;
  }
  out.d_f.resize(p * g_count);
  for (std::size_t mu = 0; mu < p; ++mu) {
    for (std::size_t g = 0; g < g_count; ++g) {
      const RunSeed trial = cfg.seed.derive(streams::perturbation, (set * p + mu) * g_count + g);
      const StateMatrix start = perturb_state(patterns[mu], grid[g], trial);
      const AttractorResult r = run_to_attractor(*net, start, patterns[mu], cfg.max_iters);
      out.d_f[mu * g_count + g] = r.d_f;
      out.two_cycles += r.cycle_length == 2;
      out.not_converged += r.cycle_length == 0;
    }
  }
  return out;
}

inline SetOutcome run_multistate_set(const BasinConfig& cfg, const std::vector<double>& grid,
                                     std::size_t set) {
  const std::size_t p = cfg.patterns(), g_count = grid.size();
  SetOutcome out;
  const auto patterns =
      random_multistate_patterns(cfg.n, p, cfg.seed.derive(streams::multistate_patterns, set));
  const MultiStateNetwork net = multistate_hebb(patterns, cfg.ms_norm);
  out.d_f.resize(p * g_count);
  for (std::size_t mu = 0; mu < p; ++mu) {
    for (std::size_t g = 0; g < g_count; ++g) {
      const RunSeed trial =
          cfg.seed.derive(streams::multistate_perturbation, (set * p + mu) * g_count + g);
      const MultiState start = perturb_multistate(patterns[mu], grid[g], trial);
      const MultiStateResult r = multistate_run(net, start, patterns[mu], cfg.max_iters);
      out.d_f[mu * g_count + g] = r.d_f;
      out.two_cycles += r.cycle_length == 2;
      out.not_converged += r.cycle_length == 0;
    }
  }
  return out;
}

}  // namespace detail

/// Basin-of-attraction curve: for every pattern set, train, then for every
/// pattern and every d0 perturb, relax and record the final distance.
/// Sets run concurrently; the reduction runs in (set, pattern) order.
inline BasinCurve basin_curve(const BasinConfig& config) {
  config.validate();
  const std::vector<double> grid = config.grid();
  std::vector<detail::SetOutcome> sets(config.n_sets);
  parallel_for(config.n_sets, config.threads, [&](std::size_t s) {
    sets[s] = config.model == BasinModel::gan ? detail::run_gan_set(config, grid, s)
                                              : detail::run_multistate_set(config, grid, s);
  });

  BasinCurve curve;
  curve.config = config;
  curve.config.d0_grid = grid;
  const std::size_t p = config.patterns(), g_count = grid.size();
  for (const auto& s : sets) {
    curve.excluded_sets += s.excluded;
    curve.two_cycles += s.two_cycles;
    curve.not_converged += s.not_converged;
  }
  for (std::size_t g = 0; g < g_count; ++g) {
    BasinRow row;
    row.d0 = grid[g];
    double sum = 0.0;
    for (const auto& s : sets)
      if (!s.excluded)
        for (std::size_t mu = 0; mu < p; ++mu) sum += s.d_f[mu * g_count + g];
    row.n_trials = (config.n_sets - curve.excluded_sets) * p;
    if (row.n_trials > 0) {
      row.mean_df = sum / static_cast<double>(row.n_trials);
      double ss = 0.0;
      for (const auto& s : sets)
        if (!s.excluded)
          for (std::size_t mu = 0; mu < p; ++mu) {
            const double d = s.d_f[mu * g_count + g] - row.mean_df;
            ss += d * d;
          }
      if (row.n_trials > 1) {
        const double sd = std::sqrt(ss / static_cast<double>(row.n_trials - 1));
        row.stderr_df = sd / std::sqrt(static_cast<double>(row.n_trials));
      }
    }
    curve.rows.push_back(row);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Feed-forward correspondence

/// Three-layer network for one neuron i of a linear-characteristic network:
/// N-1 linear inputs (the other neurons' characteristic values), Q logistic
/// hidden units with weights W_ij^a and bias -theta_i^a, one linear output
/// with weights J^a.
struct FfNet {
  std::size_t neuron = 0;
  std::size_t hidden = 0;                 // Q
  std::vector<std::size_t> inputs;        // j != i, ascending
  std::vector<double> input_weights;      // [a][k], Q x (N-1)
  std::vector<double> hidden_bias;        // Q
  std::vector<double> output_weights;     // Q

  [[nodiscard]] std::size_t input_width() const { return inputs.size(); }

  [[nodiscard]] double evaluate(std::span<const double> x) const {
    if (x.size() != inputs.size()) throw std::invalid_argument("input width mismatch");
    double y = 0.0;
    for (std::size_t a = 0; a < hidden; ++a) {
      const double* w = input_weights.data() + a * inputs.size();
      double z = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) z += w[k] * x[k];
      y += output_weights[a] * sigmoid(z + hidden_bias[a]);
    }
    return y;
  }
};

inline FfNet build_ff_equivalent(const Network& net, std::size_t i) {
  require_continuous_network(net);
  if (net.couplings()) throw std::invalid_argument("feed-forward form needs a non-interacting network");
  if (i >= net.n()) throw std::out_of_range("neuron index out of range");
  const std::size_t n = net.n(), q = net.q();
  FfNet ff;
  ff.neuron = i;
  ff.hidden = q;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) ff.inputs.push_back(j);
  ff.input_weights.reserve(q * (n - 1));
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t j : ff.inputs) ff.input_weights.push_back(net.weights()(a, i, j));
    ff.hidden_bias.push_back(-net.threshold(i, a));
  }
  ff.output_weights = net.spec().characteristic.coefficients;
  return ff;
}

/// Random linear-characteristic network: W, J uniform in [-1, 1], theta uniform in [-0.5, 0.5].
inline Network random_linear_network(std::size_t n, std::size_t q, RunSeed seed) {
  Rng rng = seed.engine();
  std::vector<double> j(q);
  for (auto& v : j) v = uniform_real(rng, -1.0, 1.0);
  WeightTensor w(q, n);
  for (auto& v : w.data()) v = uniform_real(rng, -1.0, 1.0);
  w.zero_diagonal();
  std::vector<double> theta(n * q);
  for (auto& v : theta) v = uniform_real(rng, -0.5, 0.5);
  return build_network(GanSpec{n, q, CharacteristicSpec::linear(std::move(j)), false}, std::move(w),
                       std::nullopt, std::move(theta));
}

/// Largest |f_i(feed-forward) - f_i(network step)| over all neurons and
/// `n_trials` random continuous states.
inline double verify_ff_equivalence(const Network& net, std::size_t n_trials, RunSeed seed) {
  require_continuous_network(net);
  const std::size_t n = net.n(), q = net.q();
  std::vector<FfNet> ffs;
  ffs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ffs.push_back(build_ff_equivalent(net, i));

  Rng rng = seed.engine();
  double worst = 0.0;
  std::vector<double> x(n - 1);
  for (std::size_t t = 0; t < n_trials; ++t) {
    ContinuousState s(n, q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < q; ++a) s(i, a) = uniform01(rng);
    const auto f_prev = characteristic_values(net, s);
    const auto f_next = characteristic_values(net, step_continuous(net, s));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n - 1; ++k) x[k] = f_prev[ffs[i].inputs[k]];
      worst = std::max(worst, std::abs(ffs[i].evaluate(x) - f_next[i]));
    }
  }
  return worst;
}

}  // namespace gan
