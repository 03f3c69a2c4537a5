#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gan/random.hpp"

namespace gan {

/// Largest number of internal bit-variables per neuron (one 64-bit word).
inline constexpr std::size_t kMaxQ = 64;
/// Largest Q for which a boolean truth table is accepted (2^Q entries).
inline constexpr std::size_t kMaxTableQ = 24;

enum class CharKind { parity, linear, correlation, grandmother, boolean_table, io_code };

/// Declarative description of a characteristic function f: {0,1}^Q -> R.
///
/// Bit a of a neuron word holds internal variable s^(a+1); the first variable
/// is the least significant bit. Table lookups and io-code use that order.
struct CharacteristicSpec {
  CharKind kind = CharKind::parity;
  std::vector<double> coefficients;  // linear: J^a
  std::uint64_t templ = 0;           // correlation / grandmother: t^a as bits
  std::vector<double> table;         // boolean_table: 2^Q values

  static CharacteristicSpec parity() { return {CharKind::parity, {}, 0, {}}; }
  static CharacteristicSpec io_code() { return {CharKind::io_code, {}, 0, {}}; }
  static CharacteristicSpec linear(std::vector<double> j) {
    return {CharKind::linear, std::move(j), 0, {}};
  }
  static CharacteristicSpec correlation(std::uint64_t t) {
    return {CharKind::correlation, {}, t, {}};
  }
  static CharacteristicSpec grandmother(std::uint64_t t) {
    return {CharKind::grandmother, {}, t, {}};
  }
  static CharacteristicSpec boolean_table(std::vector<double> t) {
    return {CharKind::boolean_table, {}, 0, std::move(t)};
  }

  friend bool operator==(const CharacteristicSpec&, const CharacteristicSpec&) = default;
};

inline std::uint64_t low_mask(std::size_t q) {
  return q >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << q) - 1);
}

/// Throws std::invalid_argument unless the payload matches the kind for this Q.
inline void validate(const CharacteristicSpec& spec, std::size_t q) {
  if (q == 0 || q > kMaxQ) throw std::invalid_argument("q must be in [1, 64]");
  switch (spec.kind) {
    case CharKind::linear:
      if (spec.coefficients.size() != q)
        throw std::invalid_argument("linear characteristic needs exactly q coefficients");
      break;
    case CharKind::correlation:
    case CharKind::grandmother:
      if ((spec.templ & ~low_mask(q)) != 0)
        throw std::invalid_argument("template has bits beyond q");
      break;
    case CharKind::boolean_table:
      if (q > kMaxTableQ) throw std::invalid_argument("boolean table needs q <= 24");
      if (spec.table.size() != (std::size_t{1} << q))
        throw std::invalid_argument("boolean table needs 2^q entries");
      break;
    case CharKind::io_code:
      if (q > 53) throw std::invalid_argument("io-code needs q <= 53");
      break;
    case CharKind::parity:
      break;
  }
}

/// f(bits) for a neuron whose Q internal bits are packed in `bits`.
inline double eval_characteristic(const CharacteristicSpec& spec, std::uint64_t bits,
                                  std::size_t q) {
  switch (spec.kind) {
    case CharKind::parity:
      return static_cast<double>(std::popcount(bits) & 1);
    case CharKind::linear: {
      double f = 0.0;
      for (std::size_t a = 0; a < q; ++a)
        if ((bits >> a) & 1U) f += spec.coefficients[a];
      return f;
    }
    case CharKind::correlation:
      return static_cast<double>(std::popcount(bits & spec.templ)) / static_cast<double>(q);
    case CharKind::grandmother:
      return bits == spec.templ ? 1.0 : 0.0;
    case CharKind::boolean_table:
      return spec.table[bits];
    case CharKind::io_code:
      return static_cast<double>(bits);
  }
  return 0.0;
}

/// f for real-valued internal variables in [0,1]; only the linear kind has a
/// continuous extension.
inline double eval_characteristic(const CharacteristicSpec& spec,
                                  std::span<const double> values) {
  if (spec.kind != CharKind::linear)
    throw std::invalid_argument("continuous input requires a linear characteristic");
  if (values.size() != spec.coefficients.size())
    throw std::invalid_argument("continuous input length must equal q");
  double f = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) f += spec.coefficients[a] * values[a];
  return f;
}

/// True when every value of f lies in {0, 1}.
inline bool is_binary_valued(const CharacteristicSpec& spec) {
  switch (spec.kind) {
    case CharKind::parity:
    case CharKind::grandmother:
      return true;
    case CharKind::boolean_table:
      for (double v : spec.table)
        if (v != 0.0 && v != 1.0) return false;
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Moments

enum class MomentMethod { exhaustive, monte_carlo };

struct MomentEstimate {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  MomentMethod method = MomentMethod::exhaustive;
  std::size_t samples = 0;  // monte_carlo only
};

inline constexpr std::size_t kExhaustiveMaxQ = 20;
inline constexpr std::size_t kDefaultMomentSamples = 100000;

inline void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
}

namespace detail {
inline MomentEstimate finish_moments(double mean, double m2, MomentMethod method,
                                     std::size_t samples) {
  const double var = m2 - mean * mean;
  return {mean, m2, var > 0.0 ? var : 0.0, method, samples};
}
}  // namespace detail

/// Moments of f under the product measure P(s^a = 0) = rho, by summing all 2^Q states.
inline MomentEstimate moments_exhaustive(const CharacteristicSpec& spec, std::size_t q,
                                         double rho) {
  validate(spec, q);
  check_rho(rho);
  if (q > kExhaustiveMaxQ) throw std::invalid_argument("exhaustive moments need q <= 20");
  // weight of a state with k ones: (1-rho)^k rho^(q-k)
  std::vector<double> weight(q + 1);
  for (std::size_t k = 0; k <= q; ++k)
    weight[k] = std::pow(1.0 - rho, static_cast<double>(k)) *
                std::pow(rho, static_cast<double>(q - k));
  double mean = 0.0, m2 = 0.0;
  const std::uint64_t states = std::uint64_t{1} << q;
  for (std::uint64_t s = 0; s < states; ++s) {
    const double f = eval_characteristic(spec, s, q);
    const double w = weight[static_cast<std::size_t>(std::popcount(s))];
    mean += w * f;
    m2 += w * f * f;
  }
  return detail::finish_moments(mean, m2, MomentMethod::exhaustive, 0);
}

inline MomentEstimate moments_monte_carlo(const CharacteristicSpec& spec, std::size_t q,
                                          double rho, RunSeed seed, std::size_t samples) {
  validate(spec, q);
  check_rho(rho);
  if (samples == 0) throw std::invalid_argument("samples must be positive");
  Rng rng = seed.engine();
  double mean = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    std::uint64_t bits = 0;
    for (std::size_t a = 0; a < q; ++a)
      if (uniform01(rng) >= rho) bits |= std::uint64_t{1} << a;
    const double f = eval_characteristic(spec, bits, q);
    mean += f;
    m2 += f * f;
  }
  const auto n = static_cast<double>(samples);
  return detail::finish_moments(mean / n, m2 / n, MomentMethod::monte_carlo, samples);
}

/// Exhaustive for Q <= 20, Monte Carlo above.
inline MomentEstimate estimate_moments(const CharacteristicSpec& spec, std::size_t q,
                                       double rho, RunSeed seed,
                                       std::optional<std::size_t> samples = std::nullopt) {
  if (q <= kExhaustiveMaxQ) return moments_exhaustive(spec, q, rho);
  return moments_monte_carlo(spec, q, rho, seed, samples.value_or(kDefaultMomentSamples));
}

// ---------------------------------------------------------------------------
// Admissibility conditions

inline constexpr double kDefaultConditionFactor = 0.1;
inline constexpr double kVarianceEpsilon = 1e-12;

struct ConditionReport {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double mean_bound = 0.0;    // c * sqrt(N)
  double second_bound = 0.0;  // c * N
  bool cond1 = false;         // |<f>| <= c sqrt(N)
  bool cond2 = false;         // <f^2> <= c N
  bool cond3 = false;         // var f > eps

  [[nodiscard]] bool all() const { return cond1 && cond2 && cond3; }
};

/// "Much less than" is read as "<= c times the bound".
inline ConditionReport check_conditions(const MomentEstimate& m, std::size_t n,
                                        double c = kDefaultConditionFactor) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  ConditionReport r;
  r.mean = m.mean;
  r.second_moment = m.second_moment;
  r.variance = m.variance;
  r.mean_bound = c * std::sqrt(static_cast<double>(n));
  r.second_bound = c * static_cast<double>(n);
  r.cond1 = std::abs(m.mean) <= r.mean_bound;
  r.cond2 = m.second_moment <= r.second_bound;
  r.cond3 = m.variance > kVarianceEpsilon;
  return r;
}

// ---------------------------------------------------------------------------
// Text form
//
//   parity | io-code | linear:J1,J2,... | correlation:t1t2... | grandmother:t1t2...
//   | table:v0,v1,...,v(2^Q-1)
//
// Template strings list s^1 first ("10" means s^1 = 1, s^2 = 0).

namespace detail {
inline std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item(text.substr(pos, comma - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw std::invalid_argument("bad number '" + item + "' in characteristic");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
}  // namespace detail

inline std::string kind_name(CharKind k) {
  switch (k) {
    case CharKind::parity: return "parity";
    case CharKind::linear: return "linear";
    case CharKind::correlation: return "correlation";
    case CharKind::grandmother: return "grandmother";
    case CharKind::boolean_table: return "table";
    case CharKind::io_code: return "io-code";
  }
  return "?";
}

/// Parses the text form; `q` is needed to validate payload sizes.
inline CharacteristicSpec parse_characteristic(std::string_view text, std::size_t q) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view payload =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_payload = colon != std::string_view::npos;

  CharacteristicSpec spec;
  auto parse_template = [&](CharKind kind) {
    if (!has_payload || payload.size() != q)
      throw std::invalid_argument(std::string(name) + " needs a template of exactly q bits");
    std::uint64_t t = 0;
    for (std::size_t a = 0; a < payload.size(); ++a) {
      if (payload[a] == '1') t |= std::uint64_t{1} << a;
      else if (payload[a] != '0') throw std::invalid_argument("template must be 0/1 digits");
    }
    spec = CharacteristicSpec{kind, {}, t, {}};
  };

  if (name == "parity" || name == "io-code") {
    if (has_payload) throw std::invalid_argument(std::string(name) + " takes no payload");
    spec = name == "parity" ? CharacteristicSpec::parity() : CharacteristicSpec::io_code();
  } else if (name == "linear") {
    if (!has_payload) throw std::invalid_argument("linear needs coefficients");
    spec = CharacteristicSpec::linear(detail::parse_number_list(payload));
  } else if (name == "correlation") {
    parse_template(CharKind::correlation);
  } else if (name == "grandmother") {
    parse_template(CharKind::grandmother);
  } else if (name == "table") {
    if (!has_payload) throw std::invalid_argument("table needs values");
    spec = CharacteristicSpec::boolean_table(detail::parse_number_list(payload));
  } else {
    throw std::invalid_argument("unknown characteristic kind '" + std::string(name) + "'");
  }
  validate(spec, q);
  return spec;
}

inline std::string to_string(const CharacteristicSpec& spec, std::size_t q) {
  std::ostringstream os;
  os << kind_name(spec.kind);
  switch (spec.kind) {
    case CharKind::linear:
    case CharKind::boolean_table: {
      const auto& v = spec.kind == CharKind::linear ? spec.coefficients : spec.table;
      os << ':';
      for (std::size_t k = 0; k < v.size(); ++k)
        os << (k ? "," : "") << detail::format_number(v[k]);
      break;
    }
    case CharKind::correlation:
    case CharKind::grandmother:
      os << ':';
      for (std::size_t a = 0; a < q; ++a) os << (((spec.templ >> a) & 1U) ? '1' : '0');
      break;
    default:
      break;
  }
  return os.str();
}

}  // namespace gan
