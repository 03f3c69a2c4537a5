#pragma once

// Replica-symmetric information capacity of GAN attractor networks.
//
// Notation used below, with phi(u) = exp(-u^2/2)/sqrt(2 pi):
//   aux residual   r(x) = (2 rho - 1)[phi(x) - x/2 erfc(x/sqrt2)] - (1 - rho) x
//   g(u)           = phi(u) + u/2 erfc(-u/sqrt2)
//   gardner(u)     = u phi(u) + (1 + u^2)/2 erfc(-u/sqrt2)
//   general aux    rho g(K - V) = (1 - rho) g(K + V)
//   1/alpha_c      = [rho gardner(K - V) + (1 - rho) gardner(K + V)]
//                    * (1 + lambda a) / (1 + lambda sqrt(a))^2,   a = rho(1-rho)/var_phi
//   E              = entropy(rho) alpha_c / (1 + lambda)
//
// Both residuals are strictly decreasing in their unknown, so the roots are unique.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gan {

/// Root bracketing or polishing failed.
class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complementary error function, (2/sqrt(pi)) * integral_z^inf exp(-y^2) dy.
inline double erfc(double z) { return std::erfc(z); }

inline constexpr double kDefaultRootTol = 1e-12;

namespace detail {

inline double gauss_density(double u) {
  return std::exp(-0.5 * u * u) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

inline void check_open_unit(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie strictly in (0, 1)");
}

/// Root of a strictly decreasing f. Brackets by doubling [lo, hi], bisects to
/// width 1e-6, then Newton-polishes; a Newton step leaving the bracket falls
/// back to bisection down to machine resolution.
template <class F, class DF>
double decreasing_root(F&& f, DF&& df, double lo, double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  for (int k = 0; k < 200 && !(flo >= 0.0 && fhi <= 0.0); ++k) {
    const double width = hi - lo;
    if (flo < 0.0) lo -= width;
    if (fhi > 0.0) hi += width;
    flo = f(lo);
    fhi = f(hi);
  }
  if (!(flo >= 0.0 && fhi <= 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw RootFindingError("could not bracket the root");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;

  auto bisect_until = [&](double width) {
    while (hi - lo > width) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      (fm > 0.0 ? lo : hi) = mid;
    }
  };
  bisect_until(1e-6);
  if (lo == hi) return lo;

  double x = 0.5 * (lo + hi);
  bool polished = false;
  for (int it = 0; it < 60; ++it) {
    const double fx = f(x), d = df(x);
    if (fx == 0.0) {
      polished = true;
      break;
    }
    if (!(d < 0.0)) break;
    const double next = x - fx / d;
    if (!(next >= lo && next <= hi)) break;
    (fx > 0.0 ? lo : hi) = x;
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      x = next;
      polished = true;
      break;
    }
    x = next;
  }
  if (!polished) {
    bisect_until(0.0);
    x = 0.5 * (lo + hi);
  }
  if (!(std::abs(f(x)) < tol)) throw RootFindingError("root residual above tolerance");
  return x;
}

}  // namespace detail

/// Shannon entropy of a Bernoulli(rho) bit, in bits.
inline double entropy_bits(double rho) {
  detail::check_open_unit(rho);
  return -(rho * std::log2(rho) + (1.0 - rho) * std::log2(1.0 - rho));
}

inline double aux_residual(double x, double rho) {
  const double bracket = detail::gauss_density(x) - 0.5 * x * erfc(x / std::numbers::sqrt2);
  return (2.0 * rho - 1.0) * bracket - (1.0 - rho) * x;
}

/// Unique real root x of the auxiliary equation.
inline double solve_aux(double rho, double tol = kDefaultRootTol) {
  detail::check_open_unit(rho);
  auto f = [rho](double x) { return aux_residual(x, rho); };
  auto df = [rho](double x) {
    return -0.5 * (2.0 * rho - 1.0) * erfc(x / std::numbers::sqrt2) - (1.0 - rho);
  };
  return detail::decreasing_root(f, df, -1.0, 1.0, tol);
}

struct CapacitySolution {
  double root = 0.0;     // x (simple) or V (general)
  double alpha_c = 0.0;  // P_c / N
  double e_bits = 0.0;   // bits per weight
  double e0_bits = 0.0;  // bits per weight at lambda = 0
};

/// E = entropy(rho) / [1 - rho + (2 rho - 1) erfc(x/sqrt2) / 2], alpha_c = E / entropy.
inline CapacitySolution capacity_simple(double rho, double tol = kDefaultRootTol) {
  const double x = solve_aux(rho, tol);
  const double denom = 1.0 - rho + 0.5 * (2.0 * rho - 1.0) * erfc(x / std::numbers::sqrt2);
  CapacitySolution s;
  s.root = x;
  s.alpha_c = 1.0 / denom;
  s.e_bits = entropy_bits(rho) * s.alpha_c;
  s.e0_bits = s.e_bits;
  return s;
}

struct CapacityParams {
  double rho = 0.5;
  double lambda = 0.0;   // Q / N
  double kappa = 0.0;    // raw margin
  double var_phi = 0.25; // <phi^2> - <phi>^2

  /// K = kappa / [var_phi + rho (1 - rho)]
  [[nodiscard]] double K() const { return kappa / (var_phi + rho * (1.0 - rho)); }

  void validate() const {
    detail::check_open_unit(rho);
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
    if (!(var_phi > 0.0)) throw std::invalid_argument("var_phi must be positive");
  }

  /// Parameters whose normalized margin equals `k`.
  static CapacityParams from_K(double rho, double lambda, double k, double var_phi) {
    return CapacityParams{rho, lambda, k * (var_phi + rho * (1.0 - rho)), var_phi};
  }
};

namespace detail {
inline double g_term(double u) {
  return gauss_density(u) + 0.5 * u * erfc(-u / std::numbers::sqrt2);
}
inline double gardner_term(double u) {
  return u * gauss_density(u) + 0.5 * (1.0 + u * u) * erfc(-u / std::numbers::sqrt2);
}
}  // namespace detail

inline double gen_aux_residual(double v, double rho, double k) {
  return rho * detail::g_term(k - v) - (1.0 - rho) * detail::g_term(k + v);
}

/// V of the general auxiliary equation, bracket search starting at +-(10 + K).
inline double solve_gen_aux(const CapacityParams& params, double tol = kDefaultRootTol) {
  params.validate();
  const double rho = params.rho, k = params.K();
  auto f = [=](double v) { return gen_aux_residual(v, rho, k); };
  auto df = [=](double v) {
    return -0.5 * rho * erfc((v - k) / std::numbers::sqrt2) -
           0.5 * (1.0 - rho) * erfc((-k - v) / std::numbers::sqrt2);
  };
  return detail::decreasing_root(f, df, -(10.0 + k), 10.0 + k, tol);
}

/// Critical load and information capacity of the general (K, lambda) case.
inline CapacitySolution alpha_critical(const CapacityParams& params, double tol = kDefaultRootTol) {
  params.validate();
  const double rho = params.rho, k = params.K(), lambda = params.lambda;
  const double v = solve_gen_aux(params, tol);
  const double base = rho * detail::gardner_term(k - v) + (1.0 - rho) * detail::gardner_term(k + v);
  const double a = rho * (1.0 - rho) / params.var_phi;
  const double num = 1.0 + lambda * std::sqrt(a);
  const double inv_alpha = base * (1.0 + lambda * a) / (num * num);
  const double h = entropy_bits(rho);
  CapacitySolution s;
  s.root = v;
  s.alpha_c = 1.0 / inv_alpha;
  s.e_bits = h * s.alpha_c / (1.0 + lambda);
  s.e0_bits = h / base;
  return s;
}

/// E = E0 [1 + lambda sqrt(a)]^2 / [(1 + lambda)(1 + lambda a)],  a = rho(1-rho)/var_phi.
inline double capacity_interacting(double rho, double lambda, double var_phi) {
  detail::check_open_unit(rho);
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!(var_phi > 0.0)) throw std::invalid_argument("var_phi must be positive");
  const double e0 = capacity_simple(rho).e_bits;
  const double a = rho * (1.0 - rho) / var_phi;
  const double num = 1.0 + lambda * std::sqrt(a);
  return e0 * ((num * num) / ((1.0 + lambda) * (1.0 + lambda * a)));
}

}  // namespace gan
