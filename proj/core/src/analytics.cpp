#include "cuckoo_rw/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cuckoo_rw::analytics {
namespace {

constexpr double kSeriesCutoff = 1e-3;

void require_k(int k) {
  if (k < 3) {
    throw std::domain_error("analytics: k must be >= 3, got " + std::to_string(k));
  }
}

// 1 - e^-x
double one_minus_exp(double x) {
  return -std::expm1(-x);
}

// 1 - e^-x - x e^-x, with a Taylor branch near zero where the two terms cancel.
// Coefficients are (-1)^j (j-1)/j!.
double poisson_tail2(double x) {
  if (x < kSeriesCutoff) {
    const double x2 = x * x;
    return x2 * (1.0 / 2 - x * (1.0 / 3 - x * (1.0 / 8 - x * (1.0 / 30 - x * (1.0 / 144)))));
  }
  return one_minus_exp(x) - x * std::exp(-x);
}

// Bisection on a function that is negative at lo and nonnegative at hi.
// Runs until the midpoint collapses onto an endpoint, i.e. to full precision.
template <typename F>
double bisect(F&& fn, double lo, double hi) {
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (fn(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

template <typename F>
double expand_upper(F&& fn, double hi) {
  while (fn(hi) < 0) {
    hi *= 2;
    if (!std::isfinite(hi)) throw std::runtime_error("analytics: bracket expansion diverged");
  }
  return hi;
}

}  // namespace

double core_density_fn(double x, int k) {
  return x * one_minus_exp(x) / (k * poisson_tail2(x));
}

double load_fn(double x, int k) {
  return x / (k * std::pow(one_minus_exp(x), k - 1));
}

double xi_star_residual(double xi, int k) {
  return std::abs(k - xi * one_minus_exp(xi) / poisson_tail2(xi));
}

double solve_xi_star(int k) {
  require_k(k);
  // f(0+) = 2/k < 1 and f grows like x/k, so [small, k] brackets the root.
  auto excess = [k](double x) { return core_density_fn(x, k) - 1.0; };
  const double lo = 1e-6;
  const double hi = expand_upper(excess, static_cast<double>(k));
  return bisect(excess, lo, hi);
}

double load_threshold(int k) {
  require_k(k);
  return load_fn(solve_xi_star(k), k);
}

double walk_exponent(int k) {
  require_k(k);
  const double km1 = k - 1;
  // The log_k bases cancel.
  return (std::log(km1) + k) / (km1 * std::log(km1));
}

LambdaK lambda_k(int k) {
  require_k(k);
  // d/dx log(x / (1-e^-x)^(k-1)) = 1/x - (k-1)/(e^x - 1); its zero is the
  // positive root of e^x - 1 - (k-1)x, below which the derivative is negative.
  auto slope = [k](double x) { return std::expm1(x) - (k - 1) * x; };
  const double lo = 1e-9;
  const double hi = expand_upper(slope, 1.0);
  const double x_g = bisect(slope, lo, hi);
  return {x_g / std::pow(one_minus_exp(x_g), k - 1), x_g};
}

CorePrediction core_prediction(double c, int k) {
  require_k(k);
  if (!(c > 0.0 && c < 1.0)) {
    throw std::domain_error("analytics: core_prediction needs 0 < c < 1");
  }
  const LambdaK lam = lambda_k(k);
  if (c * k <= lam.value) return {};

  // The largest root x of x = (1 - e^{-xck})^{k-1} maps to xi = xck, the
  // largest root of g(xi) = c. g is increasing past its minimizer.
  auto excess = [c, k](double xi) { return load_fn(xi, k) - c; };
  const double lo = lam.minimizer;
  const double hi = expand_upper(excess, std::max(2.0 * lo, 1.0));
  const double xi = bisect(excess, lo, hi);

  CorePrediction out;
  out.xi = xi;
  out.vertex_fraction = poisson_tail2(xi);
  out.density = core_density_fn(xi, k);
  out.edge_fraction = out.density * out.vertex_fraction;
  return out;
}

std::int64_t phase_length(std::int64_t n, int k, double zeta, std::int64_t extra_steps) {
  require_k(k);
  if (n < 3) throw std::domain_error("analytics: phase_length needs n >= 3");
  if (!(zeta > 0.0)) throw std::domain_error("analytics: phase_length needs zeta > 0");
  if (extra_steps < 0) throw std::domain_error("analytics: phase_length needs C >= 0");
  const double base = std::log(static_cast<double>(k - 1));
  const double log_n = std::log(static_cast<double>(n)) / base;
  if (log_n < 1.0) {
    throw std::domain_error("analytics: log_{k-1} log_{k-1} n is negative for this n");
  }
  const double log_log_n = std::log(log_n) / base;
  const double t = log_n + (walk_exponent(k) + zeta) * log_log_n;
  return static_cast<std::int64_t>(std::ceil(t)) + extra_steps;
}

std::int64_t stripping_constant(double alpha, double delta) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("analytics: stripping_constant needs alpha, delta in (0,1)");
  }
  const double ratio = std::log(alpha) / std::log1p(-delta);
  // Exact powers like (1-delta)^2 == alpha must not round up to the next integer.
  const double nearest = std::nearbyint(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, std::abs(ratio))) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(ratio));
}

ThresholdReport threshold_report(int k) {
  require_k(k);
  ThresholdReport r;
  r.k = k;
  r.xi_star = solve_xi_star(k);
  r.c_star = load_fn(r.xi_star, k);
  r.lambda_k = lambda_k(k).value;
  r.walk_exponent = walk_exponent(k);
  return r;
}

}  // namespace cuckoo_rw::analytics
