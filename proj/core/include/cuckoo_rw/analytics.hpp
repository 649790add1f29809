#pragma once

// Closed-form constants and implicit equations behind k-ary cuckoo hashing:
// load thresholds, the random-walk exponent, 2-core size predictions and the
// small integer constants used to size walk phases.
//
// Everything here is a pure function of its arguments.

#include <cstdint>

namespace cuckoo_rw::analytics {

/// f(x) = x(1 - e^-x) / (k(1 - e^-x - x e^-x)): edge/vertex ratio of the
/// 2-core when its Poisson parameter is x. Strictly increasing on x > 0.
double core_density_fn(double x, int k);

/// g(x) = x / (k(1 - e^-x)^(k-1)): load c that produces core parameter x.
/// Unimodal on x > 0.
double load_fn(double x, int k);

/// The unique xi > 0 with f(xi) = 1.
double solve_xi_star(int k);

/// c_k^* = g(xi*).
double load_threshold(int k);

/// log_k((k-1)e^k) / ((k-1) log_k(k-1)).
double walk_exponent(int k);

struct LambdaK {
  double value;      ///< min over x > 0 of x / (1 - e^-x)^(k-1)
  double minimizer;  ///< the arg-min x_g
};

LambdaK lambda_k(int k);

struct CorePrediction {
  double vertex_fraction = 0.0;
  double edge_fraction = 0.0;
  double xi = 0.0;
  double density = 0.0;

  bool empty() const { return vertex_fraction == 0.0; }
};

/// Predicted 2-core of a random k-graph with c*n edges. Empty when
/// c*k <= lambda_k.
CorePrediction core_prediction(double c, int k);

/// ceil(T) + extra_steps with T = log_{k-1} n + (c + zeta) log_{k-1} log_{k-1} n.
std::int64_t phase_length(std::int64_t n, int k, double zeta, std::int64_t extra_steps);

/// ceil(log_{1-delta} alpha).
std::int64_t stripping_constant(double alpha, double delta);

struct ThresholdReport {
  int k = 0;
  double xi_star = 0.0;
  double c_star = 0.0;
  double lambda_k = 0.0;
  double walk_exponent = 0.0;
};

ThresholdReport threshold_report(int k);

/// |k - xi(1 - e^-xi) / (1 - e^-xi - xi e^-xi)|.
double xi_star_residual(double xi, int k);

}  // namespace cuckoo_rw::analytics
