#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cuckoo_rw/analytics.hpp"
#include "oracles.hpp"

namespace an = cuckoo_rw::analytics;

namespace {

// Independent high-precision evaluation (40 digits) of xi*, c_k*, lambda_k
// and x_g for k = 3..10.
struct Frozen {
  int k;
  double xi_star;
  double c_star;
  double lambda;
  double x_g;
};
constexpr Frozen kFrozen[] = {
    {3, 2.1491257999070625421, 0.91793527665808601352, 2.4554074822841279494, 1.256431208626169677},
    {4, 3.5935119694474260823, 0.97677016487804613156, 3.089119359210033745, 1.9038136944403834847},
    {5, 4.8010075497225178434, 0.99243839126210062666, 3.5089013324228448411, 2.3366629822630538812},
    {6, 5.9030000589489438105, 0.99737955277867234803, 3.8224867636449224821, 2.6603990584636849904},
    {7, 6.9534557133534745718, 0.99906375875368025549, 4.072426238997211492, 2.9183004757830525913},
    {8, 7.9781077369770703258, 0.99966039874286382438, 4.2799782903536965177, 3.1322654505404201068},
    {9, 8.9899125192694797379, 0.99987589806016503135, 4.4572953785878381248, 3.3148773617860549309},
    {10, 9.9954411338148427414, 0.9999544861999791689, 4.6119737110871471332, 3.4740194769663545055},
};

long truncated(double v, int digits) {
  return static_cast<long>(std::floor(v * std::pow(10.0, digits)));
}

}  // namespace

TEST_CASE("xi* solves its defining equation") {
  for (const auto& row : kFrozen) {
    CAPTURE(row.k);
    const double xi = an::solve_xi_star(row.k);
    CHECK(an::xi_star_residual(xi, row.k) < 1e-10);
    CHECK(xi == doctest::Approx(row.xi_star).epsilon(1e-11));
    CHECK(xi >= row.k / 2.0);
  }
  CHECK(an::solve_xi_star(3) > 2.14);
  CHECK(an::solve_xi_star(3) == an::solve_xi_star(3));
  CHECK_THROWS_AS(an::solve_xi_star(2), std::domain_error);
}

TEST_CASE("load thresholds match the published truncated values") {
  CHECK(truncated(an::load_threshold(3), 3) == 917);
  CHECK(truncated(an::load_threshold(4), 3) == 976);
  CHECK(truncated(an::load_threshold(5), 3) == 992);
  for (const auto& row : kFrozen) {
    CAPTURE(row.k);
    CHECK(an::load_threshold(row.k) == doctest::Approx(row.c_star).epsilon(1e-11));
  }
  for (int k = 3; k <= 10; ++k) {
    CAPTURE(k);
    const double c = an::load_threshold(k);
    CHECK(c > 0.0);
    CHECK(c < 1.0);
    CHECK(c < an::load_threshold(k + 1));
    // c = xi / (k (1 - e^-xi)^(k-1))
    const double xi = an::solve_xi_star(k);
    CHECK(c == doctest::Approx(xi / (k * std::pow(1 - std::exp(-xi), k - 1))).epsilon(1e-12));
  }
  CHECK(std::abs(an::load_threshold(10) - (1 - std::exp(-10.0))) < 0.01);
  CHECK_THROWS_AS(an::load_threshold(1), std::domain_error);
}

TEST_CASE("walk exponent") {
  CHECK(truncated(an::walk_exponent(3), 2) == 266);
  CHECK(truncated(an::walk_exponent(4), 2) == 154);
  CHECK(truncated(an::walk_exponent(5), 2) == 115);
  // log_k((k-1)e^k) / ((k-1) log_k(k-1)) written with explicit base-k logs.
  for (int k = 3; k <= 12; ++k) {
    const double lk = std::log(k);
    const double direct = (std::log((k - 1) * std::exp(k)) / lk) / ((k - 1) * std::log(k - 1) / lk);
    CHECK(an::walk_exponent(k) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK_THROWS_AS(an::walk_exponent(2), std::domain_error);
}

TEST_CASE("lambda_k agrees with golden-section search and a dense grid") {
  for (int k = 3; k <= 10; ++k) {
    CAPTURE(k);
    auto objective = [k](double x) { return x / std::pow(1 - std::exp(-x), k - 1); };
    const double x_gs = cuckoo_rw::oracle::golden_section_min(objective, 1e-3, 20.0);
    double grid_min = HUGE_VAL;
    for (int i = 1; i <= 200000; ++i) grid_min = std::min(grid_min, objective(i * 1e-4));

    const an::LambdaK lam = an::lambda_k(k);
    CHECK(std::abs(lam.value - objective(x_gs)) < 1e-10);
    CHECK(lam.value <= grid_min + 1e-12);
    CHECK(grid_min - lam.value < 1e-7);  // grid spacing 1e-4, quadratic minimum
    CHECK(lam.minimizer == doctest::Approx(x_gs).epsilon(1e-6));
    CHECK(lam.value / k == doctest::Approx(an::load_fn(lam.minimizer, k)).epsilon(1e-13));
  }
  for (const auto& row : kFrozen) {
    CHECK(an::lambda_k(row.k).value == doctest::Approx(row.lambda).epsilon(1e-11));
    CHECK(an::lambda_k(row.k).minimizer == doctest::Approx(row.x_g).epsilon(1e-9));
  }
  for (int k : {3, 4, 5}) {
    CHECK(an::lambda_k(k).value < k * an::load_threshold(k));
    CHECK(an::lambda_k(k).minimizer < an::solve_xi_star(k));
  }
  CHECK_THROWS_AS(an::lambda_k(0), std::domain_error);
}

TEST_CASE("f is increasing and g has a single turn") {
  for (int k : {3, 4, 5, 8}) {
    CAPTURE(k);
    double prev_f = an::core_density_fn(0.5, k);
    double prev_g = an::load_fn(0.5, k);
    int sign_changes = 0;
    int prev_sign = 0;
    for (double x = 0.51; x <= 20.0; x += 0.01) {
      const double f = an::core_density_fn(x, k);
      CHECK(f > prev_f);
      prev_f = f;
      const double g = an::load_fn(x, k);
      const int sign = g > prev_g ? 1 : -1;
      if (prev_sign != 0 && sign != prev_sign) ++sign_changes;
      prev_sign = sign;
      prev_g = g;
    }
    CHECK(sign_changes == 1);
  }
}

TEST_CASE("series branch joins the direct formula") {
  for (int k : {3, 5}) {
    // f(0+) = 2/k
    CHECK(an::core_density_fn(1e-9, k) == doctest::Approx(2.0 / k).epsilon(1e-8));
    const double below = an::core_density_fn(0.999999e-3, k);
    const double above = an::core_density_fn(1.000001e-3, k);
    CHECK(below == doctest::Approx(above).epsilon(1e-8));
  }
}

TEST_CASE("core prediction") {
  SUBCASE("threshold load gives density one") {
    for (int k : {3, 4, 5}) {
      CAPTURE(k);
      const auto p = an::core_prediction(an::load_threshold(k), k);
      CHECK(std::abs(p.density - 1.0) < 1e-8);
    }
  }
  SUBCASE("below core emergence the prediction is empty") {
    const auto p = an::core_prediction(0.1, 3);
    CHECK(p.empty());
    CHECK(p.vertex_fraction == 0.0);
    CHECK(p.edge_fraction == 0.0);
    CHECK(an::core_prediction(0.80, 3).empty());  // 3 * 0.80 < lambda_3
  }
  SUBCASE("frozen high-precision values") {
    // Fixed-point iteration x <- (1 - e^{-3cx})^2 from x = 1 in 40-digit arithmetic.
    const auto p = an::core_prediction(0.85, 3);
    CHECK(p.vertex_fraction == doctest::Approx(0.511113301686217).epsilon(1e-12));
    CHECK(p.edge_fraction == doctest::Approx(0.468439830341304).epsilon(1e-12));
    CHECK(p.xi == doctest::Approx(1.71407612843333).epsilon(1e-12));
    const auto q = an::core_prediction(0.88, 3);
    CHECK(q.vertex_fraction == doctest::Approx(0.574094581390658).epsilon(1e-12));
    CHECK(q.edge_fraction == doctest::Approx(0.549116176116).epsilon(1e-11));
  }
  SUBCASE("fixed-point iteration and root scan agree") {
    for (double c : {0.83, 0.85, 0.9, 0.91}) {
      CAPTURE(c);
      const int k = 3;
      auto h = [&](double x) { return x - std::pow(1 - std::exp(-x * c * k), k - 1); };
      double x = 1.0;
      for (int i = 0; i < 100000; ++i) x = std::pow(1 - std::exp(-x * c * k), k - 1);
      // Scan down from 1 for the last sign change, then bisect.
      double hi = 1.0;
      double lo = 1.0;
      for (double y = 1.0; y > 0; y -= 1e-4) {
        if (h(y) < 0) {
          lo = y;
          break;
        }
        hi = y;
      }
      for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2;
        (h(mid) < 0 ? lo : hi) = mid;
      }
      const auto p = an::core_prediction(c, k);
      CHECK(p.xi == doctest::Approx(x * c * k).epsilon(1e-9));
      CHECK(p.xi == doctest::Approx(lo * c * k).epsilon(1e-12));
      CHECK(p.vertex_fraction == doctest::Approx(1 - std::exp(-p.xi) - p.xi * std::exp(-p.xi)).epsilon(1e-12));
    }
  }
  SUBCASE("monotone and subcritical density below one") {
    double prev = -1.0;
    for (double c : {0.80, 0.85, 0.90}) {
      const double v = an::core_prediction(c, 3).vertex_fraction;
      CHECK(v > prev);
      CHECK(v < 1.0);
      prev = v;
    }
    for (int k : {3, 4, 5}) {
      const double cstar = an::load_threshold(k);
      for (double c = 0.05; c < cstar; c += 0.005) {
        CHECK(an::core_prediction(c, k).density < 1.0);
      }
    }
  }
  CHECK_THROWS_AS(an::core_prediction(0.0, 3), std::domain_error);
  CHECK_THROWS_AS(an::core_prediction(1.0, 3), std::domain_error);
  CHECK_THROWS_AS(an::core_prediction(0.5, 2), std::domain_error);
}

TEST_CASE("phase length") {
  const std::int64_t n = std::int64_t{1} << 20;
  // log_2 n = 20 exactly; log_2 log_2 n = log_2 20.
  const auto expected = static_cast<std::int64_t>(std::ceil(20 + (an::walk_exponent(3) + 0.1) * std::log2(20.0))) + 10;
  CHECK(expected == 42);
  CHECK(an::phase_length(n, 3, 0.1, 10) == expected);
  CHECK(an::phase_length(n, 3, 0.1, 0) - an::phase_length(n, 3, 0.1, 5) == -5);
  for (int k : {3, 4, 6}) {
    std::int64_t prev = 0;
    for (std::int64_t m = 64; m < (std::int64_t{1} << 40); m = m * 3 / 2) {
      const auto len = an::phase_length(m, k, 0.2, 3);
      CHECK(len >= prev);
      prev = len;
    }
  }
  CHECK_THROWS_AS(an::phase_length(2, 3, 0.1, 0), std::domain_error);
  CHECK_THROWS_AS(an::phase_length(3, 5, 0.1, 0), std::domain_error);  // log_4 3 < 1
  CHECK_THROWS_AS(an::phase_length(100, 3, 0.0, 0), std::domain_error);
  CHECK_THROWS_AS(an::phase_length(100, 3, 0.1, -1), std::domain_error);
}

TEST_CASE("stripping constant") {
  CHECK(an::stripping_constant(0.5, 0.5) == 1);
  CHECK(an::stripping_constant(0.25, 0.5) == 2);
  CHECK(an::stripping_constant(0.01, 0.1) == 44);
  CHECK(an::stripping_constant(0.125, 0.5) == 3);
  CHECK(an::stripping_constant(0.9, 0.5) == 1);
  CHECK_THROWS_AS(an::stripping_constant(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(an::stripping_constant(0.5, 1.0), std::domain_error);
}

TEST_CASE("threshold report bundles the constants") {
  const auto r = an::threshold_report(4);
  CHECK(r.k == 4);
  CHECK(r.c_star == an::load_threshold(4));
  CHECK(r.xi_star == an::solve_xi_star(4));
  CHECK(r.lambda_k == an::lambda_k(4).value);
  CHECK(r.walk_exponent == an::walk_exponent(4));
  CHECK(0.0 < r.lambda_k / r.k);
  CHECK(r.lambda_k / r.k < r.c_star);
}
