#include <catch2/catch_amalgamated.hpp>

#include "hyasync/common.hpp"
#include "hyasync/simulate.hpp"

#include <cmath>

using namespace hyasync;
using Catch::Approx;

TEST_CASE("true quadratic covariation", "[simulate]")
{
  CHECK(true_quadratic_covariation(CoefficientSpec::constant(3.0, {}), 3.0) == 0.0);
  CoefficientPiece half;
  half.rho = 0.5;
  CHECK(true_quadratic_covariation(CoefficientSpec::constant(1.0, half), 1.0) == Approx(0.5));

  CoefficientPiece a, b;
  a.rho = 0.2;
  b.rho = 0.8;
  const CoefficientSpec two({0.0, 0.5, 1.0}, {a, b});
  CHECK(true_quadratic_covariation(two, 1.0) == Approx(0.5));
  CHECK(true_quadratic_covariation(two, 0.75) == Approx(0.1 + 0.2));
  CHECK_THROWS_AS(true_quadratic_covariation(two, 1.5), ValidationError);
}

TEST_CASE("coefficient validation", "[simulate]")
{
  CoefficientPiece p;
  p.rho = 1.5;
  CHECK_THROWS_AS(CoefficientSpec::constant(1.0, p), ValidationError);
  p = {};
  p.sigma_x = -1;
  CHECK_THROWS_AS(CoefficientSpec::constant(1.0, p), ValidationError);
  CHECK_THROWS_AS(CoefficientSpec({0.0, 0.5}, {{}, {}}), ValidationError);
  CHECK_THROWS_AS(CoefficientSpec({0.1, 1.0}, {{}}), ValidationError);
}

TEST_CASE("refinement keeps the function", "[simulate]")
{
  CoefficientPiece a, b;
  a.sigma_x = 2;
  b.rho = -0.3;
  const CoefficientSpec c({0.0, 0.5, 1.0}, {a, b});
  const CoefficientSpec r = c.refined({0.25, 0.5, 0.9, 2.0});
  CHECK(r.breakpoints() == std::vector<double>{0, 0.25, 0.5, 0.9, 1.0});
  CHECK(r.pieces()[1].sigma_x == 2);
  CHECK(r.pieces()[3].rho == -0.3);
  const auto m1 = c.integrate(0.1, 0.95);
  const auto m2 = r.integrate(0.1, 0.95);
  CHECK(m1.var_x == Approx(m2.var_x));
  CHECK(m1.cov_xy == Approx(m2.cov_xy));
}

TEST_CASE("pure drift is deterministic", "[simulate]")
{
  CoefficientPiece p;
  p.sigma_x = p.sigma_y = 0;
  p.mu_x = 1;
  const auto pair = SchemePair::from_times({0, 0.3, 1}, {0.1, 0.7}, 1.0);
  const PathBundle b = simulate_paths(pair, CoefficientSpec::constant(1.0, p), 9, {2.0, 5.0});
  for (std::size_t k = 0; k < b.union_grid.size(); ++k)
  {
    CHECK(b.x_values[k] == Approx(2.0 + b.union_grid[k]));
    CHECK(b.y_values[k] == 5.0);
  }
}

TEST_CASE("perfect correlation gives identical increments", "[simulate]")
{
  CoefficientPiece p;
  p.rho = 1.0;
  p.sigma_x = p.sigma_y = 0.7;
  p.mu_x = p.mu_y = 0.1;
  const auto pair = SchemePair::from_times({0, 0.2, 0.5, 1}, {0.1, 0.5, 0.8}, 1.0);
  const PathBundle b = simulate_paths(pair, CoefficientSpec::constant(1.0, p), 17);
  for (std::size_t k = 0; k < b.union_grid.size(); ++k)
    CHECK(b.x_values[k] - b.x_values[0] == Approx(b.y_values[k] - b.y_values[0]).margin(1e-14));
}

TEST_CASE("terminal covariance matches the integral", "[simulate]")
{
  CoefficientPiece p;
  p.rho = 0.5;
  const auto coeffs = CoefficientSpec::constant(1.0, p);
  const auto pair = SchemePair::from_times({0, 1}, {0, 1}, 1.0);
  const int reps = 100000;
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0, sxy2 = 0;
  for (int r = 0; r < reps; ++r)
  {
    const PathBundle b = simulate_paths(pair, coeffs, static_cast<std::uint64_t>(r));
    const double dx = b.x_values.back() - b.x_values.front();
    const double dy = b.y_values.back() - b.y_values.front();
    sx += dx;
    sy += dy;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
    sxy2 += dx * dx * dy * dy;
  }
  const double n = reps;
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double se_cov = std::sqrt((sxy2 / n - (sxy / n) * (sxy / n)) / n);
  CHECK(std::fabs(cov - 0.5) < 3 * se_cov);
  CHECK(std::fabs(sxx / n - 1.0) < 4 * std::sqrt(2.0 / n));
  CHECK(std::fabs(syy / n - 1.0) < 4 * std::sqrt(2.0 / n));
  CHECK(std::fabs(sx / n) < 4 / std::sqrt(n));
}

TEST_CASE("increment moments on a two-piece spec", "[simulate]")
{
  CoefficientPiece a, b;
  a.sigma_x = 2.0;
  a.sigma_y = 0.5;
  a.rho = -0.4;
  a.mu_x = 1.0;
  b.sigma_x = 1.0;
  b.sigma_y = 1.5;
  b.rho = 0.6;
  const CoefficientSpec coeffs({0.0, 0.4, 1.0}, {a, b});
  const auto pair = SchemePair::from_times({0, 0.3, 1}, {0, 0.6, 1}, 1.0);
  const IntervalMoments m = coeffs.integrate(0.3, 0.6);
  const int reps = 100000;
  double sx = 0, sxx = 0, sxy = 0, sy = 0, syy = 0;
  for (int r = 0; r < reps; ++r)
  {
    const PathBundle bd = simulate_paths(pair, coeffs, 1000 + static_cast<std::uint64_t>(r));
    const double dx = bd.x_values[bd.locate(0.6)] - bd.x_values[bd.locate(0.3)];
    const double dy = bd.y_values[bd.locate(0.6)] - bd.y_values[bd.locate(0.3)];
    sx += dx;
    sy += dy;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double n = reps;
  const double mx = sx / n, my = sy / n;
  const double vx = sxx / n - mx * mx, vy = syy / n - my * my;
  CHECK(std::fabs(mx - m.mean_x) < 4 * std::sqrt(m.var_x / n));
  CHECK(std::fabs(vx - m.var_x) < 4 * m.var_x * std::sqrt(2.0 / n));
  CHECK(std::fabs(vy - m.var_y) < 4 * m.var_y * std::sqrt(2.0 / n));
  const double se_c = std::sqrt((m.var_x * m.var_y + m.cov_xy * m.cov_xy) / n);
  CHECK(std::fabs(sxy / n - mx * my - m.cov_xy) < 4 * se_c);
}

TEST_CASE("bundle layout and determinism", "[simulate]")
{
  const auto pair = SchemePair::from_times({0.1, 0.4, 0.9}, {0.2, 0.4, 0.95}, 1.0);
  const auto coeffs = CoefficientSpec::constant(1.0, {});
  const PathBundle a = simulate_paths(pair, coeffs, 3);
  const PathBundle b = simulate_paths(pair, coeffs, 3);
  CHECK(a.union_grid == std::vector<double>{0, 0.1, 0.2, 0.4, 0.9, 0.95, 1.0});
  CHECK(a.x_values == b.x_values);
  CHECK(a.y_values == b.y_values);
  CHECK(a.observed_x().size() == 3);
  CHECK(a.observed_y()[1] == a.y_values[3]);
  CHECK_THROWS_AS(a.locate(0.5), ValidationError);
  CHECK(simulate_paths(pair, coeffs, 4).x_values != a.x_values);
}
