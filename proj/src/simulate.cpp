#include "hyasync/simulate.hpp"

#include "hyasync/common.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <string>

namespace hyasync
{

CoefficientSpec::CoefficientSpec(std::vector<double> breakpoints,
                                 std::vector<CoefficientPiece> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces))
{
  if (breakpoints_.size() < 2) throw ValidationError("coefficients: need at least 2 breakpoints");
  if (pieces_.size() + 1 != breakpoints_.size())
    throw ValidationError("coefficients: need exactly one piece per breakpoint interval");
  if (breakpoints_.front() != 0.0)
    throw ValidationError("coefficients: breakpoints must start at 0 to cover [0, T]");
  require_strictly_increasing(breakpoints_, "coefficient breakpoints");
  for (const auto& p : pieces_)
  {
    if (!std::isfinite(p.mu_x) || !std::isfinite(p.mu_y) || !std::isfinite(p.sigma_x) ||
        !std::isfinite(p.sigma_y) || !std::isfinite(p.rho))
      throw ValidationError("coefficients: non-finite value");
    if (p.sigma_x < 0.0 || p.sigma_y < 0.0)
      throw ValidationError("coefficients: volatilities must be non-negative");
    if (std::fabs(p.rho) > 1.0) throw ValidationError("coefficients: |rho| must be <= 1");
  }
}

CoefficientSpec CoefficientSpec::constant(double horizon, CoefficientPiece piece)
{
  if (!(horizon > 0.0)) throw ValidationError("coefficients: horizon must be positive");
  return CoefficientSpec({0.0, horizon}, {piece});
}

std::size_t CoefficientSpec::piece_index(double t) const
{
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - breakpoints_.begin() - 1, 0));
  return std::min(k, pieces_.size() - 1);
}

IntervalMoments CoefficientSpec::integrate(double a, double b) const
{
  if (a < 0.0 || b > horizon() || b < a)
    throw ValidationError("coefficients: interval [" + std::to_string(a) + ", " +
                          std::to_string(b) + "] not covered by [0, T]");
  IntervalMoments m;
  std::size_t k = piece_index(a);
  double lo = a;
  while (lo < b)
  {
    const double hi = (k + 1 < pieces_.size()) ? std::min(b, breakpoints_[k + 1]) : b;
    const double len = hi - lo;
    const auto& p = pieces_[k];
    m.mean_x += p.mu_x * len;
    m.mean_y += p.mu_y * len;
    m.var_x += p.sigma_x * p.sigma_x * len;
    m.var_y += p.sigma_y * p.sigma_y * len;
    m.cov_xy += p.rho * p.sigma_x * p.sigma_y * len;
    lo = hi;
    ++k;
  }
  return m;
}

CoefficientSpec CoefficientSpec::refined(const std::vector<double>& extra) const
{
  std::vector<double> bps = breakpoints_;
  for (double e : extra)
    if (e > 0.0 && e < horizon()) bps.push_back(e);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  std::vector<CoefficientPiece> pcs;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) pcs.push_back(pieces_[piece_index(bps[i])]);
  return CoefficientSpec(std::move(bps), std::move(pcs));
}

double true_quadratic_covariation(const CoefficientSpec& coeffs, double t)
{
  if (t < 0.0 || t > coeffs.horizon())
    throw ValidationError("true_quadratic_covariation: t outside [0, T]");
  return coeffs.integrate(0.0, t).cov_xy;
}

std::vector<double> PathBundle::observed_x() const
{
  std::vector<double> v(x_index.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = x_values[x_index[i]];
  return v;
}

std::vector<double> PathBundle::observed_y() const
{
  std::vector<double> v(y_index.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = y_values[y_index[i]];
  return v;
}

std::size_t PathBundle::locate(double t) const
{
  const auto it = std::lower_bound(union_grid.begin(), union_grid.end(), t);
  if (it == union_grid.end() || *it != t)
    throw ValidationError("time " + std::to_string(t) + " is not on the union grid");
  return static_cast<std::size_t>(it - union_grid.begin());
}

PathBundle simulate_paths(const SchemePair& pair, const CoefficientSpec& coeffs,
                          std::uint64_t seed, const SimulationOptions& opts)
{
  require_strictly_increasing(pair.times_x, "times_x");
  require_strictly_increasing(pair.times_y, "times_y");
  const double T = coeffs.horizon();
  if (pair.horizon > T)
    throw ValidationError("coefficient spec does not cover the scheme horizon");

  PathBundle b;
  auto& grid = b.union_grid;
  grid.reserve(pair.times_x.size() + pair.times_y.size() + 2);
  std::merge(pair.times_x.begin(), pair.times_x.end(), pair.times_y.begin(),
             pair.times_y.end(), std::back_inserter(grid));
  grid.push_back(0.0);
  grid.push_back(pair.horizon > 0.0 ? pair.horizon : T);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 0.0 || grid.back() > T)
    throw ValidationError("observation times outside the coefficient horizon");

  const std::size_t K = grid.size();
  b.x_values.resize(K);
  b.y_values.resize(K);
  b.true_qcov.resize(K);
  b.x_values[0] = opts.x0;
  b.y_values[0] = opts.y0;
  b.true_qcov[0] = true_quadratic_covariation(coeffs, grid[0]);

  std::mt19937_64 rng(derive_seed(seed, 0, 23));
  std::normal_distribution<double> z;
  CompensatedSum qcov;
  qcov.add(b.true_qcov[0]);
  for (std::size_t k = 1; k < K; ++k)
  {
    const IntervalMoments mom = coeffs.integrate(grid[k - 1], grid[k]);
    const double z1 = z(rng);
    const double z2 = z(rng);
    const double sx = std::sqrt(mom.var_x);
    const double sy = std::sqrt(mom.var_y);
    double c = (sx > 0.0 && sy > 0.0) ? mom.cov_xy / (sx * sy) : 0.0;
    c = std::clamp(c, -1.0, 1.0);
    double dy_noise;
    if (std::fabs(c) >= 1.0 - 1e-15)
      dy_noise = std::copysign(1.0, c) * sy * z1; // rank-1: shared normal
    else
      dy_noise = sy * (c * z1 + std::sqrt(1.0 - c * c) * z2);
    b.x_values[k] = b.x_values[k - 1] + mom.mean_x + sx * z1;
    b.y_values[k] = b.y_values[k - 1] + mom.mean_y + dy_noise;
    qcov.add(mom.cov_xy);
    b.true_qcov[k] = qcov.value();
  }
  b.true_qcov_T = b.true_qcov.back();

  b.x_index.resize(pair.times_x.size());
  b.y_index.resize(pair.times_y.size());
  // Both observation lists are sorted: walk the union grid once.
  for (std::size_t i = 0, k = 0; i < pair.times_x.size(); ++i)
  {
    while (grid[k] != pair.times_x[i]) ++k;
    b.x_index[i] = k;
  }
  for (std::size_t j = 0, k = 0; j < pair.times_y.size(); ++j)
  {
    while (grid[k] != pair.times_y[j]) ++k;
    b.y_index[j] = k;
  }
  return b;
}

} // namespace hyasync
