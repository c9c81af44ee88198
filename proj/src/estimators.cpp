#include "hyasync/estimators.hpp"

#include "hyasync/common.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hyasync
{

namespace
{

void require_aligned(std::size_t n_times, std::size_t n_values, const char* what)
{
  if (n_times != n_values)
    throw ValidationError(std::string(what) + ": " + std::to_string(n_values) +
                          " values for " + std::to_string(n_times) + " observation times");
}

void require_pair(const SchemePair& pair, std::span<const double> x, std::span<const double> y)
{
  require_aligned(pair.times_x.size(), x.size(), "x_values");
  require_aligned(pair.times_y.size(), y.size(), "y_values");
  if (pair.times_x.size() < 2 || pair.times_y.size() < 2)
    throw ValidationError("each process needs at least 2 observations");
}

// Index of the last observation at or before t; 0 if t precedes all of them.
std::size_t previous_tick(const std::vector<double>& times, double t)
{
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  return it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
}

} // namespace

std::vector<double> hy_products(const SyncGrid& grid, std::span<const double> x,
                                std::span<const double> y)
{
  require_aligned(grid.n_obs_x, x.size(), "x_values");
  require_aligned(grid.n_obs_y, y.size(), "y_values");
  std::vector<double> p(grid.n_sets(), 0.0);
  for (std::size_t i = 1; i < grid.n_sets(); ++i)
  {
    const double dx = x[grid.h_sets[i].last] - x[grid.l_index[i]];
    const double dy = y[grid.g_sets[i].last] - y[grid.lambda_index[i]];
    p[i] = dx * dy;
  }
  return p;
}

double hy_estimate(const SyncGrid& grid, std::span<const double> x, std::span<const double> y)
{
  require_aligned(grid.n_obs_x, x.size(), "x_values");
  require_aligned(grid.n_obs_y, y.size(), "y_values");
  CompensatedSum s;
  for (std::size_t i = 1; i < grid.n_sets(); ++i)
  {
    const double dx = x[grid.h_sets[i].last] - x[grid.l_index[i]];
    const double dy = y[grid.g_sets[i].last] - y[grid.lambda_index[i]];
    s.add(dx * dy);
  }
  return s.value();
}

double hy_estimate(const SchemePair& pair, std::span<const double> x, std::span<const double> y)
{
  require_pair(pair, x, y);
  return hy_estimate(build_sync_grid(pair), x, y);
}

double hy_bruteforce(const SchemePair& pair, std::span<const double> x, std::span<const double> y)
{
  require_pair(pair, x, y);
  require_strictly_increasing(pair.times_x, "times_x");
  require_strictly_increasing(pair.times_y, "times_y");
  const auto& t = pair.times_x;
  const auto& tau = pair.times_y;
  CompensatedSum s;
  for (std::size_t i = 1; i < t.size(); ++i)
  {
    const double dx = x[i] - x[i - 1];
    for (std::size_t j = 1; j < tau.size(); ++j)
    {
      if (std::min(t[i], tau[j]) > std::max(t[i - 1], tau[j - 1]))
        s.add(dx * (y[j] - y[j - 1]));
    }
  }
  return s.value();
}

PreviousTickIndices previous_tick_indices(const SyncGrid& grid, const SchemePair& pair)
{
  PreviousTickIndices idx;
  for (double t : grid.refresh_times)
  {
    idx.x.push_back(previous_tick(pair.times_x, t));
    idx.y.push_back(previous_tick(pair.times_y, t));
  }
  return idx;
}

double refresh_previous_tick(const SyncGrid& grid, const SchemePair& pair,
                             std::span<const double> x, std::span<const double> y)
{
  require_pair(pair, x, y);
  const PreviousTickIndices idx = previous_tick_indices(grid, pair);
  CompensatedSum s;
  for (std::size_t i = 1; i < idx.x.size(); ++i)
    s.add((x[idx.x[i]] - x[idx.x[i - 1]]) * (y[idx.y[i]] - y[idx.y[i - 1]]));
  return s.value();
}

double refresh_previous_tick(const SchemePair& pair, std::span<const double> x,
                             std::span<const double> y)
{
  require_pair(pair, x, y);
  return refresh_previous_tick(build_sync_grid(pair), pair, x, y);
}

double fixed_grid_previous_tick(const SchemePair& pair, std::span<const double> x,
                                std::span<const double> y, double grid_width)
{
  require_pair(pair, x, y);
  const double T = pair.horizon;
  if (!(grid_width > 0.0) || !std::isfinite(grid_width))
    throw ValidationError("grid_width must be positive");
  if (grid_width > T) throw ValidationError("grid_width must not exceed the horizon");
  // Guard against T / width landing a hair below an integer.
  const auto k_max = static_cast<std::size_t>(std::floor(T / grid_width * (1.0 + 1e-12)));
  CompensatedSum s;
  std::size_t px = previous_tick(pair.times_x, 0.0);
  std::size_t py = previous_tick(pair.times_y, 0.0);
  std::size_t ix = px;
  std::size_t iy = py;
  for (std::size_t k = 1; k <= k_max; ++k)
  {
    const double t = std::min(static_cast<double>(k) * grid_width, T);
    while (ix + 1 < pair.times_x.size() && pair.times_x[ix + 1] <= t) ++ix;
    while (iy + 1 < pair.times_y.size() && pair.times_y[iy + 1] <= t) ++iy;
    s.add((x[ix] - x[px]) * (y[iy] - y[py]));
    px = ix;
    py = iy;
  }
  return s.value();
}

double realized_covariance(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw ValidationError("realized_covariance: value arrays differ in length");
  CompensatedSum s;
  for (std::size_t i = 1; i < x.size(); ++i) s.add((x[i] - x[i - 1]) * (y[i] - y[i - 1]));
  return s.value();
}

Decomposition decompose_error(const SyncGrid& grid, const PathBundle& bundle,
                              const CoefficientSpec& coeffs)
{
  const std::size_t sets = grid.n_sets();
  if (sets < 2) throw ValidationError("decompose_error: grid has no refresh intervals");
  Decomposition d;
  d.x_plus.assign(sets, 0.0);
  d.x_minus.assign(sets, 0.0);
  d.x_sync.assign(sets, 0.0);
  d.y_plus.assign(sets, 0.0);
  d.y_minus.assign(sets, 0.0);
  d.y_sync.assign(sets, 0.0);

  const auto& X = bundle.x_values;
  const auto& Y = bundle.y_values;
  const auto& T = grid.refresh_times;
  std::vector<std::size_t> kT(sets);
  for (std::size_t i = 0; i < sets; ++i) kT[i] = bundle.locate(T[i]);

  CompensatedSum sync_sum;
  CompensatedSum a_sum;
  for (std::size_t i = 1; i < sets; ++i)
  {
    const std::size_t kg = bundle.locate(grid.g_times[i]);
    const std::size_t kgam = bundle.locate(grid.gamma_times[i]);
    const std::size_t kl = bundle.locate(grid.l_times[i]);
    const std::size_t klam = bundle.locate(grid.lambda_times[i]);
    const double xp = X[kg] - X[kT[i]];
    const double xm = X[kT[i - 1]] - X[kl];
    const double xs = X[kT[i]] - X[kT[i - 1]];
    const double yp = Y[kgam] - Y[kT[i]];
    const double ym = Y[kT[i - 1]] - Y[klam];
    const double ys = Y[kT[i]] - Y[kT[i - 1]];
    d.x_plus[i] = xp;
    d.x_minus[i] = xm;
    d.x_sync[i] = xs;
    d.y_plus[i] = yp;
    d.y_minus[i] = ym;
    d.y_sync[i] = ys;
    sync_sum.add(xs * ys);
    a_sum.add(xp * (ys + ym));
    a_sum.add(yp * (xs + xm));
    a_sum.add(xm * ys);
    a_sum.add(ym * xs);
  }

  const auto x_obs = bundle.observed_x();
  const auto y_obs = bundle.observed_y();
  d.hy = hy_estimate(grid, x_obs, y_obs);
  d.truth = true_quadratic_covariation(coeffs, grid.horizon);
  const double head = true_quadratic_covariation(coeffs, T.front());
  const double tail = d.truth - true_quadratic_covariation(coeffs, T.back());
  d.edge_term = -head - tail;
  d.d_term = sync_sum.value() - d.truth;
  d.a_term = a_sum.value();
  return d;
}

double a_term_indicator_form(const SyncGrid& grid, const PathBundle& bundle)
{
  const auto& X = bundle.x_values;
  const auto& Y = bundle.y_values;
  const auto& T = grid.refresh_times;
  CompensatedSum s;
  for (std::size_t i = 1; i < grid.n_sets(); ++i)
  {
    const std::size_t kT = bundle.locate(T[i]);
    const std::size_t kT0 = bundle.locate(T[i - 1]);
    const std::size_t kg = bundle.locate(grid.g_times[i]);
    const std::size_t kgam = bundle.locate(grid.gamma_times[i]);
    const std::size_t kl = bundle.locate(grid.l_times[i]);
    const std::size_t klam = bundle.locate(grid.lambda_times[i]);
    if (T[i] == grid.gamma_times[i]) s.add((Y[kgam] - Y[klam]) * (X[kg] - X[kT]));
    if (T[i - 1] == grid.lambda_times[i]) s.add((Y[kT] - Y[kT0]) * (X[kT0] - X[kl]));
    if (T[i] == grid.g_times[i]) s.add((X[kT] - X[kl]) * (Y[kgam] - Y[kT]));
    if (T[i - 1] == grid.l_times[i]) s.add((X[kT] - X[kT0]) * (Y[kT0] - Y[klam]));
  }
  return s.value();
}

} // namespace hyasync
