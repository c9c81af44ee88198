#pragma once

// Covariation estimators for asynchronously observed pairs.
//
// All estimators take (times, values) so simulated and ingested data share
// one code path. Values observed outside any overlap are never selected.

#include "hyasync/sampling.hpp"
#include "hyasync/simulate.hpp"
#include "hyasync/sync.hpp"

#include <span>
#include <vector>

namespace hyasync
{

/// Telescoped synchronized form: sum_{i=1}^N (X_{g_i}-X_{l_i})(Y_{gamma_i}-Y_{lambda_i}).
double hy_estimate(const SchemePair& pair, std::span<const double> x_values,
                   std::span<const double> y_values);

/// Same, on a prebuilt grid.
double hy_estimate(const SyncGrid& grid, std::span<const double> x_values,
                   std::span<const double> y_values);

/// Per-step products P_i, i = 0..N (P_0 is always zero).
std::vector<double> hy_products(const SyncGrid& grid, std::span<const double> x_values,
                                std::span<const double> y_values);

/// O(nm) double sum over all increment pairs with overlapping intervals.
double hy_bruteforce(const SchemePair& pair, std::span<const double> x_values,
                     std::span<const double> y_values);

/// Last X and Y observation index at or before each refresh time T_0..T_N.
struct PreviousTickIndices
{
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
};

PreviousTickIndices previous_tick_indices(const SyncGrid& grid, const SchemePair& pair);

/// Realized covariance of previous-tick values sampled at the refresh times.
double refresh_previous_tick(const SchemePair& pair, std::span<const double> x_values,
                             std::span<const double> y_values);
double refresh_previous_tick(const SyncGrid& grid, const SchemePair& pair,
                             std::span<const double> x_values,
                             std::span<const double> y_values);

/// Previous-tick realized covariance on the equidistant grid {k * width}.
double fixed_grid_previous_tick(const SchemePair& pair, std::span<const double> x_values,
                                std::span<const double> y_values, double grid_width);

/// Plain realized covariance of two equally long value arrays.
double realized_covariance(std::span<const double> x_values, std::span<const double> y_values);

struct Decomposition
{
  double d_term    = 0.0;
  double a_term    = 0.0;
  double edge_term = 0.0; ///< -(integral over [0, T_0]) - (integral over [T_N, T])
  double hy        = 0.0;
  double truth     = 0.0;

  // Index i = 1..N; entry 0 unused.
  std::vector<double> x_plus, x_minus, x_sync;
  std::vector<double> y_plus, y_minus, y_sync;
};

/// Exact split HY - [X,Y]_T = D + A using latent values at the refresh times.
Decomposition decompose_error(const SyncGrid& grid, const PathBundle& bundle,
                              const CoefficientSpec& coeffs);

/// The indicator form of A (with 1{T_i = gamma_i} etc.); equal to a_term.
double a_term_indicator_form(const SyncGrid& grid, const PathBundle& bundle);

} // namespace hyasync
