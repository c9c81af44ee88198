#pragma once

#include "hyasync/sync.hpp"
#include "hyasync/timescales.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hyasync
{

enum class BinEndpoint
{
  Right, ///< refresh interval r belongs to the bin containing T_r
  Left   ///< ... containing T_{r-1}
};

struct AvarConfig
{
  std::size_t k_bins = 0; ///< 0 selects ceil(N^{1/3})
  BinEndpoint endpoint = BinEndpoint::Right;

  [[nodiscard]] std::size_t resolve_bins(std::size_t n_intervals) const;
};

struct AvarResult
{
  double avar       = 0.0;
  double i1_tilde   = 0.0;
  double main_sum   = 0.0; ///< N * sum P_j (P_j + 2 P_{j+1})
  std::size_t k_bins = 0;
  std::size_t merged_bins = 0;
  std::vector<double> bin_boundaries; ///< G_j^N in time units, size k_bins + 1
};

/// Histogram-based estimator of the asymptotic variance of HY.
AvarResult avar_estimate(const SyncGrid& grid, std::span<const double> x_values,
                         std::span<const double> y_values, const AvarConfig& cfg = {});

/// Inverse of the standard normal CDF (Wichura AS241).
double normal_quantile(double p);

struct ConfidenceInterval
{
  double low;
  double high;
  bool floored; ///< avar_hat was below the floor and was replaced by it
};

ConfidenceInterval feasible_ci(double hy, double avar_hat, std::size_t n_sync, double level);

/// sqrt(N) (hy - truth) / sqrt(avar_hat); empty when avar_hat <= 0.
std::optional<double> studentize(double hy, double truth, double avar_hat, std::size_t n_sync);

struct EstimateReport
{
  double hy = 0.0;
  std::size_t n_sync = 0;
  double avar_hat = 0.0;
  bool avar_floored = false;
  double level = 0.95;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> studentized;
  std::size_t k_bins = 0;
  QcvSlopes qcv_slopes;
  GridRegularity regularity{};
};

struct EstimateOptions
{
  double level = 0.95;
  AvarConfig avar;
  SlopeOptions slopes;
  std::optional<double> truth; ///< simulation mode only
};

/// Point estimate, variance estimate, interval and scheme diagnostics.
EstimateReport estimate(const SchemePair& pair, std::span<const double> x_values,
                        std::span<const double> y_values, const EstimateOptions& opts = {});

} // namespace hyasync
