#pragma once

// Joint-grid construction for asynchronous observation times.
//
// Step i aggregates a run of X observations {t_q, ..., t_mu} and a run of Y
// observations {tau_r, ..., tau_w}. The telescoped increments
// X_{g_i} - X_{l_i} and Y_{gamma_i} - Y_{lambda_i} of consecutive steps
// reproduce every overlapping increment pair exactly once, and the refresh
// times T_i = min(g_i, gamma_i) partition the observation span.

#include "hyasync/sampling.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hyasync
{

/// Inclusive index range into one process's observation times.
struct IndexRange
{
  std::size_t first;
  std::size_t last;

  [[nodiscard]] std::size_t size() const noexcept { return last - first + 1; }
  bool operator==(const IndexRange&) const = default;
};

struct SyncGrid
{
  std::vector<IndexRange> h_sets; ///< X index ranges, q_i = first, mu_i = last
  std::vector<IndexRange> g_sets; ///< Y index ranges, r_i = first, w_i = last

  std::vector<std::size_t> l_index;      ///< q_i - 1, with l_0 := 0
  std::vector<std::size_t> lambda_index; ///< r_i - 1, with lambda_0 := 0

  std::vector<double> g_times;
  std::vector<double> l_times;
  std::vector<double> gamma_times;
  std::vector<double> lambda_times;
  std::vector<double> refresh_times;

  double horizon = 0.0;
  std::size_t n_obs_x = 0;
  std::size_t n_obs_y = 0;

  /// The last set was closed early because one process ran out of
  /// observations before the other caught up.
  bool truncated_final_step = false;
  /// Observations after the final set; they overlap nothing.
  std::size_t trailing_x = 0;
  std::size_t trailing_y = 0;

  /// N, the number of refresh intervals (sets minus one).
  [[nodiscard]] std::size_t n_intervals() const noexcept
  {
    return refresh_times.empty() ? 0 : refresh_times.size() - 1;
  }
  [[nodiscard]] std::size_t n_sets() const noexcept { return refresh_times.size(); }
};

SyncGrid build_sync_grid(const SchemePair& pair);

struct PartitionViolation
{
  std::size_t index;
  std::string message;
};

/// Checks min(g_i, gamma_i) = max(l_{i+1}, lambda_{i+1}) for 1 <= i <= N-1
/// and strict increase of the refresh times. Returns every violation found.
std::vector<PartitionViolation> validate_partition(const SyncGrid& grid);

/// Per-step interpolation offsets; entry 0 is unused (all zero).
struct InterpolationOffsets
{
  std::vector<double> next_x; ///< g_i - T_i
  std::vector<double> next_y; ///< gamma_i - T_i
  std::vector<double> prev_x; ///< T_{i-1} - l_i
  std::vector<double> prev_y; ///< T_{i-1} - lambda_i
  std::vector<double> dT;     ///< T_i - T_{i-1}
};

InterpolationOffsets interpolation_offsets(const SyncGrid& grid);

} // namespace hyasync
