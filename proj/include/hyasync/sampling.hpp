#pragma once

// Observation-time schemes: generation (Poisson, equidistant, intermeshed,
// explicit) and the closed-form waiting-time laws of independent Poisson
// sampling.

#include <cstdint>
#include <string>
#include <vector>

namespace hyasync
{

enum class SchemeKind
{
  PoissonPair,
  EquidistantSync,
  Intermeshed,
  Explicit
};

std::string to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(const std::string& name);

struct SchemeSpec
{
  SchemeKind kind = SchemeKind::PoissonPair;
  double horizon = 1.0;             ///< T
  std::int64_t intensity_scale = 1; ///< n
  double theta1 = 1.0;              ///< mean waiting time of X is theta1 / n
  double theta2 = 1.0;              ///< mean waiting time of Y is theta2 / n
  std::vector<double> explicit_x;   ///< Explicit only
  std::vector<double> explicit_y;   ///< Explicit only

  void validate() const;
};

/// Observation times of both processes on [0, horizon].
struct SchemePair
{
  std::vector<double> times_x;
  std::vector<double> times_y;
  double horizon = 0.0;

  /// Builds a pair from data; horizon defaults to the last observation time.
  static SchemePair from_times(std::vector<double> tx, std::vector<double> ty,
                               double horizon = 0.0);
  void validate() const;
};

SchemePair generate(const SchemeSpec& spec, std::uint64_t seed);

/// CDF of the refresh waiting time max(E1, E2), E_k ~ Exp(mean theta_k / n).
double refresh_waiting_cdf(double theta1, double theta2, double n, double t);

struct SchemeStats
{
  double e_dT;     ///< E[T_{i+1} - T_i]
  double e_next_x; ///< E[g_i - T_i]
  double e_next_y; ///< E[gamma_i - T_i]
  double e_prev_x; ///< E[T_i - l_{i+1}]
  double e_prev_y; ///< E[T_i - lambda_{i+1}]
};

SchemeStats expected_scheme_stats(double theta1, double theta2, double n);

struct GridRegularity
{
  double delta_x;
  double delta_y;
  double delta_sync;
};

/// Maximal gaps of each scheme (edge gaps included) and of the refresh grid.
GridRegularity grid_regularity(const SchemePair& pair);

} // namespace hyasync
