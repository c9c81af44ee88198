#pragma once

// Monte Carlo studies: replicate (scheme, path, estimators) and summarise.
//
// Replication k draws its scheme and path from seeds derived from
// (base_seed, k) only, so a summary is a pure function of the study spec,
// whatever the thread count.

#include "hyasync/inference.hpp"
#include "hyasync/sampling.hpp"
#include "hyasync/simulate.hpp"
#include "hyasync/timescales.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyasync
{

struct McOutputs
{
  bool bias = true;
  bool variance = true;
  bool coverage = true;
  bool qq_points = false;
  bool decomposition_corr = false;
  bool epps_curve = false;
  bool qcv_slopes = false;
  bool scheme_stats = false;
};

struct McStudySpec
{
  SchemeSpec scheme;
  CoefficientSpec coeffs;
  std::size_t replications = 100;
  std::uint64_t base_seed = 1;
  bool refresh_prev_tick = false;
  std::vector<double> fixed_grid_widths;
  McOutputs outputs;
  double level = 0.95;
  AvarConfig avar;
  std::size_t threads = 0; ///< 0 = hardware concurrency

  void validate() const;
};

/// Everything measured on one replication.
struct ReplicationResult
{
  bool ok = false;
  std::string failure;
  std::uint64_t scheme_seed = 0;
  std::uint64_t path_seed = 0;
  std::size_t n_sync = 0;
  double truth = 0.0;
  double hy = 0.0;
  std::optional<double> refresh_prev_tick;
  std::vector<double> fixed_grid;
  double avar_hat = 0.0;
  std::optional<double> studentized;
  bool covered = false;
  double d_term = 0.0;
  double a_term = 0.0;
  double identity_error = 0.0; ///< |(HY - truth) - (D + A)|
  QcvSlopes slopes;
  // Replication means of the scheme quantities.
  double mean_dT = 0.0, mean_next_x = 0.0, mean_next_y = 0.0, mean_prev_x = 0.0,
         mean_prev_y = 0.0;
};

ReplicationResult run_replication(const McStudySpec& spec, std::size_t index);

struct MeanWithError
{
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

struct EstimatorSummary
{
  std::string name;
  double grid_width = 0.0; ///< fixed-grid estimators only
  MeanWithError estimate;
  MeanWithError error; ///< estimate - truth
  double var_scaled_error = 0.0; ///< sample variance of sqrt(N) * error
  double se_var_scaled_error = 0.0;
};

struct EppsPoint
{
  double grid_width;
  MeanWithError estimate;
};

struct McSummary
{
  std::size_t replications = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_messages; ///< first few only
  MeanWithError n_sync;
  MeanWithError truth;
  std::vector<EstimatorSummary> estimators;

  // CLT / inference
  MeanWithError avar_hat;
  MeanWithError studentized;
  double studentized_variance = 0.0;
  double jarque_bera = 0.0;
  double jarque_bera_pvalue = 0.0;
  double coverage = 0.0;
  double coverage_se = 0.0;
  std::vector<std::pair<double, double>> qq_points; ///< (normal quantile, empirical quantile)

  // Theory for comparison (Poisson limits or mean empirical slopes)
  AvarComponents theoretical;
  std::optional<double> corollary4;

  // Decomposition
  double corr_d_a = 0.0;
  double corr_d_a_se = 0.0;
  double max_identity_error = 0.0;

  std::vector<EppsPoint> epps_curve;
  MeanWithError g_slope, f_slope, h_slope;

  MeanWithError mean_dT, mean_next_x, mean_next_y, mean_prev_x, mean_prev_y;
};

McSummary run_study(const McStudySpec& spec);

/// Folds per-replication results (in index order) into a summary.
McSummary summarize(const McStudySpec& spec, const std::vector<ReplicationResult>& results);

struct EppsStudy
{
  std::vector<EppsPoint> curve;
  MeanWithError hy;
  MeanWithError truth;
};

EppsStudy epps_study(McStudySpec spec, const std::vector<double>& widths);

struct QcvConvergencePoint
{
  std::int64_t n;
  MeanWithError g, f, h;
};

std::vector<QcvConvergencePoint> qcv_convergence_study(double theta1, double theta2,
                                                       const std::vector<std::int64_t>& n_list,
                                                       std::size_t seeds,
                                                       std::uint64_t base_seed = 1,
                                                       SchemeKind kind = SchemeKind::PoissonPair);

/// Jarque-Bera statistic and its chi-square(2) p-value.
std::pair<double, double> jarque_bera(const std::vector<double>& sample);

} // namespace hyasync
