#pragma once

#include "hyasync/sampling.hpp"

#include <cstdint>
#include <vector>

namespace hyasync
{

struct CoefficientPiece
{
  double mu_x    = 0.0;
  double mu_y    = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double rho     = 0.0;
};

/// Integrals of the coefficients over an interval: drift means, variances and
/// covariance of the bivariate Gaussian increment.
struct IntervalMoments
{
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x  = 0.0;
  double var_y  = 0.0;
  double cov_xy = 0.0;
};

/// Piecewise-constant drift, volatility and correlation on [0, T].
/// breakpoints = {0 = b_0 < b_1 < ... < b_K = T}; piece k lives on [b_k, b_{k+1}).
class CoefficientSpec
{
public:
  CoefficientSpec() = default;
  CoefficientSpec(std::vector<double> breakpoints, std::vector<CoefficientPiece> pieces);

  static CoefficientSpec constant(double horizon, CoefficientPiece piece);

  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] const std::vector<CoefficientPiece>& pieces() const noexcept { return pieces_; }
  [[nodiscard]] double horizon() const noexcept { return breakpoints_.back(); }

  [[nodiscard]] IntervalMoments integrate(double a, double b) const;
  [[nodiscard]] std::size_t piece_index(double t) const;

  /// Same function, with extra breakpoints inserted (values unchanged).
  [[nodiscard]] CoefficientSpec refined(const std::vector<double>& extra) const;

private:
  std::vector<double> breakpoints_{0.0, 1.0};
  std::vector<CoefficientPiece> pieces_{CoefficientPiece{}};
};

/// Exact integral of rho * sigma_x * sigma_y over [0, t].
double true_quadratic_covariation(const CoefficientSpec& coeffs, double t);

struct PathBundle
{
  std::vector<double> union_grid;
  std::vector<double> x_values;
  std::vector<double> y_values;
  std::vector<std::size_t> x_index; ///< union_grid position of each X observation
  std::vector<std::size_t> y_index; ///< union_grid position of each Y observation
  std::vector<double> true_qcov;    ///< [X,Y] on union_grid
  double true_qcov_T = 0.0;

  [[nodiscard]] std::vector<double> observed_x() const;
  [[nodiscard]] std::vector<double> observed_y() const;
  /// Position of `t` in union_grid; throws if absent.
  [[nodiscard]] std::size_t locate(double t) const;
};

struct SimulationOptions
{
  double x0 = 0.0;
  double y0 = 0.0;
};

PathBundle simulate_paths(const SchemePair& pair, const CoefficientSpec& coeffs,
                          std::uint64_t seed, const SimulationOptions& opts = {});

} // namespace hyasync
