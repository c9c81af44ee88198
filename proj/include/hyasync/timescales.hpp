#pragma once

// Quadratic (co-)variations of time G^N, F^N, H^N, their slopes, the Poisson
// closed-form limits and the resulting asymptotic variance.
//
// Unit convention: a slope is d/dt of the curve. G^N(t) grows like c*t
// regardless of the horizon, so the variance integrands use G'(t) = slope.

#include "hyasync/simulate.hpp"
#include "hyasync/sync.hpp"

#include <cstddef>
#include <vector>

namespace hyasync
{

struct QcvCurves
{
  std::vector<double> eval_times; ///< T_0 .. T_N
  std::vector<double> g_curve;
  std::vector<double> f_curve;
  std::vector<double> h_curve;
  double normalizer = 0.0; ///< N / T
};

QcvCurves qcv_curves(const SyncGrid& grid);

enum class SlopeMethod
{
  GlobalFit,
  Windowed
};

struct SlopeWindow
{
  double t_begin;
  double t_end;
  double g;
  double f;
  double h;
};

struct QcvSlopes
{
  double g = 0.0;
  double f = 0.0;
  double h = 0.0;
  SlopeMethod method = SlopeMethod::GlobalFit;
  std::vector<SlopeWindow> windows; ///< Windowed only
};

struct SlopeOptions
{
  SlopeMethod method = SlopeMethod::GlobalFit;
  std::size_t edge_trim = 1;     ///< steps dropped at each end for GlobalFit
  std::size_t window_points = 50; ///< c in h_N = c T / N
};

QcvSlopes qcv_slopes(const QcvCurves& curves, const SlopeOptions& opts = {});

/// Limits (G', F', H') under independent homogeneous Poisson sampling.
QcvSlopes poisson_qcv_limits(double theta1, double theta2);

/// Piecewise-constant slope functions on [0, T]; a constant is one piece.
struct SlopeFunction
{
  std::vector<double> breakpoints; ///< size K+1
  std::vector<double> g, f, h;     ///< size K

  static SlopeFunction constant(double horizon, double g, double f, double h);
  static SlopeFunction from_slopes(const QcvSlopes& slopes, double horizon);
};

struct AvarComponents
{
  double v_d     = 0.0;
  double v_a     = 0.0;
  double v_total = 0.0;
};

/// T * int G'(sx sy)^2 (rho^2+1) + T * int [F'(sx sy)^2 + 2 H'(rho sx sy)^2].
AvarComponents theoretical_avar(const CoefficientSpec& coeffs, const SlopeFunction& slopes);
AvarComponents theoretical_avar(const CoefficientSpec& coeffs, const QcvSlopes& slopes);

/// Closed form stated for Poisson sampling in the literature; kept as a
/// diagnostic to compare against the general formula.
double corollary4_avar(const CoefficientSpec& coeffs, double theta1, double theta2);

} // namespace hyasync
