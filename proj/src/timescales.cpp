#include "hyasync/timescales.hpp"

#include "hyasync/common.hpp"

#include <algorithm>
#include <cmath>

namespace hyasync
{

QcvCurves qcv_curves(const SyncGrid& grid)
{
  const std::size_t N = grid.n_intervals();
  if (N < 2) throw ValidationError("qcv_curves: need at least 2 refresh intervals");
  if (!(grid.horizon > 0.0)) throw ValidationError("qcv_curves: horizon must be positive");

  const auto& T = grid.refresh_times;
  const auto& g = grid.g_times;
  const auto& gam = grid.gamma_times;
  const auto& l = grid.l_times;
  const auto& lam = grid.lambda_times;

  QcvCurves c;
  c.normalizer = static_cast<double>(N) / grid.horizon;
  c.eval_times = T;
  c.g_curve.assign(N + 1, 0.0);
  c.f_curve.assign(N + 1, 0.0);
  c.h_curve.assign(N + 1, 0.0);

  CompensatedSum gs, fs, hs;
  for (std::size_t k = 1; k <= N; ++k)
  {
    const double dT = T[k] - T[k - 1];
    gs.add(dT * dT);
    // F/H addend i = k-1 completes once T_{i+1} = T_k is reached.
    const std::size_t i = k - 1;
    fs.add((T[i] - lam[i]) * (g[i] - T[i]));
    fs.add((T[i] - l[i]) * (gam[i] - T[i]));
    fs.add(dT * (T[i] - l[i + 1]));
    fs.add(dT * (T[i] - lam[i + 1]));
    hs.add((T[i] - l[i + 1]) * (g[i] - T[i]));
    hs.add((T[i] - lam[i + 1]) * (gam[i] - T[i]));
    c.g_curve[k] = c.normalizer * gs.value();
    c.f_curve[k] = c.normalizer * fs.value();
    c.h_curve[k] = c.normalizer * hs.value();
  }
  return c;
}

namespace
{

double ols_slope(const std::vector<double>& t, const std::vector<double>& v, std::size_t lo,
                 std::size_t hi)
{
  const double n = static_cast<double>(hi - lo);
  CompensatedSum st, sv;
  for (std::size_t k = lo; k < hi; ++k)
  {
    st.add(t[k]);
    sv.add(v[k]);
  }
  const double mt = st.value() / n;
  const double mv = sv.value() / n;
  CompensatedSum sxy, sxx;
  for (std::size_t k = lo; k < hi; ++k)
  {
    sxy.add((t[k] - mt) * (v[k] - mv));
    sxx.add((t[k] - mt) * (t[k] - mt));
  }
  if (!(sxx.value() > 0.0)) throw ValidationError("qcv_slopes: degenerate curve");
  return sxy.value() / sxx.value();
}

} // namespace

QcvSlopes qcv_slopes(const QcvCurves& curves, const SlopeOptions& opts)
{
  const std::size_t points = curves.eval_times.size();
  if (points < 2) throw ValidationError("qcv_slopes: need at least 2 curve points");
  QcvSlopes s;
  s.method = opts.method;

  std::size_t lo = opts.edge_trim;
  std::size_t hi = points > opts.edge_trim ? points - opts.edge_trim : 0;
  if (hi < lo + 2)
  {
    lo = 0;
    hi = points;
  }
  const auto& t = curves.eval_times;

  if (opts.method == SlopeMethod::GlobalFit)
  {
    s.g = ols_slope(t, curves.g_curve, lo, hi);
    s.f = ols_slope(t, curves.f_curve, lo, hi);
    s.h = ols_slope(t, curves.h_curve, lo, hi);
    return s;
  }

  const std::size_t width = std::max<std::size_t>(opts.window_points, 1);
  for (std::size_t a = lo; a + 1 < hi; a += width)
  {
    const std::size_t b = std::min(a + width, hi - 1);
    const double dt = t[b] - t[a];
    s.windows.push_back({t[a], t[b], (curves.g_curve[b] - curves.g_curve[a]) / dt,
                         (curves.f_curve[b] - curves.f_curve[a]) / dt,
                         (curves.h_curve[b] - curves.h_curve[a]) / dt});
  }
  const double span = t[hi - 1] - t[lo];
  s.g = (curves.g_curve[hi - 1] - curves.g_curve[lo]) / span;
  s.f = (curves.f_curve[hi - 1] - curves.f_curve[lo]) / span;
  s.h = (curves.h_curve[hi - 1] - curves.h_curve[lo]) / span;
  return s;
}

QcvSlopes poisson_qcv_limits(double theta1, double theta2)
{
  if (!(theta1 > 0.0) || !(theta2 > 0.0))
    throw ValidationError("poisson_qcv_limits: thetas must be positive");
  const double s = theta1 + theta2;
  const double p = theta1 * theta2;
  const double theta = s - p / s;
  QcvSlopes out;
  out.g = 2.0 * (1.0 - 2.0 * p * p / (p * p + (theta1 * theta1 + theta2 * theta2) * s * s));
  out.h = 2.0 * p * p / (theta * theta * s * s);
  out.f = 2.0 * p / (theta1 * theta1 + p + theta2 * theta2) + 2.0 * out.h;
  return out;
}

SlopeFunction SlopeFunction::constant(double horizon, double g, double f, double h)
{
  if (!(horizon > 0.0)) throw ValidationError("slope function: horizon must be positive");
  return {{0.0, horizon}, {g}, {f}, {h}};
}

SlopeFunction SlopeFunction::from_slopes(const QcvSlopes& slopes, double horizon)
{
  if (slopes.method != SlopeMethod::Windowed || slopes.windows.empty())
    return constant(horizon, slopes.g, slopes.f, slopes.h);
  // Windows tile [T_lo, T_hi]; stretch the outer ones to cover [0, horizon].
  SlopeFunction fn;
  fn.breakpoints.push_back(0.0);
  for (std::size_t k = 0; k < slopes.windows.size(); ++k)
  {
    const auto& w = slopes.windows[k];
    const double end = (k + 1 == slopes.windows.size()) ? horizon : w.t_end;
    if (end <= fn.breakpoints.back()) continue;
    fn.breakpoints.push_back(end);
    fn.g.push_back(w.g);
    fn.f.push_back(w.f);
    fn.h.push_back(w.h);
  }
  if (fn.g.empty()) return constant(horizon, slopes.g, slopes.f, slopes.h);
  return fn;
}

AvarComponents theoretical_avar(const CoefficientSpec& coeffs, const SlopeFunction& slopes)
{
  if (slopes.breakpoints.size() < 2 || slopes.g.size() + 1 != slopes.breakpoints.size() ||
      slopes.f.size() != slopes.g.size() || slopes.h.size() != slopes.g.size())
    throw ValidationError("theoretical_avar: malformed slope function");
  const double T = coeffs.horizon();
  const CoefficientSpec fine = coeffs.refined(slopes.breakpoints);
  const auto& bp = fine.breakpoints();
  CompensatedSum vd, va;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k)
  {
    const double len = bp[k + 1] - bp[k];
    const auto& p = fine.pieces()[k];
    const double mid = 0.5 * (bp[k] + bp[k + 1]);
    const auto it = std::upper_bound(slopes.breakpoints.begin(), slopes.breakpoints.end(), mid);
    const std::size_t j = std::min<std::size_t>(
        static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - slopes.breakpoints.begin() - 1, 0)),
        slopes.g.size() - 1);
    const double ss = p.sigma_x * p.sigma_y;
    const double rss = p.rho * ss;
    vd.add(slopes.g[j] * ss * ss * (p.rho * p.rho + 1.0) * len);
    va.add((slopes.f[j] * ss * ss + 2.0 * slopes.h[j] * rss * rss) * len);
  }
  AvarComponents a;
  a.v_d = T * vd.value();
  a.v_a = T * va.value();
  a.v_total = a.v_d + a.v_a;
  return a;
}

AvarComponents theoretical_avar(const CoefficientSpec& coeffs, const QcvSlopes& slopes)
{
  return theoretical_avar(coeffs, SlopeFunction::from_slopes(slopes, coeffs.horizon()));
}

double corollary4_avar(const CoefficientSpec& coeffs, double theta1, double theta2)
{
  if (!(theta1 > 0.0) || !(theta2 > 0.0))
    throw ValidationError("corollary4_avar: thetas must be positive");
  const double s = theta1 + theta2;
  const double theta = s - theta1 * theta2 / s;
  const double factor = 2.0 * theta1 * theta2 / (theta * s) + 1.0;
  const auto& bp = coeffs.breakpoints();
  CompensatedSum rr, ss;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k)
  {
    const double len = bp[k + 1] - bp[k];
    const auto& p = coeffs.pieces()[k];
    const double v = p.sigma_x * p.sigma_y;
    rr.add(p.rho * v * p.rho * v * len);
    ss.add(v * v * len);
  }
  return 2.0 * rr.value() + factor * ss.value();
}

} // namespace hyasync
