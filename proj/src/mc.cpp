#include "hyasync/mc.hpp"

#include "hyasync/common.hpp"
#include "hyasync/estimators.hpp"
#include "hyasync/sync.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace hyasync
{

void McStudySpec::validate() const
{
  scheme.validate();
  if (replications < 1) throw ValidationError("mc: replications must be >= 1");
  if (coeffs.horizon() < scheme.horizon)
    throw ValidationError("mc: coefficient breakpoints must cover the scheme horizon");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("mc: level must lie in (0, 1)");
  for (double h : fixed_grid_widths)
  {
    if (!(h > 0.0) || h > scheme.horizon)
      throw ValidationError("mc: fixed-grid widths must lie in (0, horizon]");
  }
  if (outputs.epps_curve && fixed_grid_widths.empty())
    throw ValidationError("mc: epps_curve output requires fixed_grid widths");
}

namespace
{

double mean_of(const std::vector<double>& v, std::size_t from)
{
  if (v.size() <= from) return 0.0;
  CompensatedSum s;
  for (std::size_t i = from; i < v.size(); ++i) s.add(v[i]);
  return s.value() / static_cast<double>(v.size() - from);
}

} // namespace

ReplicationResult run_replication(const McStudySpec& spec, std::size_t index)
{
  ReplicationResult r;
  r.scheme_seed = derive_seed(spec.base_seed, index, 1);
  r.path_seed = derive_seed(spec.base_seed, index, 2);
  try
  {
    const SchemePair pair = generate(spec.scheme, r.scheme_seed);
    const PathBundle bundle = simulate_paths(pair, spec.coeffs, r.path_seed);
    const auto x = bundle.observed_x();
    const auto y = bundle.observed_y();
    const SyncGrid grid = build_sync_grid(pair);

    r.n_sync = grid.n_intervals();
    r.truth = true_quadratic_covariation(spec.coeffs, pair.horizon);
    r.hy = hy_estimate(grid, x, y);
    if (spec.refresh_prev_tick) r.refresh_prev_tick = refresh_previous_tick(grid, pair, x, y);
    for (double h : spec.fixed_grid_widths)
      r.fixed_grid.push_back(fixed_grid_previous_tick(pair, x, y, h));

    if (spec.outputs.variance || spec.outputs.coverage || spec.outputs.qq_points)
    {
      const AvarResult av = avar_estimate(grid, x, y, spec.avar);
      r.avar_hat = av.avar;
      r.studentized = studentize(r.hy, r.truth, r.avar_hat, r.n_sync);
      const ConfidenceInterval ci = feasible_ci(r.hy, r.avar_hat, r.n_sync, spec.level);
      r.covered = ci.low <= r.truth && r.truth <= ci.high;
    }
    if (spec.outputs.decomposition_corr)
    {
      const Decomposition d = decompose_error(grid, bundle, spec.coeffs);
      r.d_term = d.d_term;
      r.a_term = d.a_term;
      r.identity_error = std::fabs((d.hy - d.truth) - (d.d_term + d.a_term));
    }
    if (spec.outputs.qcv_slopes) r.slopes = qcv_slopes(qcv_curves(grid));
    if (spec.outputs.scheme_stats)
    {
      const InterpolationOffsets o = interpolation_offsets(grid);
      r.mean_dT = mean_of(o.dT, 1);
      r.mean_next_x = mean_of(o.next_x, 1);
      r.mean_next_y = mean_of(o.next_y, 1);
      // prev offsets of step 1 refer to the start convention, not a tick.
      r.mean_prev_x = mean_of(o.prev_x, 2);
      r.mean_prev_y = mean_of(o.prev_y, 2);
    }
    r.ok = true;
  }
  catch (const std::exception& e)
  {
    r.ok = false;
    r.failure = e.what();
  }
  return r;
}

namespace
{

MeanWithError mean_se(const std::vector<double>& v)
{
  MeanWithError m;
  m.count = v.size();
  if (v.empty()) return m;
  CompensatedSum s;
  for (double x : v) s.add(x);
  m.mean = s.value() / static_cast<double>(v.size());
  if (v.size() > 1)
  {
    CompensatedSum ss;
    for (double x : v) ss.add((x - m.mean) * (x - m.mean));
    m.se = std::sqrt(ss.value() / static_cast<double>(v.size() - 1) /
                     static_cast<double>(v.size()));
  }
  return m;
}

// Sample variance and its standard error from the fourth central moment.
std::pair<double, double> variance_with_se(const std::vector<double>& v)
{
  const std::size_t n = v.size();
  if (n < 2) return {0.0, 0.0};
  const double mean = mean_se(v).mean;
  CompensatedSum s2, s4;
  for (double x : v)
  {
    const double d = (x - mean) * (x - mean);
    s2.add(d);
    s4.add(d * d);
  }
  const double var = s2.value() / static_cast<double>(n - 1);
  const double m2 = s2.value() / static_cast<double>(n);
  const double m4 = s4.value() / static_cast<double>(n);
  const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / static_cast<double>(n));
  return {var, se};
}

double correlation(const std::vector<double>& a, const std::vector<double>& b)
{
  const double ma = mean_se(a).mean;
  const double mb = mean_se(b).mean;
  CompensatedSum sab, saa, sbb;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    sab.add((a[i] - ma) * (b[i] - mb));
    saa.add((a[i] - ma) * (a[i] - ma));
    sbb.add((b[i] - mb) * (b[i] - mb));
  }
  const double den = std::sqrt(saa.value() * sbb.value());
  return den > 0.0 ? sab.value() / den : 0.0;
}

double empirical_quantile(std::vector<double> sorted, double p)
{
  // Linear interpolation between order statistics (type 7).
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

EstimatorSummary summarize_estimator(std::string name, double width,
                                     const std::vector<double>& est,
                                     const std::vector<double>& truth,
                                     const std::vector<double>& n_sync)
{
  EstimatorSummary s;
  s.name = std::move(name);
  s.grid_width = width;
  std::vector<double> err(est.size()), scaled(est.size());
  for (std::size_t i = 0; i < est.size(); ++i)
  {
    err[i] = est[i] - truth[i];
    scaled[i] = std::sqrt(n_sync[i]) * err[i];
  }
  s.estimate = mean_se(est);
  s.error = mean_se(err);
  const auto [v, se] = variance_with_se(scaled);
  s.var_scaled_error = v;
  s.se_var_scaled_error = se;
  return s;
}

} // namespace

std::pair<double, double> jarque_bera(const std::vector<double>& sample)
{
  const std::size_t n = sample.size();
  if (n < 3) return {0.0, 1.0};
  const double mean = mean_se(sample).mean;
  CompensatedSum m2, m3, m4;
  for (double x : sample)
  {
    const double d = x - mean;
    m2.add(d * d);
    m3.add(d * d * d);
    m4.add(d * d * d * d);
  }
  const double nn = static_cast<double>(n);
  const double s2 = m2.value() / nn;
  if (!(s2 > 0.0)) return {0.0, 1.0};
  const double skew = (m3.value() / nn) / std::pow(s2, 1.5);
  const double kurt = (m4.value() / nn) / (s2 * s2);
  const double jb = nn / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
  return {jb, std::exp(-0.5 * jb)};
}

McSummary summarize(const McStudySpec& spec, const std::vector<ReplicationResult>& results)
{
  McSummary s;
  s.replications = results.size();
  std::vector<const ReplicationResult*> ok;
  for (const auto& r : results)
  {
    if (r.ok)
      ok.push_back(&r);
    else
    {
      ++s.failures;
      if (s.failure_messages.size() < 5) s.failure_messages.push_back(r.failure);
    }
  }

  auto collect = [&](auto field) {
    std::vector<double> v;
    v.reserve(ok.size());
    for (const auto* r : ok) v.push_back(field(*r));
    return v;
  };
  const auto n_sync = collect([](const ReplicationResult& r) { return static_cast<double>(r.n_sync); });
  const auto truth = collect([](const ReplicationResult& r) { return r.truth; });
  s.n_sync = mean_se(n_sync);
  s.truth = mean_se(truth);
  if (ok.empty()) return s;

  s.estimators.push_back(summarize_estimator(
      "hy", 0.0, collect([](const ReplicationResult& r) { return r.hy; }), truth, n_sync));
  if (spec.refresh_prev_tick)
  {
    s.estimators.push_back(summarize_estimator(
        "refresh_prev_tick", 0.0,
        collect([](const ReplicationResult& r) { return r.refresh_prev_tick.value_or(0.0); }),
        truth, n_sync));
  }
  for (std::size_t k = 0; k < spec.fixed_grid_widths.size(); ++k)
  {
    const auto est = collect([k](const ReplicationResult& r) { return r.fixed_grid[k]; });
    s.estimators.push_back(
        summarize_estimator("fixed_grid", spec.fixed_grid_widths[k], est, truth, n_sync));
    if (spec.outputs.epps_curve) s.epps_curve.push_back({spec.fixed_grid_widths[k], mean_se(est)});
  }

  if (spec.outputs.variance || spec.outputs.coverage || spec.outputs.qq_points)
  {
    s.avar_hat = mean_se(collect([](const ReplicationResult& r) { return r.avar_hat; }));
    std::vector<double> z;
    std::size_t covered = 0;
    for (const auto* r : ok)
    {
      if (r->studentized) z.push_back(*r->studentized);
      if (r->covered) ++covered;
    }
    s.studentized = mean_se(z);
    s.studentized_variance = variance_with_se(z).first;
    std::tie(s.jarque_bera, s.jarque_bera_pvalue) = jarque_bera(z);
    const double m = static_cast<double>(ok.size());
    s.coverage = static_cast<double>(covered) / m;
    s.coverage_se = std::sqrt(s.coverage * (1.0 - s.coverage) / m);
    if (spec.outputs.qq_points && z.size() >= 2)
    {
      std::sort(z.begin(), z.end());
      for (int k = 1; k <= 99; ++k)
      {
        const double p = k / 100.0;
        s.qq_points.emplace_back(normal_quantile(p), empirical_quantile(z, p));
      }
    }
  }

  if (spec.scheme.kind == SchemeKind::PoissonPair)
  {
    s.theoretical = theoretical_avar(spec.coeffs,
                                     poisson_qcv_limits(spec.scheme.theta1, spec.scheme.theta2));
    s.corollary4 = corollary4_avar(spec.coeffs, spec.scheme.theta1, spec.scheme.theta2);
  }
  else if (spec.scheme.kind == SchemeKind::EquidistantSync)
  {
    QcvSlopes sync;
    sync.g = 1.0;
    s.theoretical = theoretical_avar(spec.coeffs, sync);
  }
  else if (spec.scheme.kind == SchemeKind::Intermeshed)
  {
    QcvSlopes im;
    im.g = 1.0;
    im.f = 1.0;
    im.h = 0.25;
    s.theoretical = theoretical_avar(spec.coeffs, im);
  }

  if (spec.outputs.decomposition_corr)
  {
    const auto d = collect([](const ReplicationResult& r) { return r.d_term; });
    const auto a = collect([](const ReplicationResult& r) { return r.a_term; });
    s.corr_d_a = correlation(d, a);
    const double m = static_cast<double>(ok.size());
    s.corr_d_a_se = m > 2 ? std::sqrt((1.0 - s.corr_d_a * s.corr_d_a) / (m - 2.0)) : 0.0;
    for (const auto* r : ok) s.max_identity_error = std::max(s.max_identity_error, r->identity_error);
  }

  if (spec.outputs.qcv_slopes)
  {
    s.g_slope = mean_se(collect([](const ReplicationResult& r) { return r.slopes.g; }));
    s.f_slope = mean_se(collect([](const ReplicationResult& r) { return r.slopes.f; }));
    s.h_slope = mean_se(collect([](const ReplicationResult& r) { return r.slopes.h; }));
    if (spec.scheme.kind == SchemeKind::Explicit)
    {
      QcvSlopes emp;
      emp.g = s.g_slope.mean;
      emp.f = s.f_slope.mean;
      emp.h = s.h_slope.mean;
      s.theoretical = theoretical_avar(spec.coeffs, emp);
    }
  }

  if (spec.outputs.scheme_stats)
  {
    s.mean_dT = mean_se(collect([](const ReplicationResult& r) { return r.mean_dT; }));
    s.mean_next_x = mean_se(collect([](const ReplicationResult& r) { return r.mean_next_x; }));
    s.mean_next_y = mean_se(collect([](const ReplicationResult& r) { return r.mean_next_y; }));
    s.mean_prev_x = mean_se(collect([](const ReplicationResult& r) { return r.mean_prev_x; }));
    s.mean_prev_y = mean_se(collect([](const ReplicationResult& r) { return r.mean_prev_y; }));
  }
  return s;
}

namespace
{

std::vector<ReplicationResult> run_all(const McStudySpec& spec)
{
  std::vector<ReplicationResult> results(spec.replications);
  std::size_t threads = spec.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, spec.replications);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < spec.replications; k = next++)
      results[k] = run_replication(spec, k);
  };
  if (threads <= 1)
    worker();
  else
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return results;
}

} // namespace

McSummary run_study(const McStudySpec& spec)
{
  spec.validate();
  const auto results = run_all(spec);
  McSummary s = summarize(spec, results);
  if (static_cast<double>(s.failures) > 0.01 * static_cast<double>(s.replications))
  {
    throw ComputationError("mc: " + std::to_string(s.failures) + " of " +
                           std::to_string(s.replications) + " replications failed; first: " +
                           (s.failure_messages.empty() ? "" : s.failure_messages.front()));
  }
  return s;
}

EppsStudy epps_study(McStudySpec spec, const std::vector<double>& widths)
{
  if (widths.empty()) throw ValidationError("epps_study: empty width list");
  for (std::size_t k = 1; k < widths.size(); ++k)
  {
    if (!(widths[k] < widths[k - 1]))
      throw ValidationError("epps_study: widths must be strictly decreasing");
  }
  spec.fixed_grid_widths = widths;
  spec.outputs.epps_curve = true;
  spec.outputs.variance = spec.outputs.coverage = spec.outputs.qq_points = false;
  const McSummary s = run_study(spec);
  EppsStudy out;
  out.curve = s.epps_curve;
  out.hy = s.estimators.front().estimate;
  out.truth = s.truth;
  return out;
}

std::vector<QcvConvergencePoint> qcv_convergence_study(double theta1, double theta2,
                                                       const std::vector<std::int64_t>& n_list,
                                                       std::size_t seeds, std::uint64_t base_seed,
                                                       SchemeKind kind)
{
  if (seeds < 1) throw ValidationError("qcv_convergence_study: seeds must be >= 1");
  for (std::size_t k = 1; k < n_list.size(); ++k)
  {
    if (!(n_list[k] > n_list[k - 1]))
      throw ValidationError("qcv_convergence_study: n_list must be increasing");
  }
  std::vector<QcvConvergencePoint> out;
  for (const std::int64_t n : n_list)
  {
    SchemeSpec spec;
    spec.kind = kind;
    spec.horizon = 1.0;
    spec.intensity_scale = n;
    spec.theta1 = theta1;
    spec.theta2 = theta2;
    std::vector<double> g, f, h;
    for (std::size_t s = 0; s < seeds; ++s)
    {
      const SchemePair pair =
          generate(spec, derive_seed(base_seed, s, static_cast<std::uint64_t>(n)));
      const QcvSlopes sl = qcv_slopes(qcv_curves(build_sync_grid(pair)));
      g.push_back(sl.g);
      f.push_back(sl.f);
      h.push_back(sl.h);
    }
    out.push_back({n, mean_se(g), mean_se(f), mean_se(h)});
  }
  return out;
}

} // namespace hyasync
