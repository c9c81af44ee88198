#include "hyasync/inference.hpp"

#include "hyasync/common.hpp"
#include "hyasync/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hyasync
{

std::size_t AvarConfig::resolve_bins(std::size_t n_intervals) const
{
  if (k_bins > 0) return k_bins;
  // ceil(N^{1/3}) with an integer correction for cbrt rounding.
  auto k = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n_intervals))));
  while (k > 1 && (k - 1) * (k - 1) * (k - 1) >= n_intervals) --k;
  while (k * k * k < n_intervals) ++k;
  return std::max<std::size_t>(k, 1);
}

AvarResult avar_estimate(const SyncGrid& grid, std::span<const double> x,
                         std::span<const double> y, const AvarConfig& cfg)
{
  const std::size_t N = grid.n_intervals();
  const std::size_t K = cfg.resolve_bins(N);
  if (N < 2 * K)
    throw ComputationError("avar_estimate: N = " + std::to_string(N) + " refresh intervals but " +
                           std::to_string(K) + " bins need N >= " + std::to_string(2 * K) +
                           "; use fewer bins or more data");

  const std::vector<double> P = hy_products(grid, x, y);
  AvarResult res;
  res.k_bins = K;

  CompensatedSum main;
  for (std::size_t j = 1; j + 1 <= N; ++j) main.add(P[j] * (P[j] + 2.0 * P[j + 1]));
  res.main_sum = static_cast<double>(N) * main.value();

  // Transformed time: cumulative sum of squared refresh gaps.
  const auto& T = grid.refresh_times;
  std::vector<double> G(N + 1, 0.0);
  CompensatedSum gs;
  for (std::size_t k = 1; k <= N; ++k)
  {
    const double d = T[k] - T[k - 1];
    gs.add(d * d);
    G[k] = gs.value();
  }
  const double g_total = G[N];

  res.bin_boundaries.assign(K + 1, T[N]);
  res.bin_boundaries[0] = T[0];
  for (std::size_t j = 1; j < K; ++j)
  {
    const double target = static_cast<double>(j) * g_total / static_cast<double>(K);
    const auto it = std::lower_bound(G.begin(), G.end(), target);
    res.bin_boundaries[j] = T[static_cast<std::size_t>(it - G.begin())];
  }
  const auto& b = res.bin_boundaries;

  std::vector<double> bin_hy(K, 0.0);
  std::vector<std::size_t> bin_count(K, 0);
  for (std::size_t r = 1; r <= N; ++r)
  {
    const double t = cfg.endpoint == BinEndpoint::Right ? T[r] : T[r - 1];
    auto j = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t) - b.begin());
    j = std::clamp<std::size_t>(j, 1, K) - 1; // t == T_N falls in the last bin
    bin_hy[j] += P[r];
    ++bin_count[j];
  }

  // Empty bins join their successor; a trailing run of empties joins the last
  // non-empty group.
  struct Group
  {
    double hy = 0.0;
    double width = 0.0;
    std::size_t bins = 0;
    std::size_t intervals = 0;
  };
  std::vector<Group> groups;
  Group cur;
  for (std::size_t j = 0; j < K; ++j)
  {
    cur.hy += bin_hy[j];
    cur.width += b[j + 1] - b[j];
    cur.bins += 1;
    cur.intervals += bin_count[j];
    if (cur.intervals > 0 && cur.width > 0.0)
    {
      groups.push_back(cur);
      cur = Group{};
    }
  }
  if (cur.bins > 0)
  {
    if (groups.empty()) throw ComputationError("avar_estimate: all bins are empty");
    groups.back().hy += cur.hy;
    groups.back().width += cur.width;
    groups.back().bins += cur.bins;
    groups.back().intervals += cur.intervals;
  }
  res.merged_bins = K - groups.size();

  const double unit = g_total / static_cast<double>(K);
  CompensatedSum i1;
  for (const auto& g : groups)
  {
    const double rate = g.hy / g.width;
    i1.add(rate * rate * unit * static_cast<double>(g.bins));
  }
  // G above is unnormalised; the N/T factor of G^N restores the curve's scale.
  res.i1_tilde = i1.value() * static_cast<double>(N) / grid.horizon;
  res.avar = res.main_sum - 3.0 * grid.horizon * res.i1_tilde;
  return res;
}

double normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
  {
    if (p == 0.0) return -INFINITY;
    if (p == 1.0) return INFINITY;
    throw ValidationError("normal_quantile: p must lie in [0, 1]");
  }
  // Wichura (1988), algorithm AS241 PPND16.
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425)
  {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0)
  {
    r -= 1.6;
    val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  }
  else
  {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

ConfidenceInterval feasible_ci(double hy, double avar_hat, std::size_t n_sync, double level)
{
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("level must lie in (0, 1)");
  if (n_sync < 1) throw ValidationError("feasible_ci: n_sync must be >= 1");
  const double floor = 1e-12 * hy * hy;
  ConfidenceInterval ci{hy, hy, false};
  double v = avar_hat;
  if (!(v >= floor))
  {
    v = floor;
    ci.floored = true;
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * std::sqrt(v / static_cast<double>(n_sync));
  ci.low = hy - half;
  ci.high = hy + half;
  return ci;
}

std::optional<double> studentize(double hy, double truth, double avar_hat, std::size_t n_sync)
{
  if (!(avar_hat > 0.0) || n_sync == 0) return std::nullopt;
  return std::sqrt(static_cast<double>(n_sync)) * (hy - truth) / std::sqrt(avar_hat);
}

EstimateReport estimate(const SchemePair& pair, std::span<const double> x,
                        std::span<const double> y, const EstimateOptions& opts)
{
  pair.validate();
  const SyncGrid grid = build_sync_grid(pair);
  EstimateReport rep;
  rep.level = opts.level;
  rep.hy = hy_estimate(grid, x, y);
  rep.n_sync = grid.n_intervals();
  const AvarResult av = avar_estimate(grid, x, y, opts.avar);
  rep.avar_hat = av.avar;
  rep.k_bins = av.k_bins;
  const ConfidenceInterval ci = feasible_ci(rep.hy, rep.avar_hat, rep.n_sync, opts.level);
  rep.ci_low = ci.low;
  rep.ci_high = ci.high;
  rep.avar_floored = ci.floored;
  if (opts.truth) rep.studentized = studentize(rep.hy, *opts.truth, rep.avar_hat, rep.n_sync);
  rep.qcv_slopes = qcv_slopes(qcv_curves(grid), opts.slopes);
  rep.regularity = grid_regularity(pair);
  return rep;
}

} // namespace hyasync
