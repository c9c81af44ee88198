#include "hyasync/sampling.hpp"

#include "hyasync/common.hpp"
#include "hyasync/sync.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hyasync
{

void require_strictly_increasing(std::span<const double> times, const std::string& what)
{
  for (std::size_t i = 0; i < times.size(); ++i)
  {
    if (!std::isfinite(times[i]))
      throw ValidationError(what + ": non-finite time at index " + std::to_string(i));
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError(what + ": times not strictly increasing at index " +
                            std::to_string(i));
  }
}

std::string to_string(SchemeKind kind)
{
  switch (kind)
  {
  case SchemeKind::PoissonPair: return "poisson";
  case SchemeKind::EquidistantSync: return "equidistant";
  case SchemeKind::Intermeshed: return "intermeshed";
  case SchemeKind::Explicit: return "explicit";
  }
  return "unknown";
}

SchemeKind scheme_kind_from_string(const std::string& name)
{
  if (name == "poisson") return SchemeKind::PoissonPair;
  if (name == "equidistant") return SchemeKind::EquidistantSync;
  if (name == "intermeshed") return SchemeKind::Intermeshed;
  if (name == "explicit") return SchemeKind::Explicit;
  throw ValidationError("unknown scheme kind '" + name +
                        "' (expected poisson|equidistant|intermeshed|explicit)");
}

void SchemeSpec::validate() const
{
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ValidationError("scheme horizon must be positive and finite");
  if (intensity_scale < 1) throw ValidationError("scheme intensity scale n must be >= 1");
  if (kind == SchemeKind::PoissonPair)
  {
    if (!(theta1 > 0.0) || !std::isfinite(theta1) || !(theta2 > 0.0) || !std::isfinite(theta2))
      throw ValidationError("Poisson theta1, theta2 must be positive and finite");
  }
  if (kind == SchemeKind::Explicit)
  {
    require_strictly_increasing(explicit_x, "explicit times_x");
    require_strictly_increasing(explicit_y, "explicit times_y");
    auto in_range = [&](const std::vector<double>& v) {
      return v.empty() || (v.front() >= 0.0 && v.back() <= horizon);
    };
    if (!in_range(explicit_x) || !in_range(explicit_y))
      throw ValidationError("explicit times must lie in [0, horizon]");
  }
}

SchemePair SchemePair::from_times(std::vector<double> tx, std::vector<double> ty, double horizon)
{
  SchemePair p;
  p.times_x = std::move(tx);
  p.times_y = std::move(ty);
  if (horizon > 0.0)
    p.horizon = horizon;
  else
  {
    const double lx = p.times_x.empty() ? 0.0 : p.times_x.back();
    const double ly = p.times_y.empty() ? 0.0 : p.times_y.back();
    p.horizon = std::max(lx, ly);
  }
  return p;
}

void SchemePair::validate() const
{
  require_strictly_increasing(times_x, "times_x");
  require_strictly_increasing(times_y, "times_y");
  if (times_x.size() < 2 || times_y.size() < 2)
    throw ValidationError("each process needs at least 2 observation times");
  if (times_x.front() < 0.0 || times_y.front() < 0.0)
    throw ValidationError("observation times must be non-negative");
  if (times_x.back() > horizon || times_y.back() > horizon)
    throw ValidationError("observation times exceed the horizon");
}

namespace
{

std::vector<double> poisson_arrivals(std::mt19937_64& rng, double mean_wait, double horizon)
{
  std::exponential_distribution<double> wait(1.0 / mean_wait);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon / mean_wait * 1.05) + 16);
  double t = wait(rng);
  while (t <= horizon)
  {
    out.push_back(t);
    t += wait(rng);
  }
  return out;
}

std::vector<double> equidistant(std::int64_t n, double horizon)
{
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i)
    out[static_cast<std::size_t>(i)] = static_cast<double>(i) * horizon / static_cast<double>(n);
  return out;
}

} // namespace

SchemePair generate(const SchemeSpec& spec, std::uint64_t seed)
{
  spec.validate();
  SchemePair pair;
  pair.horizon = spec.horizon;
  const auto n = spec.intensity_scale;
  switch (spec.kind)
  {
  case SchemeKind::PoissonPair:
  {
    std::mt19937_64 rx(derive_seed(seed, 0, 11));
    std::mt19937_64 ry(derive_seed(seed, 1, 11));
    pair.times_x = poisson_arrivals(rx, spec.theta1 / static_cast<double>(n), spec.horizon);
    pair.times_y = poisson_arrivals(ry, spec.theta2 / static_cast<double>(n), spec.horizon);
    break;
  }
  case SchemeKind::EquidistantSync:
    pair.times_x = equidistant(n, spec.horizon);
    pair.times_y = pair.times_x;
    break;
  case SchemeKind::Intermeshed:
    // X on {iT/n}; Y starts with X at 0 and then sits half a step before each
    // later X tick: {0, T/(2n), 3T/(2n), ..., (n - 1/2)T/n}.
    pair.times_x = equidistant(n, spec.horizon);
    pair.times_y.assign(1, 0.0);
    for (std::int64_t j = 1; j <= n; ++j)
      pair.times_y.push_back((static_cast<double>(j) - 0.5) * spec.horizon / static_cast<double>(n));
    break;
  case SchemeKind::Explicit:
    pair.times_x = spec.explicit_x;
    pair.times_y = spec.explicit_y;
    break;
  }
  if (pair.times_x.size() < 2 || pair.times_y.size() < 2)
    throw ComputationError("generated scheme has fewer than 2 observations in a process "
                           "(increase n or the horizon)");
  return pair;
}

double refresh_waiting_cdf(double theta1, double theta2, double n, double t)
{
  if (t <= 0.0) return 0.0;
  const double a = t * n / theta1;
  const double b = t * n / theta2;
  // (1 - e^{-a})(1 - e^{-b}) without cancellation.
  return (-std::expm1(-a)) * (-std::expm1(-b));
}

SchemeStats expected_scheme_stats(double theta1, double theta2, double n)
{
  if (!(theta1 > 0.0) || !(theta2 > 0.0) || !(n > 0.0))
    throw ValidationError("expected_scheme_stats: parameters must be positive");
  const double s = theta1 + theta2;
  SchemeStats st{};
  st.e_dT = (s - theta1 * theta2 / s) / n;
  st.e_next_x = (theta1 / n) * theta2 / s;
  st.e_next_y = (theta2 / n) * theta1 / s;
  // X lags at a refresh time only when Y arrives last, so the X gap carries
  // the X rate: integral of y (n/theta1) e^{-yn/theta1} e^{-yn/theta2}.
  st.e_prev_x = theta1 * theta2 * theta2 / (s * s) / n;
  st.e_prev_y = theta1 * theta1 * theta2 / (s * s) / n;
  return st;
}

namespace
{

double max_gap(const std::vector<double>& t, double horizon)
{
  if (t.size() < 2) throw ValidationError("grid_regularity: fewer than 2 observations");
  double m = std::max(t.front(), horizon - t.back());
  for (std::size_t i = 1; i < t.size(); ++i) m = std::max(m, t[i] - t[i - 1]);
  return m;
}

} // namespace

GridRegularity grid_regularity(const SchemePair& pair)
{
  GridRegularity r{};
  r.delta_x = max_gap(pair.times_x, pair.horizon);
  r.delta_y = max_gap(pair.times_y, pair.horizon);
  const SyncGrid grid = build_sync_grid(pair);
  r.delta_sync = 0.0;
  for (std::size_t i = 1; i < grid.refresh_times.size(); ++i)
    r.delta_sync = std::max(r.delta_sync, grid.refresh_times[i] - grid.refresh_times[i - 1]);
  return r;
}

} // namespace hyasync
