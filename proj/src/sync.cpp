#include "hyasync/sync.hpp"

#include "hyasync/common.hpp"

#include <algorithm>

namespace hyasync
{

namespace
{

struct StepIndices
{
  IndexRange h;
  IndexRange g;
};

void emit_step(SyncGrid& grid, const StepIndices& s, const std::vector<double>& tx,
               const std::vector<double>& ty)
{
  const bool first = grid.h_sets.empty();
  grid.h_sets.push_back(s.h);
  grid.g_sets.push_back(s.g);
  const std::size_t li = first ? 0 : s.h.first - 1;
  const std::size_t lambdai = first ? 0 : s.g.first - 1;
  grid.l_index.push_back(li);
  grid.lambda_index.push_back(lambdai);
  grid.g_times.push_back(tx[s.h.last]);
  grid.gamma_times.push_back(ty[s.g.last]);
  grid.l_times.push_back(tx[li]);
  grid.lambda_times.push_back(ty[lambdai]);
  grid.refresh_times.push_back(std::min(tx[s.h.last], ty[s.g.last]));
}

} // namespace

SyncGrid build_sync_grid(const SchemePair& pair)
{
  const auto& tx = pair.times_x;
  const auto& ty = pair.times_y;
  if (tx.empty() || ty.empty()) throw ValidationError("build_sync_grid: empty input");
  require_strictly_increasing(tx, "times_x");
  require_strictly_increasing(ty, "times_y");

  SyncGrid grid;
  grid.horizon = pair.horizon > 0.0 ? pair.horizon : std::max(tx.back(), ty.back());
  grid.n_obs_x = tx.size();
  grid.n_obs_y = ty.size();

  const std::size_t n = tx.size() - 1;
  const std::size_t m = ty.size() - 1;
  std::size_t q = 0;
  std::size_t r = 0;

  while (q <= n && r <= m)
  {
    if (tx[q] < ty[r])
    {
      // mu = min{w > q : tau_r <= t_w}
      const auto it = std::lower_bound(tx.begin() + static_cast<std::ptrdiff_t>(q) + 1,
                                       tx.end(), ty[r]);
      if (it == tx.end())
      {
        emit_step(grid, {{q, n}, {r, r}}, tx, ty);
        grid.truncated_final_step = true;
        break;
      }
      const auto mu = static_cast<std::size_t>(it - tx.begin());
      emit_step(grid, {{q, mu}, {r, r}}, tx, ty);
      q = (ty[r] == tx[mu]) ? mu + 1 : mu;
      r = r + 1;
    }
    else if (tx[q] == ty[r])
    {
      emit_step(grid, {{q, q}, {r, r}}, tx, ty);
      ++q;
      ++r;
    }
    else
    {
      const auto it = std::lower_bound(ty.begin() + static_cast<std::ptrdiff_t>(r) + 1,
                                       ty.end(), tx[q]);
      if (it == ty.end())
      {
        emit_step(grid, {{q, q}, {r, m}}, tx, ty);
        grid.truncated_final_step = true;
        break;
      }
      const auto w = static_cast<std::size_t>(it - ty.begin());
      emit_step(grid, {{q, q}, {r, w}}, tx, ty);
      r = (tx[q] == ty[w]) ? w + 1 : w;
      q = q + 1;
    }
  }

  grid.trailing_x = n - grid.h_sets.back().last;
  grid.trailing_y = m - grid.g_sets.back().last;
  return grid;
}

std::vector<PartitionViolation> validate_partition(const SyncGrid& grid)
{
  std::vector<PartitionViolation> out;
  const std::size_t N = grid.n_intervals();
  for (std::size_t i = 1; i + 1 <= N; ++i)
  {
    const double lhs = std::min(grid.g_times[i], grid.gamma_times[i]);
    const double rhs = std::max(grid.l_times[i + 1], grid.lambda_times[i + 1]);
    if (lhs != rhs)
    {
      out.push_back({i, "min(g_i, gamma_i) = " + std::to_string(lhs) +
                            " != max(l_{i+1}, lambda_{i+1}) = " + std::to_string(rhs)});
    }
  }
  for (std::size_t i = 1; i <= N; ++i)
  {
    if (!(grid.refresh_times[i] > grid.refresh_times[i - 1]))
      out.push_back({i, "refresh times not strictly increasing"});
  }
  return out;
}

InterpolationOffsets interpolation_offsets(const SyncGrid& grid)
{
  const std::size_t sets = grid.n_sets();
  InterpolationOffsets o;
  o.next_x.assign(sets, 0.0);
  o.next_y.assign(sets, 0.0);
  o.prev_x.assign(sets, 0.0);
  o.prev_y.assign(sets, 0.0);
  o.dT.assign(sets, 0.0);
  const auto& T = grid.refresh_times;
  for (std::size_t i = 1; i < sets; ++i)
  {
    o.next_x[i] = grid.g_times[i] - T[i];
    o.next_y[i] = grid.gamma_times[i] - T[i];
    o.prev_x[i] = T[i - 1] - grid.l_times[i];
    o.prev_y[i] = T[i - 1] - grid.lambda_times[i];
    o.dT[i] = T[i] - T[i - 1];
  }
  return o;
}

} // namespace hyasync
