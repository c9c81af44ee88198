#include <catch2/catch_amalgamated.hpp>

#include "hyasync/common.hpp"
#include "hyasync/estimators.hpp"
#include "hyasync/sync.hpp"
#include "oracles.hpp"

#include <random>
#include <string>

using namespace hyasync;

namespace
{

SchemePair worked_example()
{
  return SchemePair::from_times({0, 1, 2, 3, 4, 5, 6, 8, 9, 11, 13},
                                {0, 2.5, 2.7, 3, 5.5, 7, 8.5, 8.7, 10, 12, 13});
}

std::string hy_expansion(const SyncGrid& g)
{
  std::string s;
  for (std::size_t i = 1; i < g.n_sets(); ++i)
  {
    s += "(X" + std::to_string(g.h_sets[i].last) + "-X" + std::to_string(g.l_index[i]) + ")(Y" +
         std::to_string(g.g_sets[i].last) + "-Y" + std::to_string(g.lambda_index[i]) + ")";
  }
  return s;
}

// Times on a coarse lattice so that exact ties between X and Y are common.
SchemePair random_pair(std::mt19937_64& rng, std::size_t max_points)
{
  std::uniform_int_distribution<std::size_t> count(2, max_points);
  std::bernoulli_distribution lattice(0.5);
  auto draw = [&](std::size_t n) {
    if (!lattice(rng)) return oracle::random_times(rng, n, 1.0);
    std::uniform_int_distribution<int> k(0, 4 * static_cast<int>(max_points));
    std::vector<double> v;
    while (v.size() < n)
    {
      v.push_back(k(rng) / (4.0 * static_cast<double>(max_points)));
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return v;
  };
  return SchemePair::from_times(draw(count(rng)), draw(count(rng)), 1.0);
}

} // namespace

TEST_CASE("worked example: nine aggregated sets", "[sync]")
{
  const SyncGrid g = build_sync_grid(worked_example());
  const std::vector<IndexRange> h{{0, 0}, {1, 3}, {3, 3}, {4, 6}, {6, 7},
                                  {7, 8}, {8, 8}, {9, 9}, {10, 10}};
  const std::vector<IndexRange> gy{{0, 0}, {1, 1}, {2, 3}, {4, 4}, {5, 5},
                                   {6, 6}, {7, 8}, {8, 9}, {9, 10}};
  CHECK(g.h_sets == h);
  CHECK(g.g_sets == gy);
  CHECK(g.refresh_times == std::vector<double>{0, 2.5, 3, 5.5, 7, 8.5, 9, 11, 13});
  CHECK(g.n_intervals() == 8);
  CHECK_FALSE(g.truncated_final_step);
  CHECK(g.trailing_x == 0);
  CHECK(g.trailing_y == 0);
}

TEST_CASE("worked example: telescoped HY expansion", "[sync]")
{
  const SyncGrid g = build_sync_grid(worked_example());
  CHECK(hy_expansion(g) ==
        "(X3-X0)(Y1-Y0)(X3-X2)(Y3-Y1)(X6-X3)(Y4-Y3)(X7-X5)(Y5-Y4)"
        "(X8-X6)(Y6-Y5)(X8-X7)(Y8-Y6)(X9-X8)(Y9-Y7)(X10-X9)(Y10-Y8)");
}

TEST_CASE("worked example: refresh previous-tick expansion", "[sync]")
{
  const SchemePair p = worked_example();
  const SyncGrid g = build_sync_grid(p);
  const PreviousTickIndices idx = previous_tick_indices(g, p);
  CHECK(idx.x == std::vector<std::size_t>{0, 2, 3, 5, 6, 7, 8, 9, 10});
  CHECK(idx.y == std::vector<std::size_t>{0, 1, 3, 4, 5, 6, 7, 8, 10});
}

TEST_CASE("worked example: partition identity and offsets", "[sync]")
{
  const SyncGrid g = build_sync_grid(worked_example());
  CHECK(validate_partition(g).empty());
  CHECK(std::max(g.l_times[6], g.lambda_times[6]) == 8.5);
  CHECK(g.refresh_times[5] == 8.5);

  const InterpolationOffsets o = interpolation_offsets(g);
  CHECK(o.next_x[1] == 0.5);
  CHECK(o.next_y[1] == 0.0);
  CHECK(o.prev_x[1] == 0.0);
  CHECK(o.prev_y[1] == 0.0);
  CHECK(o.next_y[6] == 1.0);
  CHECK(o.next_x[6] == 0.0);
  CHECK(o.prev_x[6] == 0.5);
  CHECK(o.prev_y[6] == 0.0);
}

TEST_CASE("synchronous input collapses to the middle branch", "[sync]")
{
  const SyncGrid g = build_sync_grid(SchemePair::from_times({0, 1, 2}, {0, 1, 2}));
  CHECK(g.n_intervals() == 2);
  CHECK(g.refresh_times == std::vector<double>{0, 1, 2});
  for (std::size_t i = 0; i < g.n_sets(); ++i)
  {
    CHECK(g.h_sets[i] == IndexRange{i, i});
    CHECK(g.g_sets[i] == IndexRange{i, i});
  }
  const InterpolationOffsets o = interpolation_offsets(g);
  for (std::size_t i = 1; i < g.n_sets(); ++i)
  {
    CHECK(o.next_x[i] == 0.0);
    CHECK(o.next_y[i] == 0.0);
    CHECK(o.prev_x[i] == 0.0);
    CHECK(o.prev_y[i] == 0.0);
    CHECK(o.dT[i] == 1.0);
  }
  CHECK(validate_partition(g).empty());
}

TEST_CASE("corrupted lambda is reported at its index", "[sync]")
{
  SyncGrid g = build_sync_grid(worked_example());
  g.lambda_times[6] = 8.6;
  const auto v = validate_partition(g);
  REQUIRE(v.size() == 1);
  CHECK(v.front().index == 5);
}

TEST_CASE("exhausted search closes a truncated final set", "[sync]")
{
  const SchemePair p = SchemePair::from_times({0, 1, 2}, {0, 0.5, 3});
  const SyncGrid g = build_sync_grid(p);
  CHECK(g.truncated_final_step);
  CHECK(g.h_sets.back() == IndexRange{2, 2});
  CHECK(g.g_sets.back() == IndexRange{2, 2});
  CHECK(g.refresh_times == std::vector<double>{0, 1, 2});
  const std::vector<double> x{0, 1.5, -2.0};
  const std::vector<double> y{0, 0.25, 4.0};
  CHECK(hy_estimate(g, x, y) == Catch::Approx(hy_bruteforce(p, x, y)).epsilon(1e-15));
}

TEST_CASE("trailing observations are counted, not aggregated", "[sync]")
{
  const SyncGrid g = build_sync_grid(SchemePair::from_times({0, 1, 2}, {0, 1, 2, 3, 4}));
  CHECK(g.n_intervals() == 2);
  CHECK(g.trailing_x == 0);
  CHECK(g.trailing_y == 2);
}

TEST_CASE("invalid input is rejected", "[sync]")
{
  CHECK_THROWS_AS(build_sync_grid(SchemePair::from_times({0, 2, 1}, {0, 1})), ValidationError);
  CHECK_THROWS_AS(build_sync_grid(SchemePair::from_times({0, 1, 1}, {0, 1})), ValidationError);
  CHECK_THROWS_AS(build_sync_grid(SchemePair::from_times({}, {0, 1})), ValidationError);
}

TEST_CASE("random grids: structural invariants and refresh oracle", "[sync][property]")
{
  std::mt19937_64 rng(20240611);
  for (int rep = 0; rep < 2000; ++rep)
  {
    const SchemePair p = random_pair(rng, 60);
    const SyncGrid g = build_sync_grid(p);
    INFO("replication " << rep);
    REQUIRE(validate_partition(g).empty());
    CHECK(g.n_sets() <= std::min(p.times_x.size(), p.times_y.size()));
    for (std::size_t i = 0; i < g.n_sets(); ++i)
    {
      const bool gx = g.g_times[i] == g.refresh_times[i];
      const bool gy = g.gamma_times[i] == g.refresh_times[i];
      CHECK((gx || gy));
      if (i > 0)
      {
        CHECK(g.h_sets[i].first > g.h_sets[i - 1].first);
        CHECK(g.g_sets[i].first > g.g_sets[i - 1].first);
        CHECK(g.h_sets[i].first >= g.h_sets[i - 1].last);
        CHECK(g.g_sets[i].first >= g.g_sets[i - 1].last);
      }
    }
    const InterpolationOffsets o = interpolation_offsets(g);
    for (std::size_t i = 1; i < g.n_sets(); ++i)
    {
      CHECK(o.next_x[i] * o.next_y[i] == 0.0);
      CHECK(o.prev_x[i] * o.prev_y[i] == 0.0);
    }
    auto sweep = oracle::refresh_times_sweep(p.times_x, p.times_y);
    std::vector<double> mine = g.refresh_times;
    if (g.truncated_final_step)
    {
      mine.pop_back();
      sweep.resize(std::min(sweep.size(), mine.size()));
    }
    CHECK(mine == sweep);
  }
}

TEST_CASE("idempotence on a synchronous union grid", "[sync]")
{
  std::mt19937_64 rng(7);
  const auto t = oracle::random_times(rng, 50, 1.0);
  const SyncGrid g = build_sync_grid(SchemePair::from_times(t, t));
  REQUIRE(g.n_sets() == t.size());
  CHECK(g.refresh_times == t);
}
