#include <catch2/catch_amalgamated.hpp>

#include "hyasync/common.hpp"
#include "hyasync/sampling.hpp"
#include "hyasync/sync.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace hyasync;
using Catch::Approx;

namespace
{

SchemeSpec spec_of(SchemeKind kind, std::int64_t n, double t1 = 1.0, double t2 = 1.0)
{
  SchemeSpec s;
  s.kind = kind;
  s.intensity_scale = n;
  s.theta1 = t1;
  s.theta2 = t2;
  return s;
}

std::vector<double> waits(const std::vector<double>& t)
{
  std::vector<double> w;
  for (std::size_t i = 1; i < t.size(); ++i) w.push_back(t[i] - t[i - 1]);
  return w;
}

} // namespace

TEST_CASE("equidistant and intermeshed grids", "[sampling]")
{
  const SchemePair eq = generate(spec_of(SchemeKind::EquidistantSync, 4), 0);
  CHECK(eq.times_x == std::vector<double>{0, .25, .5, .75, 1});
  CHECK(eq.times_y == eq.times_x);

  const SchemePair im = generate(spec_of(SchemeKind::Intermeshed, 4), 0);
  CHECK(im.times_x == std::vector<double>{0, .25, .5, .75, 1});
  CHECK(im.times_y == std::vector<double>{0, .125, .375, .625, .875});
}

TEST_CASE("Poisson waiting times have mean theta / n", "[sampling]")
{
  const SchemePair p = generate(spec_of(SchemeKind::PoissonPair, 10000), 42);
  for (const auto* t : {&p.times_x, &p.times_y})
  {
    const auto w = waits(*t);
    const double m = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    // Exponential: sd equals the mean.
    const double se = 1e-4 / std::sqrt(static_cast<double>(w.size()));
    CHECK(std::fabs(m - 1e-4) < 3.0 * se);
  }
}

TEST_CASE("Poisson waiting times pass KS in at least 95% of seeds", "[sampling][property]")
{
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    const SchemePair p = generate(spec_of(SchemeKind::PoissonPair, 2000, 1.0, 0.5), seed);
    const auto w = waits(p.times_y);
    const double crit = 1.628 / std::sqrt(static_cast<double>(w.size()));
    if (oracle::ks_exponential(w, 0.5 / 2000.0) < crit) ++passed;
  }
  CHECK(passed >= 95);
}

TEST_CASE("generation is deterministic in the seed", "[sampling]")
{
  const auto s = spec_of(SchemeKind::PoissonPair, 500);
  CHECK(generate(s, 3).times_x == generate(s, 3).times_x);
  CHECK(generate(s, 3).times_x != generate(s, 4).times_x);
}

TEST_CASE("refresh waiting CDF", "[sampling]")
{
  CHECK(refresh_waiting_cdf(1, 1, 1, 0) == 0.0);
  CHECK(refresh_waiting_cdf(1, 1, 1, 1e6) == Approx(1.0));
  CHECK(refresh_waiting_cdf(1, 1, 1, 1) == Approx(1 - 2 * std::exp(-1.0) + std::exp(-2.0)));
  CHECK(refresh_waiting_cdf(1, 1, 1, 1) == Approx(0.39958).margin(5e-6));

  std::mt19937_64 rng(5);
  std::exponential_distribution<double> e(1.0);
  int hit = 0;
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) hit += std::max(e(rng), e(rng)) <= 1.0;
  const double p = refresh_waiting_cdf(1, 1, 1, 1);
  CHECK(std::fabs(hit / double(draws) - p) < 4 * std::sqrt(p * (1 - p) / draws));
}

TEST_CASE("expected scheme statistics", "[sampling]")
{
  const SchemeStats a = expected_scheme_stats(1, 1, 1);
  CHECK(a.e_dT == Approx(1.5));
  CHECK(a.e_next_x == Approx(0.5));
  CHECK(a.e_next_y == Approx(0.5));
  CHECK(a.e_prev_x == Approx(0.25));
  CHECK(a.e_prev_y == Approx(0.25));

  const SchemeStats b = expected_scheme_stats(1, 0.5, 1);
  CHECK(b.e_dT == Approx(1.5 - 1.0 / 3.0));
  // X is the slower process here, so Y is rarely the last to arrive.
  CHECK(b.e_prev_x == Approx(1.0 / 9.0));
  CHECK(b.e_prev_y == Approx(2.0 / 9.0));
  CHECK(expected_scheme_stats(1, 1, 100).e_dT == Approx(0.015));
  CHECK_THROWS_AS(expected_scheme_stats(0, 1, 1), ValidationError);
}

TEST_CASE("mean refresh wait matches the closed form", "[sampling]")
{
  const SchemePair p = generate(spec_of(SchemeKind::PoissonPair, 20000, 1.0, 0.5), 8);
  const SyncGrid g = build_sync_grid(p);
  const auto w = waits(g.refresh_times);
  double m = 0, m2 = 0;
  for (double v : w)
  {
    m += v;
    m2 += v * v;
  }
  const double n = static_cast<double>(w.size());
  m /= n;
  const double se = std::sqrt((m2 / n - m * m) / n);
  CHECK(std::fabs(m - expected_scheme_stats(1, 0.5, 20000).e_dT) < 4 * se);
}

TEST_CASE("mean previous-tick offsets match the closed form", "[sampling]")
{
  const SchemePair p = generate(spec_of(SchemeKind::PoissonPair, 20000, 1.0, 0.5), 9);
  const InterpolationOffsets off = interpolation_offsets(build_sync_grid(p));
  const SchemeStats ex = expected_scheme_stats(1, 0.5, 20000);
  auto mean_se = [](const std::vector<double>& v) {
    double m = 0, m2 = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
    {
      m += v[i];
      m2 += v[i] * v[i];
    }
    const double n = static_cast<double>(v.size() - 1);
    m /= n;
    return std::pair{m, std::sqrt((m2 / n - m * m) / n)};
  };
  const auto [mx, sx] = mean_se(off.prev_x);
  const auto [my, sy] = mean_se(off.prev_y);
  CHECK(std::fabs(mx - ex.e_prev_x) < 4 * sx);
  CHECK(std::fabs(my - ex.e_prev_y) < 4 * sy);
}

TEST_CASE("grid regularity", "[sampling]")
{
  const GridRegularity eq = grid_regularity(generate(spec_of(SchemeKind::EquidistantSync, 4), 0));
  CHECK(eq.delta_x == 0.25);
  CHECK(eq.delta_y == 0.25);
  CHECK(eq.delta_sync == 0.25);

  const GridRegularity im = grid_regularity(generate(spec_of(SchemeKind::Intermeshed, 4), 0));
  CHECK(im.delta_sync == 0.25);

  const GridRegularity ex = grid_regularity(SchemePair::from_times(
      {0, 1, 2, 3, 4, 5, 6, 8, 9, 11, 13}, {0, 2.5, 2.7, 3, 5.5, 7, 8.5, 8.7, 10, 12, 13}));
  CHECK(ex.delta_x == 2.0);
}

TEST_CASE("scheme validation", "[sampling]")
{
  auto s = spec_of(SchemeKind::PoissonPair, 10);
  s.theta1 = -1;
  CHECK_THROWS_AS(generate(s, 1), ValidationError);
  s = spec_of(SchemeKind::EquidistantSync, 0);
  CHECK_THROWS_AS(generate(s, 1), ValidationError);
  s = spec_of(SchemeKind::Explicit, 1);
  s.explicit_x = {0, 0.5, 0.4};
  s.explicit_y = {0, 1};
  CHECK_THROWS_AS(generate(s, 1), ValidationError);
  CHECK(scheme_kind_from_string(to_string(SchemeKind::Intermeshed)) == SchemeKind::Intermeshed);
  CHECK_THROWS_AS(scheme_kind_from_string("lattice"), ValidationError);
}
