#include <catch2/catch_amalgamated.hpp>

#include "hyasync/common.hpp"
#include "hyasync/timescales.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace hyasync;
using Catch::Approx;

namespace
{

SyncGrid grid_of(SchemeKind kind, std::int64_t n, std::uint64_t seed = 0, double t1 = 1,
                 double t2 = 1)
{
  SchemeSpec s;
  s.kind = kind;
  s.intensity_scale = n;
  s.theta1 = t1;
  s.theta2 = t2;
  return build_sync_grid(generate(s, seed));
}

CoefficientSpec unit(double rho)
{
  CoefficientPiece p;
  p.rho = rho;
  return CoefficientSpec::constant(1.0, p);
}

} // namespace

TEST_CASE("synchronous equidistant curves", "[timescales]")
{
  const QcvCurves c = qcv_curves(grid_of(SchemeKind::EquidistantSync, 4));
  CHECK(c.g_curve.back() == Approx(1.0));
  for (std::size_t k = 0; k < c.f_curve.size(); ++k)
  {
    CHECK(c.f_curve[k] == 0.0);
    CHECK(c.h_curve[k] == 0.0);
  }
  const QcvSlopes s = qcv_slopes(qcv_curves(grid_of(SchemeKind::EquidistantSync, 1000)));
  CHECK(s.g == Approx(1.0));
  CHECK(s.f == 0.0);
  CHECK(s.h == 0.0);
}

TEST_CASE("worked example G at the horizon", "[timescales]")
{
  const SyncGrid g = build_sync_grid(SchemePair::from_times(
      {0, 1, 2, 3, 4, 5, 6, 8, 9, 11, 13}, {0, 2.5, 2.7, 3, 5.5, 7, 8.5, 8.7, 10, 12, 13}));
  const QcvCurves c = qcv_curves(g);
  CHECK(c.normalizer == Approx(8.0 / 13.0));
  CHECK(c.g_curve.back() == Approx(8.0 / 13.0 * 25.5));
  CHECK(c.g_curve.back() == Approx(15.69).margin(0.005));
}

TEST_CASE("intermeshed slopes are exact", "[timescales]")
{
  for (SlopeMethod m : {SlopeMethod::GlobalFit, SlopeMethod::Windowed})
  {
    SlopeOptions o;
    o.method = m;
    const QcvSlopes s = qcv_slopes(qcv_curves(grid_of(SchemeKind::Intermeshed, 1000)), o);
    CHECK(s.g == Approx(1.0).epsilon(1e-9));
    CHECK(s.f == Approx(1.0).epsilon(1e-9));
    CHECK(s.h == Approx(0.25).epsilon(1e-9));
  }
}

TEST_CASE("curves are monotone and non-negative", "[timescales][property]")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    const QcvCurves c = qcv_curves(grid_of(SchemeKind::PoissonPair, 300, seed, 1.0, 0.3));
    for (std::size_t k = 1; k < c.g_curve.size(); ++k)
    {
      CHECK(c.g_curve[k] >= c.g_curve[k - 1]);
      CHECK(c.f_curve[k] >= c.f_curve[k - 1]);
      CHECK(c.h_curve[k] >= c.h_curve[k - 1]);
    }
    CHECK(c.h_curve.front() >= 0.0);
  }
}

TEST_CASE("Poisson limits", "[timescales]")
{
  const QcvSlopes a = poisson_qcv_limits(1, 1);
  CHECK(a.g == Approx(14.0 / 9));
  CHECK(a.f == Approx(10.0 / 9));
  CHECK(a.h == Approx(2.0 / 9));
  const QcvSlopes b = poisson_qcv_limits(1, 0.5);
  CHECK(b.g == Approx(82.0 / 49));
  CHECK(b.f == Approx(44.0 / 49));
  CHECK(b.h == Approx(8.0 / 49));
  for (auto [x, y] : {std::pair{1.0, 0.5}, {2.0, 0.3}, {0.7, 5.0}})
  {
    const QcvSlopes p = poisson_qcv_limits(x, y);
    const QcvSlopes q = poisson_qcv_limits(y, x);
    CHECK(p.g == Approx(q.g));
    CHECK(p.f == Approx(q.f));
    CHECK(p.h == Approx(q.h));
  }
}

TEST_CASE("fitted Poisson slopes approach the limits", "[timescales]")
{
  double g = 0, f = 0, h = 0;
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s)
  {
    const QcvSlopes sl = qcv_slopes(qcv_curves(grid_of(SchemeKind::PoissonPair, 30000,
                                                       static_cast<std::uint64_t>(s))));
    g += sl.g / seeds;
    f += sl.f / seeds;
    h += sl.h / seeds;
  }
  CHECK(g == Approx(14.0 / 9).epsilon(0.03));
  CHECK(f == Approx(10.0 / 9).epsilon(0.03));
  CHECK(h == Approx(2.0 / 9).epsilon(0.05));
}

TEST_CASE("theoretical variance", "[timescales]")
{
  const QcvSlopes lim = poisson_qcv_limits(1, 1);
  CHECK(theoretical_avar(unit(0.0), lim).v_total == Approx(8.0 / 3));
  CHECK(theoretical_avar(unit(0.5), lim).v_total == Approx(2 * 0.25 + 8.0 / 3));
  CHECK(theoretical_avar(unit(0.5), lim).v_total == Approx(3.1667).margin(1e-4));
  const auto sync = SlopeFunction::constant(1.0, 1.0, 0.0, 0.0);
  CHECK(theoretical_avar(unit(0.4), sync).v_total == Approx(1.16));
  CHECK(theoretical_avar(unit(0.4), sync).v_a == 0.0);
}

TEST_CASE("theoretical variance on piecewise slopes and coefficients", "[timescales]")
{
  CoefficientPiece a, b;
  a.sigma_x = 2;
  b.rho = 0.5;
  const CoefficientSpec coeffs({0.0, 0.3, 1.0}, {a, b});
  SlopeFunction fn;
  fn.breakpoints = {0.0, 0.6, 1.0};
  fn.g = {1.0, 2.0};
  fn.f = {0.5, 1.0};
  fn.h = {0.0, 0.1};
  // [0,.3): ss=2, rho=0   [.3,.6): ss=1, rho=.5   [.6,1]: ss=1, rho=.5
  const double vd = 0.3 * 1 * 4 * 1 + 0.3 * 1 * 1 * 1.25 + 0.4 * 2 * 1 * 1.25;
  const double va = 0.3 * 0.5 * 4 + 0.3 * 0.5 * 1 + 0.4 * (1.0 + 2 * 0.1 * 0.25);
  const AvarComponents r = theoretical_avar(coeffs, fn);
  CHECK(r.v_d == Approx(vd));
  CHECK(r.v_a == Approx(va));
}

TEST_CASE("Isserlis oracle supports the general variance formula", "[timescales]")
{
  // Exact conditional variance of HY given the Poisson times, scaled by N.
  for (double rho : {0.0, 0.5})
  {
    double scaled = 0;
    const int seeds = 4;
    for (int s = 0; s < seeds; ++s)
    {
      SchemeSpec sp;
      sp.intensity_scale = 20000;
      const SchemePair p = generate(sp, 300 + static_cast<std::uint64_t>(s));
      const double n_sync = static_cast<double>(build_sync_grid(p).n_intervals());
      scaled += n_sync * oracle::hy_conditional_variance(p.times_x, p.times_y, rho) / seeds;
    }
    const double theory = theoretical_avar(unit(rho), poisson_qcv_limits(1, 1)).v_total;
    CHECK(scaled == Approx(theory).epsilon(0.03));
    CHECK(std::fabs(scaled - corollary4_avar(unit(rho), 1, 1)) > 0.2);
  }
}

TEST_CASE("closed form stated for Poisson sampling", "[timescales]")
{
  CHECK(corollary4_avar(unit(0.0), 1, 1) == Approx(5.0 / 3));
  CHECK(corollary4_avar(unit(0.5), 1, 1) == Approx(0.5 + 5.0 / 3));
}

TEST_CASE("slope input validation", "[timescales]")
{
  QcvCurves c;
  c.eval_times = {0.0};
  c.g_curve = c.f_curve = c.h_curve = {0.0};
  CHECK_THROWS_AS(qcv_slopes(c), ValidationError);
  CHECK_THROWS_AS(poisson_qcv_limits(0, 1), ValidationError);
}
