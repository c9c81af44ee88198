#include "hyasync/report_json.hpp"

#include "hyasync/common.hpp"
#include "hyasync/tickio.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace hyasync
{

using nlohmann::json;

json to_json(const SyncGrid& grid)
{
  json j;
  j["n_sets"] = grid.n_sets();
  j["n_intervals"] = grid.n_intervals();
  j["horizon"] = grid.horizon;
  json sets = json::array();
  for (std::size_t i = 0; i < grid.n_sets(); ++i)
  {
    sets.push_back({{"i", i},
                    {"h", {grid.h_sets[i].first, grid.h_sets[i].last}},
                    {"g", {grid.g_sets[i].first, grid.g_sets[i].last}},
                    {"g_time", grid.g_times[i]},
                    {"l_time", grid.l_times[i]},
                    {"gamma_time", grid.gamma_times[i]},
                    {"lambda_time", grid.lambda_times[i]},
                    {"refresh_time", grid.refresh_times[i]}});
  }
  j["sets"] = sets;
  j["refresh_times"] = grid.refresh_times;
  const InterpolationOffsets o = interpolation_offsets(grid);
  j["offsets"] = {{"next_x", o.next_x}, {"next_y", o.next_y}, {"prev_x", o.prev_x},
                  {"prev_y", o.prev_y}, {"dT", o.dT}};
  json violations = json::array();
  for (const auto& v : validate_partition(grid))
    violations.push_back({{"index", v.index}, {"message", v.message}});
  j["partition_violations"] = violations;
  j["truncated_final_step"] = grid.truncated_final_step;
  j["trailing_x"] = grid.trailing_x;
  j["trailing_y"] = grid.trailing_y;
  return j;
}

json to_json(const QcvSlopes& s)
{
  json j = {{"g", s.g},
            {"f", s.f},
            {"h", s.h},
            {"method", s.method == SlopeMethod::GlobalFit ? "global_fit" : "windowed"}};
  if (!s.windows.empty())
  {
    json w = json::array();
    for (const auto& win : s.windows)
      w.push_back({{"t_begin", win.t_begin}, {"t_end", win.t_end}, {"g", win.g}, {"f", win.f},
                   {"h", win.h}});
    j["windows"] = w;
  }
  return j;
}

json to_json(const EstimateReport& r)
{
  json j = {{"hy", r.hy},
            {"n_sync", r.n_sync},
            {"avar_hat", r.avar_hat},
            {"avar_floored", r.avar_floored},
            {"level", r.level},
            {"ci_low", r.ci_low},
            {"ci_high", r.ci_high},
            {"k_bins", r.k_bins},
            {"qcv_slopes", to_json(r.qcv_slopes)},
            {"regularity",
             {{"delta_x", r.regularity.delta_x},
              {"delta_y", r.regularity.delta_y},
              {"delta_sync", r.regularity.delta_sync}}}};
  j["studentized"] = r.studentized ? json(*r.studentized) : json(nullptr);
  return j;
}

namespace
{

json mwe(const MeanWithError& m)
{
  return {{"mean", m.mean}, {"se", m.se}, {"count", m.count}};
}

} // namespace

json to_json(const McSummary& s)
{
  json j;
  j["replications"] = s.replications;
  j["failures"] = s.failures;
  j["failure_messages"] = s.failure_messages;
  j["n_sync"] = mwe(s.n_sync);
  j["truth"] = mwe(s.truth);
  json est = json::array();
  for (const auto& e : s.estimators)
  {
    json item = {{"name", e.name},
                 {"estimate", mwe(e.estimate)},
                 {"error", mwe(e.error)},
                 {"var_scaled_error", e.var_scaled_error},
                 {"se_var_scaled_error", e.se_var_scaled_error}};
    if (e.name == "fixed_grid") item["grid_width"] = e.grid_width;
    est.push_back(item);
  }
  j["estimators"] = est;
  j["inference"] = {{"avar_hat", mwe(s.avar_hat)},
                    {"studentized", mwe(s.studentized)},
                    {"studentized_variance", s.studentized_variance},
                    {"jarque_bera", s.jarque_bera},
                    {"jarque_bera_pvalue", s.jarque_bera_pvalue},
                    {"coverage", s.coverage},
                    {"coverage_se", s.coverage_se}};
  if (!s.qq_points.empty())
  {
    json qq = json::array();
    for (const auto& [zq, emp] : s.qq_points) qq.push_back({zq, emp});
    j["qq_points"] = qq;
  }
  j["theoretical_avar"] = {{"v_d", s.theoretical.v_d},
                           {"v_a", s.theoretical.v_a},
                           {"v_total", s.theoretical.v_total}};
  j["corollary4_avar"] = s.corollary4 ? json(*s.corollary4) : json(nullptr);
  j["decomposition"] = {{"corr_d_a", s.corr_d_a},
                        {"corr_d_a_se", s.corr_d_a_se},
                        {"max_identity_error", s.max_identity_error}};
  if (!s.epps_curve.empty())
  {
    json curve = json::array();
    for (const auto& p : s.epps_curve)
      curve.push_back({{"grid_width", p.grid_width}, {"estimate", mwe(p.estimate)}});
    j["epps_curve"] = curve;
  }
  if (s.g_slope.count > 0)
    j["qcv_slopes"] = {{"g", mwe(s.g_slope)}, {"f", mwe(s.f_slope)}, {"h", mwe(s.h_slope)}};
  if (s.mean_dT.count > 0)
  {
    j["scheme_stats"] = {{"dT", mwe(s.mean_dT)},
                         {"next_x", mwe(s.mean_next_x)},
                         {"next_y", mwe(s.mean_next_y)},
                         {"prev_x", mwe(s.mean_prev_x)},
                         {"prev_y", mwe(s.mean_prev_y)}};
  }
  return j;
}

json to_json(const SchemeSpec& s)
{
  json j = {{"kind", to_string(s.kind)},
            {"horizon", s.horizon},
            {"n", s.intensity_scale},
            {"theta1", s.theta1},
            {"theta2", s.theta2}};
  return j;
}

json to_json(const CoefficientSpec& c)
{
  json pieces = json::array();
  for (const auto& p : c.pieces())
    pieces.push_back({{"mu_x", p.mu_x}, {"mu_y", p.mu_y}, {"sigma_x", p.sigma_x},
                      {"sigma_y", p.sigma_y}, {"rho", p.rho}});
  return {{"breakpoints", c.breakpoints()}, {"pieces", pieces}};
}

namespace
{

void write_value(std::ostream& os, const json& j, int indent, int depth)
{
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type())
  {
  case json::value_t::object:
  {
    if (j.empty())
    {
      os << "{}";
      return;
    }
    os << '{';
    bool first = true;
    for (const auto& [k, v] : j.items())
    {
      if (!first) os << ',';
      first = false;
      newline(depth + 1);
      os << json(k).dump() << (indent < 0 ? ":" : ": ");
      write_value(os, v, indent, depth + 1);
    }
    newline(depth);
    os << '}';
    return;
  }
  case json::value_t::array:
  {
    if (j.empty())
    {
      os << "[]";
      return;
    }
    // Arrays of scalars stay on one line.
    bool scalars = true;
    for (const auto& v : j) scalars = scalars && !v.is_structured();
    os << '[';
    bool first = true;
    for (const auto& v : j)
    {
      if (!first) os << (scalars ? ", " : ",");
      first = false;
      if (!scalars) newline(depth + 1);
      write_value(os, v, indent, depth + 1);
    }
    if (!scalars) newline(depth);
    os << ']';
    return;
  }
  case json::value_t::number_float:
  {
    const double v = j.get<double>();
    if (!std::isfinite(v))
      os << "null";
    else
    {
      std::string s = format_double(v);
      os << s;
    }
    return;
  }
  default:
    os << j.dump();
  }
}

} // namespace

void write_json(std::ostream& os, const json& j, int indent)
{
  write_value(os, j, indent, 0);
  os << '\n';
}

std::string dump_json(const json& j, int indent)
{
  std::ostringstream ss;
  write_json(ss, j, indent);
  return ss.str();
}

} // namespace hyasync
