#include "hyasync/config.hpp"

#include "hyasync/common.hpp"

#include <fstream>
#include <initializer_list>

namespace hyasync
{

using nlohmann::json;

namespace
{

void require_object(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed)
{
  if (!j.is_object()) throw ValidationError("config: '" + path + "' must be an object");
  for (const auto& [key, _] : j.items())
  {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("config: unknown key '" + path + "." + key + "'");
  }
}

double get_number(const json& j, const std::string& path)
{
  if (!j.is_number()) throw ValidationError("config: '" + path + "' must be a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path)
{
  if (!j.is_number_integer()) throw ValidationError("config: '" + path + "' must be an integer");
  return j.get<std::int64_t>();
}

std::uint64_t get_unsigned(const json& j, const std::string& path)
{
  if (!j.is_number_unsigned()) throw ValidationError("config: '" + path + "' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path)
{
  if (!j.is_boolean()) throw ValidationError("config: '" + path + "' must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path)
{
  if (!j.is_string()) throw ValidationError("config: '" + path + "' must be a string");
  return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& path)
{
  if (!j.is_array()) throw ValidationError("config: '" + path + "' must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void parse_scheme(const json& j, SchemeSpec& s)
{
  require_object(j, "scheme", {"kind", "horizon", "n", "theta1", "theta2", "times_x", "times_y"});
  if (j.contains("kind")) s.kind = scheme_kind_from_string(get_string(j["kind"], "scheme.kind"));
  if (j.contains("horizon")) s.horizon = get_number(j["horizon"], "scheme.horizon");
  if (j.contains("n")) s.intensity_scale = get_integer(j["n"], "scheme.n");
  if (j.contains("theta1")) s.theta1 = get_number(j["theta1"], "scheme.theta1");
  if (j.contains("theta2")) s.theta2 = get_number(j["theta2"], "scheme.theta2");
  if (j.contains("times_x")) s.explicit_x = get_numbers(j["times_x"], "scheme.times_x");
  if (j.contains("times_y")) s.explicit_y = get_numbers(j["times_y"], "scheme.times_y");
}

CoefficientPiece parse_piece(const json& j, const std::string& path)
{
  require_object(j, path, {"mu_x", "mu_y", "sigma_x", "sigma_y", "rho"});
  CoefficientPiece p;
  if (j.contains("mu_x")) p.mu_x = get_number(j["mu_x"], path + ".mu_x");
  if (j.contains("mu_y")) p.mu_y = get_number(j["mu_y"], path + ".mu_y");
  if (j.contains("sigma_x")) p.sigma_x = get_number(j["sigma_x"], path + ".sigma_x");
  if (j.contains("sigma_y")) p.sigma_y = get_number(j["sigma_y"], path + ".sigma_y");
  if (j.contains("rho")) p.rho = get_number(j["rho"], path + ".rho");
  return p;
}

void parse_inference(const json& j, RunConfig& cfg)
{
  require_object(j, "inference", {"level", "bins", "endpoint"});
  if (j.contains("level")) cfg.estimate.level = get_number(j["level"], "inference.level");
  if (j.contains("bins"))
  {
    const auto& b = j["bins"];
    if (b.is_string() && b.get<std::string>() == "auto")
      cfg.estimate.avar.k_bins = 0;
    else
    {
      const auto k = get_integer(b, "inference.bins");
      if (k < 1) throw ValidationError("config: 'inference.bins' must be >= 1 or \"auto\"");
      cfg.estimate.avar.k_bins = static_cast<std::size_t>(k);
    }
  }
  if (j.contains("endpoint"))
  {
    const auto e = get_string(j["endpoint"], "inference.endpoint");
    if (e == "right")
      cfg.estimate.avar.endpoint = BinEndpoint::Right;
    else if (e == "left")
      cfg.estimate.avar.endpoint = BinEndpoint::Left;
    else
      throw ValidationError("config: 'inference.endpoint' must be \"right\" or \"left\"");
  }
}

void parse_slopes(const json& j, RunConfig& cfg)
{
  require_object(j, "slopes", {"method", "edge_trim", "window_points"});
  auto& s = cfg.estimate.slopes;
  if (j.contains("method"))
  {
    const auto m = get_string(j["method"], "slopes.method");
    if (m == "global_fit")
      s.method = SlopeMethod::GlobalFit;
    else if (m == "windowed")
      s.method = SlopeMethod::Windowed;
    else
      throw ValidationError("config: 'slopes.method' must be \"global_fit\" or \"windowed\"");
  }
  if (j.contains("edge_trim")) s.edge_trim = get_unsigned(j["edge_trim"], "slopes.edge_trim");
  if (j.contains("window_points"))
  {
    s.window_points = get_unsigned(j["window_points"], "slopes.window_points");
    if (s.window_points < 1) throw ValidationError("config: 'slopes.window_points' must be >= 1");
  }
}

void parse_mc(const json& j, McStudySpec& mc)
{
  require_object(j, "mc",
                 {"replications", "refresh_prev_tick", "fixed_grid_widths", "outputs", "threads"});
  if (j.contains("replications")) mc.replications = get_unsigned(j["replications"], "mc.replications");
  if (j.contains("refresh_prev_tick"))
    mc.refresh_prev_tick = get_bool(j["refresh_prev_tick"], "mc.refresh_prev_tick");
  if (j.contains("fixed_grid_widths"))
    mc.fixed_grid_widths = get_numbers(j["fixed_grid_widths"], "mc.fixed_grid_widths");
  if (j.contains("threads")) mc.threads = get_unsigned(j["threads"], "mc.threads");
  if (j.contains("outputs"))
  {
    const auto& o = j["outputs"];
    if (!o.is_array()) throw ValidationError("config: 'mc.outputs' must be an array of names");
    McOutputs out{false, false, false, false, false, false, false, false};
    for (const auto& item : o)
    {
      const auto name = get_string(item, "mc.outputs[]");
      if (name == "bias") out.bias = true;
      else if (name == "variance") out.variance = true;
      else if (name == "coverage") out.coverage = true;
      else if (name == "qq_points") out.qq_points = true;
      else if (name == "decomposition_corr") out.decomposition_corr = true;
      else if (name == "epps_curve") out.epps_curve = true;
      else if (name == "qcv_slopes") out.qcv_slopes = true;
      else if (name == "scheme_stats") out.scheme_stats = true;
      else throw ValidationError("config: unknown mc output '" + name + "'");
    }
    mc.outputs = out;
  }
}

} // namespace

RunConfig parse_run_config(const json& j)
{
  require_object(j, "", {"seed", "scheme", "coefficients", "inference", "slopes", "mc", "output"});
  RunConfig cfg;
  if (j.contains("seed")) cfg.seed = get_unsigned(j["seed"], "seed");
  if (j.contains("scheme")) parse_scheme(j["scheme"], cfg.scheme);
  if (j.contains("coefficients"))
  {
    const auto& c = j["coefficients"];
    require_object(c, "coefficients", {"breakpoints", "pieces"});
    if (!c.contains("pieces") || !c["pieces"].is_array() || c["pieces"].empty())
      throw ValidationError("config: 'coefficients.pieces' must be a non-empty array");
    std::vector<CoefficientPiece> pieces;
    for (std::size_t i = 0; i < c["pieces"].size(); ++i)
      pieces.push_back(parse_piece(c["pieces"][i], "coefficients.pieces[" + std::to_string(i) + "]"));
    std::vector<double> bps;
    if (c.contains("breakpoints"))
      bps = get_numbers(c["breakpoints"], "coefficients.breakpoints");
    else if (pieces.size() == 1)
      bps = {0.0, cfg.scheme.horizon};
    else
      throw ValidationError("config: 'coefficients.breakpoints' required for several pieces");
    cfg.coeffs = CoefficientSpec(std::move(bps), std::move(pieces));
    cfg.coeffs_given = true;
  }
  if (j.contains("inference")) parse_inference(j["inference"], cfg);
  if (j.contains("slopes")) parse_slopes(j["slopes"], cfg);
  if (j.contains("mc")) parse_mc(j["mc"], cfg.mc);
  if (j.contains("output"))
  {
    const auto& o = j["output"];
    require_object(o, "output", {"dir", "format"});
    if (o.contains("dir")) cfg.out_dir = get_string(o["dir"], "output.dir");
    if (o.contains("format"))
    {
      cfg.format = get_string(o["format"], "output.format");
      if (cfg.format != "json" && cfg.format != "csv")
        throw ValidationError("config: 'output.format' must be \"json\" or \"csv\"");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file)
{
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config '" + file.string() + "'");
  json j;
  try
  {
    j = json::parse(in);
  }
  catch (const json::parse_error& e)
  {
    throw ValidationError("config '" + file.string() + "': " + e.what());
  }
  return parse_run_config(j);
}

void finalize(RunConfig& cfg)
{
  cfg.scheme.validate();
  if (!cfg.coeffs_given) cfg.coeffs = CoefficientSpec::constant(cfg.scheme.horizon, {});
  if (!(cfg.estimate.level > 0.0 && cfg.estimate.level < 1.0))
    throw ValidationError("level must lie in (0, 1)");
  cfg.mc.scheme = cfg.scheme;
  cfg.mc.coeffs = cfg.coeffs;
  cfg.mc.base_seed = cfg.seed;
  cfg.mc.level = cfg.estimate.level;
  cfg.mc.avar = cfg.estimate.avar;
}

nlohmann::json to_json(const RunConfig& cfg)
{
  json j;
  j["seed"] = cfg.seed;
  json s;
  s["kind"] = to_string(cfg.scheme.kind);
  s["horizon"] = cfg.scheme.horizon;
  s["n"] = cfg.scheme.intensity_scale;
  s["theta1"] = cfg.scheme.theta1;
  s["theta2"] = cfg.scheme.theta2;
  if (cfg.scheme.kind == SchemeKind::Explicit)
  {
    s["times_x"] = cfg.scheme.explicit_x;
    s["times_y"] = cfg.scheme.explicit_y;
  }
  j["scheme"] = s;
  json pieces = json::array();
  for (const auto& p : cfg.coeffs.pieces())
    pieces.push_back({{"mu_x", p.mu_x}, {"mu_y", p.mu_y}, {"sigma_x", p.sigma_x},
                      {"sigma_y", p.sigma_y}, {"rho", p.rho}});
  j["coefficients"] = {{"breakpoints", cfg.coeffs.breakpoints()}, {"pieces", pieces}};
  j["inference"] = {{"level", cfg.estimate.level},
                    {"bins", cfg.estimate.avar.k_bins == 0 ? json("auto")
                                                           : json(cfg.estimate.avar.k_bins)},
                    {"endpoint", cfg.estimate.avar.endpoint == BinEndpoint::Right ? "right" : "left"}};
  j["slopes"] = {{"method", cfg.estimate.slopes.method == SlopeMethod::GlobalFit ? "global_fit"
                                                                                 : "windowed"},
                 {"edge_trim", cfg.estimate.slopes.edge_trim},
                 {"window_points", cfg.estimate.slopes.window_points}};
  json outputs = json::array();
  const auto& o = cfg.mc.outputs;
  if (o.bias) outputs.push_back("bias");
  if (o.variance) outputs.push_back("variance");
  if (o.coverage) outputs.push_back("coverage");
  if (o.qq_points) outputs.push_back("qq_points");
  if (o.decomposition_corr) outputs.push_back("decomposition_corr");
  if (o.epps_curve) outputs.push_back("epps_curve");
  if (o.qcv_slopes) outputs.push_back("qcv_slopes");
  if (o.scheme_stats) outputs.push_back("scheme_stats");
  j["mc"] = {{"replications", cfg.mc.replications},
             {"refresh_prev_tick", cfg.mc.refresh_prev_tick},
             {"fixed_grid_widths", cfg.mc.fixed_grid_widths},
             {"outputs", outputs},
             {"threads", cfg.mc.threads}};
  json out = {{"format", cfg.format}};
  if (cfg.out_dir) out["dir"] = *cfg.out_dir;
  j["output"] = out;
  return j;
}

} // namespace hyasync
