// hyasync: command-line front end.
//
//   hyasync sync     --x FILE --y FILE | --input FILE
//   hyasync estimate --x FILE --y FILE | --input FILE [--level P] [--bins K|auto]
//   hyasync simulate --config FILE [--seed S] --out DIR
//   hyasync mc       --config FILE [--seed S] [--out DIR]
//   hyasync qcv      (--x FILE --y FILE | --input FILE | --config FILE)
//
// Exit status: 0 success, 1 validation error, 2 runtime failure.

#include "hyasync/common.hpp"
#include "hyasync/config.hpp"
#include "hyasync/estimators.hpp"
#include "hyasync/report_json.hpp"
#include "hyasync/tickio.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hyasync;

namespace
{

struct Args
{
  std::string x_file;
  std::string y_file;
  std::string input;
  std::string config;
  std::optional<double> level;
  std::string bins;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_input_options(CLI::App* cmd, Args& a)
{
  cmd->add_option("--x", a.x_file, "CSV ticks of X (time,value)");
  cmd->add_option("--y", a.y_file, "CSV ticks of Y (time,value)");
  cmd->add_option("--input", a.input, "CSV ticks of both series (time,value,series)");
}

void add_common_options(CLI::App* cmd, Args& a)
{
  cmd->add_option("--config", a.config, "JSON run configuration");
  cmd->add_option("--level", a.level, "confidence level in (0,1)");
  cmd->add_option("--bins", a.bins, "histogram bins K for the variance estimator, or 'auto'");
  cmd->add_option("--seed", a.seed, "base seed");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--format", a.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

RunConfig resolve_config(const Args& a)
{
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (a.level) cfg.estimate.level = *a.level;
  if (!a.bins.empty())
  {
    if (a.bins == "auto")
      cfg.estimate.avar.k_bins = 0;
    else
    {
      std::size_t pos = 0;
      long long k = 0;
      try
      {
        k = std::stoll(a.bins, &pos);
      }
      catch (const std::exception&)
      {
        pos = 0;
      }
      if (pos != a.bins.size() || k < 1)
        throw ValidationError("--bins must be a positive integer or 'auto'");
      cfg.estimate.avar.k_bins = static_cast<std::size_t>(k);
    }
  }
  if (a.seed) cfg.seed = *a.seed;
  if (!a.out.empty()) cfg.out_dir = a.out;
  if (!a.format.empty()) cfg.format = a.format;
  finalize(cfg);
  return cfg;
}

bool has_tick_input(const Args& a)
{
  return !a.input.empty() || !a.x_file.empty() || !a.y_file.empty();
}

TickPair load_ticks(const Args& a)
{
  if (!a.input.empty())
  {
    if (!a.x_file.empty() || !a.y_file.empty())
      throw ValidationError("use either --input or --x/--y, not both");
    return read_tick_file(a.input);
  }
  if (a.x_file.empty() || a.y_file.empty())
    throw ValidationError("tick input required: --x FILE --y FILE or --input FILE");
  return read_tick_files(a.x_file, a.y_file);
}

SchemePair pair_of(const TickPair& t)
{
  SchemePair p = SchemePair::from_times(t.x.times, t.y.times);
  p.validate();
  return p;
}

json header(const char* command, std::optional<std::uint64_t> seed)
{
  json j = {{"tool", "hyasync"}, {"version", kVersion}, {"command", command}};
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

void write_text(const fs::path& file, const std::string& text)
{
  std::ofstream out(file);
  if (!out) throw ComputationError("cannot write '" + file.string() + "'");
  out << text;
}

// Prints to stdout, or writes `name` inside the output directory.
void emit(const std::optional<std::string>& out_dir, const std::string& name,
          const std::string& text)
{
  if (!out_dir)
  {
    std::cout << text;
    return;
  }
  fs::create_directories(*out_dir);
  const fs::path file = fs::path(*out_dir) / name;
  write_text(file, text);
  std::cerr << "wrote " << file.string() << '\n';
}

std::string curves_csv(const QcvCurves& c)
{
  std::ostringstream os;
  os << "time,G,F,H\n";
  for (std::size_t k = 0; k < c.eval_times.size(); ++k)
  {
    os << format_double(c.eval_times[k]) << ',' << format_double(c.g_curve[k]) << ','
       << format_double(c.f_curve[k]) << ',' << format_double(c.h_curve[k]) << '\n';
  }
  return os.str();
}

int cmd_sync(const Args& a)
{
  const RunConfig cfg = resolve_config(a);
  const SyncGrid grid = build_sync_grid(pair_of(load_ticks(a)));
  if (cfg.format == "csv")
  {
    std::ostringstream os;
    os << "i,h_first,h_last,g_first,g_last,g_time,l_time,gamma_time,lambda_time,refresh_time\n";
    for (std::size_t i = 0; i < grid.n_sets(); ++i)
    {
      os << i << ',' << grid.h_sets[i].first << ',' << grid.h_sets[i].last << ','
         << grid.g_sets[i].first << ',' << grid.g_sets[i].last << ','
         << format_double(grid.g_times[i]) << ',' << format_double(grid.l_times[i]) << ','
         << format_double(grid.gamma_times[i]) << ',' << format_double(grid.lambda_times[i])
         << ',' << format_double(grid.refresh_times[i]) << '\n';
    }
    emit(cfg.out_dir, "sync.csv", os.str());
    return 0;
  }
  json j = header("sync", std::nullopt);
  j["grid"] = to_json(grid);
  emit(cfg.out_dir, "sync.json", dump_json(j));
  return 0;
}

int cmd_estimate(const Args& a)
{
  const RunConfig cfg = resolve_config(a);
  const TickPair ticks = load_ticks(a);
  const SchemePair pair = pair_of(ticks);
  const EstimateReport rep = estimate(pair, ticks.x.values, ticks.y.values, cfg.estimate);
  if (cfg.format == "csv")
  {
    std::ostringstream os;
    os << "hy,n_sync,avar_hat,avar_floored,level,ci_low,ci_high,k_bins,g_slope,f_slope,h_slope\n"
       << format_double(rep.hy) << ',' << rep.n_sync << ',' << format_double(rep.avar_hat) << ','
       << (rep.avar_floored ? "true" : "false") << ',' << format_double(rep.level) << ','
       << format_double(rep.ci_low) << ',' << format_double(rep.ci_high) << ',' << rep.k_bins
       << ',' << format_double(rep.qcv_slopes.g) << ',' << format_double(rep.qcv_slopes.f) << ','
       << format_double(rep.qcv_slopes.h) << '\n';
    emit(cfg.out_dir, "estimate.csv", os.str());
  }
  else
  {
    json j = header("estimate", std::nullopt);
    j["report"] = to_json(rep);
    j["config"] = to_json(cfg)["inference"];
    emit(cfg.out_dir, "estimate.json", dump_json(j));
  }
  if (cfg.out_dir) emit(cfg.out_dir, "qcv.csv", curves_csv(qcv_curves(build_sync_grid(pair))));
  return 0;
}

int cmd_simulate(const Args& a)
{
  const RunConfig cfg = resolve_config(a);
  if (!cfg.out_dir) throw ValidationError("simulate needs an output directory (--out DIR)");
  // Same seed derivation as Monte Carlo replication 0.
  const std::uint64_t scheme_seed = derive_seed(cfg.seed, 0, 1);
  const std::uint64_t path_seed = derive_seed(cfg.seed, 0, 2);
  const SchemePair pair = generate(cfg.scheme, scheme_seed);
  const PathBundle bundle = simulate_paths(pair, cfg.coeffs, path_seed);

  fs::create_directories(*cfg.out_dir);
  const fs::path xf = fs::path(*cfg.out_dir) / "x.csv";
  const fs::path yf = fs::path(*cfg.out_dir) / "y.csv";
  write_tick_csv(xf, TickSeries{pair.times_x, bundle.observed_x()});
  write_tick_csv(yf, TickSeries{pair.times_y, bundle.observed_y()});

  json j = header("simulate", cfg.seed);
  j["scheme_seed"] = scheme_seed;
  j["path_seed"] = path_seed;
  j["truth"] = bundle.true_qcov_T;
  j["n_obs_x"] = pair.times_x.size();
  j["n_obs_y"] = pair.times_y.size();
  j["files"] = {xf.string(), yf.string()};
  j["config"] = to_json(cfg);
  write_text(fs::path(*cfg.out_dir) / "simulate.json", dump_json(j));
  std::cout << dump_json(j);
  return 0;
}

int cmd_mc(const Args& a)
{
  const RunConfig cfg = resolve_config(a);
  const McSummary s = run_study(cfg.mc);
  if (cfg.format == "csv")
  {
    std::ostringstream os;
    os << "name,grid_width,mean_estimate,se_estimate,mean_error,se_error,var_scaled_error,"
          "se_var_scaled_error\n";
    for (const auto& e : s.estimators)
    {
      os << e.name << ',' << format_double(e.grid_width) << ',' << format_double(e.estimate.mean)
         << ',' << format_double(e.estimate.se) << ',' << format_double(e.error.mean) << ','
         << format_double(e.error.se) << ',' << format_double(e.var_scaled_error) << ','
         << format_double(e.se_var_scaled_error) << '\n';
    }
    emit(cfg.out_dir, "estimators.csv", os.str());
  }
  else
  {
    json j = header("mc", cfg.seed);
    j["config"] = to_json(cfg);
    j["summary"] = to_json(s);
    emit(cfg.out_dir, "summary.json", dump_json(j));
  }
  if (cfg.out_dir && !s.epps_curve.empty())
  {
    std::ostringstream os;
    os << "grid_width,mean,se\n";
    for (const auto& p : s.epps_curve)
      os << format_double(p.grid_width) << ',' << format_double(p.estimate.mean) << ','
         << format_double(p.estimate.se) << '\n';
    emit(cfg.out_dir, "epps.csv", os.str());
  }
  if (cfg.out_dir && !s.qq_points.empty())
  {
    std::ostringstream os;
    os << "normal_quantile,empirical_quantile\n";
    for (const auto& [zq, emp] : s.qq_points)
      os << format_double(zq) << ',' << format_double(emp) << '\n';
    emit(cfg.out_dir, "qq.csv", os.str());
  }
  return 0;
}

int cmd_qcv(const Args& a, bool format_given)
{
  RunConfig cfg = resolve_config(a);
  std::optional<std::uint64_t> seed;
  SchemePair pair;
  if (has_tick_input(a))
    pair = pair_of(load_ticks(a));
  else if (!a.config.empty())
  {
    seed = cfg.seed;
    pair = generate(cfg.scheme, derive_seed(cfg.seed, 0, 1));
  }
  else
    throw ValidationError("qcv needs tick input (--x/--y or --input) or a scheme (--config)");
  const QcvCurves curves = qcv_curves(build_sync_grid(pair));
  if (!format_given) cfg.format = "csv";
  if (cfg.format == "csv")
  {
    emit(cfg.out_dir, "qcv.csv", curves_csv(curves));
    return 0;
  }
  json j = header("qcv", seed);
  j["normalizer"] = curves.normalizer;
  j["slopes"] = to_json(qcv_slopes(curves, cfg.estimate.slopes));
  j["curves"] = {{"time", curves.eval_times},
                 {"G", curves.g_curve},
                 {"F", curves.f_curve},
                 {"H", curves.h_curve}};
  emit(cfg.out_dir, "qcv.json", dump_json(j));
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Hayashi-Yoshida covariation estimation for asynchronous tick data"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Args a;
  auto* sync = app.add_subcommand("sync", "print the joint grid of two tick files");
  auto* est = app.add_subcommand("estimate", "estimate the covariation with a confidence interval");
  auto* sim = app.add_subcommand("simulate", "simulate a scheme and paths, write tick CSVs");
  auto* mc = app.add_subcommand("mc", "run a Monte Carlo study");
  auto* qcv = app.add_subcommand("qcv", "emit quadratic (co-)variations of time");
  for (auto* cmd : {sync, est, qcv}) add_input_options(cmd, a);
  for (auto* cmd : {sync, est, sim, mc, qcv}) add_common_options(cmd, a);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try
  {
    if (sync->parsed()) return cmd_sync(a);
    if (est->parsed()) return cmd_estimate(a);
    if (sim->parsed()) return cmd_simulate(a);
    if (mc->parsed()) return cmd_mc(a);
    if (qcv->parsed()) return cmd_qcv(a, qcv->count("--format") > 0);
  }
  catch (const ValidationError& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
