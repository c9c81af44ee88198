#pragma once

// Run configuration file (JSON). Every object rejects unknown keys.
//
// {
//   "seed": 1,
//   "scheme": {"kind": "poisson", "horizon": 1, "n": 20000, "theta1": 1, "theta2": 1,
//              "times_x": [...], "times_y": [...]},
//   "coefficients": {"breakpoints": [0, 1],
//                    "pieces": [{"mu_x": 0, "mu_y": 0, "sigma_x": 1, "sigma_y": 1, "rho": 0.5}]},
//   "inference": {"level": 0.95, "bins": "auto", "endpoint": "right"},
//   "slopes": {"method": "global_fit", "edge_trim": 1, "window_points": 50},
//   "mc": {"replications": 2000, "refresh_prev_tick": false, "fixed_grid_widths": [],
//          "outputs": ["bias", "variance", "coverage"], "threads": 0},
//   "output": {"dir": "out", "format": "json"}
// }

#include "hyasync/inference.hpp"
#include "hyasync/mc.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace hyasync
{

struct RunConfig
{
  std::uint64_t seed = 1;
  SchemeSpec scheme;
  CoefficientSpec coeffs;
  bool coeffs_given = false;
  EstimateOptions estimate;
  McStudySpec mc;
  std::optional<std::string> out_dir;
  std::string format = "json";
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& file);

/// Validates the scheme (fields default to Poisson, theta1 = theta2 = 1, n = 1, T = 1).
/// Coefficients default to sigma = 1, rho = 0, zero drift on [0, T].
void finalize(RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

} // namespace hyasync
