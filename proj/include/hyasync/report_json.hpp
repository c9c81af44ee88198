#pragma once

// JSON views of library results, and a writer that prints every floating
// point number with 17 significant digits.

#include "hyasync/inference.hpp"
#include "hyasync/mc.hpp"
#include "hyasync/sync.hpp"
#include "hyasync/timescales.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace hyasync
{

nlohmann::json to_json(const SyncGrid& grid);
nlohmann::json to_json(const QcvSlopes& slopes);
nlohmann::json to_json(const EstimateReport& report);
nlohmann::json to_json(const McSummary& summary);
nlohmann::json to_json(const SchemeSpec& scheme);
nlohmann::json to_json(const CoefficientSpec& coeffs);

void write_json(std::ostream& os, const nlohmann::json& j, int indent = 2);
std::string dump_json(const nlohmann::json& j, int indent = 2);

} // namespace hyasync
