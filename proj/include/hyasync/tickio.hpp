#pragma once

// Tick-file ingestion and emission for the command-line front end.
//
// Accepted layouts:
//   time,value            one file per process
//   time,value,series     one file, series in {X, Y}
// Times are decimal seconds or ISO-8601 timestamps; timestamps are converted
// to seconds from the earliest tick across both series.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hyasync
{

struct TickSeries
{
  std::vector<double> times;
  std::vector<double> values;
};

struct TickPair
{
  TickSeries x;
  TickSeries y;
};

TickPair read_tick_files(const std::filesystem::path& x_file, const std::filesystem::path& y_file);
TickPair read_tick_file(const std::filesystem::path& combined);

/// Parses CSV text; `source` is used in error messages.
TickPair parse_ticks(const std::string& x_text, const std::string& y_text,
                     const std::string& x_source = "x", const std::string& y_source = "y");
TickPair parse_combined_ticks(const std::string& text, const std::string& source = "input");

/// Seconds since the Unix epoch, as integer nanoseconds; throws on bad input.
long long parse_iso8601_ns(const std::string& text);

/// 17 significant digits: re-parsing gives the identical double.
std::string format_double(double v);

void write_tick_csv(std::ostream& os, const TickSeries& series);
void write_tick_csv(const std::filesystem::path& file, const TickSeries& series);

} // namespace hyasync
