#include "hyasync/tickio.hpp"

#include "hyasync/common.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace hyasync
{

namespace
{

std::string trim(std::string_view s)
{
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true)
  {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(const std::string& s)
{
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) return std::nullopt;
  return v;
}

bool looks_iso(const std::string& s)
{
  return s.size() >= 10 && std::isdigit(static_cast<unsigned char>(s[0])) && s[4] == '-' &&
         s[7] == '-';
}

std::string where(const std::string& source, std::size_t line)
{
  return source + ":" + std::to_string(line) + ": ";
}

// One raw column of times: either all decimal seconds or all timestamps.
struct RawTimes
{
  std::vector<double> seconds;
  std::vector<long long> ns;
  std::vector<std::size_t> lines;
  bool iso = false;
};

struct RawSeries
{
  RawTimes t;
  std::vector<double> values;
  std::string source;
};

void add_tick(RawSeries& s, const std::string& time_text, const std::string& value_text,
              std::size_t line)
{
  const bool iso = looks_iso(time_text);
  if (!s.t.lines.empty() && iso != s.t.iso)
    throw ValidationError(where(s.source, line) + "mixed time formats in one series");
  s.t.iso = iso;
  if (iso)
  {
    try
    {
      s.t.ns.push_back(parse_iso8601_ns(time_text));
    }
    catch (const ValidationError& e)
    {
      throw ValidationError(where(s.source, line) + e.what());
    }
  }
  else
  {
    const auto t = parse_number(time_text);
    if (!t || !std::isfinite(*t))
      throw ValidationError(where(s.source, line) + "cannot parse time '" + time_text + "'");
    s.t.seconds.push_back(*t);
  }
  const auto v = parse_number(value_text);
  if (!v || !std::isfinite(*v))
    throw ValidationError(where(s.source, line) + "cannot parse value '" + value_text + "'");
  s.values.push_back(*v);
  s.t.lines.push_back(line);
}

bool is_header(const std::vector<std::string>& cols)
{
  std::string first = cols.front();
  std::transform(first.begin(), first.end(), first.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return first == "time";
}

void check_header(const std::vector<std::string>& cols, std::size_t want,
                  const std::string& source)
{
  static const char* names[] = {"time", "value", "series"};
  if (cols.size() != want)
    throw ValidationError(where(source, 1) + "header must be '" +
                          (want == 2 ? std::string("time,value") : std::string("time,value,series")) +
                          "'");
  for (std::size_t i = 0; i < want; ++i)
  {
    std::string c = cols[i];
    std::transform(c.begin(), c.end(), c.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (c != names[i])
      throw ValidationError(where(source, 1) + "unexpected header column '" + cols[i] + "'");
  }
}

template <class OnRow>
void for_each_row(const std::string& text, const std::string& source, std::size_t columns,
                  OnRow on_row)
{
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line))
  {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto cols = split_csv(line);
    if (first)
    {
      first = false;
      if (is_header(cols))
      {
        check_header(cols, columns, source);
        continue;
      }
    }
    if (cols.size() != columns)
      throw ValidationError(where(source, lineno) + "expected " + std::to_string(columns) +
                            " columns, found " + std::to_string(cols.size()));
    on_row(cols, lineno);
  }
}

TickSeries finish(const RawSeries& s, long long origin_ns)
{
  TickSeries out;
  out.values = s.values;
  if (s.t.iso)
  {
    out.times.reserve(s.t.ns.size());
    for (long long v : s.t.ns) out.times.push_back(static_cast<double>(v - origin_ns) * 1e-9);
  }
  else
    out.times = s.t.seconds;
  if (out.times.size() < 2)
    throw ValidationError(s.source + ": need at least 2 ticks, found " +
                          std::to_string(out.times.size()));
  for (std::size_t i = 1; i < out.times.size(); ++i)
  {
    if (!(out.times[i] > out.times[i - 1]))
    {
      throw ValidationError(where(s.source, s.t.lines[i]) +
                            (out.times[i] == out.times[i - 1] ? "duplicate time"
                                                              : "time decreases") +
                            " (times must be strictly increasing)");
    }
  }
  return out;
}

TickPair finish_pair(const RawSeries& x, const RawSeries& y)
{
  if (!x.t.lines.empty() && !y.t.lines.empty() && x.t.iso != y.t.iso)
    throw ValidationError("X and Y use different time formats");
  long long origin = std::numeric_limits<long long>::max();
  for (const auto* s : {&x, &y})
  {
    if (s->t.iso && !s->t.ns.empty())
      origin = std::min(origin, *std::min_element(s->t.ns.begin(), s->t.ns.end()));
  }
  return {finish(x, origin), finish(y, origin)};
}

std::string slurp(const std::filesystem::path& file)
{
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_fixed(const std::string& s, std::size_t pos, std::size_t len, const std::string& text)
{
  int v = 0;
  if (pos + len > s.size()) throw ValidationError("truncated timestamp '" + text + "'");
  for (std::size_t i = pos; i < pos + len; ++i)
  {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ValidationError("malformed timestamp '" + text + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

} // namespace

long long parse_iso8601_ns(const std::string& text)
{
  // YYYY-MM-DD[T| ]hh:mm:ss[.frac][Z|+hh:mm|-hh:mm]
  const std::string& s = text;
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    throw ValidationError("malformed timestamp '" + text + "'");
  const int year = parse_fixed(s, 0, 4, text);
  const int month = parse_fixed(s, 5, 2, text);
  const int day = parse_fixed(s, 8, 2, text);
  const int hour = parse_fixed(s, 11, 2, text);
  const int minute = parse_fixed(s, 14, 2, text);
  const int second = parse_fixed(s, 17, 2, text);
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60)
    throw ValidationError("invalid date/time in '" + text + "'");

  std::size_t pos = 19;
  long long frac_ns = 0;
  if (pos < s.size() && (s[pos] == '.' || s[pos] == ','))
  {
    ++pos;
    int digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    {
      if (digits < 9)
      {
        frac_ns = frac_ns * 10 + (s[pos] - '0');
        ++digits;
      }
      ++pos;
    }
    if (digits == 0) throw ValidationError("malformed fraction in '" + text + "'");
    for (; digits < 9; ++digits) frac_ns *= 10;
  }
  long long offset_s = 0;
  if (pos < s.size())
  {
    if (s[pos] == 'Z' && pos + 1 == s.size())
      ++pos;
    else if ((s[pos] == '+' || s[pos] == '-') && s.size() == pos + 6 && s[pos + 3] == ':')
    {
      const int oh = parse_fixed(s, pos + 1, 2, text);
      const int om = parse_fixed(s, pos + 4, 2, text);
      offset_s = (s[pos] == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
      pos = s.size();
    }
    else
      throw ValidationError("malformed zone designator in '" + text + "'");
  }
  const long long days = sys_days{ymd}.time_since_epoch().count();
  const long long secs = days * 86400LL + hour * 3600LL + minute * 60LL + second - offset_s;
  return secs * 1'000'000'000LL + frac_ns;
}

TickPair parse_ticks(const std::string& x_text, const std::string& y_text,
                     const std::string& x_source, const std::string& y_source)
{
  RawSeries x, y;
  x.source = x_source;
  y.source = y_source;
  for_each_row(x_text, x_source, 2,
               [&](const auto& c, std::size_t ln) { add_tick(x, c[0], c[1], ln); });
  for_each_row(y_text, y_source, 2,
               [&](const auto& c, std::size_t ln) { add_tick(y, c[0], c[1], ln); });
  return finish_pair(x, y);
}

TickPair parse_combined_ticks(const std::string& text, const std::string& source)
{
  RawSeries x, y;
  x.source = source + " (series X)";
  y.source = source + " (series Y)";
  for_each_row(text, source, 3, [&](const auto& c, std::size_t ln) {
    if (c[2] == "X" || c[2] == "x")
      add_tick(x, c[0], c[1], ln);
    else if (c[2] == "Y" || c[2] == "y")
      add_tick(y, c[0], c[1], ln);
    else
      throw ValidationError(where(source, ln) + "series must be X or Y, got '" + c[2] + "'");
  });
  return finish_pair(x, y);
}

TickPair read_tick_files(const std::filesystem::path& x_file, const std::filesystem::path& y_file)
{
  return parse_ticks(slurp(x_file), slurp(y_file), x_file.string(), y_file.string());
}

TickPair read_tick_file(const std::filesystem::path& combined)
{
  return parse_combined_ticks(slurp(combined), combined.string());
}

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_tick_csv(std::ostream& os, const TickSeries& series)
{
  if (series.times.size() != series.values.size())
    throw ValidationError("write_tick_csv: times and values differ in length");
  os << "time,value\n";
  for (std::size_t i = 0; i < series.times.size(); ++i)
    os << format_double(series.times[i]) << ',' << format_double(series.values[i]) << '\n';
}

void write_tick_csv(const std::filesystem::path& file, const TickSeries& series)
{
  std::ofstream out(file);
  if (!out) throw ComputationError("cannot write '" + file.string() + "'");
  write_tick_csv(out, series);
  if (!out) throw ComputationError("write failed for '" + file.string() + "'");
}

} // namespace hyasync
