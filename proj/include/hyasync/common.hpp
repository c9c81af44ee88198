#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace hyasync
{

/// Raised for malformed input: unsorted times, bad parameters, schema violations.
class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot proceed on otherwise valid input
/// (e.g. too few refresh times for the requested number of bins).
class ComputationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "1.0.0";

/// Neumaier compensated summation.
class CompensatedSum
{
public:
  void add(double v) noexcept
  {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept
  {
    add(v);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
  double sum_  = 0.0;
  double comp_ = 0.0;
};

/// SplitMix64 finalizer; used to derive independent per-replication seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: depends only on (base, index, stream).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index,
                                    std::uint64_t stream = 0) noexcept
{
  return splitmix64(splitmix64(base ^ splitmix64(index + 0x632BE59BD9B4E019ull)) +
                    stream * 0xD1B54A32D192ED03ull);
}

/// Throws ValidationError if `times` is not strictly increasing and finite.
void require_strictly_increasing(std::span<const double> times, const std::string& what);

} // namespace hyasync
