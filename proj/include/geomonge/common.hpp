#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace geomonge {

/// Sentinel for an unreachable pair in the geodesic cost matrix.
/// IEEE infinity is absorbing under + and max, which is exactly the
/// arithmetic the shortest-path and closure code relies on.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double x) { return x == kInf; }

enum class ErrorCode {
  INVALID_ARGUMENT,
  INFINITE_DISTANCE,
  AMBIGUOUS_GEODESIC,
  INFEASIBLE_MASS,
  NO_FINITE_COUPLING,
  NEGATIVE_CYCLE,
  NONMONOTONE_INPUT,
  BRANCHING_DETECTED,
  EQUIVALENCE_FAILURE,
  MASS_OFF_RAYS,
  MASS_MISMATCH,
  RAY_MISMATCH,
  PARAM_UNDEFINED,
  MISSING_DENSITY,
  ORDER_VIOLATION,
  DIVISION_BY_ZERO_CELL,
  ENDPOINT_MISSING,
  DOMAIN,
  IO_ERROR,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// Counter-based deterministic generator (SplitMix64).
/// state update: s += 0x9E3779B97F4A7C15; output mixes with
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB shifts 30/27/31.
/// Reproducible across languages; used for all seeded fixtures.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Child generator for an independent substream.
  SplitMix64 split(std::uint64_t stream) {
    return SplitMix64(next_u64() ^ (stream * 0xD6E8FEB86659FD93ULL));
  }

 private:
  std::uint64_t state_;
};

}  // namespace geomonge
