#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eqrobust {

enum class ErrorCode {
  NonConvexInput,
  DegenerateInput,
  ReferenceOutside,
  DegenerateConfiguration,
  DegeneratePresent,
  TooFewStable,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library error codes. Every fallible
/// operation in eqrobust reports failure through this type.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Module-wide relative tolerance for on-boundary decisions. Geometry
/// routines multiply it by the size of the body they work on (bounding box
/// diagonal), so the effective threshold is scale-free.
///
/// The default is 1e-9. The value is process global and should be set once
/// at startup (the CLI honours EQ_EPS); changing it while other threads are
/// classifying bodies gives unspecified, though memory-safe, results.
double geometric_epsilon() noexcept;
void set_geometric_epsilon(double eps);

/// Deterministic per-index random stream. Each (seed, stream, index) triple
/// maps to an independent std::mt19937_64 state, so Monte Carlo samples can
/// be generated in any order or in parallel and still be bit-identical.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform double in [0, 1) with 53 random bits. Unlike
  /// std::uniform_real_distribution this is identical across standard
  /// library implementations.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eqrobust
