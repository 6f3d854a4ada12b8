#include "eqrobust/common.hpp"
#include "eqrobust/robustness.hpp"

#include <atomic>
#include <cmath>

namespace eqrobust {

namespace {
std::atomic<double> g_epsilon{1e-9};
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonConvexInput: return "NonConvexInput";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ReferenceOutside: return "ReferenceOutside";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::DegeneratePresent: return "DegeneratePresent";
    case ErrorCode::TooFewStable: return "TooFewStable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string to_string(RobustnessKind kind) {
  switch (kind) {
    case RobustnessKind::internal: return "internal";
    case RobustnessKind::external: return "external";
    case RobustnessKind::full_line_bound: return "full_line_bound";
    case RobustnessKind::partial_s: return "partial_s";
    case RobustnessKind::partial_u: return "partial_u";
    case RobustnessKind::partial_any: return "partial_any";
  }
  return "unknown";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::exact: return "exact";
    case Method::sampled: return "sampled";
    case Method::search: return "search";
  }
  return "unknown";
}

double geometric_epsilon() noexcept { return g_epsilon.load(std::memory_order_relaxed); }

void set_geometric_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw GeometryError(ErrorCode::InvalidArgument, "tolerance must be positive and finite");
  }
  g_epsilon.store(eps, std::memory_order_relaxed);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

}  // namespace eqrobust
