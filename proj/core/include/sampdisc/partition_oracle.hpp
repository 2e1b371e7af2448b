#pragma once

// Two-way spectral partition search.
//
// Given vectors with squared norms at most delta whose frame operator lies in
// [alpha, beta], a partition into S1, S2 exists such that each side's
// operator lies in
//
//   [ alpha (1 - 5 sqrt(delta/alpha)) / 2 ,  beta (1 + 5 sqrt(delta/alpha)) / 2 ].
//
// The existence argument is nonconstructive, so this module searches
// candidate splits and certifies each accepted one with a dense eigensolve.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

#include "sampdisc/frame_core.hpp"

namespace sampdisc {

enum class Strategy { automatic, exhaustive, randomized };

const char* to_string(Strategy strategy) noexcept;
Strategy parse_strategy(std::string_view name);

inline constexpr std::size_t kMaxExhaustiveSize = 24;
inline constexpr std::size_t kDefaultBudget = 10'000;
/// Absolute slack applied when comparing eigensolve results to targets.
inline constexpr double kTargetSlack = 1e-10;

/// `automatic` enumerates exhaustively up to kMaxExhaustiveSize indices and
/// falls back to seeded random balanced splits above that.
struct OracleConfig {
  Strategy strategy = Strategy::automatic;
  std::size_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
};

struct PartitionRequest {
  IndexSet active;  // sorted, unique
  double delta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

struct Ap1Targets {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = alpha (1 - 5 sqrt(delta/alpha)) / 2, upper = beta (1 + 5 sqrt(delta/alpha)) / 2.
/// Requires beta >= alpha > delta > 0.
Ap1Targets ap1_targets(double alpha, double beta, double delta);

bool meets_targets(const FrameBounds& bounds, const Ap1Targets& targets);

struct PartitionResult {
  IndexSet s1;
  IndexSet s2;
  FrameBounds bounds_s1;
  FrameBounds bounds_s2;
  std::size_t candidates_examined = 0;
};

/// One split of the active set. Bit k of `mask` set means active[k] is in s1;
/// bit 0 is always set.
struct SplitVerdict {
  std::uint64_t mask = 0;
  FrameBounds s1;
  FrameBounds s2;
  bool accepted = false;
};

/// Validates the request against the frame (ordering, norm bound, AP1
/// precondition) and throws ErrorCode::precondition naming the offending index.
void validate_request(const FrameSystem& frame, const PartitionRequest& request);

/// Visits all 2^(n-1) splits of the active set with their verified bounds.
/// Throws ErrorCode::size_limit above kMaxExhaustiveSize indices.
void enumerate_splits(const FrameSystem& frame, const PartitionRequest& request,
                      const std::function<void(const SplitVerdict&)>& visit);

/// Returns a verified partition. Exhaustive search prefers accepted splits with
/// both sides nonempty and among those returns the one minimizing the upper bound of its smaller side (smaller cardinality, s1 on
/// ties), then the lexicographically smallest s1. Randomized search returns
/// the first accepted balanced split in seeded order, with |s1| <= |s2|.
PartitionResult spectral_partition(const FrameSystem& frame, const PartitionRequest& request,
                                   const OracleConfig& config);

}  // namespace sampdisc
