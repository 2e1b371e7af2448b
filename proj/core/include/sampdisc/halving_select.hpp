#pragma once

// Subset selection by repeated spectral halving.
//
// For a tight frame of M vectors in dimension N with squared norms at most
// theta N / M, repeated two-way partitions (keeping the smaller side) shrink
// the index set to J with |J| <= M / 2^(L+1) while the subset operator stays
// within the (alpha_j, beta_j) schedule below. When delta = theta N / M is at
// least 1/100 the full index set is already a valid answer.

#include <cstddef>
#include <optional>
#include <vector>

#include "sampdisc/frame_core.hpp"
#include "sampdisc/partition_oracle.hpp"

namespace sampdisc {

/// delta at or above this takes the fast path (J = all indices).
inline constexpr double kFastPathDelta = 1.0 / 100.0;
/// Tolerance on the tightness / frame-bound preconditions.
inline constexpr double kFramePreconditionTol = 1e-8;

struct Al1Step {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha_{j+1} = alpha_j (1 - 5 sqrt(delta/alpha_j)) / 2,
/// beta_{j+1}  = beta_j  (1 + 5 sqrt(delta/alpha_j)) / 2,
/// run until the first alpha_{L+1} < 100 delta.
struct Al1Schedule {
  double delta = 0.0;
  std::vector<Al1Step> steps;  // steps[0] is the seed, steps[L + 1] the final pair
  std::size_t last_index = 0;  // L

  const Al1Step& final_step() const { return steps[last_index + 1]; }
  std::size_t rounds() const { return last_index + 1; }
};

/// Tight-frame schedule, alpha_0 = beta_0 = 1. Requires 0 < delta < 1/100.
Al1Schedule al1_schedule(double delta);

/// Frame-condition schedule seeded at (alpha0, beta0).
/// Requires 0 < delta < alpha0 / 100 and beta0 >= alpha0.
Al1Schedule al1_schedule(double delta, double alpha0, double beta0);

struct HalvingRound {
  std::size_t round = 0;
  std::size_t input_size = 0;
  std::size_t kept_size = 0;
  Al1Step target;        // schedule pair the kept side was verified against
  FrameBounds measured;  // eigensolve of the kept side
  std::size_t candidates = 0;
};

struct HalvingCertificate {
  IndexSet selected;  // J, zero vectors removed
  std::size_t dim = 0;
  std::size_t count = 0;
  double theta = 0.0;
  double delta = 0.0;
  std::optional<Al1Schedule> schedule;  // empty on the fast path
  double theoretical_lower = 0.0;
  double theoretical_upper = 0.0;
  FrameBounds actual;  // extreme eigenvalues of sum_{j in J} v_j v_j*
  std::vector<HalvingRound> rounds;

  bool fast_path() const { return !schedule.has_value(); }
  /// M / N, the factor that turns subset bounds into the rescaled form.
  double rescale() const { return static_cast<double>(count) / static_cast<double>(dim); }
  /// Measured constants: c0 theta <= (M/N) * bounds <= C0 theta, |J| = C1 theta N.
  double measured_c0() const { return rescale() * actual.lower / theta; }
  double measured_C0() const { return rescale() * actual.upper / theta; }
  double measured_C1() const {
    return static_cast<double>(selected.size()) / (theta * static_cast<double>(dim));
  }
  /// Cardinality budget M / 2^(L+1) (M on the fast path).
  std::size_t size_budget() const;
};

/// Tight-frame selection. Requires verify_tight(frame, 1e-8), every squared
/// norm <= theta N / M and theta <= M / N.
HalvingCertificate halving_select(const FrameSystem& frame, double theta,
                                  const OracleConfig& config);

/// Frame-condition variant: the measured frame bounds must lie within
/// [A (1 - 1e-8), B (1 + 1e-8)] and the schedule starts at (A, B).
HalvingCertificate halving_select_frame(const FrameSystem& frame, const FrameBounds& bounds,
                                        double theta, const OracleConfig& config);

/// Trace accounting: N lower / max_{J} |v_j|^2 <= |J| <= N upper / min_{J} |v_j|^2.
bool check_cardinality_sandwich(const HalvingCertificate& cert, const FrameSystem& frame);

}  // namespace sampdisc
