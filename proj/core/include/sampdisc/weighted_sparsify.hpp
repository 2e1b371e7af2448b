#pragma once

#include <cstddef>
#include <vector>

#include "sampdisc/frame_core.hpp"
#include "sampdisc/halving_select.hpp"
#include "sampdisc/partition_oracle.hpp"

namespace sampdisc {

inline constexpr std::size_t kDefaultCopyCap = 1'000'000;

/// n_j copies of v_j / sqrt(n_j), with n_j = floor(|v_j|^2 / |v_anchor|^2) and
/// the anchor the first vector of minimal norm.
struct DuplicationMap {
  std::vector<std::size_t> counts;          // n_j, one per source vector
  std::size_t total = 0;                    // M' = sum n_j
  std::vector<std::size_t> copy_to_source;  // k(j) for each copy
  std::size_t anchor = 0;
};

struct DuplicatedFrame {
  FrameSystem frame;
  DuplicationMap map;
};

/// Equal-norm copy system with the same frame operator. Requires a tight
/// frame without zero vectors and M' <= copy_cap.
DuplicatedFrame duplicate_normalize(const FrameSystem& frame,
                                    std::size_t copy_cap = kDefaultCopyCap);

struct WeightedCertificate {
  std::vector<double> weights;  // lambda_j >= 0, one per source vector
  IndexSet support;             // {j : lambda_j != 0}
  FrameBounds bounds;           // eigensolve of sum_j lambda_j v_j v_j*
  std::size_t support_budget = 0;  // |J| in copy space
  double scale = 0.0;              // M' / (2N)
  DuplicationMap duplication;
  HalvingCertificate halving;
};

/// Duplicate, select copies by halving with theta = min(2, M'/N), and fold the
/// selected copies back into lambda_j = (M'/(2N)) * (#copies of j in J) / n_j.
WeightedCertificate weighted_select(const FrameSystem& frame, const OracleConfig& config,
                                    std::size_t copy_cap = kDefaultCopyCap);

}  // namespace sampdisc
