#include "sampdisc/partition_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "sampdisc/error.hpp"
#include "sampdisc/rng.hpp"

namespace sampdisc {

namespace {

constexpr const char* kStage = "partition_oracle";
constexpr double kNormSlack = 1e-12;
constexpr double kTieTolerance = 1e-12;

double target_violation(const FrameBounds& a, const FrameBounds& b, const Ap1Targets& targets) {
  return std::max(targets.lower - std::min(a.lower, b.lower),
                  std::max(a.upper, b.upper) - targets.upper);
}

// Upper bound of the side the halving loop keeps: the smaller one, s1 on ties.
double kept_upper(const IndexSet& s1, const IndexSet& s2, const FrameBounds& b1,
                  const FrameBounds& b2) {
  return s1.size() <= s2.size() ? b1.upper : b2.upper;
}

PartitionResult exhaustive_partition(const FrameSystem& frame, const PartitionRequest& request) {
  const auto targets = ap1_targets(request.alpha, request.beta, request.delta);
  const std::size_t n = request.active.size();

  bool found = false;
  PartitionResult best;
  double best_key = std::numeric_limits<double>::infinity();
  std::size_t examined = 0;

  enumerate_splits(frame, request, [&](const SplitVerdict& verdict) {
    ++examined;
    if (!verdict.accepted) return;
    IndexSet s1;
    IndexSet s2;
    for (std::size_t k = 0; k < n; ++k) {
      ((verdict.mask >> k) & 1U ? s1 : s2).push_back(request.active[k]);
    }
    const bool proper = !s1.empty() && !s2.empty();
    const bool best_proper = found && !best.s1.empty() && !best.s2.empty();
    const double key = kept_upper(s1, s2, verdict.s1, verdict.s2);
    const bool better =
        !found || (proper && !best_proper) ||
        (proper == best_proper &&
         (key < best_key - kTieTolerance ||
          (std::abs(key - best_key) <= kTieTolerance &&
           std::lexicographical_compare(s1.begin(), s1.end(), best.s1.begin(), best.s1.end()))));
    if (better) {
      found = true;
      best_key = key;
      best.s1 = std::move(s1);
      best.s2 = std::move(s2);
      best.bounds_s1 = verdict.s1;
      best.bounds_s2 = verdict.s2;
    }
  });

  if (!found) {
    std::ostringstream msg;
    msg << "no split of " << n << " indices meets targets [" << targets.lower << ", "
        << targets.upper << "]";
    throw Error(ErrorCode::search_failure, kStage, msg.str());
  }
  best.candidates_examined = examined;
  return best;
}

PartitionResult randomized_partition(const FrameSystem& frame, const PartitionRequest& request,
                                     const OracleConfig& config) {
  const auto targets = ap1_targets(request.alpha, request.beta, request.delta);
  const std::size_t n = request.active.size();
  const std::size_t half = n / 2;

  Rng rng(config.seed);
  IndexSet order = request.active;
  double best_violation = std::numeric_limits<double>::infinity();

  for (std::size_t candidate = 0; candidate < config.budget; ++candidate) {
    rng.shuffle(std::span<std::size_t>(order));
    IndexSet s1(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
    IndexSet s2(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());

    const FrameBounds b1 = subset_bounds(frame, s1);
    const FrameBounds b2 = subset_bounds(frame, s2);
    if (meets_targets(b1, targets) && meets_targets(b2, targets)) {
      return {std::move(s1), std::move(s2), b1, b2, candidate + 1};
    }
    best_violation = std::min(best_violation, target_violation(b1, b2, targets));
  }

  std::ostringstream msg;
  msg << "randomized budget of " << config.budget << " candidates exhausted on " << n
      << " indices; smallest target violation " << best_violation;
  throw Error(ErrorCode::search_failure, kStage, msg.str());
}

}  // namespace

const char* to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::automatic: return "auto";
    case Strategy::exhaustive: return "exhaustive";
    case Strategy::randomized: return "randomized";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "auto" || name == "automatic") return Strategy::automatic;
  if (name == "exhaustive") return Strategy::exhaustive;
  if (name == "randomized") return Strategy::randomized;
  throw Error(ErrorCode::domain, kStage, "unknown strategy '" + std::string(name) + "'");
}

Ap1Targets ap1_targets(double alpha, double beta, double delta) {
  if (!(delta > 0.0) || !(alpha > delta)) {
    std::ostringstream msg;
    msg << "requires alpha > delta > 0 (alpha=" << alpha << ", delta=" << delta << ")";
    throw Error(ErrorCode::precondition, kStage, msg.str());
  }
  if (!(beta >= alpha)) {
    std::ostringstream msg;
    msg << "requires beta >= alpha (alpha=" << alpha << ", beta=" << beta << ")";
    throw Error(ErrorCode::precondition, kStage, msg.str());
  }
  const double spread = 5.0 * std::sqrt(delta / alpha);
  return {alpha * (1.0 - spread) / 2.0, beta * (1.0 + spread) / 2.0};
}

bool meets_targets(const FrameBounds& bounds, const Ap1Targets& targets) {
  return bounds.lower >= targets.lower - kTargetSlack &&
         bounds.upper <= targets.upper + kTargetSlack;
}

void validate_request(const FrameSystem& frame, const PartitionRequest& request) {
  if (request.active.empty()) {
    throw Error(ErrorCode::precondition, kStage, "active index set is empty");
  }
  for (std::size_t k = 0; k < request.active.size(); ++k) {
    const std::size_t j = request.active[k];
    if (j >= frame.count()) {
      throw Error(ErrorCode::precondition, kStage,
                  "active index " + std::to_string(j) + " out of range");
    }
    if (k > 0 && request.active[k - 1] >= j) {
      throw Error(ErrorCode::precondition, kStage, "active indices must be strictly increasing");
    }
  }
  ap1_targets(request.alpha, request.beta, request.delta);
  for (const std::size_t j : request.active) {
    if (frame.norm2(j) > request.delta * (1.0 + kNormSlack)) {
      std::ostringstream msg;
      msg << "vector " << j << " has squared norm " << frame.norm2(j) << " > delta "
          << request.delta;
      throw Error(ErrorCode::precondition, kStage, msg.str());
    }
  }
}

void enumerate_splits(const FrameSystem& frame, const PartitionRequest& request,
                      const std::function<void(const SplitVerdict&)>& visit) {
  validate_request(frame, request);
  const std::size_t n = request.active.size();
  if (n > kMaxExhaustiveSize) {
    throw Error(ErrorCode::size_limit, kStage,
                "exhaustive search limited to " + std::to_string(kMaxExhaustiveSize) +
                    " indices, got " + std::to_string(n));
  }
  const auto targets = ap1_targets(request.alpha, request.beta, request.delta);
  const auto dim = static_cast<Eigen::Index>(frame.dim());

  std::vector<Eigen::MatrixXcd> outer(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = frame.vector(request.active[k]);
    outer[k] = v * v.adjoint();
  }

  const std::uint64_t splits = std::uint64_t{1} << (n - 1);
  Eigen::MatrixXcd side1(dim, dim);
  Eigen::MatrixXcd side2(dim, dim);
  for (std::uint64_t r = 0; r < splits; ++r) {
    const std::uint64_t mask = 1U | (r << 1);
    side1.setZero();
    side2.setZero();
    bool s2_empty = true;
    for (std::size_t k = 0; k < n; ++k) {
      if ((mask >> k) & 1U) {
        side1 += outer[k];
      } else {
        side2 += outer[k];
        s2_empty = false;
      }
    }
    SplitVerdict verdict;
    verdict.mask = mask;
    verdict.s1 = extreme_eigenvalues(HermitianMatrix(side1, frame.field()));
    verdict.s2 = s2_empty ? FrameBounds{0.0, 0.0}
                          : extreme_eigenvalues(HermitianMatrix(side2, frame.field()));
    verdict.accepted = meets_targets(verdict.s1, targets) && meets_targets(verdict.s2, targets);
    visit(verdict);
  }
}

PartitionResult spectral_partition(const FrameSystem& frame, const PartitionRequest& request,
                                   const OracleConfig& config) {
  validate_request(frame, request);
  Strategy strategy = config.strategy;
  if (strategy == Strategy::automatic) {
    strategy = request.active.size() <= kMaxExhaustiveSize ? Strategy::exhaustive
                                                           : Strategy::randomized;
  }
  if (strategy == Strategy::exhaustive) return exhaustive_partition(frame, request);
  return randomized_partition(frame, request, config);
}

}  // namespace sampdisc
