#include "sampdisc/halving_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sampdisc/error.hpp"
#include "sampdisc/rng.hpp"

namespace sampdisc {

namespace {

constexpr const char* kStage = "halving_select";
constexpr double kNormSlack = 1e-12;

void check_norm_condition(const FrameSystem& frame, double theta) {
  const double m = static_cast<double>(frame.count());
  const double n = static_cast<double>(frame.dim());
  if (!(theta > 0.0)) {
    throw Error(ErrorCode::precondition, kStage, "theta must be positive");
  }
  if (theta > (m / n) * (1.0 + kNormSlack)) {
    std::ostringstream msg;
    msg << "theta " << theta << " exceeds M/N = " << m / n;
    throw Error(ErrorCode::precondition, kStage, msg.str());
  }
  const double limit = theta * n / m;
  for (std::size_t j = 0; j < frame.count(); ++j) {
    if (frame.norm2(j) > limit * (1.0 + kNormSlack)) {
      std::ostringstream msg;
      msg << "vector " << j << " has squared norm " << frame.norm2(j) << " > theta N/M = "
          << limit;
      throw Error(ErrorCode::precondition, kStage, msg.str());
    }
  }
}

IndexSet drop_zero_vectors(const FrameSystem& frame, const IndexSet& indices) {
  IndexSet kept;
  kept.reserve(indices.size());
  for (const std::size_t j : indices) {
    if (frame.norm2(j) > 0.0) kept.push_back(j);
  }
  return kept;
}

HalvingCertificate run_halving(const FrameSystem& frame, const FrameBounds& seed_bounds,
                               double theta, const OracleConfig& config) {
  HalvingCertificate cert;
  cert.dim = frame.dim();
  cert.count = frame.count();
  cert.theta = theta;
  cert.delta = theta * static_cast<double>(frame.dim()) / static_cast<double>(frame.count());

  IndexSet current(frame.count());
  std::iota(current.begin(), current.end(), std::size_t{0});

  if (cert.delta >= seed_bounds.lower * kFastPathDelta) {
    cert.selected = drop_zero_vectors(frame, current);
    cert.theoretical_lower = seed_bounds.lower;
    cert.theoretical_upper = seed_bounds.upper;
    cert.actual = subset_bounds(frame, cert.selected);
    return cert;
  }

  Al1Schedule schedule = al1_schedule(cert.delta, seed_bounds.lower, seed_bounds.upper);
  for (std::size_t round = 0; round < schedule.rounds(); ++round) {
    const Al1Step& step = schedule.steps[round];
    PartitionRequest request{current, cert.delta, step.alpha, step.beta};
    OracleConfig round_config = config;
    round_config.seed = derive_seed(config.seed, round);

    PartitionResult split;
    try {
      split = spectral_partition(frame, request, round_config);
    } catch (const Error& e) {
      throw e.within(std::string(kStage) + "[round " + std::to_string(round) + "]");
    }

    const bool keep_first = split.s1.size() <= split.s2.size();
    HalvingRound record;
    record.round = round;
    record.input_size = current.size();
    record.target = schedule.steps[round + 1];
    record.measured = keep_first ? split.bounds_s1 : split.bounds_s2;
    record.candidates = split.candidates_examined;
    current = keep_first ? std::move(split.s1) : std::move(split.s2);
    record.kept_size = current.size();
    cert.rounds.push_back(record);
  }

  cert.selected = drop_zero_vectors(frame, current);
  cert.theoretical_lower = schedule.final_step().alpha;
  cert.theoretical_upper = schedule.final_step().beta;
  cert.actual = subset_bounds(frame, cert.selected);
  cert.schedule = std::move(schedule);

  if (cert.actual.lower < cert.theoretical_lower - kTargetSlack ||
      cert.actual.upper > cert.theoretical_upper + kTargetSlack) {
    std::ostringstream msg;
    msg << "final subset bounds [" << cert.actual.lower << ", " << cert.actual.upper
        << "] escape schedule [" << cert.theoretical_lower << ", " << cert.theoretical_upper
        << "]";
    throw Error(ErrorCode::internal, kStage, msg.str());
  }
  return cert;
}

}  // namespace

Al1Schedule al1_schedule(double delta) { return al1_schedule(delta, 1.0, 1.0); }

Al1Schedule al1_schedule(double delta, double alpha0, double beta0) {
  if (!(alpha0 > 0.0) || !(beta0 >= alpha0)) {
    throw Error(ErrorCode::domain, kStage, "schedule seed needs 0 < alpha0 <= beta0");
  }
  if (!(delta > 0.0) || !(delta < alpha0 * kFastPathDelta)) {
    std::ostringstream msg;
    msg << "delta " << delta << " outside (0, " << alpha0 * kFastPathDelta << ")";
    throw Error(ErrorCode::domain, kStage, msg.str());
  }
  Al1Schedule schedule;
  schedule.delta = delta;
  schedule.steps.push_back({alpha0, beta0});
  while (schedule.steps.back().alpha >= 100.0 * delta) {
    const Al1Step& s = schedule.steps.back();
    const double spread = 5.0 * std::sqrt(delta / s.alpha);
    schedule.steps.push_back({s.alpha * (1.0 - spread) / 2.0, s.beta * (1.0 + spread) / 2.0});
  }
  schedule.last_index = schedule.steps.size() - 2;
  if (schedule.final_step().alpha < 25.0 * delta) {
    throw Error(ErrorCode::internal, kStage, "schedule left the [25 delta, 100 delta) window");
  }
  return schedule;
}

std::size_t HalvingCertificate::size_budget() const {
  if (!schedule) return count;
  const std::size_t shift = schedule->rounds();
  return shift >= std::numeric_limits<std::size_t>::digits ? 0 : count >> shift;
}

HalvingCertificate halving_select(const FrameSystem& frame, double theta,
                                  const OracleConfig& config) {
  if (!verify_tight(frame, kFramePreconditionTol)) {
    const FrameBounds b = frame_bounds(frame);
    std::ostringstream msg;
    msg << "frame is not tight: bounds [" << b.lower << ", " << b.upper << "]";
    throw Error(ErrorCode::precondition, kStage, msg.str());
  }
  check_norm_condition(frame, theta);
  return run_halving(frame, {1.0, 1.0}, theta, config);
}

HalvingCertificate halving_select_frame(const FrameSystem& frame, const FrameBounds& bounds,
                                        double theta, const OracleConfig& config) {
  if (!(bounds.lower > 0.0) || !(bounds.upper >= bounds.lower)) {
    throw Error(ErrorCode::precondition, kStage, "frame bounds need 0 < A <= B");
  }
  const FrameBounds measured = frame_bounds(frame);
  if (measured.lower < bounds.lower * (1.0 - kFramePreconditionTol) ||
      measured.upper > bounds.upper * (1.0 + kFramePreconditionTol)) {
    std::ostringstream msg;
    msg << "measured frame bounds [" << measured.lower << ", " << measured.upper
        << "] outside declared [" << bounds.lower << ", " << bounds.upper << "]";
    throw Error(ErrorCode::precondition, kStage, msg.str());
  }
  check_norm_condition(frame, theta);
  return run_halving(frame, bounds, theta, config);
}

bool check_cardinality_sandwich(const HalvingCertificate& cert, const FrameSystem& frame) {
  if (cert.selected.empty()) return false;
  double max_norm = 0.0;
  double min_norm = std::numeric_limits<double>::infinity();
  for (const std::size_t j : cert.selected) {
    const double norm = frame.norm2(j);
    max_norm = std::max(max_norm, norm);
    if (norm > 0.0) min_norm = std::min(min_norm, norm);
  }
  if (!(max_norm > 0.0)) return false;
  constexpr double kRel = 1e-10;
  const double size = static_cast<double>(cert.selected.size());
  const double n = static_cast<double>(frame.dim());
  return size >= n * cert.actual.lower / max_norm * (1.0 - kRel) &&
         size <= n * cert.actual.upper / min_norm * (1.0 + kRel);
}

}  // namespace sampdisc
