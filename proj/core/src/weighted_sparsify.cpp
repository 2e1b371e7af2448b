#include "sampdisc/weighted_sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sampdisc/error.hpp"

namespace sampdisc {

namespace {

constexpr const char* kStage = "weighted_sparsify";

}  // namespace

DuplicatedFrame duplicate_normalize(const FrameSystem& frame, std::size_t copy_cap) {
  if (!verify_tight(frame, kFramePreconditionTol)) {
    throw Error(ErrorCode::precondition, kStage, "frame is not tight");
  }
  const std::size_t m = frame.count();
  std::vector<double> norms(m);
  for (std::size_t j = 0; j < m; ++j) {
    norms[j] = frame.norm2(j);
    if (!(norms[j] > 0.0)) {
      throw Error(ErrorCode::input, kStage, "vector " + std::to_string(j) + " is zero");
    }
  }

  DuplicationMap map;
  map.anchor = static_cast<std::size_t>(std::min_element(norms.begin(), norms.end()) -
                                        norms.begin());
  const double anchor_norm = norms[map.anchor];
  map.counts.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double ratio = norms[j] / anchor_norm;
    if (ratio > static_cast<double>(copy_cap)) {
      throw Error(ErrorCode::size_limit, kStage,
                  "norm ratio of vector " + std::to_string(j) + " exceeds copy cap");
    }
    map.counts[j] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(ratio)));
    const double per_copy = norms[j] / static_cast<double>(map.counts[j]);
    // Lower side compared with a relative ulp allowance for integer ratios.
    if (per_copy < anchor_norm * (1.0 - 1e-12) || per_copy >= 2.0 * anchor_norm) {
      throw Error(ErrorCode::internal, kStage,
                  "copy count for vector " + std::to_string(j) + " violates the norm window");
    }
    map.total += map.counts[j];
    if (map.total > copy_cap) {
      std::ostringstream msg;
      msg << "duplicated system exceeds copy cap " << copy_cap;
      throw Error(ErrorCode::size_limit, kStage, msg.str());
    }
  }

  Eigen::MatrixXcd copies(static_cast<Eigen::Index>(frame.dim()),
                          static_cast<Eigen::Index>(map.total));
  map.copy_to_source.reserve(map.total);
  Eigen::Index k = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(map.counts[j]));
    for (std::size_t c = 0; c < map.counts[j]; ++c) {
      copies.col(k++) = frame.vector(j) * scale;
      map.copy_to_source.push_back(j);
    }
  }
  return {FrameSystem(std::move(copies), frame.field()), std::move(map)};
}

WeightedCertificate weighted_select(const FrameSystem& frame, const OracleConfig& config,
                                    std::size_t copy_cap) {
  DuplicatedFrame dup = duplicate_normalize(frame, copy_cap);
  const double n = static_cast<double>(frame.dim());
  const double m_prime = static_cast<double>(dup.map.total);
  // theta = 2 satisfies the norm condition; M'/N caps it when M' < 2N.
  const double theta = std::min(2.0, m_prime / n);

  WeightedCertificate cert;
  try {
    cert.halving = halving_select(dup.frame, theta, config);
  } catch (const Error& e) {
    throw e.within(kStage);
  }
  cert.scale = m_prime / (2.0 * n);
  cert.support_budget = cert.halving.selected.size();

  std::vector<std::size_t> picked(frame.count(), 0);
  for (const std::size_t copy : cert.halving.selected) ++picked[dup.map.copy_to_source[copy]];
  cert.weights.assign(frame.count(), 0.0);
  for (std::size_t j = 0; j < frame.count(); ++j) {
    if (picked[j] == 0) continue;
    cert.weights[j] = cert.scale * static_cast<double>(picked[j]) /
                      static_cast<double>(dup.map.counts[j]);
    cert.support.push_back(j);
  }
  cert.bounds = extreme_eigenvalues(weighted_operator(frame, cert.weights));
  cert.duplication = std::move(dup.map);
  return cert;
}

}  // namespace sampdisc
