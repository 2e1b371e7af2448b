#pragma once

// Sampling discretization pipelines.
//
// Every pipeline ends in a DiscretizationCertificate whose constants (c, C)
// are the extreme eigenvalues of the discretized Gram matrix
// sum_k lambda_k u(xi^k) u(xi^k)* taken in an orthonormal basis of the
// subspace, so c |f|^2 <= sum_k lambda_k |f(xi^k)|^2 <= C |f|^2 holds for
// every f in the span up to eigensolver accuracy.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sampdisc/frame_core.hpp"
#include "sampdisc/halving_select.hpp"
#include "sampdisc/partition_oracle.hpp"
#include "sampdisc/rng.hpp"
#include "sampdisc/sampled_system.hpp"
#include "sampdisc/weighted_sparsify.hpp"

namespace sampdisc {

/// Systems farther than this from orthonormal (spectral norm of G - I) are
/// rejected by the equal-weight pipeline.
inline constexpr double kOrthonormalTol = 1e-8;
/// Relative singular-value cutoff for numerical rank.
inline constexpr double kRankThreshold = 1e-10;
/// Agreement required when a certificate is recomputed from raw data.
inline constexpr double kVerifyTol = 1e-10;

// ---------------------------------------------------------------------------
// Condition E / Nikol'skii constant

struct NikolskiiReport {
  double t = 0.0;
  double t_squared = 0.0;
  std::size_t argmax = 0;
  Eigen::VectorXd argmax_point;
  std::vector<double> per_point_sums;  // sum_i |u_i(x^j)|^2
  double residual = 0.0;               // |G - I| of the input
};

/// t^2 = max_j sum_i |u_i(x^j)|^2 / N. For an orthonormal system this is the
/// smallest t with |f|_inf <= t sqrt(N) |f|_2 over the span, evaluated on the
/// sample points. Requires orthonormality within 1e-6.
NikolskiiReport condition_e_constant(const SampledSystem& system);

/// sup_f |f(x^j)| / |f|_2 over the span, i.e. sqrt(sum_i |u_i(x^j)|^2) for an
/// orthonormal system.
double evaluation_norm(const SampledSystem& system, std::size_t point);

/// Coefficients c_i = conj(u_i(x^j)) of the f that attains evaluation_norm.
Eigen::VectorXcd extremal_coefficients(const SampledSystem& system, std::size_t point);

/// v_j = sqrt(w_j) (u_1(x^j), ..., u_N(x^j)); tight iff the system is
/// orthonormal.
FrameSystem build_frame_from_samples(const SampledSystem& system);

// ---------------------------------------------------------------------------
// Continuous systems and sampling

/// A basis u_1..u_N, orthonormal in L2(mu), with a sampler for mu.
struct ContinuousSystem {
  std::string family;  // stable tag, hashed into certificate fingerprints
  std::size_t dim = 0;
  Field field = Field::complex;
  std::size_t point_dim = 1;
  std::function<Eigen::VectorXd(Rng&)> sampler;
  std::function<Eigen::VectorXcd(const Eigen::VectorXd&)> evaluator;
  std::optional<double> nikolskii_t;  // sup-norm constant when known exactly
};

/// Draws from a sampled system's own measure; points are point indices.
ContinuousSystem resampling_system(const SampledSystem& system);

/// Evaluates the basis at each column of `points`; throws ErrorCode::input on
/// wrong length or non-finite values.
Eigen::MatrixXcd evaluate(const ContinuousSystem& system, const Eigen::MatrixXd& points);

struct RefinedSample {
  SampledSystem system;
  double deviation = 0.0;                                 // |G - I| at acceptance
  std::vector<std::pair<std::size_t, double>> history;    // (M, deviation) per attempt
};

/// i.i.d. sample whose Gram matrix satisfies |G - I| <= delta. M starts at
/// m_start and doubles (new points appended) until accepted or above m_cap.
RefinedSample monte_carlo_refine(const ContinuousSystem& system, double delta,
                                 std::uint64_t seed, std::size_t m_start, std::size_t m_cap);

struct Reorthonormalized {
  SampledSystem system;             // l orthonormal rows
  Eigen::MatrixXcd change_of_basis;  // l x N; new values = B * old values
  std::size_t rank = 0;
};

/// Orthonormal basis of the row space on the system's own measure, with the
/// leading coefficient of each new function real and positive.
Reorthonormalized reorthonormalize(const SampledSystem& system);

// ---------------------------------------------------------------------------
// Certificates

enum class CertificateKind { equal_weight, weighted, transferred };
enum class BasisSource { sampled, continuous };

const char* to_string(CertificateKind kind) noexcept;
const char* to_string(BasisSource source) noexcept;

struct BasisRef {
  BasisSource source = BasisSource::sampled;
  std::string fingerprint;
  std::string family;  // continuous systems only
  std::size_t dim = 0;
  std::size_t count = 0;  // points in the sampled system (sample size for continuous)
  Field field = Field::complex;
};

struct StageRecord {
  std::string stage;
  std::vector<std::pair<std::string, std::string>> values;

  StageRecord& add(std::string key, double value);
  StageRecord& add(std::string key, std::size_t value);
  StageRecord& add(std::string key, std::string value);
  const std::string* find(std::string_view key) const;
};

struct CertificateSettings {
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::automatic;
  std::size_t budget = kDefaultBudget;
};

struct DiscretizationCertificate {
  CertificateKind kind = CertificateKind::equal_weight;
  BasisRef basis;
  IndexSet point_indices;  // into the sampled system (or the Monte Carlo sample)
  Eigen::MatrixXd points;  // coordinates, one column per selected point
  bool uniform_weights = true;
  std::vector<double> weights;  // explicit weights; empty when uniform
  std::size_t m = 0;
  FrameBounds constants;  // (c, C)
  std::size_t size_budget = 0;
  CertificateSettings settings;
  std::vector<StageRecord> log;

  /// 1/m per point when uniform, otherwise the explicit weights.
  std::vector<double> effective_weights() const;
};

/// (c, C) for the weighted point set on a sampled system, measured against
/// the system's own L2 norm.
FrameBounds discretization_constants(const SampledSystem& system,
                                     std::span<const std::size_t> point_indices,
                                     std::span<const double> weights);

/// (c, C) for a continuous system at explicit points.
FrameBounds discretization_constants(const ContinuousSystem& system, const Eigen::MatrixXd& points,
                                     std::span<const double> weights);

struct VerificationReport {
  bool passed = false;
  FrameBounds recomputed;
  std::vector<std::string> issues;
};

/// Recomputes the constants from raw points and the system; never trusts the
/// stored values.
VerificationReport verify_certificate(const DiscretizationCertificate& cert,
                                      const SampledSystem& system);
VerificationReport verify_certificate(const DiscretizationCertificate& cert,
                                      const ContinuousSystem& system);

// ---------------------------------------------------------------------------
// Pipelines

struct EqualWeightSelection {
  DiscretizationCertificate certificate;
  HalvingCertificate halving;
  NikolskiiReport nikolskii;
};

/// Equal weights on a uniformly weighted orthonormal system: halving with
/// theta = t^2 (or the override), points J, weights 1/m.
EqualWeightSelection select_equal_weight(const SampledSystem& system, const OracleConfig& oracle,
                                         std::optional<double> theta = std::nullopt);

DiscretizationCertificate discretize_equal_weight(const SampledSystem& system,
                                                  const OracleConfig& oracle,
                                                  std::optional<double> theta = std::nullopt);

struct ContinuousOptions {
  OracleConfig oracle;
  double delta = 0.5;
  std::size_t m_start = 64;
  std::size_t m_cap = std::size_t{1} << 20;
};

/// Monte Carlo surrogate -> re-orthonormalization -> equal-weight selection,
/// with constants certified against the continuous measure.
DiscretizationCertificate discretize_continuous(const ContinuousSystem& system,
                                                const ContinuousOptions& options);

/// Nonnegative weights via norm-equalizing duplication. Non-orthonormal
/// inputs are re-orthonormalized first; points where every function vanishes
/// are never selected.
DiscretizationCertificate discretize_weighted(const SampledSystem& system,
                                              const OracleConfig& oracle);

/// Real system spanning Re u_j, Im u_j, re-orthonormalized.
struct RealAssociate {
  SampledSystem real_system;
  Eigen::MatrixXcd change_of_basis;  // rank x 2N over the stacked [Re; Im] rows
  std::size_t rank = 0;
  std::string complex_fingerprint;
  std::string real_fingerprint;
};

RealAssociate complexify_via_real(const SampledSystem& complex_system);

/// Replays a certificate of the real associate on the complex system with the
/// same points and weights. The complex constants must land inside the real
/// interval (within 1e-10).
DiscretizationCertificate transfer_certificate(const DiscretizationCertificate& real_cert,
                                               const SampledSystem& complex_system,
                                               const RealAssociate& mapping);

}  // namespace sampdisc
