#include "sampdisc/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sampdisc/decimal.hpp"
#include "sampdisc/error.hpp"

namespace sampdisc {

namespace {

constexpr double kConditionEResidual = 1e-6;

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& points, std::span<const std::size_t> cols) {
  Eigen::MatrixXd out(points.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = points.col(static_cast<Eigen::Index>(cols[k]));
  }
  return out;
}

// sum_k w_k u(x^k) u(x^k)* for the columns of `values`.
HermitianMatrix weighted_gram(const Eigen::MatrixXcd& values, std::span<const double> weights,
                              Field field) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t k = 0; k < weights.size(); ++k) w(static_cast<Eigen::Index>(k)) = weights[k];
  return HermitianMatrix(values * w.asDiagonal() * values.adjoint(), field);
}

BasisRef sampled_basis(const SampledSystem& system) {
  BasisRef basis;
  basis.source = BasisSource::sampled;
  basis.fingerprint = fingerprint(system);
  basis.dim = system.dim();
  basis.count = system.count();
  basis.field = system.field;
  return basis;
}

bool within(double recomputed, double stored) {
  return std::abs(recomputed - stored) <= kVerifyTol * std::max(1.0, std::abs(stored));
}

void check_certificate_shape(const DiscretizationCertificate& cert, VerificationReport& report) {
  if (cert.m != cert.point_indices.size() ||
      static_cast<std::size_t>(cert.points.cols()) != cert.point_indices.size()) {
    report.issues.push_back("point count does not match m");
  }
  if (cert.m == 0) report.issues.push_back("certificate selects no points");
  if (!cert.uniform_weights && cert.weights.size() != cert.point_indices.size()) {
    report.issues.push_back("weight count does not match point count");
  }
  for (const double w : cert.weights) {
    if (!(w >= 0.0)) report.issues.push_back("negative weight");
  }
}

void compare_constants(const DiscretizationCertificate& cert, VerificationReport& report) {
  if (!within(report.recomputed.lower, cert.constants.lower)) {
    report.issues.push_back("lower constant " + format_decimal(cert.constants.lower) +
                            " does not match recomputed " +
                            format_decimal(report.recomputed.lower));
  }
  if (!within(report.recomputed.upper, cert.constants.upper)) {
    report.issues.push_back("upper constant " + format_decimal(cert.constants.upper) +
                            " does not match recomputed " +
                            format_decimal(report.recomputed.upper));
  }
  if (!(report.recomputed.lower > 0.0)) {
    report.issues.push_back("recomputed lower constant is not positive");
  }
}

StageRecord halving_record(const HalvingCertificate& halving) {
  StageRecord record{"halving_select", {}};
  record.add("theta", halving.theta)
      .add("delta", halving.delta)
      .add("path", std::string(halving.fast_path() ? "fast" : "iterative"))
      .add("selected", halving.selected.size())
      .add("size_budget", halving.size_budget())
      .add("actual_lower", halving.actual.lower)
      .add("actual_upper", halving.actual.upper)
      .add("theoretical_lower", halving.theoretical_lower)
      .add("theoretical_upper", halving.theoretical_upper)
      .add("measured_c0", halving.measured_c0())
      .add("measured_C0", halving.measured_C0())
      .add("measured_C1", halving.measured_C1());
  if (halving.schedule) {
    record.add("L", halving.schedule->last_index);
    std::size_t candidates = 0;
    for (const auto& round : halving.rounds) candidates += round.candidates;
    record.add("candidates_examined", candidates);
  }
  return record;
}

CertificateSettings settings_from(const OracleConfig& oracle) {
  return {oracle.seed, oracle.strategy, oracle.budget};
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(CertificateKind kind) noexcept {
  switch (kind) {
    case CertificateKind::equal_weight: return "equal_weight";
    case CertificateKind::weighted: return "weighted";
    case CertificateKind::transferred: return "transferred";
  }
  return "unknown";
}

const char* to_string(BasisSource source) noexcept {
  return source == BasisSource::sampled ? "sampled" : "continuous";
}

StageRecord& StageRecord::add(std::string key, double value) {
  values.emplace_back(std::move(key), format_decimal(value));
  return *this;
}

StageRecord& StageRecord::add(std::string key, std::size_t value) {
  values.emplace_back(std::move(key), std::to_string(value));
  return *this;
}

StageRecord& StageRecord::add(std::string key, std::string value) {
  values.emplace_back(std::move(key), std::move(value));
  return *this;
}

const std::string* StageRecord::find(std::string_view key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::vector<double> DiscretizationCertificate::effective_weights() const {
  if (!uniform_weights) return weights;
  return std::vector<double>(point_indices.size(),
                             point_indices.empty() ? 0.0 : 1.0 / static_cast<double>(m));
}

// ---------------------------------------------------------------------------
// Condition E

NikolskiiReport condition_e_constant(const SampledSystem& system) {
  validate(system);
  NikolskiiReport report;
  report.residual = orthonormality_residual(system);
  if (report.residual > kConditionEResidual) {
    std::ostringstream msg;
    msg << "system is not orthonormal: |G - I| = " << report.residual;
    throw Error(ErrorCode::precondition, "condition_e_constant", msg.str());
  }
  const Eigen::VectorXd sums = system.values.colwise().squaredNorm().transpose();
  report.per_point_sums.assign(sums.begin(), sums.end());
  Eigen::Index argmax = 0;
  const double max_sum = sums.maxCoeff(&argmax);
  report.argmax = static_cast<std::size_t>(argmax);
  report.argmax_point = system.points.col(argmax);
  report.t_squared = max_sum / static_cast<double>(system.dim());
  report.t = std::sqrt(report.t_squared);
  return report;
}

double evaluation_norm(const SampledSystem& system, std::size_t point) {
  return system.values.col(static_cast<Eigen::Index>(point)).norm();
}

Eigen::VectorXcd extremal_coefficients(const SampledSystem& system, std::size_t point) {
  return system.values.col(static_cast<Eigen::Index>(point)).conjugate();
}

FrameSystem build_frame_from_samples(const SampledSystem& system) {
  validate(system);
  return FrameSystem(system.values * system.weights.cwiseSqrt().asDiagonal(), system.field);
}

// ---------------------------------------------------------------------------
// Sampling

ContinuousSystem resampling_system(const SampledSystem& system) {
  validate(system);
  ContinuousSystem out;
  out.family = "resample:" + fingerprint(system);
  out.dim = system.dim();
  out.field = system.field;
  out.point_dim = 1;
  std::vector<double> cumulative(system.count());
  std::partial_sum(system.weights.begin(), system.weights.end(), cumulative.begin());
  out.sampler = [cumulative](Rng& rng) {
    const double u = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto index = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                             cumulative.size() - 1);
    return Eigen::VectorXd::Constant(1, static_cast<double>(index));
  };
  out.evaluator = [values = system.values](const Eigen::VectorXd& point) -> Eigen::VectorXcd {
    const auto index = static_cast<Eigen::Index>(point(0));
    if (index < 0 || index >= values.cols() || static_cast<double>(index) != point(0)) {
      return Eigen::VectorXcd::Constant(values.rows(),
                                        Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
    }
    return values.col(index);
  };
  const double max_sum = system.values.colwise().squaredNorm().maxCoeff();
  out.nikolskii_t = std::sqrt(max_sum / static_cast<double>(system.dim()));
  return out;
}

Eigen::MatrixXcd evaluate(const ContinuousSystem& system, const Eigen::MatrixXd& points) {
  const auto n = static_cast<Eigen::Index>(system.dim);
  Eigen::MatrixXcd values(n, points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const Eigen::VectorXcd u = system.evaluator(points.col(j));
    if (u.size() != n) {
      throw Error(ErrorCode::input, "evaluate",
                  "evaluator returned " + std::to_string(u.size()) + " values, expected " +
                      std::to_string(n));
    }
    if (!u.allFinite()) {
      throw Error(ErrorCode::input, "evaluate",
                  "evaluator returned a non-finite value at sample " + std::to_string(j));
    }
    values.col(j) = u;
  }
  if (system.field == Field::real) values = values.real().cast<Complex>();
  return values;
}

RefinedSample monte_carlo_refine(const ContinuousSystem& system, double delta,
                                 std::uint64_t seed, std::size_t m_start, std::size_t m_cap) {
  constexpr const char* kStage = "monte_carlo_refine";
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::precondition, kStage, "delta must lie in (0, 1)");
  }
  if (m_start < 1 || m_start > m_cap) {
    throw Error(ErrorCode::precondition, kStage, "need 1 <= m_start <= m_cap");
  }
  if (system.dim < 1 || !system.sampler || !system.evaluator) {
    throw Error(ErrorCode::precondition, kStage, "continuous system is incomplete");
  }

  Rng rng(seed);
  const auto dim = static_cast<Eigen::Index>(system.point_dim);
  Eigen::MatrixXd points(dim, 0);
  RefinedSample result{SampledSystem{}, 0.0, {}};
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t m = m_start; m <= m_cap; m *= 2) {
    const Eigen::Index old_count = points.cols();
    points.conservativeResize(dim, static_cast<Eigen::Index>(m));
    for (Eigen::Index j = old_count; j < points.cols(); ++j) {
      const Eigen::VectorXd x = system.sampler(rng);
      if (x.size() != dim) {
        throw Error(ErrorCode::input, kStage, "sampler returned a point of wrong dimension");
      }
      points.col(j) = x;
    }
    Eigen::MatrixXcd values;
    try {
      values = evaluate(system, points);
    } catch (const Error& e) {
      throw e.within(kStage);
    }
    SampledSystem sample = make_sampled_system(std::move(values), points, system.field);
    const double deviation = orthonormality_residual(sample);
    result.history.emplace_back(m, deviation);
    best = std::min(best, deviation);
    if (deviation <= delta) {
      result.system = std::move(sample);
      result.deviation = deviation;
      return result;
    }
    if (m > m_cap / 2) break;
  }
  std::ostringstream msg;
  msg << "no sample up to M = " << m_cap << " reached |G - I| <= " << delta
      << "; best deviation " << best;
  throw Error(ErrorCode::refinement_failure, kStage, msg.str());
}

Reorthonormalized reorthonormalize(const SampledSystem& system) {
  constexpr const char* kStage = "reorthonormalize";
  validate(system);
  const Eigen::Index n = system.values.rows();
  const Eigen::MatrixXcd weighted = system.values * system.weights.cwiseSqrt().asDiagonal();

  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (!(sigma(0) > 0.0)) {
    throw Error(ErrorCode::input, kStage, "system spans the zero subspace");
  }
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > kRankThreshold * sigma(0)) ++rank;

  // Rows kept and the triangular factor of their weighted Gram, from a QR of
  // the transposed value matrix. Full rank keeps the original order so an
  // orthonormal input maps to the identity; rank loss pivots.
  Eigen::MatrixXcd r;
  Eigen::MatrixXcd selection = Eigen::MatrixXcd::Zero(rank, n);
  if (rank == n) {
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(weighted.adjoint());
    r = qr.matrixQR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
    selection.setIdentity();
  } else {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(weighted.adjoint());
    r = qr.matrixQR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>();
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = 0; k < rank; ++k) selection(k, perm(k)) = 1.0;
  }
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Complex diag = r(k, k);
    r.row(k) *= std::conj(diag) / std::abs(diag);
  }
  Eigen::MatrixXcd basis = r.adjoint().triangularView<Eigen::Lower>().solve(selection);

  // One Cholesky pass to polish orthonormality to working precision.
  Eigen::MatrixXcd values = basis * system.values;
  const Eigen::MatrixXcd gram = values * system.weights.asDiagonal() * values.adjoint();
  const Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (gram + gram.adjoint()));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::internal, kStage, "re-orthonormalized Gram is not positive definite");
  }
  basis = llt.matrixL().solve(basis);
  values = llt.matrixL().solve(values);
  if (system.field == Field::real) {
    basis = basis.real().cast<Complex>();
    values = values.real().cast<Complex>();
  }

  Reorthonormalized out{make_sampled_system(std::move(values), system.points, system.weights,
                                            system.field),
                        std::move(basis), static_cast<std::size_t>(rank)};
  return out;
}

// ---------------------------------------------------------------------------
// Constants and verification

FrameBounds discretization_constants(const SampledSystem& system,
                                     std::span<const std::size_t> point_indices,
                                     std::span<const double> weights) {
  constexpr const char* kStage = "discretization_constants";
  if (point_indices.size() != weights.size()) {
    throw Error(ErrorCode::input, kStage, "one weight per point required");
  }
  const Reorthonormalized basis = reorthonormalize(system);
  Eigen::MatrixXcd values(basis.system.values.rows(),
                          static_cast<Eigen::Index>(point_indices.size()));
  for (std::size_t k = 0; k < point_indices.size(); ++k) {
    if (point_indices[k] >= system.count()) {
      throw Error(ErrorCode::input, kStage,
                  "point index " + std::to_string(point_indices[k]) + " out of range");
    }
    values.col(static_cast<Eigen::Index>(k)) =
        basis.system.values.col(static_cast<Eigen::Index>(point_indices[k]));
  }
  return extreme_eigenvalues(weighted_gram(values, weights, system.field));
}

FrameBounds discretization_constants(const ContinuousSystem& system, const Eigen::MatrixXd& points,
                                     std::span<const double> weights) {
  if (static_cast<std::size_t>(points.cols()) != weights.size()) {
    throw Error(ErrorCode::input, "discretization_constants", "one weight per point required");
  }
  return extreme_eigenvalues(weighted_gram(evaluate(system, points), weights, system.field));
}

VerificationReport verify_certificate(const DiscretizationCertificate& cert,
                                      const SampledSystem& system) {
  VerificationReport report;
  if (cert.basis.source != BasisSource::sampled) {
    report.issues.push_back("certificate was issued for a continuous system");
    return report;
  }
  if (cert.basis.fingerprint != fingerprint(system)) {
    report.issues.push_back("system fingerprint does not match certificate");
    return report;
  }
  check_certificate_shape(cert, report);
  for (std::size_t k = 0; k < cert.point_indices.size(); ++k) {
    const std::size_t j = cert.point_indices[k];
    if (j >= system.count()) {
      report.issues.push_back("point index " + std::to_string(j) + " out of range");
    } else if (k < static_cast<std::size_t>(cert.points.cols()) &&
               (cert.points.rows() != system.points.rows() ||
                cert.points.col(static_cast<Eigen::Index>(k)) !=
                    system.points.col(static_cast<Eigen::Index>(j)))) {
      report.issues.push_back("coordinates of point " + std::to_string(j) +
                              " differ from the system");
    }
  }
  if (!report.issues.empty()) return report;
  report.recomputed = discretization_constants(system, cert.point_indices, cert.effective_weights());
  compare_constants(cert, report);
  report.passed = report.issues.empty();
  return report;
}

VerificationReport verify_certificate(const DiscretizationCertificate& cert,
                                      const ContinuousSystem& system) {
  VerificationReport report;
  if (cert.basis.source != BasisSource::continuous) {
    report.issues.push_back("certificate was issued for a sampled system");
    return report;
  }
  if (cert.basis.family != system.family || cert.basis.fingerprint != sha256_hex(system.family)) {
    report.issues.push_back("continuous family does not match certificate");
    return report;
  }
  check_certificate_shape(cert, report);
  if (!report.issues.empty()) return report;
  report.recomputed = discretization_constants(system, cert.points, cert.effective_weights());
  compare_constants(cert, report);
  report.passed = report.issues.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Pipelines

EqualWeightSelection select_equal_weight(const SampledSystem& system, const OracleConfig& oracle,
                                         std::optional<double> theta) {
  constexpr const char* kStage = "discretize_equal_weight";
  validate(system);
  if (!system.uniform_weights()) {
    throw Error(ErrorCode::precondition, kStage, "equal-weight selection needs uniform weights");
  }
  EqualWeightSelection out;
  try {
    out.nikolskii = condition_e_constant(system);
  } catch (const Error& e) {
    throw e.within(kStage);
  }
  if (out.nikolskii.residual > kOrthonormalTol) {
    std::ostringstream msg;
    msg << "system is not orthonormal within " << kOrthonormalTol << ": |G - I| = "
        << out.nikolskii.residual;
    throw Error(ErrorCode::precondition, kStage, msg.str());
  }
  const double used_theta = theta.value_or(out.nikolskii.t_squared);

  const FrameSystem frame = build_frame_from_samples(system);
  try {
    out.halving = halving_select(frame, used_theta, oracle);
  } catch (const Error& e) {
    throw e.within(kStage);
  }

  DiscretizationCertificate& cert = out.certificate;
  cert.kind = CertificateKind::equal_weight;
  cert.basis = sampled_basis(system);
  cert.point_indices = out.halving.selected;
  cert.points = select_columns(system.points, cert.point_indices);
  cert.uniform_weights = true;
  cert.m = cert.point_indices.size();
  cert.size_budget = out.halving.size_budget();
  cert.settings = settings_from(oracle);
  if (cert.m == 0 || cert.m > cert.size_budget) {
    throw Error(ErrorCode::internal, kStage, "selected point count escapes its budget");
  }
  cert.constants = discretization_constants(system, cert.point_indices, cert.effective_weights());
  if (!(cert.constants.lower > 0.0)) {
    throw Error(ErrorCode::internal, kStage, "discretized Gram is singular");
  }

  StageRecord nikolskii{"condition_e", {}};
  nikolskii.add("t", out.nikolskii.t)
      .add("t_squared", out.nikolskii.t_squared)
      .add("argmax", out.nikolskii.argmax)
      .add("residual", out.nikolskii.residual);
  cert.log.push_back(std::move(nikolskii));
  cert.log.push_back(halving_record(out.halving));
  StageRecord constants{"constants", {}};
  constants.add("m", cert.m).add("c", cert.constants.lower).add("C", cert.constants.upper);
  cert.log.push_back(std::move(constants));
  return out;
}

DiscretizationCertificate discretize_equal_weight(const SampledSystem& system,
                                                  const OracleConfig& oracle,
                                                  std::optional<double> theta) {
  return select_equal_weight(system, oracle, theta).certificate;
}

DiscretizationCertificate discretize_continuous(const ContinuousSystem& system,
                                                const ContinuousOptions& options) {
  constexpr const char* kStage = "discretize_continuous";
  RefinedSample sample;
  try {
    sample = monte_carlo_refine(system, options.delta, derive_seed(options.oracle.seed, 0),
                                options.m_start, options.m_cap);
  } catch (const Error& e) {
    throw e.within(kStage);
  }

  Reorthonormalized restricted;
  NikolskiiReport exact;
  try {
    restricted = reorthonormalize(sample.system);
    exact = condition_e_constant(restricted.system);
  } catch (const Error& e) {
    throw e.within(kStage);
  }

  // Sup-norm constant of the original basis: exact when the family knows it,
  // otherwise the largest value seen on the sample (a lower estimate).
  const double sample_t = std::sqrt(sample.system.values.colwise().squaredNorm().maxCoeff() /
                                    static_cast<double>(system.dim));
  const double t = system.nikolskii_t.value_or(sample_t);
  const double theta = std::min(4.0 * t * t, exact.t_squared);

  EqualWeightSelection selection;
  try {
    selection = select_equal_weight(restricted.system, options.oracle, theta);
  } catch (const Error& e) {
    throw e.within(kStage);
  }

  DiscretizationCertificate cert;
  cert.kind = CertificateKind::equal_weight;
  cert.basis.source = BasisSource::continuous;
  cert.basis.family = system.family;
  cert.basis.fingerprint = sha256_hex(system.family);
  cert.basis.dim = system.dim;
  cert.basis.count = sample.system.count();
  cert.basis.field = system.field;
  cert.point_indices = selection.certificate.point_indices;
  cert.points = select_columns(sample.system.points, cert.point_indices);
  cert.uniform_weights = true;
  cert.m = cert.point_indices.size();
  cert.size_budget = selection.certificate.size_budget;
  cert.settings = settings_from(options.oracle);

  const FrameBounds sampled = selection.certificate.constants;
  const FrameBounds pulled{sampled.lower * (1.0 - sample.deviation),
                           sampled.upper * (1.0 + sample.deviation)};
  cert.constants = discretization_constants(system, cert.points, cert.effective_weights());
  if (cert.constants.lower < pulled.lower - kVerifyTol ||
      cert.constants.upper > pulled.upper + kVerifyTol) {
    std::ostringstream msg;
    msg << "continuous constants [" << cert.constants.lower << ", " << cert.constants.upper
        << "] escape the pulled-back interval [" << pulled.lower << ", " << pulled.upper << "]";
    throw Error(ErrorCode::internal, kStage, msg.str());
  }

  StageRecord refine{"monte_carlo_refine", {}};
  refine.add("delta", options.delta)
      .add("M", sample.system.count())
      .add("deviation", sample.deviation)
      .add("attempts", sample.history.size());
  cert.log.push_back(std::move(refine));
  StageRecord reortho{"reorthonormalize", {}};
  reortho.add("rank", restricted.rank)
      .add("t_reference", t)
      .add("t_reference_source", std::string(system.nikolskii_t ? "exact" : "sample"))
      .add("t_sample_exact", exact.t)
      .add("theta", theta);
  cert.log.push_back(std::move(reortho));
  for (const auto& record : selection.certificate.log) cert.log.push_back(record);
  StageRecord pullback{"pullback", {}};
  pullback.add("sample_c", sampled.lower)
      .add("sample_C", sampled.upper)
      .add("pulled_c", pulled.lower)
      .add("pulled_C", pulled.upper)
      .add("c", cert.constants.lower)
      .add("C", cert.constants.upper);
  cert.log.push_back(std::move(pullback));
  return cert;
}

DiscretizationCertificate discretize_weighted(const SampledSystem& system,
                                              const OracleConfig& oracle) {
  constexpr const char* kStage = "discretize_weighted";
  validate(system);

  const double residual = orthonormality_residual(system);
  Reorthonormalized orthonormal;
  const SampledSystem* basis = &system;
  if (residual > kOrthonormalTol) {
    try {
      orthonormal = reorthonormalize(system);
    } catch (const Error& e) {
      throw e.within(kStage);
    }
    basis = &orthonormal.system;
  }

  // Points where every basis function vanishes carry no information.
  IndexSet live;
  for (std::size_t j = 0; j < basis->count(); ++j) {
    if (basis->values.col(static_cast<Eigen::Index>(j)).squaredNorm() > 0.0 &&
        basis->weights(static_cast<Eigen::Index>(j)) > 0.0) {
      live.push_back(j);
    }
  }
  Eigen::MatrixXcd vectors(basis->values.rows(), static_cast<Eigen::Index>(live.size()));
  for (std::size_t k = 0; k < live.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(live[k]);
    vectors.col(static_cast<Eigen::Index>(k)) = basis->values.col(j) * std::sqrt(basis->weights(j));
  }
  const FrameSystem frame(std::move(vectors), system.field);

  WeightedCertificate weighted;
  try {
    weighted = weighted_select(frame, oracle);
  } catch (const Error& e) {
    throw e.within(kStage);
  }

  DiscretizationCertificate cert;
  cert.kind = CertificateKind::weighted;
  cert.basis = sampled_basis(system);
  cert.uniform_weights = false;
  for (const std::size_t k : weighted.support) {
    const std::size_t j = live[k];
    cert.point_indices.push_back(j);
    cert.weights.push_back(weighted.weights[k] * system.weights(static_cast<Eigen::Index>(j)));
  }
  cert.points = select_columns(system.points, cert.point_indices);
  cert.m = cert.point_indices.size();
  cert.size_budget = weighted.support_budget;
  cert.settings = settings_from(oracle);
  cert.constants = discretization_constants(system, cert.point_indices, cert.weights);
  if (!(cert.constants.lower > 0.0)) {
    throw Error(ErrorCode::internal, kStage, "weighted Gram is singular");
  }

  StageRecord prep{"orthonormal_basis", {}};
  prep.add("residual", residual)
      .add("reorthonormalized", std::string(basis == &system ? "no" : "yes"))
      .add("rank", basis->dim())
      .add("live_points", live.size());
  cert.log.push_back(std::move(prep));
  StageRecord dup{"duplicate_normalize", {}};
  dup.add("M_prime", weighted.duplication.total)
      .add("anchor", live[weighted.duplication.anchor])
      .add("scale", weighted.scale);
  cert.log.push_back(std::move(dup));
  cert.log.push_back(halving_record(weighted.halving));
  StageRecord constants{"constants", {}};
  constants.add("support", cert.m)
      .add("frame_lower", weighted.bounds.lower)
      .add("frame_upper", weighted.bounds.upper)
      .add("c", cert.constants.lower)
      .add("C", cert.constants.upper);
  cert.log.push_back(std::move(constants));
  return cert;
}

RealAssociate complexify_via_real(const SampledSystem& complex_system) {
  constexpr const char* kStage = "complexify_via_real";
  validate(complex_system);
  if (complex_system.field != Field::complex) {
    throw Error(ErrorCode::precondition, kStage, "input system must be complex-tagged");
  }
  const Eigen::Index n = complex_system.values.rows();
  Eigen::MatrixXcd stacked(2 * n, complex_system.values.cols());
  stacked.topRows(n) = complex_system.values.real().cast<Complex>();
  stacked.bottomRows(n) = complex_system.values.imag().cast<Complex>();
  const SampledSystem real_parts = make_sampled_system(
      std::move(stacked), complex_system.points, complex_system.weights, Field::real);

  Reorthonormalized basis;
  try {
    basis = reorthonormalize(real_parts);
  } catch (const Error& e) {
    throw e.within(kStage);
  }
  RealAssociate out;
  out.rank = basis.rank;
  out.change_of_basis = std::move(basis.change_of_basis);
  out.complex_fingerprint = fingerprint(complex_system);
  out.real_fingerprint = fingerprint(basis.system);
  out.real_system = std::move(basis.system);
  return out;
}

DiscretizationCertificate transfer_certificate(const DiscretizationCertificate& real_cert,
                                               const SampledSystem& complex_system,
                                               const RealAssociate& mapping) {
  constexpr const char* kStage = "transfer_certificate";
  if (real_cert.basis.source != BasisSource::sampled ||
      real_cert.basis.fingerprint != mapping.real_fingerprint) {
    throw Error(ErrorCode::mapping_mismatch, kStage,
                "certificate was not issued for the real associate system");
  }
  if (fingerprint(complex_system) != mapping.complex_fingerprint) {
    throw Error(ErrorCode::mapping_mismatch, kStage,
                "complex system does not match the mapping");
  }

  DiscretizationCertificate cert = real_cert;
  cert.kind = CertificateKind::transferred;
  cert.basis = sampled_basis(complex_system);
  cert.constants =
      discretization_constants(complex_system, cert.point_indices, cert.effective_weights());
  if (cert.constants.lower < real_cert.constants.lower - kVerifyTol ||
      cert.constants.upper > real_cert.constants.upper + kVerifyTol) {
    std::ostringstream msg;
    msg << "complex constants [" << cert.constants.lower << ", " << cert.constants.upper
        << "] leave the real interval [" << real_cert.constants.lower << ", "
        << real_cert.constants.upper << "]";
    throw Error(ErrorCode::internal, kStage, msg.str());
  }
  StageRecord transfer{"transfer", {}};
  transfer.add("real_rank", mapping.rank)
      .add("real_c", real_cert.constants.lower)
      .add("real_C", real_cert.constants.upper)
      .add("c", cert.constants.lower)
      .add("C", cert.constants.upper);
  cert.log.push_back(std::move(transfer));
  return cert;
}

}  // namespace sampdisc
