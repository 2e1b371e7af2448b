#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "sampdisc/frame_core.hpp"

namespace sampdisc {

/// An N-function system sampled on M weighted points.
///
/// values(i, j) = u_i(x^j); points holds one coordinate column per point;
/// weights is the discrete probability measure (sums to 1 within 1e-12).
struct SampledSystem {
  Eigen::MatrixXcd values;
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
  Field field = Field::complex;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t count() const noexcept { return static_cast<std::size_t>(values.cols()); }
  bool uniform_weights() const;
};

/// Validating constructor; weights default to 1/M.
SampledSystem make_sampled_system(Eigen::MatrixXcd values, Eigen::MatrixXd points,
                                  Field field = Field::complex);
SampledSystem make_sampled_system(Eigen::MatrixXcd values, Eigen::MatrixXd points,
                                  Eigen::VectorXd weights, Field field);

/// Throws ErrorCode::input on inconsistent shapes, non-finite values, a bad
/// measure, or imaginary parts in a real-tagged system.
void validate(const SampledSystem& system);

/// G_ik = sum_j w_j u_i(x^j) conj(u_k(x^j)).
HermitianMatrix gram_matrix(const SampledSystem& system);

/// Spectral norm of G - I.
double orthonormality_residual(const SampledSystem& system);

/// Hex SHA-256 of a canonical decimal serialization of the system.
std::string fingerprint(const SampledSystem& system);

/// Hex SHA-256 of an arbitrary string (used for continuous-system tags).
std::string sha256_hex(const std::string& bytes);

}  // namespace sampdisc
