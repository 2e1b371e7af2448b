#pragma once

// Dense Hermitian linear algebra for finite frames.
//
// A frame is stored as an N x M matrix whose columns are the vectors v_j.
// Real-tagged frames run through real symmetric solvers; the semantics are
// identical to the complex path (conjugation is the identity).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sampdisc {

using Complex = std::complex<double>;
using IndexSet = std::vector<std::size_t>;

enum class Field { real, complex };

const char* to_string(Field field) noexcept;

/// Extreme constants A <= B of a two-sided quadratic-form bound.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

class FrameSystem {
 public:
  /// Columns of `vectors` are the frame vectors. Throws on empty shape,
  /// non-finite entries, or a real tag with nonzero imaginary parts.
  explicit FrameSystem(Eigen::MatrixXcd vectors, Field field = Field::complex);

  static FrameSystem from_real(const Eigen::MatrixXd& vectors);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.rows()); }
  std::size_t count() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }
  Field field() const noexcept { return field_; }
  const Eigen::MatrixXcd& vectors() const noexcept { return vectors_; }

  auto vector(std::size_t j) const { return vectors_.col(static_cast<Eigen::Index>(j)); }
  double norm2(std::size_t j) const { return vector(j).squaredNorm(); }
  double max_norm2() const;

 private:
  Eigen::MatrixXcd vectors_;
  Field field_;
};

/// Hermitian by construction: the input is replaced by (S + S*)/2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd entries, Field field = Field::complex);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  Field field() const noexcept { return field_; }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  double trace() const { return entries_.trace().real(); }

 private:
  Eigen::MatrixXcd entries_;
  Field field_;
};

/// Ascending eigenvalues from a dense solver. Throws ErrorCode::eigensolver if
/// the solver does not converge.
std::vector<double> eigenvalues(const HermitianMatrix& matrix);

FrameBounds extreme_eigenvalues(const HermitianMatrix& matrix);

/// Extreme eigenvalues of the pencil (A, B), i.e. the range of
/// (x* A x) / (x* B x). B must be positive definite.
FrameBounds extreme_generalized_eigenvalues(const HermitianMatrix& a, const HermitianMatrix& b);

/// S = sum_j v_j v_j*.
HermitianMatrix frame_operator(const FrameSystem& frame);

/// sum_{j in subset} v_j v_j*. Indices must be in range.
HermitianMatrix subset_operator(const FrameSystem& frame, std::span<const std::size_t> subset);

/// sum_j weights[j] v_j v_j*; one weight per vector.
HermitianMatrix weighted_operator(const FrameSystem& frame, std::span<const double> weights);

/// (min, max) eigenvalue of the frame operator.
FrameBounds frame_bounds(const FrameSystem& frame);

/// True iff both frame bounds lie in [1 - tol, 1 + tol].
bool verify_tight(const FrameSystem& frame, double tol);

/// Extreme eigenvalues of the un-rescaled subset operator; (0, 0) for an
/// empty subset.
FrameBounds subset_bounds(const FrameSystem& frame, std::span<const std::size_t> subset);

}  // namespace sampdisc
