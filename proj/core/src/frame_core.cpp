#include "sampdisc/frame_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sampdisc/error.hpp"

namespace sampdisc {

namespace {

constexpr const char* kStage = "frame_core";

Eigen::MatrixXcd gather(const FrameSystem& frame, std::span<const std::size_t> subset) {
  Eigen::MatrixXcd columns(static_cast<Eigen::Index>(frame.dim()),
                           static_cast<Eigen::Index>(subset.size()));
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] >= frame.count()) {
      throw Error(ErrorCode::precondition, kStage,
                  "subset index " + std::to_string(subset[k]) + " out of range for " +
                      std::to_string(frame.count()) + " vectors");
    }
    columns.col(static_cast<Eigen::Index>(k)) = frame.vector(subset[k]);
  }
  return columns;
}

}  // namespace

const char* to_string(Field field) noexcept {
  return field == Field::real ? "real" : "complex";
}

FrameSystem::FrameSystem(Eigen::MatrixXcd vectors, Field field)
    : vectors_(std::move(vectors)), field_(field) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1) {
    throw Error(ErrorCode::input, kStage, "frame needs N >= 1 and M >= 1");
  }
  for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
      const Complex z = vectors_(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::input, kStage,
                    "non-finite entry in vector " + std::to_string(j));
      }
      if (field_ == Field::real && z.imag() != 0.0) {
        throw Error(ErrorCode::input, kStage,
                    "real-tagged frame has imaginary part in vector " + std::to_string(j));
      }
    }
  }
}

FrameSystem FrameSystem::from_real(const Eigen::MatrixXd& vectors) {
  return FrameSystem(vectors.cast<Complex>(), Field::real);
}

double FrameSystem::max_norm2() const {
  return vectors_.colwise().squaredNorm().maxCoeff();
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd entries, Field field) : field_(field) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorCode::input, kStage, "Hermitian matrix must be square");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
  if (field_ == Field::real) entries_ = entries_.real().cast<Complex>();
}

std::vector<double> eigenvalues(const HermitianMatrix& matrix) {
  Eigen::VectorXd values;
  if (matrix.field() == Field::real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.entries().real(),
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::eigensolver, kStage, "symmetric eigensolver did not converge");
    }
    values = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix.entries(),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::eigensolver, kStage, "Hermitian eigensolver did not converge");
    }
    values = solver.eigenvalues();
  }
  return {values.begin(), values.end()};
}

FrameBounds extreme_eigenvalues(const HermitianMatrix& matrix) {
  const auto values = eigenvalues(matrix);
  return {values.front(), values.back()};
}

FrameBounds extreme_generalized_eigenvalues(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::input, kStage, "pencil dimensions differ");
  }
  // Reduce to a standard problem through the Cholesky factor of B.
  Eigen::LLT<Eigen::MatrixXcd> llt(b.entries());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver, kStage, "pencil metric is not positive definite");
  }
  const auto lower = llt.matrixL();
  Eigen::MatrixXcd reduced = lower.solve(a.entries());
  reduced = lower.solve(reduced.adjoint().eval()).adjoint();
  const Field field =
      (a.field() == Field::real && b.field() == Field::real) ? Field::real : Field::complex;
  return extreme_eigenvalues(HermitianMatrix(std::move(reduced), field));
}

HermitianMatrix frame_operator(const FrameSystem& frame) {
  return HermitianMatrix(frame.vectors() * frame.vectors().adjoint(), frame.field());
}

HermitianMatrix subset_operator(const FrameSystem& frame, std::span<const std::size_t> subset) {
  const Eigen::MatrixXcd columns = gather(frame, subset);
  return HermitianMatrix(columns * columns.adjoint(), frame.field());
}

HermitianMatrix weighted_operator(const FrameSystem& frame, std::span<const double> weights) {
  if (weights.size() != frame.count()) {
    throw Error(ErrorCode::input, kStage, "one weight per frame vector required");
  }
  Eigen::MatrixXcd scaled = frame.vectors();
  for (std::size_t j = 0; j < weights.size(); ++j) {
    scaled.col(static_cast<Eigen::Index>(j)) *= weights[j];
  }
  return HermitianMatrix(scaled * frame.vectors().adjoint(), frame.field());
}

FrameBounds frame_bounds(const FrameSystem& frame) {
  return extreme_eigenvalues(frame_operator(frame));
}

bool verify_tight(const FrameSystem& frame, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::precondition, kStage, "tolerance must be positive");
  const FrameBounds bounds = frame_bounds(frame);
  return bounds.lower >= 1.0 - tol && bounds.upper <= 1.0 + tol;
}

FrameBounds subset_bounds(const FrameSystem& frame, std::span<const std::size_t> subset) {
  if (subset.empty()) return {0.0, 0.0};
  return extreme_eigenvalues(subset_operator(frame, subset));
}

}  // namespace sampdisc
