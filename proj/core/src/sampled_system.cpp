#include "sampdisc/sampled_system.hpp"

#include <cmath>
#include <memory>

#include <openssl/evp.h>

#include "sampdisc/decimal.hpp"
#include "sampdisc/error.hpp"

namespace sampdisc {

namespace {

constexpr const char* kStage = "sampled_system";
constexpr double kMeasureTol = 1e-12;

}  // namespace

bool SampledSystem::uniform_weights() const {
  const double expected = 1.0 / static_cast<double>(count());
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (std::abs(weights(j) - expected) > kMeasureTol * expected) return false;
  }
  return true;
}

SampledSystem make_sampled_system(Eigen::MatrixXcd values, Eigen::MatrixXd points, Field field) {
  const Eigen::Index m = values.cols();
  Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(m, m > 0 ? 1.0 / static_cast<double>(m) : 0.0);
  return make_sampled_system(std::move(values), std::move(points), std::move(weights), field);
}

SampledSystem make_sampled_system(Eigen::MatrixXcd values, Eigen::MatrixXd points,
                                  Eigen::VectorXd weights, Field field) {
  SampledSystem system{std::move(values), std::move(points), std::move(weights), field};
  validate(system);
  return system;
}

void validate(const SampledSystem& system) {
  if (system.values.rows() < 1 || system.values.cols() < 1) {
    throw Error(ErrorCode::input, kStage, "system needs N >= 1 functions and M >= 1 points");
  }
  if (system.points.cols() != system.values.cols()) {
    throw Error(ErrorCode::input, kStage, "point count differs from value columns");
  }
  if (system.weights.size() != system.values.cols()) {
    throw Error(ErrorCode::input, kStage, "weight count differs from point count");
  }
  for (Eigen::Index j = 0; j < system.values.cols(); ++j) {
    if (!(system.weights(j) >= 0.0) || !std::isfinite(system.weights(j))) {
      throw Error(ErrorCode::input, kStage,
                  "weight of point " + std::to_string(j) + " is negative or non-finite");
    }
    for (Eigen::Index i = 0; i < system.values.rows(); ++i) {
      const Complex z = system.values(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::input, kStage,
                    "non-finite value at function " + std::to_string(i) + ", point " +
                        std::to_string(j));
      }
      if (system.field == Field::real && z.imag() != 0.0) {
        throw Error(ErrorCode::input, kStage,
                    "real-tagged system has imaginary part at point " + std::to_string(j));
      }
    }
  }
  if (std::abs(system.weights.sum() - 1.0) > kMeasureTol) {
    throw Error(ErrorCode::input, kStage, "point weights must sum to 1");
  }
}

HermitianMatrix gram_matrix(const SampledSystem& system) {
  return HermitianMatrix(system.values * system.weights.asDiagonal() * system.values.adjoint(),
                         system.field);
}

double orthonormality_residual(const SampledSystem& system) {
  Eigen::MatrixXcd deviation = gram_matrix(system).entries();
  deviation.diagonal().array() -= 1.0;
  const FrameBounds b = extreme_eigenvalues(HermitianMatrix(std::move(deviation), system.field));
  return std::max(std::abs(b.lower), std::abs(b.upper));
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw Error(ErrorCode::internal, kStage, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) {
    hex.push_back(kHex[digest[k] >> 4]);
    hex.push_back(kHex[digest[k] & 0xF]);
  }
  return hex;
}

std::string fingerprint(const SampledSystem& system) {
  std::string text;
  text += "sampdisc-system/1;";
  text += to_string(system.field);
  text += ";N=" + std::to_string(system.dim()) + ";M=" + std::to_string(system.count()) +
          ";d=" + std::to_string(system.points.rows()) + "\n";
  for (Eigen::Index j = 0; j < system.values.cols(); ++j) {
    text += format_decimal(system.weights(j));
    for (Eigen::Index r = 0; r < system.points.rows(); ++r) {
      text += ',' + format_decimal(system.points(r, j));
    }
    for (Eigen::Index i = 0; i < system.values.rows(); ++i) {
      text += ',' + format_decimal(system.values(i, j).real());
      if (system.field == Field::complex) text += ',' + format_decimal(system.values(i, j).imag());
    }
    text += '\n';
  }
  return sha256_hex(text);
}

}  // namespace sampdisc
