#pragma once

#include <Eigen/Dense>

#include "oracles.hpp"
#include "sampdisc/frame_core.hpp"

namespace support {

inline oracle::Mat to_mat(const Eigen::MatrixXcd& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    }
  }
  return out;
}

inline Eigen::MatrixXcd to_eigen(const oracle::Mat& m) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  for (std::size_t j = 0; j < m.cols; ++j) {
    for (std::size_t i = 0; i < m.rows; ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    }
  }
  return out;
}

inline sampdisc::FrameSystem random_tight(std::size_t n, std::size_t m, sampdisc::Rng& rng,
                                          bool complex = true) {
  return sampdisc::FrameSystem(to_eigen(oracle::random_tight_frame(n, m, rng, complex)),
                               complex ? sampdisc::Field::complex : sampdisc::Field::real);
}

/// Columns of M^{-1/2} times the first N rows of the M-point unitary DFT.
inline sampdisc::FrameSystem dft_frame(std::size_t n, std::size_t m) {
  Eigen::MatrixXcd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  const double pi = 3.14159265358979323846;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double phase = 2.0 * pi * static_cast<double>((k * j) % m) / static_cast<double>(m);
      v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          std::polar(1.0 / std::sqrt(static_cast<double>(m)), phase);
    }
  }
  return sampdisc::FrameSystem(std::move(v));
}

/// Columns of M^{-1/2} times the first N rows of the Sylvester Hadamard matrix.
inline sampdisc::FrameSystem walsh_frame(std::size_t n, std::size_t m) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      int parity = 0;
      for (std::size_t b = i & j; b; b >>= 1) parity ^= static_cast<int>(b & 1);
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (parity ? -1.0 : 1.0) / std::sqrt(static_cast<double>(m));
    }
  }
  return sampdisc::FrameSystem::from_real(v);
}

}  // namespace support
