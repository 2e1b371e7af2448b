#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sampdisc/error.hpp"
#include "sampdisc/frame_core.hpp"
#include "support.hpp"

using namespace sampdisc;

TEST_SUITE("frame_core") {

TEST_CASE("canonical basis gives the identity operator and bounds (1, 1)") {
  for (std::size_t n : {1, 2, 5}) {
    const FrameSystem frame(Eigen::MatrixXcd::Identity(n, n));
    const auto s = frame_operator(frame).entries();
    CHECK((s - Eigen::MatrixXcd::Identity(n, n)).norm() == doctest::Approx(0.0));
    const FrameBounds b = frame_bounds(frame);
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(verify_tight(frame, 1e-12));
  }
}

TEST_CASE("two halves of e1 in C^1 sum to one") {
  Eigen::MatrixXcd v(1, 2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto s = frame_operator(FrameSystem(v)).entries();
  CHECK(std::abs(s(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("operator matches explicit outer-product accumulation") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd v(2, 3);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
    const auto s = frame_operator(FrameSystem(v)).entries();
    const oracle::Mat ref = oracle::outer_sum(support::to_mat(v), oracle::all_indices(3));
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        CHECK(std::abs(s(a, b) - ref(a, b)) < 1e-14 * (1.0 + std::abs(ref(a, b))));
      }
    }
  }
}

TEST_CASE("{e1, e1, e2} has bounds (1, 2)") {
  Eigen::MatrixXd v(2, 3);
  v << 1, 1, 0, 0, 0, 1;
  const FrameBounds b = frame_bounds(FrameSystem::from_real(v));
  CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("2x2 bounds agree with the characteristic polynomial") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  // S = [[3/2, 1/2], [1/2, 1/2]]: trace 2, determinant 1/2.
  const double tr = 2.0;
  const double det = 0.5;
  const double disc = std::sqrt(tr * tr / 4.0 - det);
  const FrameBounds b = frame_bounds(FrameSystem::from_real(v));
  CHECK(b.lower == doctest::Approx(tr / 2 - disc).epsilon(1e-14));
  CHECK(b.upper == doctest::Approx(tr / 2 + disc).epsilon(1e-14));
  CHECK(b.lower == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("verify_tight") {
  SUBCASE("rank-deficient single vector") {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(2, 1);
    v(0, 0) = 1.0;
    CHECK_FALSE(verify_tight(FrameSystem(v), 1e-8));
  }
  SUBCASE("scaled DFT columns") {
    CHECK(verify_tight(support::dft_frame(4, 16), 1e-12));
    CHECK(verify_tight(support::dft_frame(7, 7), 1e-12));
  }
  SUBCASE("nonpositive tolerance is rejected") {
    CHECK_THROWS_AS(verify_tight(support::dft_frame(2, 4), 0.0), Error);
  }
}

TEST_CASE("subset bounds") {
  Eigen::MatrixXd v(2, 3);
  v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0, 0, 0, 1;
  const FrameSystem frame = FrameSystem::from_real(v);
  const std::vector<std::size_t> all{0, 1, 2};
  const std::vector<std::size_t> one{0};
  const std::vector<std::size_t> none{};
  FrameBounds b = subset_bounds(frame, all);
  CHECK(b.lower == doctest::Approx(1.0));
  CHECK(b.upper == doctest::Approx(1.0));
  b = subset_bounds(frame, none);
  CHECK(b.lower == 0.0);
  CHECK(b.upper == 0.0);
  b = subset_bounds(frame, one);
  CHECK(std::abs(b.lower) < 1e-15);
  CHECK(b.upper == doctest::Approx(0.5).epsilon(1e-14));
  const std::vector<std::size_t> bad{3};
  CHECK_THROWS_AS(subset_bounds(frame, bad), Error);
}

TEST_CASE("eigenvalues agree with the Jacobi oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const std::size_t m = 1 + rng.below(8);
    Eigen::MatrixXcd v(n, m);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
    const FrameSystem frame(v);
    const auto ours = eigenvalues(frame_operator(frame));
    const auto ref = oracle::hermitian_eigenvalues(
        oracle::outer_sum(support::to_mat(v), oracle::all_indices(m)));
    REQUIRE(ours.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(std::abs(ours[k] - ref[k]) < 1e-10 * (1.0 + std::abs(ref.back())));
    }
  }
}

TEST_CASE("real path agrees with the complex path") {
  Rng rng(8);
  Eigen::MatrixXd v(3, 7);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  const FrameBounds real = frame_bounds(FrameSystem::from_real(v));
  const FrameBounds complex = frame_bounds(FrameSystem(v.cast<Complex>()));
  CHECK(real.lower == doctest::Approx(complex.lower).epsilon(1e-12));
  CHECK(real.upper == doctest::Approx(complex.upper).epsilon(1e-12));
}

TEST_CASE("invalid frames are rejected") {
  CHECK_THROWS_AS(FrameSystem(Eigen::MatrixXcd(0, 3)), Error);
  CHECK_THROWS_AS(FrameSystem(Eigen::MatrixXcd(2, 0)), Error);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(2, 2);
  v(0, 1) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(FrameSystem(v, Field::real), Error);
  v(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(FrameSystem{v}, Error);
}

TEST_CASE("generalized eigenvalues of a diagonal pencil") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 9.0;
  b(0, 0) = 4.0;
  b(1, 1) = 3.0;
  const FrameBounds g = extreme_generalized_eigenvalues(HermitianMatrix(a), HermitianMatrix(b));
  CHECK(g.lower == doctest::Approx(0.5));
  CHECK(g.upper == doctest::Approx(3.0));
  b(1, 1) = -1.0;
  CHECK_THROWS_AS(extreme_generalized_eigenvalues(HermitianMatrix(a), HermitianMatrix(b)), Error);
}

TEST_CASE("property: operator is positive semidefinite") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const std::size_t m = 1 + rng.below(10);
    Eigen::MatrixXcd v(n, m);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
    const FrameBounds b = frame_bounds(FrameSystem(v));
    CHECK(b.lower >= -1e-12 * b.upper);
  }
}

TEST_CASE("property: frame sums of unit vectors lie between the bounds") {
  Rng rng(22);
  Eigen::MatrixXcd v(3, 9);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
  const FrameSystem frame(v);
  const FrameBounds b = frame_bounds(frame);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXcd w(3);
    for (Eigen::Index i = 0; i < 3; ++i) w(i) = Complex(rng.normal(), rng.normal());
    w.normalize();
    const double sum = (v.adjoint() * w).squaredNorm();
    CHECK(sum >= b.lower - 1e-9);
    CHECK(sum <= b.upper + 1e-9);
  }
}

TEST_CASE("property: subset bounds are monotone under inclusion") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const FrameSystem frame = support::random_tight(3, 10, rng);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t j = 0; j < 10; ++j) {
      const std::size_t pick = rng.below(3);
      if (pick == 0) small.push_back(j);
      if (pick <= 1) large.push_back(j);
    }
    const FrameBounds a = subset_bounds(frame, small);
    const FrameBounds b = subset_bounds(frame, large);
    CHECK(a.lower <= b.lower + 1e-12);
    CHECK(a.upper <= b.upper + 1e-12);
  }
}

TEST_CASE("weighted operator scales each outer product") {
  Rng rng(24);
  const FrameSystem frame = support::random_tight(2, 5, rng);
  const std::vector<double> w{0.5, 1.0, 0.0, 2.0, 3.0};
  const auto ours = weighted_operator(frame, w).entries();
  const oracle::Mat ref =
      oracle::outer_sum(support::to_mat(frame.vectors()), oracle::all_indices(5), w);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) CHECK(std::abs(ours(a, b) - ref(a, b)) < 1e-14);
  }
}

}  // TEST_SUITE
