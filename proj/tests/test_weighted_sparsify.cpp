#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sampdisc/error.hpp"
#include "sampdisc/weighted_sparsify.hpp"
#include "support.hpp"

using namespace sampdisc;

namespace {

// Tight frame with unequal norms: some DFT columns split into equal halves.
FrameSystem split_dft(std::size_t n, std::size_t m, std::size_t every) {
  const FrameSystem base = support::dft_frame(n, m);
  std::vector<Eigen::VectorXcd> cols;
  for (std::size_t j = 0; j < m; ++j) {
    if (j % every == 0) {
      cols.push_back(base.vector(j) / std::sqrt(2.0));
      cols.push_back(base.vector(j) / std::sqrt(2.0));
    } else {
      cols.push_back(base.vector(j));
    }
  }
  Eigen::MatrixXcd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = cols[k];
  return FrameSystem(std::move(v));
}

// Tight frame whose squared norms vary over roughly a factor of four.
FrameSystem random_unequal(std::size_t n, std::size_t m, Rng& rng) {
  oracle::Mat a(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    const double scale = 1.0 + 3.0 * rng.uniform();
    for (std::size_t i = 0; i < n; ++i) a(i, j) = scale * oracle::cplx(rng.normal(), rng.normal());
  }
  return FrameSystem(support::to_eigen(oracle::orthonormal_rows(a)));
}

}  // namespace

TEST_SUITE("weighted_sparsify") {

TEST_CASE("equal norms need no duplication") {
  const FrameSystem frame = support::dft_frame(3, 9);
  const DuplicatedFrame dup = duplicate_normalize(frame);
  CHECK(dup.map.total == 9);
  CHECK(std::all_of(dup.map.counts.begin(), dup.map.counts.end(), [](auto c) { return c == 1; }));
  CHECK((dup.frame.vectors() - frame.vectors()).norm() == 0.0);
}

TEST_CASE("squared norms (1/5, 4/5) in C^1") {
  Eigen::MatrixXd v(1, 2);
  v << std::sqrt(0.2), std::sqrt(0.8);
  const DuplicatedFrame dup = duplicate_normalize(FrameSystem::from_real(v));
  CHECK(dup.map.counts == std::vector<std::size_t>{1, 4});
  CHECK(dup.map.total == 5);
  CHECK(dup.map.copy_to_source == std::vector<std::size_t>{0, 1, 1, 1, 1});
  for (std::size_t k = 0; k < 5; ++k) CHECK(dup.frame.norm2(k) == doctest::Approx(0.2));
  CHECK(verify_tight(dup.frame, 1e-12));
}

TEST_CASE("ratio 2.5 takes two copies") {
  Eigen::MatrixXd v(1, 2);
  v << std::sqrt(2.0 / 7.0), std::sqrt(5.0 / 7.0);
  const DuplicatedFrame dup = duplicate_normalize(FrameSystem::from_real(v));
  CHECK(dup.map.counts == std::vector<std::size_t>{1, 2});
  const double per_copy = (5.0 / 7.0) / 2.0;
  CHECK(per_copy >= 2.0 / 7.0);
  CHECK(per_copy < 2.0 * 2.0 / 7.0);
}

TEST_CASE("anchor is the first minimal-norm vector") {
  Eigen::MatrixXd v(1, 3);
  v << std::sqrt(0.5), std::sqrt(0.25), std::sqrt(0.25);
  const DuplicatedFrame dup = duplicate_normalize(FrameSystem::from_real(v));
  CHECK(dup.map.anchor == 1);
  CHECK(dup.map.counts == std::vector<std::size_t>{2, 1, 1});
}

TEST_CASE("duplication errors") {
  SUBCASE("zero vector") {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(2, 3);
    v(0, 0) = 1.0;
    v(1, 1) = 1.0;
    try {
      duplicate_normalize(FrameSystem(v));
      FAIL("expected an input error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::input);
      CHECK(std::string(e.what()).find("vector 2") != std::string::npos);
    }
  }
  SUBCASE("copy cap") {
    Eigen::MatrixXd v(1, 2);
    v << std::sqrt(1e-4), std::sqrt(1.0 - 1e-4);
    try {
      duplicate_normalize(FrameSystem::from_real(v), 1000);
      FAIL("expected a size error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::size_limit);
    }
  }
  SUBCASE("non-tight frame") {
    CHECK_THROWS_AS(duplicate_normalize(FrameSystem(Eigen::MatrixXcd::Identity(2, 2) * 2.0)),
                    Error);
  }
}

TEST_CASE("property: duplication identities") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    const std::size_t m = n + rng.below(10);
    const FrameSystem frame = random_unequal(n, m, rng);
    const DuplicatedFrame dup = duplicate_normalize(frame);
    const double mp = static_cast<double>(dup.map.total);
    double sum = 0.0;
    for (std::size_t k = 0; k < dup.frame.count(); ++k) {
      sum += dup.frame.norm2(k);
      CHECK(dup.frame.norm2(k) < 2.0 * static_cast<double>(n) / mp);
    }
    CHECK(std::abs(sum - static_cast<double>(n)) < 1e-12);
    const Eigen::MatrixXcd diff = frame_operator(dup.frame).entries() - frame_operator(frame).entries();
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-13);
    CHECK(frame.norm2(dup.map.anchor) * mp <= static_cast<double>(n) * (1.0 + 1e-12));
    std::size_t total = 0;
    for (const std::size_t c : dup.map.counts) total += c;
    CHECK(total == dup.map.total);
  }
}

TEST_CASE("canonical basis: fast path with every weight equal") {
  const FrameSystem frame(Eigen::MatrixXcd::Identity(3, 3));
  const WeightedCertificate cert = weighted_select(frame, {});
  CHECK(cert.halving.fast_path());
  CHECK(cert.support == oracle::all_indices(3));
  CHECK(cert.scale == doctest::Approx(0.5));
  for (const double w : cert.weights) CHECK(w == doctest::Approx(0.5));
  CHECK(cert.bounds.lower == doctest::Approx(0.5));
  CHECK(cert.bounds.upper == doctest::Approx(0.5));
}

TEST_CASE("single scalar vector") {
  Eigen::MatrixXcd v(1, 1);
  v(0, 0) = 1.0;
  const WeightedCertificate cert = weighted_select(FrameSystem(v), {});
  CHECK(cert.weights == std::vector<double>{0.5});
  CHECK(cert.bounds.lower == doctest::Approx(0.5));
  CHECK(cert.bounds.upper == doctest::Approx(0.5));
}

TEST_CASE("DFT-derived frame with unequal norms") {
  const FrameSystem frame = split_dft(2, 512, 3);
  const OracleConfig cfg{Strategy::randomized, 10000, 13};
  const WeightedCertificate cert = weighted_select(frame, cfg);
  CHECK_FALSE(cert.halving.fast_path());
  CHECK(cert.support.size() <= cert.support_budget);
  CHECK(cert.support_budget == cert.halving.selected.size());
  for (const double w : cert.weights) CHECK(w >= 0.0);
  std::vector<double> weights;
  for (const std::size_t j : cert.support) weights.push_back(cert.weights[j]);
  const oracle::Bounds ref =
      oracle::extremes(oracle::outer_sum(support::to_mat(frame.vectors()), cert.support, weights));
  CHECK(std::abs(ref.lower - cert.bounds.lower) < 1e-10);
  CHECK(std::abs(ref.upper - cert.bounds.upper) < 1e-10);
  // Lower bound 25 delta' in copy space, rescaled by M'/(2N).
  CHECK(cert.bounds.lower >= 25.0 - 1e-9);
}

TEST_CASE("property: reconstruction identity and support accounting") {
  const FrameSystem frame = split_dft(2, 512, 5);
  const WeightedCertificate cert = weighted_select(frame, {Strategy::randomized, 10000, 4});
  const DuplicatedFrame dup = duplicate_normalize(frame);
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXcd w(2);
    w << Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal());
    double copy_side = 0.0;
    for (const std::size_t k : cert.halving.selected) {
      copy_side += std::norm(dup.frame.vector(k).dot(w));
    }
    copy_side *= cert.scale;
    double weighted = 0.0;
    for (std::size_t j = 0; j < frame.count(); ++j) {
      weighted += cert.weights[j] * std::norm(frame.vector(j).dot(w));
    }
    CHECK(std::abs(copy_side - weighted) <= 1e-10 * std::max(1.0, weighted));
  }
  CHECK(cert.support.size() <= cert.halving.selected.size());
}

}  // TEST_SUITE
